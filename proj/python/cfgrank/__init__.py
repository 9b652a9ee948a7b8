"""Rank cfg features of Rust projects and generate top-K configurations."""

import json
import os

from ._core import (
    BetaTooLarge,
    FatalConfig,
    ManifestError,
    SyntaxError,
    centrality,
    chi,
    parse_manifest,
    sat_solve,
    to_dimacs,
)
from . import _core

__all__ = [
    "BetaTooLarge",
    "FatalConfig",
    "ManifestError",
    "SyntaxError",
    "analyze",
    "centrality",
    "chi",
    "parse_manifest",
    "sat_solve",
    "to_dimacs",
]


def analyze(root, k=10, centrality="eigenvector", **options):
    """Run the whole pipeline on a project root; returns the JSON report as a dict."""
    return json.loads(_core.analyze_json(os.fspath(root), k=k, centrality=centrality, **options))
