#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cfgrank/atomtree.hpp"
#include "cfgrank/centrality.hpp"
#include "cfgrank/featgraph.hpp"
#include "cfgrank/frontend.hpp"
#include "cfgrank/logic.hpp"
#include "cfgrank/sat.hpp"
#include "cfgrank/uir.hpp"

namespace cfgrank {

struct Configuration {
  std::set<std::string> enabled;
  std::set<std::string> disabled;
  std::optional<std::string> anchor;  // nullopt for unanchored fill
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

Configuration to_configuration(const CnfFormula& cnf, const Assignment& a, std::optional<std::string> anchor);
Assignment to_assignment(const CnfFormula& cnf, const Configuration& c);

class Deadline {
 public:
  Deadline() = default;  // never expires
  explicit Deadline(double seconds);
  void check() const;
  bool expired() const;

 private:
  std::optional<std::chrono::steady_clock::time_point> end_;
};

struct GenerationOptions {
  bool one_per_anchor = false;
  /// Once the ranking is used up, keep drawing unanchored models.
  bool fill_unanchored = true;
};

struct GenerationResult {
  std::vector<Configuration> configurations;
  bool exhausted = false;  // fewer than k distinct models exist
};

GenerationResult generate_configurations(const std::vector<std::string>& ranking, const CnfFormula& cnf,
                                         std::size_t k, const GenerationOptions& opts = {},
                                         const Deadline& deadline = {});

/// Distinct feature names over all atom predicates, a Not occurrence
/// counted as its own variant; G and PATCH excluded.
std::size_t detected_feature_count(const FeatureGraph& g, const Uir& uir);

struct RunOptions {
  std::size_t k = 10;
  CentralityOptions centrality;
  std::uint64_t default_weight = 1;
  double timeout_seconds = 600;
  PhiMode phi = PhiMode::Implication;
  ChiMode chi = ChiMode::FeatureCount;
  bool refine = true;
  GenerationOptions generation;
  std::size_t blowup_limit = kDefaultBlowupLimit;
  bool timing = false;
};

struct MemberMetrics {
  std::size_t uir_nodes = 0;
  std::size_t uir_edges = 0;
  std::size_t uir_height = 0;
  std::size_t graph_nodes = 0;
  std::size_t graph_edges = 0;
  std::size_t squashed_edges = 0;
  std::size_t atom_nodes = 0;
  std::size_t atom_edges = 0;
  std::size_t detected_features = 0;
  std::size_t declared_features = 0;
  std::size_t configurations = 0;
  double wall_seconds = 0;
};

/// Every intermediate product of one member run.
struct MemberArtifacts {
  AstNode ast;
  Uir uir;
  FeatureMultigraph multigraph;
  FeatureGraph squashed;
  FeatureGraph patched;
  AtomTree atoms;
  CentralityVector centrality;
  CentralityVector refined;
  std::vector<std::string> ranking;
  PropFormula formula;
  CnfFormula cnf;
};

struct MemberReport {
  std::string name;
  bool failed = false;
  std::string error;
  MemberMetrics metrics;
  std::vector<Configuration> configurations;
  bool exhausted = false;
  std::vector<std::string> ranking;
};

struct ProjectReport {
  std::vector<MemberReport> members;  // sorted by name
  MemberMetrics aggregate;
  std::size_t failed_members = 0;
};

/// Runs the whole pipeline on in-memory input. Throws on any error.
MemberReport analyze_member(const std::string& name, const std::vector<SourceFile>& files,
                            const Manifest& manifest, const RunOptions& opts,
                            MemberArtifacts* artifacts = nullptr);

/// Same, from an already-built tree.
MemberReport analyze_tree(const std::string& name, AstNode ast, const Manifest& manifest, const RunOptions& opts,
                          MemberArtifacts* artifacts = nullptr, const Deadline& deadline = {});

struct MemberSource {
  std::string name;
  std::filesystem::path dir;
  Manifest manifest;
  std::vector<SourceFile> files;
};

/// Resolves the manifest at `root` into its members. Throws FatalConfig when
/// the root manifest is missing or unreadable.
std::vector<std::filesystem::path> discover_members(const std::filesystem::path& root);
MemberSource load_member(const std::filesystem::path& dir, const std::filesystem::path& root);

/// Called once per member with its artifacts, for debug exports.
using ArtifactSink = std::function<void(const MemberReport&, const MemberArtifacts&)>;

ProjectReport run_project(const std::filesystem::path& root, const RunOptions& opts,
                          const ArtifactSink& sink = {});

MemberMetrics aggregate(const std::vector<MemberReport>& members);

std::string report_json(const ProjectReport& r, bool timing = false, int indent = 2);
std::string report_text(const ProjectReport& r, bool timing = false);

}  // namespace cfgrank
