#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfgrank/featgraph.hpp"

namespace cfgrank {

struct CentralityVector {
  std::string measure;
  std::map<std::string, double> entries;  // PATCH never present
  bool converged = true;                  // meaningful for eigenvector only
};

enum class Direction { In, Out };

CentralityVector degree(const FeatureGraph& g, Direction dir);
CentralityVector closeness_newman(const FeatureGraph& g);
CentralityVector harmonic(const FeatureGraph& g);
CentralityVector betweenness_opsahl(const FeatureGraph& g, double alpha = 0.5);
CentralityVector eigenvector(const FeatureGraph& g, int iters = 1000, double tol = 1e-10);

/// beta = nullopt picks 0.85 / lambda, lambda estimated by power iteration.
CentralityVector katz(const FeatureGraph& g, std::optional<double> beta = std::nullopt);

/// Spectral radius estimate used by the automatic Katz beta.
double estimate_spectral_radius(const FeatureGraph& g, int iters = 100);

/// Descending score, ties by name; G and PATCH omitted.
std::vector<std::string> rank(const CentralityVector& v);

enum class Measure { DegreeIn, DegreeOut, Harmonic, Closeness, Betweenness, Eigenvector, Katz };

std::optional<Measure> measure_from_name(const std::string& name);
const char* measure_name(Measure m);

struct CentralityOptions {
  Measure measure = Measure::Eigenvector;
  double alpha = 0.5;
  std::optional<double> beta;
  int eigen_iters = 1000;
  double eigen_tol = 1e-10;
};

CentralityVector compute_centrality(const FeatureGraph& g, const CentralityOptions& opts);

std::string to_json(const CentralityVector& v);

}  // namespace cfgrank
