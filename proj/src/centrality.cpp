#include "cfgrank/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>
#include <queue>
#include <stdexcept>

#include "cfgrank/errors.hpp"

namespace cfgrank {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Arc {
  std::size_t to;
  double weight;
};

// Dense indexing of a feature graph in node-name order.
struct Indexed {
  std::vector<std::string> names;
  std::vector<std::vector<Arc>> out;
  std::vector<std::vector<double>> adj;  // adj[i][j] = weight of i -> j

  explicit Indexed(const FeatureGraph& g) {
    std::map<std::string, std::size_t> idx;
    for (const auto& [name, n] : g.nodes) {
      idx[name] = names.size();
      names.push_back(name);
    }
    out.resize(names.size());
    adj.assign(names.size(), std::vector<double>(names.size(), 0.0));
    for (const auto& [key, w] : g.edges) {
      auto s = idx.find(key.first);
      auto t = idx.find(key.second);
      if (s == idx.end() || t == idx.end()) {
        throw std::invalid_argument("edge " + key.first + " -> " + key.second + " has a missing endpoint");
      }
      double d = w.to_double();
      if (!(d > 0)) throw std::invalid_argument("edge weights must be positive");
      out[s->second].push_back({t->second, d});
      adj[s->second][t->second] = d;
    }
  }

  std::size_t size() const { return names.size(); }

  CentralityVector vector(const std::string& measure, const std::vector<double>& scores) const {
    CentralityVector v;
    v.measure = measure;
    for (std::size_t i = 0; i < size(); ++i) {
      if (names[i] == kPatchNode) continue;
      v.entries[names[i]] = scores[i];
    }
    return v;
  }
};

std::vector<double> dijkstra(const Indexed& ix, std::size_t src, double alpha) {
  std::vector<double> dist(ix.size(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0;
  pq.push({0, src});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const auto& a : ix.out[u]) {
      double nd = d + 1.0 / std::pow(a.weight, alpha);
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        pq.push({nd, a.to});
      }
    }
  }
  return dist;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

std::vector<double> solve_dense(std::vector<std::vector<double>> m, std::vector<double> rhs) {
  std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) < 1e-300) throw BetaTooLarge("Katz system is singular");
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = m[r][col] / m[col][col];
      if (f == 0) continue;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m[i][c] * x[c];
    x[i] = s / m[i][i];
  }
  return x;
}

bool has_cycle(const Indexed& ix) {
  std::vector<int> state(ix.size(), 0);
  for (std::size_t s = 0; s < ix.size(); ++s) {
    if (state[s]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
    state[s] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next < ix.out[u].size()) {
        std::size_t v = ix.out[u][next++].to;
        if (state[v] == 1) return true;
        if (state[v] == 0) {
          state[v] = 1;
          stack.push_back({v, 0});
        }
      } else {
        state[u] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

double max_row_sum(const Indexed& ix) {
  double s = 0;
  for (const auto& row : ix.out) {
    double r = 0;
    for (const auto& a : row) r += a.weight;
    s = std::max(s, r);
  }
  return s;
}

double l2(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

CentralityVector degree(const FeatureGraph& g, Direction dir) {
  Indexed ix(g);
  std::vector<double> s(ix.size(), 0.0);
  for (std::size_t u = 0; u < ix.size(); ++u) {
    for (const auto& a : ix.out[u]) {
      if (dir == Direction::Out) s[u] += 1;
      else s[a.to] += 1;
    }
  }
  return ix.vector(dir == Direction::In ? "degree-in" : "degree-out", s);
}

CentralityVector closeness_newman(const FeatureGraph& g) {
  Indexed ix(g);
  std::vector<double> s(ix.size(), 0.0);
  for (std::size_t u = 0; u < ix.size(); ++u) {
    auto d = dijkstra(ix, u, 1.0);
    double sum = 0;
    for (std::size_t v = 0; v < ix.size(); ++v) {
      if (v != u && d[v] < kInf) sum += d[v];
    }
    s[u] = sum > 0 ? 1.0 / sum : 0.0;
  }
  return ix.vector("closeness", s);
}

CentralityVector harmonic(const FeatureGraph& g) {
  Indexed ix(g);
  std::vector<double> s(ix.size(), 0.0);
  for (std::size_t u = 0; u < ix.size(); ++u) {
    auto d = dijkstra(ix, u, 1.0);
    for (std::size_t v = 0; v < ix.size(); ++v) {
      if (v != u && d[v] < kInf) s[u] += 1.0 / d[v];
    }
  }
  return ix.vector("harmonic", s);
}

CentralityVector betweenness_opsahl(const FeatureGraph& g, double alpha) {
  if (alpha < 0) throw std::invalid_argument("alpha must be non-negative");
  Indexed ix(g);
  std::size_t n = ix.size();
  std::vector<double> cb(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    // Brandes: Dijkstra with path counting, then dependency accumulation.
    std::vector<double> dist(n, kInf);
    std::vector<double> sigma(n, 0.0);
    std::vector<std::vector<std::size_t>> preds(n);
    std::vector<bool> done(n, false);
    std::vector<std::size_t> order;
    dist[s] = 0;
    sigma[s] = 1;
    for (;;) {
      std::size_t u = n;
      for (std::size_t v = 0; v < n; ++v) {
        if (!done[v] && dist[v] < kInf && (u == n || dist[v] < dist[u] || (dist[v] == dist[u] && v < u))) u = v;
      }
      if (u == n) break;
      done[u] = true;
      order.push_back(u);
      for (const auto& a : ix.out[u]) {
        if (a.to == u || done[a.to]) continue;
        double nd = dist[u] + 1.0 / std::pow(a.weight, alpha);
        if (dist[a.to] < kInf && close(nd, dist[a.to])) {
          sigma[a.to] += sigma[u];
          preds[a.to].push_back(u);
        } else if (nd < dist[a.to]) {
          dist[a.to] = nd;
          sigma[a.to] = sigma[u];
          preds[a.to] = {u};
        }
      }
    }
    std::vector<double> delta(n, 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      std::size_t w = *it;
      for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1 + delta[w]);
      if (w != s) cb[w] += delta[w];
    }
  }
  return ix.vector("betweenness", cb);
}

CentralityVector eigenvector(const FeatureGraph& g, int iters, double tol) {
  if (iters < 1) throw std::invalid_argument("eigenvector needs at least one iteration");
  Indexed ix(g);
  std::size_t n = ix.size();
  if (n == 0) return ix.vector("eigenvector", {});
  // Iterate on A^T / s + I: same eigenvectors as A^T, and the shift keeps
  // periodic (e.g. bipartite) graphs from oscillating.
  double s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0;
    for (std::size_t i = 0; i < n; ++i) col += ix.adj[i][j];
    s = std::max(s, col);
  }
  if (s == 0) s = 1;
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  bool converged = false;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> y(x);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& a : ix.out[i]) y[a.to] += a.weight / s * x[i];
    }
    double norm = l2(y);
    for (double& v : y) v /= norm;
    double diff = 0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(y[i] - x[i]));
    x = std::move(y);
    if (diff < tol) {
      converged = true;
      break;
    }
  }
  auto v = ix.vector("eigenvector", x);
  v.converged = converged;
  return v;
}

double estimate_spectral_radius(const FeatureGraph& g, int iters) {
  Indexed ix(g);
  std::size_t n = ix.size();
  double s = max_row_sum(ix);
  if (n == 0 || s == 0) return 0;
  if (!has_cycle(ix)) return 0;
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double lambda = 0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = s * x[i];
      for (const auto& a : ix.out[i]) y[i] += a.weight * x[a.to];
    }
    double norm = l2(y);
    lambda = norm - s;  // x has unit norm
    for (double& v : y) v /= norm;
    x = std::move(y);
  }
  return std::max(lambda, 0.0);
}

CentralityVector katz(const FeatureGraph& g, std::optional<double> beta) {
  Indexed ix(g);
  std::size_t n = ix.size();
  double lambda = estimate_spectral_radius(g);
  double b;
  if (beta) {
    b = *beta;
    if (!(b >= 0) || !std::isfinite(b)) throw BetaTooLarge("Katz beta must be finite and non-negative");
  } else {
    double l = lambda > 0 ? lambda : max_row_sum(ix);
    b = l > 0 ? 0.85 / l : 0.85;
  }
  if (b * lambda >= 1) throw BetaTooLarge("Katz beta " + std::to_string(b) + " is not below 1/lambda");

  // (I - beta A^T) k = 1
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    m[i][i] = 1;
    for (std::size_t j = 0; j < n; ++j) m[i][j] -= b * ix.adj[j][i];
  }
  auto k = solve_dense(std::move(m), std::vector<double>(n, 1.0));
  for (double v : k) {
    if (!std::isfinite(v) || v < 0) throw BetaTooLarge("Katz series diverges for beta " + std::to_string(b));
  }
  return ix.vector("katz", k);
}

std::vector<std::string> rank(const CentralityVector& v) {
  std::vector<std::pair<std::string, double>> items;
  for (const auto& [name, score] : v.entries) {
    if (!is_reserved_node(name)) items.emplace_back(name, score);
  }
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  out.reserve(items.size());
  for (auto& [name, score] : items) out.push_back(std::move(name));
  return out;
}

std::optional<Measure> measure_from_name(const std::string& name) {
  static const std::map<std::string, Measure> table{
      {"degree-in", Measure::DegreeIn},   {"degree-out", Measure::DegreeOut},
      {"harmonic", Measure::Harmonic},    {"closeness", Measure::Closeness},
      {"betweenness", Measure::Betweenness}, {"eigenvector", Measure::Eigenvector},
      {"katz", Measure::Katz}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

const char* measure_name(Measure m) {
  switch (m) {
    case Measure::DegreeIn:
      return "degree-in";
    case Measure::DegreeOut:
      return "degree-out";
    case Measure::Harmonic:
      return "harmonic";
    case Measure::Closeness:
      return "closeness";
    case Measure::Betweenness:
      return "betweenness";
    case Measure::Eigenvector:
      return "eigenvector";
    case Measure::Katz:
      return "katz";
  }
  return "?";
}

CentralityVector compute_centrality(const FeatureGraph& g, const CentralityOptions& opts) {
  switch (opts.measure) {
    case Measure::DegreeIn:
      return degree(g, Direction::In);
    case Measure::DegreeOut:
      return degree(g, Direction::Out);
    case Measure::Harmonic:
      return harmonic(g);
    case Measure::Closeness:
      return closeness_newman(g);
    case Measure::Betweenness:
      return betweenness_opsahl(g, opts.alpha);
    case Measure::Eigenvector:
      return eigenvector(g, opts.eigen_iters, opts.eigen_tol);
    case Measure::Katz:
      return katz(g, opts.beta);
  }
  throw std::logic_error("unknown centrality measure");
}

std::string to_json(const CentralityVector& v) {
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [name, score] : v.entries) entries[name] = score;
  return nlohmann::json{{"measure", v.measure}, {"converged", v.converged}, {"entries", entries}}.dump(2);
}

}  // namespace cfgrank
