#include <doctest.h>

#include <cmath>
#include <random>

#include "cfgrank/centrality.hpp"
#include "cfgrank/errors.hpp"
#include "oracles.hpp"

using namespace cfgrank;

namespace {

FeatureGraph graph(std::vector<std::string> nodes, std::vector<std::tuple<std::string, std::string, Rational>> edges) {
  FeatureGraph g;
  for (auto& n : nodes) g.nodes[n] = {n, {}};
  for (auto& [s, t, w] : edges) g.edges[{s, t}] = w;
  return g;
}

void check_close(const CentralityVector& v, const std::vector<std::string>& names, const std::vector<double>& want,
                 double tol = 1e-6) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == kPatchNode) continue;
    INFO(v.measure << " " << names[i]);
    CHECK(std::abs(v.entries.at(names[i]) - want[i]) <= tol);
  }
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_SUITE("centrality") {
  TEST_CASE("degree") {
    auto g = graph({"G", "a", "z"}, {{"a", "G", 1}});
    auto in = degree(g, Direction::In);
    CHECK(in.entries.at("G") == 1);
    CHECK(in.entries.at("a") == 0);
    CHECK(in.entries.at("z") == 0);
    CHECK(degree(g, Direction::Out).entries.at("a") == 1);
    auto p = degree(graph({"G", "a", "PATCH"}, {{"a", "G", 5}, {"G", "PATCH", 1}, {"PATCH", "a", 1}}), Direction::In);
    CHECK(p.entries.count("PATCH") == 0);
  }

  TEST_CASE("closeness") {
    auto two = closeness_newman(graph({"a", "b"}, {{"a", "b", 1}}));
    CHECK(two.entries.at("a") == 1);
    CHECK(two.entries.at("b") == 0);
    auto three = closeness_newman(graph({"a", "b", "c"}, {{"a", "b", 2}, {"b", "c", 1}}));
    CHECK(three.entries.at("a") == doctest::Approx(0.5));
    auto apart = closeness_newman(graph({"a", "b"}, {}));
    CHECK(apart.entries.at("a") == 0);
    CHECK(apart.entries.at("b") == 0);
  }

  TEST_CASE("harmonic") {
    auto h = harmonic(graph({"a", "b", "c"}, {{"a", "b", 1}, {"b", "c", 1}}));
    CHECK(h.entries.at("a") == doctest::Approx(1.5));
    CHECK(h.entries.at("c") == 0);
    CHECK(harmonic(graph({"x"}, {})).entries.at("x") == 0);
  }

  TEST_CASE("betweenness") {
    auto b = betweenness_opsahl(graph({"a", "b", "c"}, {{"a", "b", 1}, {"b", "c", 1}}));
    CHECK(b.entries.at("b") == doctest::Approx(1));
    CHECK(b.entries.at("a") == 0);
    auto star = betweenness_opsahl(graph({"PATCH", "x", "y", "z"}, {{"PATCH", "x", 1}, {"PATCH", "y", 1}, {"PATCH", "z", 1}}));
    for (const auto& [n, s] : star.entries) CHECK(s == 0);
    // two equal shortest routes a->{b,c}->d split the credit
    auto diamond = betweenness_opsahl(
        graph({"a", "b", "c", "d"}, {{"a", "b", 1}, {"a", "c", 1}, {"b", "d", 1}, {"c", "d", 1}}), 1.0);
    CHECK(diamond.entries.at("b") == doctest::Approx(0.5));
    CHECK(diamond.entries.at("c") == doctest::Approx(0.5));
  }

  TEST_CASE("betweenness alpha zero is hop count") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 30; ++i) {
      auto g = oracle::random_graph(rng, 2 + static_cast<int>(rng() % 5), 0.5);
      std::vector<std::string> names;
      auto w = oracle::weights(g, &names);
      check_close(betweenness_opsahl(g, 0.0), names, oracle::betweenness_enumerate(w, 0.0));
      check_close(betweenness_opsahl(g, 0.5), names, oracle::betweenness_enumerate(w, 0.5));
    }
  }

  TEST_CASE("eigenvector symmetry") {
    auto two = eigenvector(graph({"a", "b"}, {{"a", "b", 1}, {"b", "a", 1}}));
    CHECK(two.converged);
    CHECK(two.entries.at("a") == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(two.entries.at("b") == doctest::Approx(1 / std::sqrt(2.0)));
    auto tri = eigenvector(graph({"a", "b", "c"}, {{"a", "b", 1}, {"b", "c", 1}, {"c", "a", 1}}));
    CHECK(tri.entries.at("a") == doctest::Approx(tri.entries.at("b")));
    CHECK(tri.entries.at("b") == doctest::Approx(tri.entries.at("c")));
  }

  TEST_CASE("eigenvector reports non-convergence") {
    auto v = eigenvector(graph({"a", "b", "c"}, {{"a", "b", 1}, {"b", "c", 3}, {"c", "a", 1}, {"a", "c", 2}}), 1, 1e-15);
    CHECK_FALSE(v.converged);
    for (const auto& [n, s] : v.entries) CHECK(std::isfinite(s));
  }

  TEST_CASE("katz") {
    auto empty = katz(graph({"a", "b"}, {}), 0.3);
    CHECK(empty.entries.at("a") == doctest::Approx(1));
    CHECK(empty.entries.at("b") == doctest::Approx(1));
    auto edge = katz(graph({"a", "b"}, {{"a", "b", 1}}), 0.5);
    CHECK(edge.entries.at("a") == doctest::Approx(1));
    CHECK(edge.entries.at("b") == doctest::Approx(1.5));
    auto cycle = graph({"a", "b"}, {{"a", "b", 1}, {"b", "a", 1}});
    CHECK_THROWS_AS(katz(cycle, 1.0), BetaTooLarge);
    CHECK_THROWS_AS(katz(cycle, 2.5), BetaTooLarge);
    CHECK_NOTHROW(katz(cycle));
  }

  TEST_CASE("spectral radius estimate") {
    CHECK(estimate_spectral_radius(graph({"a", "b"}, {{"a", "b", 1}})) == 0);
    CHECK(estimate_spectral_radius(graph({"a", "b"}, {{"a", "b", 2}, {"b", "a", 2}})) == doctest::Approx(2));
  }

  TEST_CASE("oracle agreement on random patched graphs") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 40; ++i) {
      auto g = oracle::random_feature_graph(rng, 1 + static_cast<int>(rng() % 9));
      std::vector<std::string> names;
      auto w = oracle::weights(g, &names);
      check_close(closeness_newman(g), names, oracle::closeness(w));
      check_close(harmonic(g), names, oracle::harmonic(w));
      check_close(betweenness_opsahl(g, 0.5), names, oracle::betweenness_counting(w, 0.5));
      auto ev = eigenvector(g);
      if (ev.converged) check_close(ev, names, oracle::eigenvector_dense(w));
      double lambda = oracle::spectral_radius_dense(w);
      double beta = lambda > 0 ? 0.5 / lambda : 0.5;
      check_close(katz(g, beta), names, oracle::katz_dense(w, beta));
    }
  }

  TEST_CASE("scale invariance of ranking") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
      auto g = oracle::random_feature_graph(rng, 2 + static_cast<int>(rng() % 6));
      auto scaled = g;
      for (auto& [k, w] : scaled.edges) w = w * 3;
      for (auto m : {Measure::DegreeIn, Measure::Eigenvector, Measure::Katz}) {
        CentralityOptions o;
        o.measure = m;
        auto a = compute_centrality(g, o);
        auto b = compute_centrality(scaled, o);
        // equal scores may reorder by rounding; compare only clearly separated pairs
        for (const auto& [x, sx] : a.entries) {
          for (const auto& [y, sy] : a.entries) {
            if (sx > sy && !near(sx, sy)) {
              INFO(measure_name(m) << " " << x << " " << y);
              CHECK(b.entries.at(x) >= b.entries.at(y));
            }
          }
        }
      }
    }
  }

  TEST_CASE("no patch and finite everywhere") {
    std::mt19937_64 rng(3);
    auto g = oracle::random_feature_graph(rng, 6);
    for (auto m : {Measure::DegreeIn, Measure::DegreeOut, Measure::Harmonic, Measure::Closeness,
                   Measure::Betweenness, Measure::Eigenvector, Measure::Katz}) {
      CentralityOptions o;
      o.measure = m;
      auto v = compute_centrality(g, o);
      CHECK(v.measure == measure_name(m));
      CHECK(v.entries.count(kPatchNode) == 0);
      for (const auto& [n, s] : v.entries) CHECK(std::isfinite(s));
    }
  }

  TEST_CASE("rank") {
    CentralityVector v{"x", {{"a", 0.5}, {"b", 0.9}, {"G", 5}}, true};
    CHECK(rank(v) == std::vector<std::string>{"b", "a"});
    CentralityVector tie{"x", {{"b", 0.5}, {"a", 0.5}}, true};
    CHECK(rank(tie) == std::vector<std::string>{"a", "b"});
  }

  TEST_CASE("measure names") {
    for (const char* n : {"degree-in", "degree-out", "harmonic", "closeness", "betweenness", "eigenvector", "katz"}) {
      auto m = measure_from_name(n);
      REQUIRE(m.has_value());
      CHECK(std::string(measure_name(*m)) == n);
    }
    CHECK_FALSE(measure_from_name("pagerank").has_value());
  }
}
