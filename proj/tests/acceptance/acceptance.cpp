// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "cfgrank/pipeline.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace cfgrank;
namespace fs = std::filesystem;

namespace {

const fs::path kTestdata = CFGRANK_TESTDATA;
const fs::path kCorpus = CFGRANK_CORPUS_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail.clear();
  o.pass = false;
  if (o.detail.size() < 400) o.detail += (o.detail.empty() ? "" : "; ") + why;
}

// Edges not touching G or PATCH.
std::map<std::pair<std::string, std::string>, Rational> feature_edges(const FeatureGraph& g) {
  std::map<std::pair<std::string, std::string>, Rational> out;
  for (const auto& [k, w] : g.edges) {
    if (!is_reserved_node(k.first) && !is_reserved_node(k.second)) out[k] = w;
  }
  return out;
}

MemberArtifacts run_fixture(const fs::path& dir, double& seconds) {
  MemberArtifacts a;
  auto t0 = Clock::now();
  auto src = load_member(dir, dir);
  analyze_member(src.name, src.files, src.manifest, RunOptions{}, &a);
  seconds = since(t0);
  return a;
}

Outcome sample_scenario1() {
  Outcome o;
  double secs = 0;
  auto a = run_fixture(kTestdata / "samples/scenario1", secs);
  std::map<std::pair<std::string, std::string>, Rational> want{{{"b", "a"}, 1}, {{"c", "a"}, 1}};
  if (feature_edges(a.squashed) != want) fail(o, "feature edges differ from {b->a: 1, c->a: 1}");
  for (const auto& [k, w] : a.patched.edges) {
    bool scaffold = k.second == kGlobalNode || k.first == kPatchNode || k.second == kPatchNode;
    if (!scaffold && !want.count(k)) fail(o, "unexpected edge " + k.first + "->" + k.second);
  }
  if (secs >= 1.0) fail(o, "took " + fmt(secs) + " s");
  if (o.pass) o.detail = "b->a = 1, c->a = 1 exactly, in " + fmt(secs * 1000) + " ms";
  return o;
}

Outcome sample_scenario2() {
  Outcome o;
  double secs = 0;
  auto a = run_fixture(kTestdata / "samples/scenario2", secs);
  for (const char* f : {"c", "d"}) {
    Rational w = a.squashed.weight(f, kGlobalNode);
    if (w != Rational(1, 2)) fail(o, std::string(f) + "->G = " + w.str());
  }
  if (o.pass) o.detail = "c->G = 1/2, d->G = 1/2 exactly";
  return o;
}

Outcome soundness() {
  Outcome o;
  std::mt19937_64 rng(20240501);
  std::size_t configs = 0, sat_projects = 0;
  const int projects = 500;
  for (int i = 0; i < projects; ++i) {
    auto p = testsupport::random_project(rng, 10, 30);
    MemberArtifacts a;
    RunOptions opts;
    opts.k = 10;
    auto r = analyze_member("fuzz" + std::to_string(i), p.files, parse_manifest(p.manifest), opts, &a);
    if (!r.configurations.empty()) ++sat_projects;
    for (const auto& c : r.configurations) {
      ++configs;
      if (!verify(a.cnf, to_assignment(a.cnf, c))) fail(o, "project " + std::to_string(i) + " emitted an invalid configuration");
    }
  }
  if (configs == 0) fail(o, "no configurations emitted at all");
  if (o.pass) {
    o.detail = std::to_string(configs) + "/" + std::to_string(configs) + " configurations valid over " +
               std::to_string(projects) + " projects (" + std::to_string(sat_projects) + " satisfiable)";
  }
  return o;
}

Outcome enumeration() {
  Outcome o;
  std::mt19937_64 rng(777);
  const int projects = 120;
  std::size_t models_total = 0;
  int max_vars = 0;
  for (int i = 0; i < projects; ++i) {
    auto p = testsupport::random_project(rng, 12, 30);
    MemberArtifacts a;
    RunOptions opts;
    opts.k = 4096;
    auto r = analyze_member("enum", p.files, parse_manifest(p.manifest), opts, &a);
    if (a.cnf.num_vars() > 12) {
      fail(o, "project " + std::to_string(i) + " has " + std::to_string(a.cnf.num_vars()) + " variables");
      continue;
    }
    max_vars = std::max(max_vars, a.cnf.num_vars());
    std::set<std::uint64_t> got;
    for (const auto& c : r.configurations) got.insert(oracle::mask_of(to_assignment(a.cnf, c)));
    auto want = oracle::models(a.cnf);
    if (a.cnf.num_vars() == 0) want.clear();  // nothing to configure
    if (got != want || got.size() != r.configurations.size()) {
      fail(o, "project " + std::to_string(i) + ": " + std::to_string(got.size()) + " generated vs " +
                  std::to_string(want.size()) + " models");
    }
    models_total += want.size();
  }
  if (o.pass) {
    o.detail = "generated set == truth-table models on " + std::to_string(projects) + " projects (" +
               std::to_string(models_total) + " models, up to " + std::to_string(max_vars) + " variables)";
  }
  return o;
}

double max_diff(const CentralityVector& v, const std::vector<std::string>& names, const std::vector<double>& want) {
  double worst = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == kPatchNode) continue;
    worst = std::max(worst, std::abs(v.entries.at(names[i]) - want[i]));
  }
  return worst;
}

Outcome centrality_oracles() {
  Outcome o;
  std::mt19937_64 rng(4242);
  const double tol = 1e-6;
  double worst = 0;
  const int graphs = 100;
  for (int i = 0; i < graphs; ++i) {
    // alternate free-form digraphs and patched feature graphs; both at most 12 nodes
    FeatureGraph g = i % 2 == 0 ? oracle::random_graph(rng, 2 + static_cast<int>(rng() % 11), 0.3)
                                : oracle::random_feature_graph(rng, 1 + static_cast<int>(rng() % 10));
    std::vector<std::string> names;
    auto w = oracle::weights(g, &names);
    auto check = [&](const char* what, double d) {
      worst = std::max(worst, d);
      if (!(d <= tol)) fail(o, std::string(what) + " off by " + fmt(d) + " on graph " + std::to_string(i));
    };
    check("closeness", max_diff(closeness_newman(g), names, oracle::closeness(w)));
    check("harmonic", max_diff(harmonic(g), names, oracle::harmonic(w)));
    check("betweenness", max_diff(betweenness_opsahl(g, 0.5), names, oracle::betweenness_enumerate(w, 0.5)));
    check("betweenness(counting)", max_diff(betweenness_opsahl(g, 0.5), names, oracle::betweenness_counting(w, 0.5)));
    double lambda = oracle::spectral_radius_dense(w);
    if (i % 2 == 1) {
      auto ev = eigenvector(g, 100000, 1e-13);
      if (!ev.converged) fail(o, "eigenvector did not converge on graph " + std::to_string(i));
      check("eigenvector", max_diff(ev, names, oracle::eigenvector_dense(w)));
    }
    double beta = lambda > 0 ? 0.5 / lambda : 0.5;
    check("katz", max_diff(katz(g, beta), names, oracle::katz_dense(w, beta)));
    // automatic beta comes from the iterative radius estimate; the solve itself must still be exact
    double est = estimate_spectral_radius(g);
    if (std::abs(est - lambda) > 0.05 * lambda) {
      fail(o, "radius estimate " + fmt(est) + " vs " + fmt(lambda) + " on graph " + std::to_string(i));
    }
    if (est > 0) check("katz(auto)", max_diff(katz(g), names, oracle::katz_dense(w, 0.85 / est)));
  }
  if (o.pass) o.detail = std::to_string(graphs) + " graphs, max abs error " + fmt(worst);
  return o;
}

struct Fixture {
  const char* name;
  const char* source;
  std::uint64_t default_weight;
  std::vector<std::tuple<NodeKind, std::string, std::uint64_t>> expect;
};

Outcome algorithm1() {
  Outcome o;
  const std::vector<Fixture> fixtures = {
      {"intrinsic", "fn f() { let a = 1; }", 1, {{NodeKind::Let, "", 1}, {NodeKind::Function, "f", 1}}},
      {"children-sum", "fn f() { let a = 1; let b = 2; let c = 3; }", 1, {{NodeKind::Function, "f", 3}}},
      {"reference-average",
       "#[cfg(x)]\nfn bar() { let a = 1; let b = 2; }\n#[cfg(not(x))]\nfn bar() { let a = 1; let b = 2; let c = 3; let d = 4; }\n"
       "fn main() { bar(); }",
       1,
       {{NodeKind::Call, "bar", 3}}},
      {"unresolved-reference", "fn f() { ext(); }", 7, {{NodeKind::Call, "ext", 7}, {NodeKind::Function, "f", 8}}},
      {"mutual-recursion", "fn f() { g(); }\nfn g() { f(); }", 1,
       {{NodeKind::Call, "g", 1}, {NodeKind::Call, "f", 1}, {NodeKind::Function, "f", 2}, {NodeKind::Function, "g", 2}}},
  };
  double slowest = 0;
  for (const auto& fx : fixtures) {
    auto t0 = Clock::now();
    auto u = build_uir(parse_source({{"lib.rs", fx.source}}), fx.default_weight);
    double secs = since(t0);
    slowest = std::max(slowest, secs);
    if (secs >= 0.1) fail(o, std::string(fx.name) + " took " + fmt(secs) + " s");
    for (const auto& n : u.nodes) {
      if (n.status != WeightStatus::Weighted) fail(o, std::string(fx.name) + ": node left unweighted");
    }
    for (const auto& [kind, ident, w] : fx.expect) {
      const UirNode* hit = nullptr;
      for (const auto& n : u.nodes) {
        if (n.term_kind == kind && (ident.empty() || n.ident == ident)) hit = &n;
      }
      if (!hit) {
        fail(o, std::string(fx.name) + ": node " + ident + " missing");
      } else if (hit->weight != w) {
        fail(o, std::string(fx.name) + ": " + (ident.empty() ? "node" : ident) + " weight " +
                    std::to_string(hit->weight) + " != " + std::to_string(w));
      }
    }
  }
  if (o.pass) o.detail = std::to_string(fixtures.size()) + " fixtures exact, slowest " + fmt(slowest * 1000) + " ms";
  return o;
}

Outcome cnf_equivalence() {
  Outcome o;
  std::mt19937_64 rng(1616);
  const int formulas = 200;
  int max_vars = 0;
  for (int i = 0; i < formulas; ++i) {
    int n = 1 + static_cast<int>(rng() % 16);
    std::vector<std::string> vars;
    for (int j = 0; j < n; ++j) vars.push_back("x" + std::to_string(j));
    auto f = oracle::random_formula(rng, vars, 5);
    auto c = to_cnf(f, {vars.begin(), vars.end()});
    max_vars = std::max(max_vars, c.num_vars());
    if (oracle::models(c) != oracle::models(f, c.names)) fail(o, "formula " + std::to_string(i) + " not equivalent");
  }
  if (o.pass) o.detail = std::to_string(formulas) + " formulas equivalent, up to " + std::to_string(max_vars) + " variables";
  return o;
}

long peak_rss_kb() {
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("VmHWM:", 0) == 0) return std::stol(line.substr(6));
  }
  return -1;
}

std::vector<fs::path> corpus_projects() {
  std::vector<fs::path> out;
  for (int i = 0; i < 10; ++i) out.push_back(kCorpus / ("project" + std::to_string(i)));
  bool present = true;
  for (const auto& p : out) present = present && fs::exists(p / "Cargo.toml");
  if (!present) {
    fs::remove_all(kCorpus);
    out = testsupport::write_standard_corpus(kCorpus);
  }
  return out;
}

std::size_t count_lines(const fs::path& dir) {
  std::size_t n = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "src")) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path());
    std::string line;
    while (std::getline(in, line)) ++n;
  }
  return n;
}

bool consistent(const ProjectReport& r, std::string& why) {
  auto sum = aggregate(r.members);
  const auto& a = r.aggregate;
  auto eq = [&](const char* f, std::size_t x, std::size_t y) {
    if (x != y) why = std::string(f) + " " + std::to_string(x) + " != " + std::to_string(y);
    return x == y;
  };
  std::size_t h = 0, nodes = 0, confs = 0;
  for (const auto& m : r.members) {
    h = std::max(h, m.metrics.uir_height);
    nodes += m.metrics.uir_nodes;
    confs += m.metrics.configurations;
    if (m.metrics.configurations != m.configurations.size()) {
      why = "configuration count mismatch";
      return false;
    }
    if (m.metrics.uir_edges + 1 != m.metrics.uir_nodes) {
      why = "UIR is not a tree";
      return false;
    }
    if (m.metrics.squashed_edges > m.metrics.graph_edges || m.metrics.atom_nodes > m.metrics.uir_nodes) {
      why = "graph counts out of order";
      return false;
    }
  }
  return eq("height", a.uir_height, h) && eq("nodes", a.uir_nodes, nodes) && eq("configurations", a.configurations, confs) &&
         eq("edges", a.uir_edges, sum.uir_edges) && eq("graph_edges", a.graph_edges, sum.graph_edges) &&
         eq("atom_nodes", a.atom_nodes, sum.atom_nodes) && eq("declared", a.declared_features, sum.declared_features);
}

std::vector<std::string> first_reports;

Outcome corpus_scale() {
  Outcome o;
  auto projects = corpus_projects();
  double slowest = 0;
  std::size_t loc_total = 0;
  for (std::size_t i = 0; i < projects.size(); ++i) {
    std::size_t loc = count_lines(projects[i]);
    loc_total += loc;
    if (loc < 1000 || loc > 10500) fail(o, projects[i].filename().string() + " has " + std::to_string(loc) + " lines");
    RunOptions opts;
    opts.k = 10;
    auto t0 = Clock::now();
    auto r = run_project(projects[i], opts);
    double secs = since(t0);
    slowest = std::max(slowest, secs);
    if (secs >= 10) fail(o, projects[i].filename().string() + " took " + fmt(secs) + " s");
    if (r.failed_members) fail(o, projects[i].filename().string() + " failed: " + r.members[0].error);
    const auto& a = r.aggregate;
    if (a.uir_nodes == 0 || a.graph_nodes == 0 || a.squashed_edges == 0 || a.atom_nodes == 0 || a.declared_features == 0 ||
        a.detected_features == 0 || a.configurations == 0) {
      fail(o, projects[i].filename().string() + " has empty metrics");
    }
    for (const auto& m : r.members) {
      if (m.configurations.size() != 10 && !m.exhausted) fail(o, "fewer than k configurations without exhaustion");
    }
    std::string why;
    if (!consistent(r, why)) fail(o, projects[i].filename().string() + ": " + why);
    first_reports.push_back(report_json(r));
  }
  long rss = peak_rss_kb();
  if (rss < 0 || rss >= 512 * 1024) fail(o, "peak RSS " + std::to_string(rss) + " kB");
  if (o.pass) {
    o.detail = std::to_string(projects.size()) + " projects, " + std::to_string(loc_total) + " lines, slowest " +
               fmt(slowest) + " s, peak RSS " + std::to_string(rss / 1024) + " MB";
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  auto projects = corpus_projects();
  if (first_reports.size() != projects.size()) {
    fail(o, "corpus run missing");
    return o;
  }
  std::size_t bytes = 0;
  for (std::size_t i = 0; i < projects.size(); ++i) {
    RunOptions opts;
    opts.k = 10;
    std::string again = report_json(run_project(projects[i], opts));
    bytes += again.size();
    if (again != first_reports[i]) fail(o, projects[i].filename().string() + " report differs");
  }
  if (o.pass) o.detail = "second run byte-identical (" + std::to_string(bytes) + " bytes)";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"sample scenario 1 edge weights", sample_scenario1},
      {"sample scenario 2 edge weight 1/2", sample_scenario2},
      {"soundness on 500 fuzz projects", soundness},
      {"enumeration equals truth table (k = 4096)", enumeration},
      {"centrality matches oracles", centrality_oracles},
      {"weighting fixtures", algorithm1},
      {"CNF equivalence on 200 formulas", cnf_equivalence},
      {"10-project corpus within time and memory", corpus_scale},
      {"byte-identical reports", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %zu. %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
