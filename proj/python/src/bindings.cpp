#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cfgrank/centrality.hpp"
#include "cfgrank/errors.hpp"
#include "cfgrank/pipeline.hpp"

namespace py = pybind11;
using namespace cfgrank;

namespace {

RunOptions run_options(std::size_t k, const std::string& measure, double alpha, std::optional<double> beta,
                       std::uint64_t default_weight, double timeout, bool phi_literal, bool chi_formula,
                       bool refine) {
  RunOptions o;
  auto m = measure_from_name(measure);
  if (!m) throw py::value_error("unknown centrality measure '" + measure + "'");
  o.k = k;
  o.centrality.measure = *m;
  o.centrality.alpha = alpha;
  o.centrality.beta = beta;
  o.default_weight = default_weight;
  o.timeout_seconds = timeout;
  o.phi = phi_literal ? PhiMode::Literal : PhiMode::Implication;
  o.chi = chi_formula ? ChiMode::Formula : ChiMode::FeatureCount;
  o.refine = refine;
  return o;
}

Rational to_rational(py::handle w) {
  if (py::isinstance<py::tuple>(w)) {
    auto t = w.cast<std::pair<std::int64_t, std::int64_t>>();
    return Rational(t.first, t.second);
  }
  return Rational(w.cast<std::int64_t>());
}

FeatureGraph to_graph(const std::vector<std::string>& nodes, const std::vector<py::tuple>& edges) {
  FeatureGraph g;
  for (const auto& n : nodes) g.nodes[n].name = n;
  for (const auto& e : edges) {
    if (e.size() != 3) throw py::value_error("edges are (source, target, weight) triples");
    auto s = e[0].cast<std::string>();
    auto t = e[1].cast<std::string>();
    g.nodes[s].name = s;
    g.nodes[t].name = t;
    g.edges[{s, t}] += to_rational(e[2]);
  }
  return g;
}

CnfFormula to_cnf_formula(const std::vector<std::vector<int>>& clauses, int num_vars) {
  CnfFormula c;
  for (int i = 1; i <= num_vars; ++i) c.var("x" + std::to_string(i));
  for (const auto& cl : clauses) {
    for (int l : cl) {
      if (l == 0 || std::abs(l) > num_vars) throw py::value_error("literal out of range");
    }
  }
  c.clauses = clauses;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of cfgrank";

  py::register_exception<SyntaxError>(m, "SyntaxError", PyExc_ValueError);
  py::register_exception<ManifestError>(m, "ManifestError", PyExc_ValueError);
  py::register_exception<FatalConfig>(m, "FatalConfig", PyExc_OSError);
  py::register_exception<BetaTooLarge>(m, "BetaTooLarge", PyExc_ValueError);

  m.def(
      "analyze_json",
      [](const std::string& root, std::size_t k, const std::string& centrality, double alpha,
         std::optional<double> beta, std::uint64_t default_weight, double timeout, bool phi_literal,
         bool chi_formula, bool refine) {
        auto opts = run_options(k, centrality, alpha, beta, default_weight, timeout, phi_literal, chi_formula, refine);
        ProjectReport r;
        {
          py::gil_scoped_release release;
          r = run_project(root, opts);
        }
        return report_json(r);
      },
      py::arg("root"), py::arg("k") = 10, py::arg("centrality") = "eigenvector", py::arg("alpha") = 0.5,
      py::arg("beta") = py::none(), py::arg("default_weight") = 1, py::arg("timeout") = 600.0,
      py::arg("phi_literal") = false, py::arg("chi_formula") = false, py::arg("refine") = true);

  m.def(
      "chi",
      [](const std::string& predicate, py::object weight, bool formula_mode) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& [f, w] : chi(parse_predicate(predicate), to_rational(weight),
                                      formula_mode ? ChiMode::Formula : ChiMode::FeatureCount)) {
          out.emplace_back(f, w.str());
        }
        return out;
      },
      py::arg("predicate"), py::arg("weight") = 1, py::arg("formula_mode") = false);

  m.def(
      "parse_manifest",
      [](const std::string& text) {
        auto mf = parse_manifest(text);
        py::dict d;
        d["package"] = mf.package_name;
        d["default"] = mf.default_features;
        d["features"] = mf.features;
        d["workspace_members"] = mf.workspace_members;
        return d;
      },
      py::arg("text"));

  m.def(
      "centrality",
      [](const std::vector<std::string>& nodes, const std::vector<py::tuple>& edges, const std::string& measure,
         double alpha, std::optional<double> beta) {
        auto mm = measure_from_name(measure);
        if (!mm) throw py::value_error("unknown centrality measure '" + measure + "'");
        CentralityOptions o;
        o.measure = *mm;
        o.alpha = alpha;
        o.beta = beta;
        return compute_centrality(to_graph(nodes, edges), o).entries;
      },
      py::arg("nodes"), py::arg("edges"), py::arg("measure") = "eigenvector", py::arg("alpha") = 0.5,
      py::arg("beta") = py::none());

  m.def(
      "sat_solve",
      [](const std::vector<std::vector<int>>& clauses, int num_vars,
         const std::vector<int>& assumptions) -> std::optional<std::vector<bool>> {
        auto a = solve(to_cnf_formula(clauses, num_vars), assumptions);
        if (!a) return std::nullopt;
        return std::vector<bool>(a->values.begin() + 1, a->values.end());
      },
      py::arg("clauses"), py::arg("num_vars"), py::arg("assumptions") = std::vector<int>{});

  m.def(
      "to_dimacs",
      [](const std::vector<std::vector<int>>& clauses, int num_vars) {
        return export_dimacs(to_cnf_formula(clauses, num_vars));
      },
      py::arg("clauses"), py::arg("num_vars"));
}
