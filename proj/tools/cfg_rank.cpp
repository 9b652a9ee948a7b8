// cfg-rank: rank cfg features of a Rust project and emit top-K configurations.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cfgrank/errors.hpp"
#include "cfgrank/pipeline.hpp"

namespace fs = std::filesystem;
using namespace cfgrank;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string file_safe(const std::string& name) {
  std::string s;
  for (char c : name) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return s.empty() ? "member" : s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FatalConfig("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct AnalyzeArgs {
  std::string root;
  std::size_t k = 10;
  std::string centrality = "eigenvector";
  double alpha = 0.5;
  std::optional<double> beta;
  std::uint64_t default_weight = 1;
  double timeout = 600;
  std::string format = "json";
  std::string emit_dimacs;
  std::string emit_dot;
  std::string emit_json;
  std::string report;
  bool phi_literal = false;
  bool chi_formula = false;
  bool one_per_anchor = false;
  bool no_refine = false;
  bool timing = false;
};

int run_analyze(const AnalyzeArgs& a) {
  RunOptions opts;
  opts.k = a.k;
  opts.centrality.measure = *measure_from_name(a.centrality);
  opts.centrality.alpha = a.alpha;
  opts.centrality.beta = a.beta;
  opts.default_weight = a.default_weight;
  opts.timeout_seconds = a.timeout;
  opts.phi = a.phi_literal ? PhiMode::Literal : PhiMode::Implication;
  opts.chi = a.chi_formula ? ChiMode::Formula : ChiMode::FeatureCount;
  opts.refine = !a.no_refine;
  opts.generation.one_per_anchor = a.one_per_anchor;
  opts.timing = a.timing;

  std::vector<std::pair<std::string, std::string>> dimacs;
  ArtifactSink sink = [&](const MemberReport& r, const MemberArtifacts& art) {
    std::string stem = file_safe(r.name);
    if (!a.emit_dimacs.empty()) dimacs.emplace_back(r.name, export_dimacs(art.cnf));
    if (!a.emit_dot.empty()) {
      fs::path dir(a.emit_dot);
      write_file(dir / (stem + ".uir.dot"), uir_to_dot(art.uir));
      write_file(dir / (stem + ".multigraph.dot"), to_dot(art.multigraph));
      write_file(dir / (stem + ".features.dot"), to_dot(art.squashed));
      write_file(dir / (stem + ".patched.dot"), to_dot(art.patched));
      write_file(dir / (stem + ".atoms.dot"), to_dot(art.atoms));
    }
    if (!a.emit_json.empty()) {
      fs::path dir(a.emit_json);
      write_file(dir / (stem + ".multigraph.json"), to_json(art.multigraph) + "\n");
      write_file(dir / (stem + ".features.json"), to_json(art.squashed) + "\n");
      write_file(dir / (stem + ".atoms.json"), to_json(art.atoms) + "\n");
      write_file(dir / (stem + ".centrality.json"), to_json(art.centrality) + "\n");
      write_file(dir / (stem + ".refined.json"), to_json(art.refined) + "\n");
      write_file(dir / (stem + ".formula.json"), to_json(art.formula) + "\n");
    }
  };

  ProjectReport report = run_project(a.root, opts, sink);

  if (!a.emit_dimacs.empty()) {
    fs::path p(a.emit_dimacs);
    for (const auto& [name, text] : dimacs) {
      fs::path target = p;
      if (dimacs.size() > 1) {
        target = p.parent_path() / (p.stem().string() + "." + file_safe(name) + p.extension().string());
      }
      write_file(target, text);
    }
  }
  std::string json = report_json(report, a.timing);
  if (!a.report.empty()) write_file(a.report, json);
  std::cout << (a.format == "text" ? report_text(report, a.timing) : json);
  return report.failed_members > 0 ? 1 : 0;
}

int run_dump_tree(const std::vector<std::string>& inputs, bool pretty) {
  std::vector<SourceFile> files;
  for (const auto& in : inputs) {
    fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> paths;
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".rs") paths.push_back(e.path());
      }
      std::sort(paths.begin(), paths.end());
      for (const auto& f : paths) files.push_back({fs::relative(f, p).generic_string(), slurp(f)});
    } else {
      files.push_back({p.filename().generic_string(), slurp(p)});
    }
  }
  std::cout << export_json_tree(parse_source(files), pretty ? 2 : -1) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank cfg features by centrality and generate top-K configurations"};
  app.require_subcommand(1);

  AnalyzeArgs a;
  auto* analyze = app.add_subcommand("analyze", "Analyze a project or workspace");
  analyze->add_option("root", a.root, "Project root containing Cargo.toml")->required();
  analyze->add_option("-n", a.k, "Number of configurations")->check(CLI::PositiveNumber);
  analyze->add_option("--centrality", a.centrality, "Centrality measure")
      ->check(CLI::IsMember({"degree-in", "degree-out", "harmonic", "closeness", "betweenness", "eigenvector", "katz"}));
  analyze->add_option("--alpha", a.alpha, "Opsahl betweenness alpha")->check(CLI::NonNegativeNumber);
  analyze->add_option("--beta", a.beta, "Katz attenuation (default 0.85 / spectral radius)");
  analyze->add_option("--default-weight", a.default_weight, "Weight assigned by cycle recovery")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--timeout", a.timeout, "Per-member timeout in seconds (0 disables)")
      ->check(CLI::NonNegativeNumber);
  analyze->add_option("--format", a.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  analyze->add_option("--emit-dimacs", a.emit_dimacs, "Write the CNF in DIMACS format");
  analyze->add_option("--emit-dot", a.emit_dot, "Write DOT graphs into this directory");
  analyze->add_option("--emit-json", a.emit_json, "Write JSON graph/centrality/formula dumps into this directory");
  analyze->add_option("--report", a.report, "Also write the JSON report here");
  analyze->add_flag("--phi-literal", a.phi_literal, "Assert every feature predicate instead of implying it");
  analyze->add_flag("--chi-formula-mode", a.chi_formula, "Split all() weights by the per-child formula");
  analyze->add_flag("--one-per-anchor", a.one_per_anchor, "At most one configuration per ranked feature");
  analyze->add_flag("--no-refine", a.no_refine, "Rank by raw centrality");
  analyze->add_flag("--timing", a.timing, "Include wall-clock times in the report");

  std::vector<std::string> dump_inputs;
  bool pretty = false;
  auto* dump = app.add_subcommand("dump-tree", "Print the parsed syntax tree as JSON");
  dump->add_option("inputs", dump_inputs, "Source files or directories")->required();
  dump->add_flag("--pretty", pretty, "Indent the output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*analyze) return run_analyze(a);
    return run_dump_tree(dump_inputs, pretty);
  } catch (const std::exception& e) {
    std::cerr << "cfg-rank: " << e.what() << "\n";
    return 2;
  }
}
