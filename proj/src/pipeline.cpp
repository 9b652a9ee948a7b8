#include "cfgrank/pipeline.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "cfgrank/errors.hpp"

namespace cfgrank {

namespace fs = std::filesystem;

Deadline::Deadline(double seconds) {
  if (seconds > 0) {
    end_ = std::chrono::steady_clock::now() +
           std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds));
  }
}

bool Deadline::expired() const { return end_ && std::chrono::steady_clock::now() >= *end_; }

void Deadline::check() const {
  if (expired()) throw TimeoutError("member analysis timed out");
}

Configuration to_configuration(const CnfFormula& cnf, const Assignment& a, std::optional<std::string> anchor) {
  Configuration c;
  for (int v = 1; v <= cnf.num_vars(); ++v) {
    (a[v] ? c.enabled : c.disabled).insert(cnf.names[static_cast<std::size_t>(v - 1)]);
  }
  c.anchor = std::move(anchor);
  return c;
}

Assignment to_assignment(const CnfFormula& cnf, const Configuration& c) {
  Assignment a;
  a.values.assign(static_cast<std::size_t>(cnf.num_vars()) + 1, false);
  for (const auto& f : c.enabled) a.values.at(static_cast<std::size_t>(cnf.index.at(f))) = true;
  return a;
}

GenerationResult generate_configurations(const std::vector<std::string>& ranking, const CnfFormula& cnf,
                                         std::size_t k, const GenerationOptions& opts, const Deadline& deadline) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  GenerationResult out;
  Solver solver(cnf);
  solver.set_interrupt([&] { deadline.check(); });
  auto found = [&](const Assignment& a, std::optional<std::string> anchor) {
    out.configurations.push_back(to_configuration(cnf, a, std::move(anchor)));
    solver.add_clause(blocking_clause(a));
  };

  for (const auto& f : ranking) {
    if (out.configurations.size() >= k) break;
    auto it = cnf.index.find(f);
    if (it == cnf.index.end()) throw UnknownFeature(f);
    while (out.configurations.size() < k) {
      deadline.check();
      auto m = solver.solve({it->second});
      if (!m) break;
      found(*m, f);
      if (opts.one_per_anchor) break;
    }
  }
  if (opts.fill_unanchored) {
    while (out.configurations.size() < k) {
      deadline.check();
      auto m = solver.solve();
      if (!m) break;
      found(*m, std::nullopt);
    }
  }
  out.exhausted = out.configurations.size() < k && !solver.solve();
  return out;
}

std::size_t detected_feature_count(const FeatureGraph& g, const Uir& uir) {
  std::set<std::pair<std::string, bool>> seen;
  auto collect = [&](const CfgPredicate& p, auto&& self) -> void {
    if (p.is_leaf()) {
      if (!is_reserved_node(p.name)) seen.emplace(p.name, p.kind == CfgPredicate::Kind::Not);
      return;
    }
    for (const auto& c : p.children) self(c, self);
  };
  for (const auto& n : uir.nodes) {
    if (n.predicate) collect(*n.predicate, collect);
  }
  for (const auto& [name, node] : g.nodes) {
    for (const auto& p : node.predicates) collect(p, collect);
  }
  return seen.size();
}

MemberReport analyze_tree(const std::string& name, AstNode ast, const Manifest& manifest, const RunOptions& opts,
                          MemberArtifacts* artifacts, const Deadline& deadline) {
  auto t0 = std::chrono::steady_clock::now();
  MemberArtifacts local;
  MemberArtifacts& a = artifacts ? *artifacts : local;
  a.ast = std::move(ast);

  a.uir = build_uir(a.ast, opts.default_weight);
  deadline.check();
  a.multigraph = extract_feature_graph(a.uir, opts.chi);
  a.squashed = squash(a.multigraph);
  a.patched = add_patch_node(a.squashed);
  deadline.check();
  a.centrality = compute_centrality(a.patched, opts.centrality);
  a.atoms = extract_atom_tree(a.uir);
  a.refined = opts.refine ? refine(a.centrality, a.atoms) : a.centrality;
  a.ranking = rank(a.refined);
  deadline.check();
  a.formula = build_formula(a.squashed, manifest, opts.phi);
  a.cnf = to_cnf(a.formula, feature_variables(a.squashed, manifest), opts.blowup_limit);
  deadline.check();

  MemberReport r;
  r.name = name;
  r.ranking = a.ranking;
  if (a.cnf.num_vars() > 0) {
    auto gen = generate_configurations(a.ranking, a.cnf, opts.k, opts.generation, deadline);
    r.configurations = std::move(gen.configurations);
    r.exhausted = gen.exhausted;
  }

  MemberMetrics& m = r.metrics;
  auto um = uir_metrics(a.uir);
  m.uir_nodes = um.nodes;
  m.uir_edges = um.edges;
  m.uir_height = um.height;
  m.graph_nodes = a.multigraph.nodes.size();
  m.graph_edges = a.multigraph.edges.size();
  m.squashed_edges = a.squashed.edges.size();
  auto am = atomtree_metrics(a.atoms);
  m.atom_nodes = am.nodes;
  m.atom_edges = am.edges;
  m.detected_features = detected_feature_count(a.squashed, a.uir);
  m.declared_features = manifest.features.size();
  m.configurations = r.configurations.size();
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

MemberReport analyze_member(const std::string& name, const std::vector<SourceFile>& files,
                            const Manifest& manifest, const RunOptions& opts, MemberArtifacts* artifacts) {
  Deadline deadline(opts.timeout_seconds);
  return analyze_tree(name, parse_source(files), manifest, opts, artifacts, deadline);
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void expand_glob(const fs::path& base, const std::vector<std::string>& parts, std::size_t i,
                 std::vector<fs::path>& out) {
  if (i == parts.size()) {
    if (fs::is_regular_file(base / "Cargo.toml")) out.push_back(base);
    return;
  }
  const std::string& part = parts[i];
  if (part.find_first_of("*?[") == std::string::npos) {
    if (fs::is_directory(base / part)) expand_glob(base / part, parts, i + 1, out);
    return;
  }
  if (!fs::is_directory(base)) return;
  std::vector<fs::path> entries;
  for (const auto& e : fs::directory_iterator(base)) {
    if (e.is_directory() && fnmatch(part.c_str(), e.path().filename().c_str(), 0) == 0) entries.push_back(e.path());
  }
  std::sort(entries.begin(), entries.end());
  for (const auto& e : entries) expand_glob(e, parts, i + 1, out);
}

std::string relative_name(const fs::path& dir, const fs::path& root) {
  std::string rel = fs::relative(dir, root).generic_string();
  return rel.empty() ? "." : rel;
}

nlohmann::json metrics_json(const MemberMetrics& m, bool timing) {
  nlohmann::json j{{"uir_nodes", m.uir_nodes},
                   {"uir_edges", m.uir_edges},
                   {"uir_height", m.uir_height},
                   {"feature_graph_nodes", m.graph_nodes},
                   {"feature_graph_edges", m.graph_edges},
                   {"squashed_edges", m.squashed_edges},
                   {"atom_tree_nodes", m.atom_nodes},
                   {"atom_tree_edges", m.atom_edges},
                   {"detected_features", m.detected_features},
                   {"declared_features", m.declared_features},
                   {"configurations", m.configurations}};
  if (timing) j["wall_seconds"] = m.wall_seconds;
  return j;
}

}  // namespace

std::vector<fs::path> discover_members(const fs::path& root) {
  fs::path manifest_path = root / "Cargo.toml";
  if (!fs::is_directory(root)) throw FatalConfig("project root " + root.string() + " is not a readable directory");
  if (!fs::is_regular_file(manifest_path)) throw FatalConfig("no Cargo.toml in " + root.string());
  Manifest m;
  try {
    m = parse_manifest(read_file(manifest_path));
  } catch (const std::exception& e) {
    throw FatalConfig(std::string("root manifest: ") + e.what());
  }
  std::vector<fs::path> dirs;
  if (m.workspace_members.empty() || !m.package_name.empty()) dirs.push_back(root);
  for (const auto& pattern : m.workspace_members) {
    std::vector<std::string> parts;
    for (const auto& p : fs::path(pattern)) {
      if (!p.empty() && p != ".") parts.push_back(p.string());
    }
    expand_glob(root, parts, 0, dirs);
  }
  for (auto& d : dirs) d = d.lexically_normal();
  std::sort(dirs.begin(), dirs.end());
  dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
  return dirs;
}

MemberSource load_member(const fs::path& dir, const fs::path& root) {
  MemberSource s;
  s.dir = dir;
  s.manifest = parse_manifest(read_file(dir / "Cargo.toml"));
  s.name = s.manifest.package_name.empty() ? relative_name(dir, root) : s.manifest.package_name;
  fs::path src = dir / "src";
  if (fs::is_directory(src)) {
    std::vector<fs::path> paths;
    for (const auto& e : fs::recursive_directory_iterator(src)) {
      if (e.is_regular_file() && e.path().extension() == ".rs") paths.push_back(e.path());
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) s.files.push_back({fs::relative(p, dir).generic_string(), read_file(p)});
  }
  return s;
}

ProjectReport run_project(const fs::path& root, const RunOptions& opts, const ArtifactSink& sink) {
  ProjectReport report;
  for (const auto& dir : discover_members(root)) {
    Deadline deadline(opts.timeout_seconds);
    MemberReport r;
    r.name = relative_name(dir, root);
    try {
      MemberSource src = load_member(dir, root);
      r.name = src.name;
      MemberArtifacts art;
      auto t0 = std::chrono::steady_clock::now();
      AstNode ast = parse_source(src.files);
      deadline.check();
      r = analyze_tree(src.name, std::move(ast), src.manifest, opts, &art, deadline);
      r.metrics.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (sink) sink(r, art);
    } catch (const TimeoutError&) {
      r.failed = true;
      r.error = "timeout after " + std::to_string(opts.timeout_seconds) + " s";
    } catch (const std::exception& e) {
      r.failed = true;
      r.error = e.what();
    }
    report.members.push_back(std::move(r));
  }
  std::stable_sort(report.members.begin(), report.members.end(),
                   [](const MemberReport& a, const MemberReport& b) { return a.name < b.name; });
  report.aggregate = aggregate(report.members);
  report.failed_members = static_cast<std::size_t>(
      std::count_if(report.members.begin(), report.members.end(), [](const auto& m) { return m.failed; }));
  return report;
}

MemberMetrics aggregate(const std::vector<MemberReport>& members) {
  MemberMetrics a;
  for (const auto& r : members) {
    const auto& m = r.metrics;
    a.uir_nodes += m.uir_nodes;
    a.uir_edges += m.uir_edges;
    a.uir_height = std::max(a.uir_height, m.uir_height);
    a.graph_nodes += m.graph_nodes;
    a.graph_edges += m.graph_edges;
    a.squashed_edges += m.squashed_edges;
    a.atom_nodes += m.atom_nodes;
    a.atom_edges += m.atom_edges;
    a.detected_features += m.detected_features;
    a.declared_features += m.declared_features;
    a.configurations += m.configurations;
    a.wall_seconds += m.wall_seconds;
  }
  return a;
}

std::string report_json(const ProjectReport& r, bool timing, int indent) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : r.members) {
    nlohmann::json configs = nlohmann::json::array();
    for (const auto& c : m.configurations) {
      configs.push_back({{"enabled", c.enabled},
                         {"disabled", c.disabled},
                         {"anchor", c.anchor ? nlohmann::json(*c.anchor) : nlohmann::json(nullptr)}});
    }
    nlohmann::json j{{"name", m.name},
                     {"failed", m.failed},
                     {"configurations", configs},
                     {"exhausted", m.exhausted},
                     {"ranking", m.ranking},
                     {"metrics", metrics_json(m.metrics, timing)}};
    if (m.failed) j["error"] = m.error;
    members.push_back(std::move(j));
  }
  nlohmann::json agg = metrics_json(r.aggregate, timing);
  agg["members"] = r.members.size();
  agg["failed_members"] = r.failed_members;
  return nlohmann::json{{"members", members}, {"aggregate", agg}}.dump(indent) + "\n";
}

std::string report_text(const ProjectReport& r, bool timing) {
  std::ostringstream os;
  auto metrics_line = [&](const MemberMetrics& m) {
    os << "  uir " << m.uir_nodes << "n/" << m.uir_edges << "e/h" << m.uir_height << "  features "
       << m.graph_nodes << "n/" << m.graph_edges << "e (" << m.squashed_edges << " squashed)  atoms "
       << m.atom_nodes << "n/" << m.atom_edges << "e  detected " << m.detected_features << "/declared "
       << m.declared_features;
    if (timing) os << "  " << std::fixed << std::setprecision(3) << m.wall_seconds << "s";
    os << '\n';
  };
  for (const auto& m : r.members) {
    os << m.name;
    if (m.failed) {
      os << "  FAILED: " << m.error << "\n";
      continue;
    }
    os << '\n';
    metrics_line(m.metrics);
    os << "  ranking:";
    for (const auto& f : m.ranking) os << ' ' << f;
    os << '\n';
    for (std::size_t i = 0; i < m.configurations.size(); ++i) {
      const auto& c = m.configurations[i];
      os << "  #" << i + 1 << " [" << (c.anchor ? *c.anchor : "-") << "]";
      for (const auto& f : c.enabled) os << " +" << f;
      os << '\n';
    }
    if (m.exhausted) os << "  (exhausted after " << m.configurations.size() << " configurations)\n";
  }
  os << "total (" << r.members.size() << " members, " << r.failed_members << " failed)\n";
  metrics_line(r.aggregate);
  return os.str();
}

}  // namespace cfgrank
