#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "packrig/packrig.hpp"

namespace {

using namespace packrig;

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_failure = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

PackingDocument load(const std::string& path) {
  try {
    return parse(read_file(path));
  } catch (const ParseError& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

const char* status_name(RigidityStatus s) {
  switch (s) {
    case RigidityStatus::Rigid: return "rigid";
    case RigidityStatus::NotRigid: return "not_rigid";
    case RigidityStatus::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

const char* status_name(SecondOrderStatus s) {
  switch (s) {
    case SecondOrderStatus::NoNontrivialFlex: return "no_nontrivial_flex";
    case SecondOrderStatus::PrestressStable: return "prestress_stable";
    case SecondOrderStatus::NotPrestressStable: return "not_prestress_stable";
    case SecondOrderStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

void add_counts(Report& r, const PlanarEmbeddedGraph& g) {
  r.add("n", g.vertex_count());
  r.add("m", g.edge_count());
  r.add("boundary_count", g.boundary_count());
}

int run_validate(const std::string& file, const AnalysisTolerances& tol) {
  const PackingDocument doc = load(file);
  const ValidationReport check = validate_packing(doc.graph, doc.packing, tol);
  Report r;
  r.add("command", "validate");
  add_counts(r, doc.graph);
  r.add("valid", check.ok());
  r.add("violations", static_cast<int>(check.violations.size()));
  for (std::size_t k = 0; k < check.violations.size(); ++k) r.add("violation_" + std::to_string(k + 1), check.violations[k].message);
  std::cout << r.str();
  return check.ok() ? exit_ok : exit_invalid;
}

int run_analyze(const std::string& file, const AnalysisTolerances& tol) {
  const PackingDocument doc = load(file);
  const RigidityVerdict v = is_infinitesimally_rigid(doc.graph, doc.packing, doc.partition, tol);
  const FlexSpaceReport& d = v.diagnostics;
  Report r;
  r.add("command", "analyze");
  add_counts(r, doc.graph);
  r.add("status", status_name(v.status));
  r.add("rigid", v.rigid);
  r.add("fixed_radius_condition", v.fixed_radius_ok);
  r.add("kernel_R", d.dim_kernel_R);
  r.add("kernel_Re", d.dim_kernel_Re);
  r.add("kernel_Rprime", d.dim_kernel_Rprime);
  r.add("cokernel_Re", d.cokernel_Re);
  r.add("nontrivial_fixed_radii_flexes", d.nontrivial_fixed_radii_flexes);
  r.add("free_disk_flexes", d.free_disk_flexes);
  r.add("near_degenerate", d.near_degenerate);
  r.add("stress_margin", v.stress_margin);
  if (v.stress) r.add("stress", format_stress(doc.graph, *v.stress));
  if (v.counterexample_flex) r.add("flex_radius_rates", format_radius_rates(*v.counterexample_flex));
  std::cout << r.str();
  return exit_ok;
}

int run_second_order(const std::string& file, const AnalysisTolerances& tol) {
  const PackingDocument doc = load(file);
  const SecondOrderReport so = second_order_analysis(doc.graph, doc.packing, doc.partition, tol);
  bool all_blocked = !so.verdicts.empty();
  for (const auto& v : so.verdicts) all_blocked = all_blocked && v.blocked();
  Report r;
  r.add("command", "second-order");
  add_counts(r, doc.graph);
  r.add("status", status_name(so.status));
  r.add("flex_dim", so.flex_dim);
  r.add("implicit_fixed", so.implicit_fixed);
  r.add("directions", static_cast<int>(so.verdicts.size()));
  r.add("blocked", all_blocked);
  r.add("prestress_stable", so.prestress_stable);
  r.add("sensitive", so.sensitive);
  for (std::size_t k = 0; k < so.verdicts.size(); ++k) {
    const SecondOrderVerdict& v = so.verdicts[k];
    const std::string p = "direction_" + std::to_string(k + 1) + "_";
    r.add(p + "radius_rates", format_radius_rates(v.flex));
    r.add(p + "extendable", v.extendable);
    r.add(p + "blocked", v.blocked());
    r.add(p + "extension_residual", v.extension_residual);
    r.add(p + "blocking_value", v.blocking_value);
    if (v.blocking_stress) r.add(p + "blocking_stress", format_stress(doc.graph, *v.blocking_stress));
  }
  std::cout << r.str();
  return exit_ok;
}

std::vector<VertexId> parse_id_list(const std::string& text) {
  std::vector<VertexId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw InvalidInput("bad vertex id '" + item + "' in --set");
    out.push_back(v);
  }
  return out;
}

int run_matroid(const std::string& file, const std::string& cost_file, const std::string& set_text,
                const AnalysisTolerances& tol) {
  const PackingDocument doc = load(file);
  const int n = doc.graph.vertex_count();
  std::vector<double> cost(static_cast<std::size_t>(n), 1.0);
  if (!cost_file.empty()) {
    const auto given = parse_costs(read_file(cost_file));
    for (const auto& [v, c] : given) {
      if (v < 1 || v > n) throw InvalidInput("cost given for unknown vertex " + std::to_string(v));
      cost[v - 1] = c;
    }
  }
  Report r;
  r.add("command", "matroid");
  add_counts(r, doc.graph);
  const bool bar_rigid = bar_framework_rigid(doc.graph, doc.packing, tol);
  r.add("bar_framework_rigid", bar_rigid);
  r.add("expected_maximal_size", 3 * n - doc.graph.edge_count() - 3);
  if (bar_rigid) {
    const GreedyResult g = greedy_min_cost_set(doc.graph, doc.packing, cost, tol);
    r.add("greedy_set", g.set.members);
    r.add("greedy_size", static_cast<int>(g.set.members.size()));
    r.add("greedy_cost", g.total_cost);
    r.add("indeterminate", g.indeterminate);
  }
  if (!set_text.empty()) {
    const std::vector<VertexId> set = parse_id_list(set_text);
    const Independence ind = independence(doc.graph, doc.packing, set, tol);
    r.add("set", set);
    r.add("set_rank", radius_set_rank(doc.graph, doc.packing, set, tol));
    r.add("set_independence", ind == Independence::Independent ? "independent"
                              : ind == Independence::Dependent ? "dependent"
                                                                : "indeterminate");
    r.add("set_maximal", is_maximal(doc.graph, doc.packing, set, tol));
  }
  std::cout << r.str();
  return exit_ok;
}

int run_layout(const std::string& file, const std::string& boundary_file, const std::string& out,
               const AnalysisTolerances& tol) {
  GraphDocument doc = [&] {
    try {
      return parse_graph(read_file(file));
    } catch (const ParseError& e) {
      throw InvalidInput(file + ": " + e.what());
    }
  }();
  std::map<VertexId, double> radii;
  try {
    radii = parse_radii(read_file(boundary_file));
  } catch (const ParseError& e) {
    throw InvalidInput(boundary_file + ": " + e.what());
  }
  const LayoutProblem problem{doc.graph, radii, 100000, tol.tol_angle, std::nullopt};
  const Packing packing = layout(problem, tol);
  write_output(out, serialize(doc.graph, packing, doc.partition));
  return exit_ok;
}

int run_case(const std::string& name, const std::string& out) {
  const CaseRecord rec = build_case(name);
  if (!rec.has_instance()) {
    Report r;
    r.add("case", rec.name);
    r.add("value", *rec.scalar);
    r.add("construction", rec.construction);
    write_output(out, r.str());
    return exit_ok;
  }
  write_output(out, serialize(*rec.graph, *rec.packing, *rec.partition));
  return exit_ok;
}

int run_export_svg(const std::string& file, const std::string& out, const std::string& stress_kind,
                   const AnalysisTolerances& tol) {
  const PackingDocument doc = load(file);
  std::optional<Stress> stress;
  if (stress_kind == "rigidifying") {
    stress = find_rigidifying_stress(doc.graph, doc.packing, doc.partition, tol);
  } else if (stress_kind == "blocking") {
    const SecondOrderReport so = second_order_analysis(doc.graph, doc.packing, doc.partition, tol);
    for (const auto& v : so.verdicts)
      if (v.blocking_stress) {
        stress = v.blocking_stress;
        break;
      }
  }
  write_output(out, export_svg(doc.graph, doc.packing, doc.partition, stress));
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rigidity analysis of disk packings with radius constraints"};
  app.require_subcommand(1);
  app.fallthrough();

  AnalysisTolerances tol;
  std::optional<double> tol_rank, tol_lp, tol_strict, tol_tangency;
  app.add_option("--tol-rank", tol_rank, "singular value cutoff for rank decisions");
  app.add_option("--tol-lp", tol_lp, "LP threshold for strictly positive optima");
  app.add_option("--tol-strict", tol_strict, "radius rate below which a flex component counts as zero");
  app.add_option("--tol-tangency", tol_tangency, "relative tangency residual bound");

  std::string file, out, cost_file, set_text, boundary_file, case_name, stress_kind = "none";

  auto* validate = app.add_subcommand("validate", "check tangencies and orientation");
  validate->add_option("file", file, "packing document")->required();
  auto* analyze = app.add_subcommand("analyze", "first-order verdict and flex-space report");
  analyze->add_option("file", file, "packing document")->required();
  auto* second = app.add_subcommand("second-order", "prestress stability analysis");
  second->add_option("file", file, "packing document")->required();
  auto* matroid = app.add_subcommand("matroid", "independent radius sets and greedy selection");
  matroid->add_option("file", file, "packing document")->required();
  matroid->add_option("--cost", cost_file, "file of '<id> <cost>' lines");
  matroid->add_option("--set", set_text, "comma-separated disk ids to classify");
  auto* lay = app.add_subcommand("layout", "packing from a graph document and boundary radii");
  lay->add_option("file", file, "graph document")->required();
  lay->add_option("--boundary", boundary_file, "file of '<id> <radius>' lines")->required();
  lay->add_option("-o,--output", out, "output packing document");
  auto* cas = app.add_subcommand("case", "emit a catalogued instance");
  cas->add_option("name", case_name, "case name")->required()->check(CLI::IsMember(case_names()));
  cas->add_option("-o,--output", out, "output file");
  auto* svg = app.add_subcommand("export-svg", "draw a packing as SVG");
  svg->add_option("file", file, "packing document")->required();
  svg->add_option("-o,--output", out, "output SVG file")->required();
  svg->add_option("--stress", stress_kind, "edge labels: none, rigidifying or blocking")
      ->check(CLI::IsMember({"none", "rigidifying", "blocking"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_invalid;
  }

  try {
    tol = tolerances_from_environment();
    if (tol_rank) tol.tol_rank = *tol_rank;
    if (tol_lp) tol.tol_lp = *tol_lp;
    if (tol_strict) tol.tol_strict = *tol_strict;
    if (tol_tangency) tol.tol_tangency = *tol_tangency;
    tol.validate();
    if (*validate) return run_validate(file, tol);
    if (*analyze) return run_analyze(file, tol);
    if (*second) return run_second_order(file, tol);
    if (*matroid) return run_matroid(file, cost_file, set_text, tol);
    if (*lay) return run_layout(file, boundary_file, out, tol);
    if (*cas) return run_case(case_name, out);
    if (*svg) return run_export_svg(file, out, stress_kind, tol);
  } catch (const NumericalFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_failure;
}
