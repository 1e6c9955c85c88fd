#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "golden.hpp"
#include "support.hpp"

using namespace packrig;
using packrig::testing::cached_case;

namespace {

constexpr double kGoldenTol = 1e-12;
constexpr double kEquilibriumTol = 1e-8;
constexpr double kMarginTol = 1e-7;
constexpr double kAngleTol = 1e-10;
constexpr double kRateTol = 1e-6;
constexpr double kBlockingTol = 1e-7;
constexpr double kGapTol = 1e-6;
constexpr double kGapSlopeTol = 1e-4;
constexpr double kPolyTol = 1e-12;
constexpr double kFlexTol = 1e-8;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome timed(double budget, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double s = seconds_since(t0);
  o.require(s < budget, "took " + std::to_string(s) + " s, budget " + std::to_string(budget) + " s");
  if (o.detail.empty()) o.detail = std::to_string(s) + " s";
  return o;
}

/** Smallest signed radial sum over constrained disks: positive means every sign is strict. */
double signed_margin(const PlanarEmbeddedGraph& g, const Packing& unit, const ConstraintPartition& part,
                     const Stress& w) {
  const Vector sums = radial_sums(g, unit, w);
  double m = inf;
  for (int v = 1; v <= g.vertex_count(); ++v) {
    if (part.tag(v) == RadiusTag::Decrease) m = std::min(m, sums[v - 1]);
    if (part.tag(v) == RadiusTag::Increase) m = std::min(m, -sums[v - 1]);
  }
  return m;
}

bool proper_nontrivial(const PlanarEmbeddedGraph& g, const Packing& p, const ConstraintPartition& part,
                       const FlexVector& f) {
  const double scale = f.values().cwiseAbs().maxCoeff();
  if (!(scale > 0)) return false;
  const Matrix r = build_rigidity_matrix(g, p).matrix;
  if (g.edge_count() > 0 && (r * f.values()).cwiseAbs().maxCoeff() > kFlexTol * scale) return false;
  for (int v = 1; v <= g.vertex_count(); ++v) {
    const double rate = f.r(v) / scale;
    if (part.tag(v) == RadiusTag::Decrease && rate > kFlexTol) return false;
    if (part.tag(v) == RadiusTag::Increase && rate < -kFlexTol) return false;
    if (part.tag(v) == RadiusTag::Fixed && std::abs(rate) > kFlexTol) return false;
  }
  return remove_trivial(p, f.values()).norm() / f.norm() > kRateTol;
}

void criterion1(Outcome& o) {
  const auto& c = cached_case("flower4");
  const ExtendedRigidityMatrix re = build_extended_matrix(*c.graph, *c.packing, *c.partition);
  o.require(packrig::testing::flower_golden_deviation(re, *c.graph) < kGoldenTol, "matrix differs from printed rows");
  const FlexSpaceReport rep = flex_space_report(*c.graph, *c.packing, *c.partition);
  o.require(rep.dim_kernel_Re == 3, "kernel dim " + std::to_string(rep.dim_kernel_Re));
  o.require(rep.cokernel_Re == 1, "cokernel dim " + std::to_string(rep.cokernel_Re));
}

void criterion2(Outcome& o) {
  const auto& c = cached_case("flower4");
  const Packing unit = detail::normalized(*c.packing);
  const RigidityVerdict v = is_infinitesimally_rigid(*c.graph, *c.packing, *c.partition);
  o.require(v.rigid && v.stress.has_value(), "not rigid");
  if (v.stress) {
    o.require(equilibrium_residual(*c.graph, unit, *v.stress) < kEquilibriumTol, "stress out of equilibrium");
    o.require(signed_margin(*c.graph, unit, *c.partition, *v.stress) > kMarginTol, "radial margin too small");
  }
  const ConstraintPartition swapped = c.partition->swapped();
  const RigidityVerdict s = is_infinitesimally_rigid(*c.graph, *c.packing, swapped);
  o.require(s.status == RigidityStatus::NotRigid,
            s.rigid && s.stress && v.stress &&
                    (s.stress->values / s.stress->values.cwiseAbs().maxCoeff() +
                     v.stress->values / v.stress->values.cwiseAbs().maxCoeff())
                            .cwiseAbs()
                            .maxCoeff() < 1e-9
                ? "swapped coloring is rigid: its stress is the negation of the original"
                : "swapped coloring not flagged");
  o.require(s.counterexample_flex && proper_nontrivial(*c.graph, *c.packing, swapped, *s.counterexample_flex),
            "swapped flex fails verification");
}

void criterion3(Outcome& o) {
  int done = 0;
  for (int t = 0; t < 60; ++t) {
    const int n = 5 + t % 26;
    const int interior = 1 + (t * 7) % (n - 4);
    const auto inst = packrig::testing::random_instance(n, interior, 7000 + static_cast<std::uint64_t>(t));
    const auto& g = inst.graph;
    const int kr = 3 * n - numerical_rank(build_rigidity_matrix(g, inst.packing).matrix, 1e-9);
    const int f = static_cast<int>(g.faces().size()) - 1;
    o.require(kr == 3 * n - g.edge_count(), "instance " + std::to_string(t) + ": kernel " + std::to_string(kr));
    o.require(kr - 3 == g.boundary_count(), "instance " + std::to_string(t) + ": kernel - 3 != b");
    o.require(n - g.edge_count() + f == 1, "instance " + std::to_string(t) + ": Euler");
    o.require(3 * f == 2 * g.edge_count() - g.boundary_count(), "instance " + std::to_string(t) + ": face count");
    ++done;
  }
  o.require(done >= 50, "fewer than 50 layouts");
}

void criterion4(Outcome& o) {
  const auto& c = cached_case("prestress10");
  const auto& g = *c.graph;
  std::map<VertexId, double> boundary;
  for (int v = 1; v <= 10; ++v)
    if (g.is_boundary(v)) boundary[v] = c.packing->disk(v).r;
  const InteriorSolution sol = solve_interior_radii({g, boundary, 100000, 1e-12, std::nullopt});
  o.require(sol.worst_residual < kAngleTol, "angle residual " + std::to_string(sol.worst_residual));
  const int kre = flex_space_report(g, *c.packing, *c.partition).dim_kernel_Re;
  o.require(kre == 4, "extended kernel " + std::to_string(kre));

  const SecondOrderReport rep = second_order_analysis(g, *c.packing, *c.partition);
  o.require(rep.flex_dim == 1, "flex dim " + std::to_string(rep.flex_dim));
  o.require(!rep.verdicts.empty(), "no flex direction analyzed");
  for (const auto& v : rep.verdicts) {
    double scale = 0.0;
    for (int k = 1; k <= 10; ++k) scale = std::max(scale, std::abs(v.flex.r(k)));
    o.require(std::abs((v.flex.r(2) + v.flex.r(5)) / scale) < kRateTol, "r2' != -r5'");
    o.require(!v.extendable, "flex extends");
    o.require(v.blocked() && v.blocking_value > kBlockingTol, "flex not blocked");
    o.require(v.extendable != v.blocked(), "exclusive-or fails");
  }
  const ConstraintPartition swapped = c.partition->swapped();
  const SecondOrderReport srep = second_order_analysis(g, *c.packing, swapped);
  bool extendable = false;
  for (const auto& v : srep.verdicts) {
    o.require(v.extendable != v.blocked(), "exclusive-or fails on swapped coloring");
    if (v.extendable) {
      extendable = true;
      o.require(!find_blocking_stress(g, *c.packing, swapped, v.flex).has_value(), "swapped flex has blocking stress");
    }
  }
  o.require(extendable, "swapped flex does not extend");
}

void criterion5(Outcome& o) {
  const auto [q, r] = detail::symmetric_ten_disk_radii();
  const GapReport g = gap_analysis(q, r - 0.2, r + 0.2);
  o.require(std::abs(g.gap) < kGapTol, "gap " + std::to_string(g.gap));
  o.require(std::abs(g.first_derivative) < kGapSlopeTol, "first derivative " + std::to_string(g.first_derivative));
  o.require(g.second_derivative > 0, "second derivative " + std::to_string(g.second_derivative));
  o.require(gap(q, g.r2_star + 0.05) > 0 && gap(q, g.r2_star - 0.05) > 0, "gap not positive at +-0.05");
}

void criterion6(Outcome& o) {
  const double x = conjecture_ratio_root();
  o.require(x > 0.650 && x < 0.652, "root " + std::to_string(x));
  o.require(std::abs(conjecture_polynomial(x)) < kPolyTol, "polynomial residual");
}

double brute_force_cost(const PlanarEmbeddedGraph& g, const Packing& p, const std::vector<double>& cost, int size,
                        Outcome& o) {
  const int n = g.vertex_count();
  double best = inf;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<VertexId> s;
    double total = 0.0;
    for (int v = 1; v <= n; ++v)
      if (mask & (1u << (v - 1))) {
        s.push_back(v);
        total += cost[v - 1];
      }
    if (!is_independent(g, p, s) || !is_maximal(g, p, s)) continue;
    o.require(static_cast<int>(s.size()) == size, "maximal set of size " + std::to_string(s.size()));
    best = std::min(best, total);
  }
  return best;
}

void criterion7(Outcome& o) {
  const auto& c = cached_case("general10");
  const std::vector<VertexId> s{2, 4, 5, 6, 8, 9, 10};
  std::vector<VertexId> with7 = s, with1 = s;
  with7.push_back(7);
  with1.push_back(1);
  o.require(is_independent(*c.graph, *c.packing, s), "S not independent");
  o.require(!is_independent(*c.graph, *c.packing, with7), "S+7 independent");
  o.require(is_independent(*c.graph, *c.packing, with1) && is_maximal(*c.graph, *c.packing, with1), "S+1 not maximal");

  std::mt19937_64 rng(70);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  struct Item {
    PlanarEmbeddedGraph graph;
    Packing packing;
  };
  std::vector<Item> items{{*c.graph, *c.packing}};
  for (int t = 0; items.size() < 11 && t < 100; ++t) {
    const int n = 6 + t % 7;
    auto inst = packrig::testing::random_instance(n, 1 + t % (n - 5), 7700 + static_cast<std::uint64_t>(t));
    if (bar_framework_rigid(inst.graph, inst.packing)) items.push_back({inst.graph, inst.packing});
  }
  o.require(items.size() == 11, "not enough rigid random instances");
  for (const auto& it : items) {
    const int n = it.graph.vertex_count();
    std::vector<double> cost(static_cast<std::size_t>(n));
    for (auto& x : cost) x = u(rng);
    const int size = 3 * n - it.graph.edge_count() - 3;
    const GreedyResult g = greedy_min_cost_set(it.graph, it.packing, cost);
    o.require(static_cast<int>(g.set.members.size()) == size, "greedy size");
    o.require(std::abs(g.total_cost - brute_force_cost(it.graph, it.packing, cost, size, o)) < 1e-12,
              "greedy cost differs from optimum");
  }
}

/** Proper flexes moving a sign-constrained radius, as an exact feasibility program. */
LinearProgram alternative_program(const PlanarEmbeddedGraph& g, const Packing& unit, const ConstraintPartition& part) {
  const int n = g.vertex_count();
  const Matrix r = build_rigidity_matrix(g, unit).matrix;
  LinearProgram lp(3 * n);
  for (int e = 0; e < g.edge_count(); ++e) lp.add_equality(r.row(e).transpose(), 0.0);
  Vector normal = Vector::Zero(3 * n);
  for (int v = 1; v <= n; ++v) {
    const int col = column(v, Coord::R);
    switch (part.tag(v)) {
      case RadiusTag::Increase:
        lp.set_bounds(col, 0.0, inf);
        normal[col] = 1.0;
        break;
      case RadiusTag::Decrease:
        lp.set_bounds(col, -inf, 0.0);
        normal[col] = -1.0;
        break;
      case RadiusTag::Fixed: lp.set_bounds(col, 0.0, 0.0); break;
      case RadiusTag::Free: break;
    }
  }
  lp.add_equality(normal, 1.0);
  return lp;
}

void criterion8(Outcome& o) {
  std::mt19937_64 rng(80);
  const AnalysisTolerances tol;
  int pairs = 0, lps = 0, indeterminate = 0;
  for (int t = 0; t < 220; ++t) {
    const int n = 5 + t % 12;
    const auto inst = packrig::testing::random_instance(n, 1 + t % (n - 4), 8000 + static_cast<std::uint64_t>(t));
    const ConstraintPartition part = packrig::testing::random_partition(n, rng);
    const std::string id = "pair " + std::to_string(t);
    const RigidityVerdict v = is_infinitesimally_rigid(inst.graph, inst.packing, part, tol);
    const auto flex = find_proper_nontrivial_flex(inst.graph, inst.packing, part, tol);
    ++pairs;
    if (v.status == RigidityStatus::Indeterminate) {
      ++indeterminate;
      continue;
    }
    o.require((v.status == RigidityStatus::Rigid) == !flex.has_value(), id + ": primal and dual disagree");
    if (flex) o.require(proper_nontrivial(inst.graph, inst.packing, part, *flex), id + ": flex fails verification");
    if (!detail::any_sign_constrained(part)) continue;
    const Packing unit = detail::normalized(inst.packing);
    const LinearProgram lp = alternative_program(inst.graph, unit, part);
    const LpOutcome out = solve(lp, tol.tol_lp);
    ++lps;
    const bool feasible_point = out.status == LpStatus::Optimal && out.point.has_value();
    const bool farkas = out.status == LpStatus::Infeasible && out.certificate.has_value() && !out.point.has_value();
    o.require(feasible_point != farkas, id + ": not exactly one of point/certificate");
    o.require(farkas_check(out, lp, tol.tol_lp), id + ": farkas_check failed");
    const bool stress = find_rigidifying_stress(inst.graph, inst.packing, part, tol).has_value();
    o.require(stress == (out.status == LpStatus::Infeasible), id + ": stress and alternative program disagree");
  }
  o.require(pairs >= 200, "fewer than 200 pairs");
  o.require(indeterminate * 10 < pairs, "too many indeterminate verdicts");
  if (o.pass) o.detail = std::to_string(pairs) + " pairs, " + std::to_string(lps) + " alternative programs";
}

int run(const std::string& cmd, std::string& out) {
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return -1;
  char buf[4096];
  std::size_t got = 0;
  out.clear();
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion9(Outcome& o, const std::string& cli) {
  const auto dir = std::filesystem::temp_directory_path() / ("packrig_acceptance_" + std::to_string(getpid()));
  std::filesystem::create_directories(dir);
  for (const std::string name : {"flower4", "prestress10", "general10", "prestress15", "sumr27"}) {
    const auto& c = cached_case(name);
    const std::string text = serialize(*c.graph, *c.packing, *c.partition);
    const PackingDocument doc = parse(text);
    o.require(serialize(doc) == text && doc.packing == *c.packing, name + ": round trip not byte stable");
    if (cli.empty()) continue;
    const std::string path = (dir / (name + ".pack")).string();
    std::ofstream(path, std::ios::binary) << text;
    std::string fixture;
    o.require(run(cli + " case " + name, fixture) == 0 && fixture == text, name + ": CLI case output differs");
    std::string a, b;
    const int ca = run(cli + " analyze " + path, a);
    const int cb = run(cli + " analyze " + path, b);
    o.require(ca == 0 && cb == 0 && a == b && !a.empty(), name + ": analyze report not deterministic");
  }
  std::filesystem::remove_all(dir);
  o.require(!cli.empty(), "no CLI path given");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 flower golden matrix", [] { return timed(1.0, criterion1); }},
      {"2 flower stress and swapped flex", [] { return timed(1.0, criterion2); }},
      {"3 kernel-dimension law", [] { return timed(30.0, criterion3); }},
      {"4 ten-disk prestress pipeline", [] { return timed(5.0, criterion4); }},
      {"5 gap function", [] { return timed(5.0, criterion5); }},
      {"6 conjecture root", [] { return timed(0.1, criterion6); }},
      {"7 matroid oracle vs brute force", [] { return timed(60.0, criterion7); }},
      {"8 duality consistency", [] { return timed(120.0, criterion8); }},
      {"9 format round trip", [&] { return timed(120.0, [&](Outcome& o) { criterion9(o, cli); }); }},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const Outcome o = check();
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  (" << o.detail << ")" << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
