#ifndef PACKRIG_SECOND_ORDER_HPP
#define PACKRIG_SECOND_ORDER_HPP

#include <optional>
#include <vector>

#include "packrig/first_order.hpp"

namespace packrig {

/** \brief Partition after moving disks whose radius strictly changes along a flex to V0. */
struct RefinedPartition {
  ConstraintPartition partition;
  std::vector<VertexId> moved;
  /** Some sign-constrained |r'| lies within a factor 10 of tol_strict. */
  bool sensitive = false;
};

/** \brief Moves V+ and V- disks with |r'| > tol_strict (on the unit-normalized flex) to Free. */
inline RefinedPartition refine_partition(const ConstraintPartition& partition, const FlexVector& flex,
                                         double tol_strict) {
  if (flex.vertex_count() != partition.size()) throw InvalidInput("flex and partition sizes differ");
  RefinedPartition out{partition, {}, false};
  const double nrm = flex.norm();
  if (nrm == 0.0) return out;
  for (int v = 1; v <= partition.size(); ++v) {
    const RadiusTag t = partition.tag(v);
    if (t != RadiusTag::Increase && t != RadiusTag::Decrease) continue;
    const double rv = std::abs(flex.r(v)) / nrm;
    if (rv > tol_strict) {
      out.partition.set(v, RadiusTag::Free);
      out.moved.push_back(v);
    }
    if (rv > tol_strict / 10.0 && rv < tol_strict * 10.0) out.sensitive = true;
  }
  return out;
}

/** \brief Per-edge target (r'_i+r'_j)^2 - |p'_i-p'_j|^2 for R(p) p''. */
inline Vector extension_rhs(const PlanarEmbeddedGraph& graph, const Packing& packing, const FlexVector& flex) {
  detail::require_sizes(graph, packing.size(), "packing");
  if (flex.vertex_count() != graph.vertex_count()) throw InvalidInput("flex length differs from vertex count");
  Vector rhs(graph.edge_count());
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edges()[e];
    const double dx = flex.x(ed.u) - flex.x(ed.v);
    const double dy = flex.y(ed.u) - flex.y(ed.v);
    const double sr = flex.r(ed.u) + flex.r(ed.v);
    rhs[e] = sr * sr - dx * dx - dy * dy;
  }
  return rhs;
}

namespace detail {

struct ExtensionSearch {
  Vector candidate;
  double residual = 0.0;
};

/** \brief Minimizes ||R p'' - rhs||_1 over p'' with r'' signs from the refined partition. */
inline ExtensionSearch solve_extension_program(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                               const ConstraintPartition& refined, const Vector& rhs,
                                               double tol_lp) {
  const int m = graph.edge_count();
  const int n = graph.vertex_count();
  const Packing unit = normalized(packing);
  const double s = 1.0 / packing.mean_radius();
  const Matrix r = rigidity_matrix_unchecked(graph, unit).matrix;
  const int vars = 3 * n + 2 * m;
  LinearProgram lp(vars);
  bound_radii(lp, refined, 0);
  for (int k = 3 * n; k < vars; ++k) lp.set_bounds(k, 0.0, inf);
  Vector c = Vector::Zero(vars);
  c.tail(2 * m).setConstant(-1.0);
  lp.set_objective(c);
  for (int e = 0; e < m; ++e) {
    Vector row = Vector::Zero(vars);
    row.head(3 * n) = r.row(e).transpose();
    row[3 * n + e] = -1.0;
    row[3 * n + m + e] = 1.0;
    lp.add_equality(row, rhs[e]);
  }
  const LpOutcome out = solve(lp, tol_lp * 1e-3);
  if (out.status != LpStatus::Optimal) throw NumericalFailure("extension program did not reach an optimum");
  // R(unit) = R(p) / s, so the candidate for the original packing is rescaled by s.
  return {Vector(out.point->head(3 * n) * s), -out.objective_value};
}

struct BlockingSearch {
  Stress stress;
  double value = 0.0;
};

/** \brief Maximizes sum_e w_e (|dp'_e|^2 - (r'_i+r'_j)^2) over blocking-signed stresses with |w| <= 1. */
inline BlockingSearch solve_blocking_program(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                             const ConstraintPartition& refined, const Vector& rhs,
                                             double tol_lp) {
  const int m = graph.edge_count();
  const int n = graph.vertex_count();
  const Packing unit = normalized(packing);
  const Matrix r = rigidity_matrix_unchecked(graph, unit).matrix;
  LinearProgram lp(m);
  for (int e = 0; e < m; ++e) lp.set_bounds(e, -1.0, 1.0);
  lp.set_objective(-rhs);
  for (int v = 1; v <= n; ++v) {
    for (Coord cd : {Coord::X, Coord::Y}) lp.add_equality(r.col(column(v, cd)), 0.0);
    const Vector col = r.col(column(v, Coord::R));
    switch (refined.tag(v)) {
      case RadiusTag::Free: lp.add_equality(col, 0.0); break;
      case RadiusTag::Decrease: lp.add_inequality(col, 0.0); break;
      case RadiusTag::Increase: lp.add_inequality(-col, 0.0); break;
      case RadiusTag::Fixed: break;
    }
  }
  const LpOutcome out = solve(lp, tol_lp * 1e-3);
  if (out.status != LpStatus::Optimal) throw NumericalFailure("blocking program did not reach an optimum");
  return {Stress{*out.point}, out.objective_value};
}

}  // namespace detail

/**
 * \brief A second-order extension p'' of a proper flex, if one exists.
 *
 * Solves R(p) p'' = extension_rhs with r'' >= 0 on refined V+, <= 0 on
 * refined V- and = 0 on V=, as an L1 residual problem accepted at tol_lp.
 */
inline std::optional<Vector> is_extendable(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                           const ConstraintPartition& partition, const FlexVector& flex,
                                           const AnalysisTolerances& tol = {}) {
  detail::require_partition(graph, partition);
  detail::require_valid(graph, packing, tol);
  const RefinedPartition refined = refine_partition(partition, flex, tol.tol_strict);
  const detail::ExtensionSearch found = detail::solve_extension_program(
      graph, packing, refined.partition, extension_rhs(graph, packing, flex), tol.tol_lp);
  if (found.residual > tol.tol_lp) return std::nullopt;
  return found.candidate;
}

/** \brief Value of sum_e w_e (|p'_i-p'_j|^2 - (r'_i+r'_j)^2) for a stress and flex. */
inline double blocking_objective(const PlanarEmbeddedGraph& graph, const Packing& packing, const Stress& stress,
                                 const FlexVector& flex) {
  return -stress.values.dot(extension_rhs(graph, packing, flex));
}

/**
 * \brief w.(rhs) + sum_v w_v r''_v for an equilibrium stress and any candidate p''.
 *
 * Equals zero when p'' is an extension; a blocking stress makes it strictly
 * negative for every sign-admissible p''.
 */
inline double blocking_identity(const PlanarEmbeddedGraph& graph, const Packing& packing, const Stress& stress,
                                const FlexVector& flex, const Vector& second) {
  const Vector sums = radial_sums(graph, packing, stress);
  double total = stress.values.dot(extension_rhs(graph, packing, flex));
  for (int v = 1; v <= graph.vertex_count(); ++v) total += sums[v - 1] * second[column(v, Coord::R)];
  return total;
}

/**
 * \brief Equilibrium stress that blocks the flex from extending to second order.
 *
 * Radial sums must be nonnegative on refined V-, nonpositive on refined V+
 * and zero on refined V0; the stress is returned only when its objective
 * exceeds tol_lp, after direct re-evaluation.
 */
inline std::optional<Stress> find_blocking_stress(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                                  const ConstraintPartition& partition, const FlexVector& flex,
                                                  const AnalysisTolerances& tol = {}) {
  detail::require_partition(graph, partition);
  detail::require_valid(graph, packing, tol);
  const RefinedPartition refined = refine_partition(partition, flex, tol.tol_strict);
  const Vector rhs = extension_rhs(graph, packing, flex);
  const detail::BlockingSearch found =
      detail::solve_blocking_program(graph, packing, refined.partition, rhs, tol.tol_lp);
  if (!(found.value > tol.tol_lp)) return std::nullopt;
  const Packing unit = detail::normalized(packing);
  if (equilibrium_residual(graph, unit, found.stress) > tol.tol_lp)
    throw NumericalFailure("blocking program returned a stress out of equilibrium");
  const Vector sums = radial_sums(graph, unit, found.stress);
  for (int v = 1; v <= graph.vertex_count(); ++v) {
    const double s = sums[v - 1];
    switch (refined.partition.tag(v)) {
      case RadiusTag::Free:
        if (std::abs(s) > tol.tol_lp) throw NumericalFailure("blocking stress has a radial sum on a free disk");
        break;
      case RadiusTag::Decrease:
        if (s < -tol.tol_lp) throw NumericalFailure("blocking stress has the wrong radial sign");
        break;
      case RadiusTag::Increase:
        if (s > tol.tol_lp) throw NumericalFailure("blocking stress has the wrong radial sign");
        break;
      case RadiusTag::Fixed: break;
    }
  }
  if (!(blocking_objective(graph, packing, found.stress, flex) > tol.tol_lp))
    throw NumericalFailure("blocking stress objective does not re-evaluate above tolerance");
  return found.stress;
}

/** \brief Second-order outcome for one proper flex direction. */
struct SecondOrderVerdict {
  FlexVector flex;
  RefinedPartition refined;
  bool extendable = false;
  std::optional<Vector> extension;
  std::optional<Stress> blocking_stress;
  /** Optimal L1 residual of the extension program (equals blocking_value by duality). */
  double extension_residual = 0.0;
  double blocking_value = 0.0;
  bool blocked() const { return blocking_stress.has_value(); }
};

enum class SecondOrderStatus { NoNontrivialFlex, PrestressStable, NotPrestressStable, Inconclusive };

struct SecondOrderReport {
  SecondOrderStatus status = SecondOrderStatus::Inconclusive;
  /** Dimension of the proper flex cone's span modulo rigid motions. */
  int flex_dim = 0;
  /** Sign-constrained disks whose radius cannot change under any proper flex. */
  std::vector<VertexId> implicit_fixed;
  std::vector<SecondOrderVerdict> verdicts;
  bool prestress_stable = false;
  bool sensitive = false;
};

/** \brief Refines, tests extendability and searches for a blocking stress along one flex. */
inline SecondOrderVerdict analyze_direction(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                            const ConstraintPartition& partition, const FlexVector& flex,
                                            const AnalysisTolerances& tol = {}) {
  SecondOrderVerdict verdict;
  verdict.flex = flex;
  verdict.refined = refine_partition(partition, flex, tol.tol_strict);
  const Vector rhs = extension_rhs(graph, packing, flex);
  const detail::ExtensionSearch ext =
      detail::solve_extension_program(graph, packing, verdict.refined.partition, rhs, tol.tol_lp);
  verdict.extension_residual = ext.residual;
  if (ext.residual <= tol.tol_lp) verdict.extension = ext.candidate;
  verdict.blocking_stress = find_blocking_stress(graph, packing, partition, flex, tol);
  verdict.blocking_value = verdict.blocking_stress ? blocking_objective(graph, packing, *verdict.blocking_stress, flex)
                                                   : 0.0;
  verdict.extendable = verdict.extension.has_value();
  if (verdict.extendable == verdict.blocked())
    throw NumericalFailure("extension and blocking programs disagree near the tolerance");
  return verdict;
}

namespace detail {

inline bool proper_direction(const ConstraintPartition& partition, const Vector& f, double tol_strict) {
  for (int v = 1; v <= partition.size(); ++v) {
    const double r = f[column(v, Coord::R)];
    if (partition.tag(v) == RadiusTag::Increase && r < -tol_strict) return false;
    if (partition.tag(v) == RadiusTag::Decrease && r > tol_strict) return false;
  }
  return true;
}

}  // namespace detail

/**
 * \brief Enumerates proper flex directions and decides prestress stability when they form a line.
 *
 * Sign-constrained radii that no proper flex can move are found by one L1
 * program per disk; the span of the proper cone is then the kernel of R with
 * those radii and V= fixed. A zero-dimensional span means no nontrivial flex;
 * a line is analyzed in both directions that are proper; anything larger is
 * reported as inconclusive with verdicts for the proper basis directions.
 */
inline SecondOrderReport second_order_analysis(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                               const ConstraintPartition& partition,
                                               const AnalysisTolerances& tol = {}) {
  detail::require_partition(graph, partition);
  detail::require_valid(graph, packing, tol);
  tol.validate();
  const int n = graph.vertex_count();
  const Packing unit = detail::normalized(packing);
  SecondOrderReport report;

  std::vector<VertexId> constrained;
  for (int v = 1; v <= n; ++v)
    if (partition.tag(v) == RadiusTag::Increase || partition.tag(v) == RadiusTag::Decrease) constrained.push_back(v);
  bool any_moves = false;
  if (!constrained.empty()) {
    const detail::FlexSearch all =
        detail::solve_flex_program(graph, unit, partition, detail::sign_weights(partition), {}, tol.tol_lp);
    any_moves = all.flex && all.residual <= tol.tol_lp;
  }
  for (VertexId v : constrained) {
    bool moves = false;
    if (any_moves) {
      Vector w = Vector::Zero(n);
      w[v - 1] = partition.tag(v) == RadiusTag::Increase ? 1.0 : -1.0;
      const detail::FlexSearch one = detail::solve_flex_program(graph, unit, partition, w, {}, tol.tol_lp);
      moves = one.flex && one.residual <= tol.tol_lp;
    }
    if (!moves) report.implicit_fixed.push_back(v);
  }

  std::vector<VertexId> fixed = partition.members(RadiusTag::Fixed);
  fixed.insert(fixed.end(), report.implicit_fixed.begin(), report.implicit_fixed.end());
  const Matrix span = detail::nontrivial_kernel(
      vstack(detail::rigidity_matrix_unchecked(graph, unit).matrix, build_fixing_rows(fixed, n)), unit, tol.tol_rank);
  report.flex_dim = static_cast<int>(span.cols());
  if (report.flex_dim == 0) {
    report.status = SecondOrderStatus::NoNontrivialFlex;
    report.prestress_stable = true;
    return report;
  }

  std::vector<Vector> directions;
  for (Eigen::Index k = 0; k < span.cols(); ++k) {
    const Vector f = detail::canonical_sign(span.col(k), tol.tol_strict);
    const bool plus = detail::proper_direction(partition, f, tol.tol_strict);
    const bool minus = detail::proper_direction(partition, -f, tol.tol_strict);
    if (plus) directions.push_back(f);
    if (minus && (report.flex_dim == 1 || !plus)) directions.push_back(-f);
  }
  for (const Vector& f : directions) {
    SecondOrderVerdict v = analyze_direction(graph, packing, partition, FlexVector(f), tol);
    report.sensitive = report.sensitive || v.refined.sensitive;
    report.verdicts.push_back(std::move(v));
  }
  if (report.flex_dim > 1 || directions.empty()) {
    report.status = SecondOrderStatus::Inconclusive;
    return report;
  }
  bool all_blocked = true;
  for (const auto& v : report.verdicts) all_blocked = all_blocked && v.blocked();
  report.prestress_stable = all_blocked;
  report.status = all_blocked ? SecondOrderStatus::PrestressStable : SecondOrderStatus::NotPrestressStable;
  return report;
}

}  // namespace packrig

#endif  // PACKRIG_SECOND_ORDER_HPP
