#ifndef PACKRIG_FIRST_ORDER_HPP
#define PACKRIG_FIRST_ORDER_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "packrig/lp.hpp"
#include "packrig/rigidity.hpp"

namespace packrig {

/** \brief Real value per edge, aligned with graph.edges(). */
struct Stress {
  Vector values;
};

/** \brief Net force sum_j w_ij (p_i - p_j) at every vertex, as (fx1, fy1, fx2, fy2, ...). */
inline Vector net_forces(const PlanarEmbeddedGraph& graph, const Packing& packing, const Stress& stress) {
  detail::require_sizes(graph, packing.size(), "packing");
  Vector f = Vector::Zero(2 * graph.vertex_count());
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edges()[e];
    const Disk& a = packing.disk(ed.u);
    const Disk& b = packing.disk(ed.v);
    const double w = stress.values[e];
    f[2 * (ed.u - 1)] += w * (a.x - b.x);
    f[2 * (ed.u - 1) + 1] += w * (a.y - b.y);
    f[2 * (ed.v - 1)] += w * (b.x - a.x);
    f[2 * (ed.v - 1) + 1] += w * (b.y - a.y);
  }
  return f;
}

/** \brief Radial force sums w_i = sum_j w_ij (r_i + r_j), indexed by vertex id - 1. */
inline Vector radial_sums(const PlanarEmbeddedGraph& graph, const Packing& packing, const Stress& stress) {
  detail::require_sizes(graph, packing.size(), "packing");
  Vector s = Vector::Zero(graph.vertex_count());
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edges()[e];
    const double w = stress.values[e] * (packing.disk(ed.u).r + packing.disk(ed.v).r);
    s[ed.u - 1] += w;
    s[ed.v - 1] += w;
  }
  return s;
}

/** \brief Largest net force magnitude over all vertices. */
inline double equilibrium_residual(const PlanarEmbeddedGraph& graph, const Packing& packing, const Stress& stress) {
  const Vector f = net_forces(graph, packing, stress);
  double worst = 0.0;
  for (int v = 0; v < graph.vertex_count(); ++v) worst = std::max(worst, std::hypot(f[2 * v], f[2 * v + 1]));
  return worst;
}

/**
 * \brief Smallest signed margin of the radial sums against the required sign pattern.
 *
 * Positive sums are required on V-, negative on V+. Returns +inf when both
 * sets are empty; V0 and V= do not contribute.
 */
inline double radial_margin(const PlanarEmbeddedGraph& graph, const Packing& packing,
                            const ConstraintPartition& partition, const Stress& stress) {
  const Vector s = radial_sums(graph, packing, stress);
  double margin = std::numeric_limits<double>::infinity();
  for (int v = 1; v <= graph.vertex_count(); ++v) {
    if (partition.tag(v) == RadiusTag::Decrease) margin = std::min(margin, s[v - 1]);
    if (partition.tag(v) == RadiusTag::Increase) margin = std::min(margin, -s[v - 1]);
  }
  return margin;
}

enum class RigidityStatus { Rigid, NotRigid, Indeterminate };

/** \brief Outcome of the stress-existence test together with its witnesses. */
struct RigidityVerdict {
  RigidityStatus status = RigidityStatus::Indeterminate;
  bool rigid = false;
  bool fixed_radius_ok = false;
  std::optional<Stress> stress;
  std::optional<FlexVector> counterexample_flex;
  FlexSpaceReport diagnostics;
  /** Optimal radial-sum margin t of the stress program (relative to mean radius). */
  double stress_margin = 0.0;
  std::string note;
};

namespace detail {

/** \brief Packing translated to its centroid and scaled to mean radius 1. */
inline Packing normalized(const Packing& packing) {
  double cx = 0.0;
  double cy = 0.0;
  for (const Disk& d : packing.disks()) {
    cx += d.x;
    cy += d.y;
  }
  cx /= packing.size();
  cy /= packing.size();
  const double s = 1.0 / packing.mean_radius();
  std::vector<Disk> out = packing.disks();
  for (Disk& d : out) d = {(d.x - cx) * s, (d.y - cy) * s, d.r * s};
  return Packing(std::move(out));
}

inline bool any_sign_constrained(const ConstraintPartition& partition) {
  for (RadiusTag t : partition.tags())
    if (t == RadiusTag::Increase || t == RadiusTag::Decrease) return true;
  return false;
}

/** \brief Sets r' bounds of variable block [offset, offset+3n) according to tags. */
inline void bound_radii(LinearProgram& lp, const ConstraintPartition& partition, int offset) {
  for (int v = 1; v <= partition.size(); ++v) {
    const int j = offset + column(v, Coord::R);
    switch (partition.tag(v)) {
      case RadiusTag::Increase: lp.set_bounds(j, 0.0, inf); break;
      case RadiusTag::Decrease: lp.set_bounds(j, -inf, 0.0); break;
      case RadiusTag::Fixed: lp.set_bounds(j, 0.0, 0.0); break;
      case RadiusTag::Free: break;
    }
  }
}

/** \brief Flips v so its first clearly nonzero radius entry (else first entry) is positive. */
inline Vector canonical_sign(const Vector& v, double tol) {
  const int n = static_cast<int>(v.size() / 3);
  for (int k = 1; k <= n; ++k) {
    const double r = v[column(k, Coord::R)];
    if (std::abs(r) > tol) return r < 0 ? Vector(-v) : v;
  }
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (std::abs(v[k]) > tol) return v[k] < 0 ? Vector(-v) : v;
  return v;
}

/** \brief Orthonormal basis of ker(m) with the trivial motions projected out. */
inline Matrix nontrivial_kernel(const Matrix& m, const Packing& packing, double tol_rank) {
  const Matrix k = kernel_basis(m, tol_rank);
  if (k.cols() == 0) return k;
  const Matrix t = trivial_space(packing);
  const Matrix proj = k - t * (t.transpose() * k);
  Eigen::JacobiSVD<Matrix> svd(proj, Eigen::ComputeThinU);
  int keep = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 0.5) ++keep;
  return svd.matrixU().leftCols(keep);
}

struct StressSearch {
  Stress stress;
  double margin = 0.0;
};

/** \brief Maximizes the radial margin t over stresses with |w| <= 1 on a normalized packing. */
inline StressSearch solve_stress_program(const PlanarEmbeddedGraph& graph, const Packing& unit,
                                         const ConstraintPartition& partition, double tol_lp) {
  const int m = graph.edge_count();
  const int n = graph.vertex_count();
  if (!any_sign_constrained(partition)) return {Stress{Vector::Zero(m)}, std::numeric_limits<double>::infinity()};
  const Matrix r = rigidity_matrix_unchecked(graph, unit).matrix;
  LinearProgram lp(m + 1);
  for (int e = 0; e < m; ++e) lp.set_bounds(e, -1.0, 1.0);
  Vector c = Vector::Zero(m + 1);
  c[m] = 1.0;
  lp.set_objective(c);
  for (int v = 1; v <= n; ++v) {
    for (Coord cd : {Coord::X, Coord::Y}) {
      Vector row = Vector::Zero(m + 1);
      row.head(m) = r.col(column(v, cd));
      lp.add_equality(row, 0.0);
    }
    Vector row = Vector::Zero(m + 1);
    row.head(m) = r.col(column(v, Coord::R));
    switch (partition.tag(v)) {
      case RadiusTag::Free: lp.add_equality(row, 0.0); break;
      case RadiusTag::Decrease:
        row[m] = 1.0;
        lp.add_inequality(row, 0.0);
        break;
      case RadiusTag::Increase:
        row.head(m) *= -1.0;
        row[m] = 1.0;
        lp.add_inequality(row, 0.0);
        break;
      case RadiusTag::Fixed: break;
    }
  }
  const LpOutcome out = solve(lp, tol_lp * 1e-3);
  if (out.status != LpStatus::Optimal) throw NumericalFailure("stress program did not reach an optimum");
  return {Stress{out.point->head(m)}, out.objective_value};
}

struct FlexSearch {
  std::optional<Vector> flex;
  double residual = std::numeric_limits<double>::infinity();
};

/**
 * \brief Minimizes ||R p'||_1 over proper p' normalized by the given radius weights.
 *
 * weights[v-1] multiplies r'_v in the normalization sum; the program is the
 * exact dual of the stress program when the weights are +1 on V+ and -1 on V-.
 */
inline FlexSearch solve_flex_program(const PlanarEmbeddedGraph& graph, const Packing& unit,
                                     const ConstraintPartition& partition, const Vector& weights,
                                     const std::vector<VertexId>& extra_fixed, double tol_lp) {
  const int m = graph.edge_count();
  const int n = graph.vertex_count();
  const Matrix r = rigidity_matrix_unchecked(graph, unit).matrix;
  const int vars = 3 * n + 2 * m;
  LinearProgram lp(vars);
  bound_radii(lp, partition, 0);
  for (VertexId v : extra_fixed) lp.set_bounds(column(v, Coord::R), 0.0, 0.0);
  for (int k = 3 * n; k < vars; ++k) lp.set_bounds(k, 0.0, inf);
  Vector c = Vector::Zero(vars);
  c.tail(2 * m).setConstant(-1.0);
  lp.set_objective(c);
  for (int e = 0; e < m; ++e) {
    Vector row = Vector::Zero(vars);
    row.head(3 * n) = r.row(e).transpose();
    row[3 * n + e] = -1.0;
    row[3 * n + m + e] = 1.0;
    lp.add_equality(row, 0.0);
  }
  Vector norm_row = Vector::Zero(vars);
  for (int v = 1; v <= n; ++v) norm_row[column(v, Coord::R)] = weights[v - 1];
  lp.add_equality(norm_row, 1.0);
  const LpOutcome out = solve(lp, tol_lp * 1e-3);
  if (out.status == LpStatus::Infeasible) return {};
  if (out.status != LpStatus::Optimal) throw NumericalFailure("flex program did not reach an optimum");
  return {out.point->head(3 * n), -out.objective_value};
}

inline Vector sign_weights(const ConstraintPartition& partition) {
  Vector w = Vector::Zero(partition.size());
  for (int v = 1; v <= partition.size(); ++v) {
    if (partition.tag(v) == RadiusTag::Increase) w[v - 1] = 1.0;
    if (partition.tag(v) == RadiusTag::Decrease) w[v - 1] = -1.0;
  }
  return w;
}

/** \brief Unit-norm, trivial-free version of a flex; the sign is kept so the flex stays proper. */
inline FlexVector finish_flex(const Packing& packing, const Vector& raw) {
  Vector v = remove_trivial(packing, raw);
  const double nv = v.norm();
  if (!(nv > 0.0)) throw NumericalFailure("flex vanished after removing trivial motions");
  return FlexVector(v / nv);
}

/** \brief Checks that p' is proper, nontrivial and infinitesimally tangent. */
inline bool verify_proper_flex(const PlanarEmbeddedGraph& graph, const Packing& unit,
                               const ConstraintPartition& partition, const FlexVector& flex,
                               const AnalysisTolerances& tol) {
  const Vector& p = flex.values();
  if (std::abs(p.norm() - 1.0) > 1e-9) return false;
  if (remove_trivial(unit, p).norm() < 0.5) return false;
  const Matrix r = rigidity_matrix_unchecked(graph, unit).matrix;
  if (graph.edge_count() > 0 && (r * p).cwiseAbs().maxCoeff() > 10.0 * tol.tol_lp) return false;
  for (int v = 1; v <= graph.vertex_count(); ++v) {
    const double rv = flex.r(v);
    switch (partition.tag(v)) {
      case RadiusTag::Increase:
        if (rv < -tol.tol_strict) return false;
        break;
      case RadiusTag::Decrease:
        if (rv > tol.tol_strict) return false;
        break;
      case RadiusTag::Fixed:
        if (std::abs(rv) > tol.tol_strict) return false;
        break;
      case RadiusTag::Free: break;
    }
  }
  return true;
}

inline void require_partition(const PlanarEmbeddedGraph& graph, const ConstraintPartition& partition) {
  require_sizes(graph, partition.size(), "partition");
}

}  // namespace detail

/** \brief True iff fixing every constrained radius leaves only the rigid motions. */
inline bool fixed_radius_condition(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                   const ConstraintPartition& partition, const AnalysisTolerances& tol = {}) {
  const ExtendedRigidityMatrix re = build_extended_matrix(graph, packing, partition, tol);
  const Packing unit = detail::normalized(packing);
  const Matrix m = detail::rigidity_matrix_unchecked(graph, unit).matrix;
  const Matrix full = vstack(m, re.matrix.bottomRows(re.matrix.rows() - re.edge_rows));
  return 3 * graph.vertex_count() - numerical_rank(full, tol.tol_rank) == trivial_dimension(graph.vertex_count());
}

/**
 * \brief Equilibrium stress whose radial sums are positive on V-, negative on V+ and zero on V0.
 *
 * Found by maximizing the common margin t under |w| <= 1; returned only when
 * t > tol_lp, after re-checking equilibrium and signs by direct evaluation.
 * With V+ and V- both empty the zero stress satisfies the conditions.
 */
inline std::optional<Stress> find_rigidifying_stress(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                                     const ConstraintPartition& partition,
                                                     const AnalysisTolerances& tol = {}) {
  detail::require_partition(graph, partition);
  detail::require_valid(graph, packing, tol);
  const Packing unit = detail::normalized(packing);
  const detail::StressSearch found = detail::solve_stress_program(graph, unit, partition, tol.tol_lp);
  if (!(found.margin > tol.tol_lp)) return std::nullopt;
  if (equilibrium_residual(graph, unit, found.stress) > tol.tol_lp)
    throw NumericalFailure("stress program returned a stress out of equilibrium");
  const Vector sums = radial_sums(graph, unit, found.stress);
  for (int v = 1; v <= graph.vertex_count(); ++v)
    if (partition.tag(v) == RadiusTag::Free && std::abs(sums[v - 1]) > tol.tol_lp)
      throw NumericalFailure("stress program returned a nonzero radial sum on a free disk");
  if (!(radial_margin(graph, unit, partition, found.stress) > tol.tol_lp * 0.5))
    throw NumericalFailure("stress program returned a stress with the wrong signs");
  return found.stress;
}

/**
 * \brief A unit-norm proper flex that is not a rigid motion, if one exists.
 *
 * First minimizes ||R p'||_1 over proper flexes with sum_{V+} r' - sum_{V-} r' = 1,
 * which finds flexes moving a sign-constrained radius; then looks for kernel
 * vectors of R_e beyond the rigid motions, which keep those radii fixed.
 */
inline std::optional<FlexVector> find_proper_nontrivial_flex(const PlanarEmbeddedGraph& graph,
                                                             const Packing& packing,
                                                             const ConstraintPartition& partition,
                                                             const AnalysisTolerances& tol = {}) {
  detail::require_partition(graph, partition);
  const ExtendedRigidityMatrix re = build_extended_matrix(graph, packing, partition, tol);
  const Packing unit = detail::normalized(packing);
  if (detail::any_sign_constrained(partition)) {
    const detail::FlexSearch found =
        detail::solve_flex_program(graph, unit, partition, detail::sign_weights(partition), {}, tol.tol_lp);
    if (found.flex && found.residual <= tol.tol_lp / 10.0) {
      const FlexVector f = detail::finish_flex(unit, *found.flex);
      if (!detail::verify_proper_flex(graph, unit, partition, f, tol))
        throw NumericalFailure("flex program returned a flex that fails verification");
      return f;
    }
  }
  const Matrix m = vstack(detail::rigidity_matrix_unchecked(graph, unit).matrix,
                          re.matrix.bottomRows(re.matrix.rows() - re.edge_rows));
  const Matrix k = detail::nontrivial_kernel(m, unit, tol.tol_rank);
  if (k.cols() == 0) return std::nullopt;
  return FlexVector(detail::canonical_sign(k.col(0), tol.tol_strict));
}

/**
 * \brief Infinitesimal rigidity: the fixed-radius condition plus a rigidifying stress.
 *
 * Stress margins in [tol_lp/10, tol_lp] give an Indeterminate status. A rigid
 * verdict also implies the packing is rigid.
 */
inline RigidityVerdict is_infinitesimally_rigid(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                                const ConstraintPartition& partition,
                                                const AnalysisTolerances& tol = {}) {
  detail::require_partition(graph, partition);
  tol.validate();
  RigidityVerdict verdict;
  verdict.diagnostics = flex_space_report(graph, packing, partition, tol);
  verdict.fixed_radius_ok = fixed_radius_condition(graph, packing, partition, tol);
  const Packing unit = detail::normalized(packing);
  const detail::StressSearch found = detail::solve_stress_program(graph, unit, partition, tol.tol_lp);
  verdict.stress_margin = found.margin;
  verdict.note = "infinitesimal rigidity implies rigidity; a rigid verdict certifies a rigid packing";
  if (found.margin > tol.tol_lp) verdict.stress = find_rigidifying_stress(graph, packing, partition, tol);
  if (verdict.fixed_radius_ok && verdict.stress) {
    verdict.status = RigidityStatus::Rigid;
    verdict.rigid = true;
    return verdict;
  }
  if (verdict.fixed_radius_ok && found.margin >= tol.tol_lp / 10.0) {
    verdict.status = RigidityStatus::Indeterminate;
    return verdict;
  }
  verdict.counterexample_flex = find_proper_nontrivial_flex(graph, packing, partition, tol);
  if (!verdict.counterexample_flex)
    throw NumericalFailure("stress test failed but no proper nontrivial flex was found");
  verdict.status = RigidityStatus::NotRigid;
  return verdict;
}

/** \brief Per-edge and per-radius outcome of the one-sided tangency corollary. */
struct CorollaryReport {
  struct EdgeEntry {
    Edge edge;
    double omega = 0.0;
    /** First-order change of |p_i-p_j|^2 - (r_i+r_j)^2, halved: (R p')_e. */
    double gap_rate = 0.0;
    bool admissible = true;
    bool preserved = true;
  };
  struct RadiusEntry {
    VertexId vertex = 0;
    double rate = 0.0;
    bool admissible = true;
    bool preserved = true;
  };
  std::vector<EdgeEntry> edges;
  std::vector<RadiusEntry> radii;
  /** The flex meets the one-sided conditions (separate where w<0, overlap where w>0, proper radii). */
  bool admissible = true;
  /** Every stressed edge keeps tangency and every stressed constrained radius is unchanged. */
  bool conclusion_holds = true;
  std::vector<std::string> violations;
};

/**
 * \brief Checks a relaxed flex against a stress with the rigidifying sign pattern.
 *
 * A relaxed flex may separate edges with w < 0, overlap edges with w > 0 and
 * move radii in their allowed direction. Any such flex must keep every
 * stressed edge tangent and every stressed constrained radius fixed; each
 * failure of either the hypotheses or the conclusion is listed.
 */
inline CorollaryReport corollary_tangency_report(const Stress& stress, const FlexVector& flex,
                                                 const PlanarEmbeddedGraph& graph, const Packing& packing,
                                                 const ConstraintPartition& partition,
                                                 const AnalysisTolerances& tol = {}) {
  detail::require_partition(graph, partition);
  detail::require_valid(graph, packing, tol);
  if (stress.values.size() != graph.edge_count()) throw InvalidInput("stress length differs from edge count");
  if (flex.vertex_count() != graph.vertex_count()) throw InvalidInput("flex length differs from vertex count");
  const Packing unit = detail::normalized(packing);
  const double wscale = std::max(1.0, stress.values.cwiseAbs().maxCoeff());
  if (equilibrium_residual(graph, unit, stress) > tol.tol_lp * wscale)
    throw InvalidInput("stress is not in equilibrium");
  const Vector sums = radial_sums(graph, unit, stress);
  for (int v = 1; v <= graph.vertex_count(); ++v) {
    const double s = sums[v - 1];
    const RadiusTag t = partition.tag(v);
    if ((t == RadiusTag::Decrease && s < -tol.tol_lp * wscale) || (t == RadiusTag::Increase && s > tol.tol_lp * wscale) ||
        (t == RadiusTag::Free && std::abs(s) > tol.tol_lp * wscale))
      throw InvalidInput("stress violates the radial sign conditions at disk " + std::to_string(v));
  }
  CorollaryReport rep;
  const Matrix r = detail::rigidity_matrix_unchecked(graph, unit).matrix;
  const Vector rate = graph.edge_count() > 0 ? Vector(r * flex.values()) : Vector();
  const double ftol = tol.tol_lp * std::max(1.0, flex.values().cwiseAbs().maxCoeff());
  const double wtol = tol.tol_lp * wscale;
  for (int e = 0; e < graph.edge_count(); ++e) {
    CorollaryReport::EdgeEntry entry;
    entry.edge = graph.edges()[e];
    entry.omega = stress.values[e];
    entry.gap_rate = rate[e];
    if (entry.omega < -wtol) entry.admissible = entry.gap_rate >= -ftol;
    if (entry.omega > wtol) entry.admissible = entry.gap_rate <= ftol;
    if (std::abs(entry.omega) > wtol) entry.preserved = std::abs(entry.gap_rate) <= ftol;
    const std::string name = "edge (" + std::to_string(entry.edge.u) + "," + std::to_string(entry.edge.v) + ")";
    if (!entry.admissible) rep.violations.push_back(name + " moves against the sign of its stress");
    if (!entry.preserved) rep.violations.push_back(name + " is stressed but changes tangency to first order");
    rep.admissible = rep.admissible && entry.admissible;
    rep.conclusion_holds = rep.conclusion_holds && entry.preserved;
    rep.edges.push_back(entry);
  }
  for (int v = 1; v <= graph.vertex_count(); ++v) {
    const RadiusTag t = partition.tag(v);
    if (t == RadiusTag::Free) continue;
    CorollaryReport::RadiusEntry entry;
    entry.vertex = v;
    entry.rate = flex.r(v);
    if (t == RadiusTag::Increase) entry.admissible = entry.rate >= -ftol;
    if (t == RadiusTag::Decrease) entry.admissible = entry.rate <= ftol;
    if (t == RadiusTag::Fixed) entry.admissible = std::abs(entry.rate) <= ftol;
    if (t != RadiusTag::Fixed && std::abs(sums[v - 1]) > wtol) entry.preserved = std::abs(entry.rate) <= ftol;
    const std::string name = "radius of disk " + std::to_string(v);
    if (!entry.admissible) rep.violations.push_back(name + " moves in a forbidden direction");
    if (!entry.preserved) rep.violations.push_back(name + " is stressed but changes to first order");
    rep.admissible = rep.admissible && entry.admissible;
    rep.conclusion_holds = rep.conclusion_holds && entry.preserved;
    rep.radii.push_back(entry);
  }
  return rep;
}

}  // namespace packrig

#endif  // PACKRIG_FIRST_ORDER_HPP
