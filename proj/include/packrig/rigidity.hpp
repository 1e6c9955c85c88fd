#ifndef PACKRIG_RIGIDITY_HPP
#define PACKRIG_RIGIDITY_HPP

#include <string>
#include <vector>

#include "packrig/core.hpp"
#include "packrig/linalg.hpp"

namespace packrig {

enum class Coord { X = 0, Y = 1, R = 2 };

/** \brief Column of coordinate c of vertex v in the (x1,y1,r1,...,xn,yn,rn) ordering. */
inline int column(VertexId v, Coord c) { return 3 * (v - 1) + static_cast<int>(c); }

/** \brief Candidate infinitesimal motion p' in R^{3n}. */
class FlexVector {
 public:
  FlexVector() = default;
  explicit FlexVector(Vector values) : values_(std::move(values)) {
    if (values_.size() % 3 != 0) throw InvalidInput("flex length is not a multiple of 3");
    if (!values_.allFinite()) throw InvalidInput("flex has non-finite entries");
  }
  static FlexVector zero(int n) { return FlexVector(Vector::Zero(3 * n)); }

  int vertex_count() const { return static_cast<int>(values_.size() / 3); }
  double x(VertexId v) const { return values_[column(v, Coord::X)]; }
  double y(VertexId v) const { return values_[column(v, Coord::Y)]; }
  double r(VertexId v) const { return values_[column(v, Coord::R)]; }
  const Vector& values() const { return values_; }
  double norm() const { return values_.norm(); }

 private:
  Vector values_;
};

/** \brief R(p): one row per edge in graph.edges() order, 3n columns. */
struct RigidityMatrix {
  Matrix matrix;
  std::vector<Edge> row_edges;
};

/** \brief [R; E_{V-}; E_{V+}; E_{V=}] with the vertex fixed by each unit row. */
struct ExtendedRigidityMatrix {
  Matrix matrix;
  int edge_rows = 0;
  std::vector<VertexId> fixed_vertices;
};

namespace detail {

inline void require_valid(const PlanarEmbeddedGraph& graph, const Packing& packing,
                          const AnalysisTolerances& tol) {
  const ValidationReport report = validate_packing(graph, packing, tol);
  if (!report.ok()) throw InvalidInput("invalid packing: " + report.violations.front().message);
}

/** \brief Builds R(p) without validating the packing. */
inline RigidityMatrix rigidity_matrix_unchecked(const PlanarEmbeddedGraph& graph, const Packing& packing) {
  detail::require_sizes(graph, packing.size(), "packing");
  RigidityMatrix out;
  out.row_edges = graph.edges();
  out.matrix = Matrix::Zero(graph.edge_count(), 3 * graph.vertex_count());
  for (int e = 0; e < graph.edge_count(); ++e) {
    const VertexId i = out.row_edges[e].u;
    const VertexId j = out.row_edges[e].v;
    const Disk& a = packing.disk(i);
    const Disk& b = packing.disk(j);
    out.matrix(e, column(i, Coord::X)) = a.x - b.x;
    out.matrix(e, column(i, Coord::Y)) = a.y - b.y;
    out.matrix(e, column(i, Coord::R)) = -(a.r + b.r);
    out.matrix(e, column(j, Coord::X)) = b.x - a.x;
    out.matrix(e, column(j, Coord::Y)) = b.y - a.y;
    out.matrix(e, column(j, Coord::R)) = -(a.r + b.r);
  }
  return out;
}

inline std::vector<VertexId> constrained_vertices(const ConstraintPartition& partition) {
  std::vector<VertexId> out = partition.members(RadiusTag::Decrease);
  for (VertexId v : partition.members(RadiusTag::Increase)) out.push_back(v);
  for (VertexId v : partition.members(RadiusTag::Fixed)) out.push_back(v);
  return out;
}

inline std::vector<VertexId> all_vertices(int n) {
  std::vector<VertexId> out;
  for (int v = 1; v <= n; ++v) out.push_back(v);
  return out;
}

}  // namespace detail

/** \brief Rigidity matrix of a validated packing. */
inline RigidityMatrix build_rigidity_matrix(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                            const AnalysisTolerances& tol = {}) {
  detail::require_valid(graph, packing, tol);
  return detail::rigidity_matrix_unchecked(graph, packing);
}

/** \brief E_S: one unit row per vertex of S, with the 1 in that vertex's radius column. */
inline Matrix build_fixing_rows(const std::vector<VertexId>& set, int n) {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(set.size()), 3 * n);
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (set[k] < 1 || set[k] > n) throw InvalidInput("fixing row for unknown vertex " + std::to_string(set[k]));
    out(static_cast<Eigen::Index>(k), column(set[k], Coord::R)) = 1.0;
  }
  return out;
}

/** \brief R_e(p) stacked in the order R, E_{V-}, E_{V+}, E_{V=}. */
inline ExtendedRigidityMatrix build_extended_matrix(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                                    const ConstraintPartition& partition,
                                                    const AnalysisTolerances& tol = {}) {
  detail::require_sizes(graph, partition.size(), "partition");
  const RigidityMatrix r = build_rigidity_matrix(graph, packing, tol);
  ExtendedRigidityMatrix out;
  out.edge_rows = graph.edge_count();
  out.fixed_vertices = detail::constrained_vertices(partition);
  out.matrix = vstack(r.matrix, build_fixing_rows(out.fixed_vertices, graph.vertex_count()));
  return out;
}

/** \brief Dimension of the space of rigid motions: 3, or 2 for a single disk. */
inline int trivial_dimension(int n) { return n == 1 ? 2 : 3; }

/** \brief x-translation, y-translation and rotation (-y_i, x_i); rotation omitted when n = 1. */
inline std::vector<FlexVector> trivial_flex_basis(const Packing& packing) {
  const int n = packing.size();
  Vector tx = Vector::Zero(3 * n);
  Vector ty = Vector::Zero(3 * n);
  Vector rot = Vector::Zero(3 * n);
  for (int v = 1; v <= n; ++v) {
    tx[column(v, Coord::X)] = 1.0;
    ty[column(v, Coord::Y)] = 1.0;
    rot[column(v, Coord::X)] = -packing.disk(v).y;
    rot[column(v, Coord::Y)] = packing.disk(v).x;
  }
  std::vector<FlexVector> out{FlexVector(tx), FlexVector(ty)};
  if (n > 1) out.emplace_back(rot);
  return out;
}

/** \brief Orthonormal basis (as columns) of the trivial motion space. */
inline Matrix trivial_space(const Packing& packing) {
  const auto basis = trivial_flex_basis(packing);
  Matrix m(3 * packing.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = basis[k].values();
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

/** \brief Component of v orthogonal to the trivial motions. */
inline Vector remove_trivial(const Packing& packing, const Vector& v) {
  const Matrix q = trivial_space(packing);
  return v - q * (q.transpose() * v);
}

/** \brief Kernel dimensions of R, R_e and R' = [R; E_V] and the flex types they imply. */
struct FlexSpaceReport {
  int dim_kernel_R = 0;
  int dim_kernel_Re = 0;
  int dim_kernel_Rprime = 0;
  /** Type 2: nontrivial flexes with every radius fixed (bar framework flexes). */
  int nontrivial_fixed_radii_flexes = 0;
  /** Type 3: flexes that change only unconstrained (V0) radii, beyond type 2. */
  int free_disk_flexes = 0;
  int cokernel_Re = 0;
  int trivial_dimension = 3;
  /** Some rank decision sat within a factor 10 of the cutoff. */
  bool near_degenerate = false;
  /** The trivial motions do not span a full-rank subspace of ker R_e. */
  bool trivial_deficient = false;
};

inline FlexSpaceReport flex_space_report(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                         const ConstraintPartition& partition, const AnalysisTolerances& tol = {}) {
  const int n = graph.vertex_count();
  const ExtendedRigidityMatrix re = build_extended_matrix(graph, packing, partition, tol);
  const Matrix r = re.matrix.topRows(re.edge_rows);
  const Matrix rprime = vstack(r, build_fixing_rows(detail::all_vertices(n), n));
  const RankInfo ir = rank_info(r, tol.tol_rank);
  const RankInfo ie = rank_info(re.matrix, tol.tol_rank);
  const RankInfo ip = rank_info(rprime, tol.tol_rank);
  FlexSpaceReport rep;
  rep.trivial_dimension = trivial_dimension(n);
  rep.dim_kernel_R = 3 * n - ir.rank;
  rep.dim_kernel_Re = 3 * n - ie.rank;
  rep.dim_kernel_Rprime = 3 * n - ip.rank;
  rep.nontrivial_fixed_radii_flexes = rep.dim_kernel_Rprime - rep.trivial_dimension;
  rep.free_disk_flexes = rep.dim_kernel_Re - rep.dim_kernel_Rprime;
  rep.cokernel_Re = static_cast<int>(re.matrix.rows()) - ie.rank;
  rep.near_degenerate = ir.near_degenerate || ie.near_degenerate || ip.near_degenerate;

  const Matrix k = kernel_basis(re.matrix, tol.tol_rank);
  const Matrix t = trivial_space(packing);
  rep.trivial_deficient = (t - k * (k.transpose() * t)).norm() > tol.tol_strict;
  return rep;
}

}  // namespace packrig

#endif  // PACKRIG_RIGIDITY_HPP
