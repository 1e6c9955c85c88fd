#ifndef PACKRIG_MATROID_HPP
#define PACKRIG_MATROID_HPP

#include <algorithm>
#include <numeric>
#include <vector>

#include "packrig/first_order.hpp"

namespace packrig {

/** \brief A set of disks together with rank([R; E_S]). */
struct RadiusSet {
  std::vector<VertexId> members;
  int rank = 0;
};

enum class Independence { Independent, Dependent, Indeterminate };

namespace detail {

inline void require_set(const std::vector<VertexId>& set, int n) {
  std::vector<VertexId> sorted = set;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidInput("radius set contains a repeated vertex");
  for (VertexId v : sorted)
    if (v < 1 || v > n) throw InvalidInput("radius set names unknown vertex " + std::to_string(v));
}

inline Matrix stacked(const PlanarEmbeddedGraph& graph, const Packing& unit, const std::vector<VertexId>& set) {
  return vstack(rigidity_matrix_unchecked(graph, unit).matrix, build_fixing_rows(set, graph.vertex_count()));
}

/**
 * \brief Orthonormal basis of a growing row space, extended one unit radius row at a time.
 *
 * The distance from e_k to the current row space decides independence; it is
 * compared with the same relative cutoff the SVD rank uses.
 */
class RowSpaceTracker {
 public:
  RowSpaceTracker(const Matrix& rows, double tol_rank) {
    Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
    const RankInfo info = rank_from_spectrum(svd.singularValues(), tol_rank);
    cutoff_ = std::max(info.cutoff, tol_rank);
    basis_ = svd.matrixV().leftCols(info.rank);
  }

  int rank() const { return static_cast<int>(basis_.cols()); }

  /** \brief Classifies the unit row at column col and appends it when independent. */
  Independence try_add(int col) {
    Vector e = Vector::Zero(basis_.rows());
    e[col] = 1.0;
    Vector res = e - basis_ * (basis_.transpose() * e);
    res -= basis_ * (basis_.transpose() * res);
    const double d = res.norm();
    if (d < cutoff_ / 10.0) return Independence::Dependent;
    if (d <= cutoff_ * 10.0) return Independence::Indeterminate;
    basis_.conservativeResize(Eigen::NoChange, basis_.cols() + 1);
    basis_.col(basis_.cols() - 1) = res / d;
    return Independence::Independent;
  }

 private:
  Matrix basis_;
  double cutoff_ = 0.0;
};

}  // namespace detail

/** \brief rank([R; E_S]) on the normalized packing. */
inline int radius_set_rank(const PlanarEmbeddedGraph& graph, const Packing& packing, const std::vector<VertexId>& set,
                           const AnalysisTolerances& tol = {}) {
  detail::require_valid(graph, packing, tol);
  detail::require_set(set, graph.vertex_count());
  return numerical_rank(detail::stacked(graph, detail::normalized(packing), set), tol.tol_rank);
}

/** \brief Three-way independence test; near-cutoff spectra give Indeterminate. */
inline Independence independence(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                 const std::vector<VertexId>& set, const AnalysisTolerances& tol = {}) {
  detail::require_valid(graph, packing, tol);
  detail::require_set(set, graph.vertex_count());
  const Matrix m = detail::stacked(graph, detail::normalized(packing), set);
  const RankInfo info = rank_info(m, tol.tol_rank);
  const int full = graph.edge_count() + static_cast<int>(set.size());
  if (info.rank == full && !info.near_degenerate) return Independence::Independent;
  if (info.rank < full && !info.near_degenerate) return Independence::Dependent;
  return Independence::Indeterminate;
}

/** \brief True iff rank([R; E_S]) = m + |S|. */
inline bool is_independent(const PlanarEmbeddedGraph& graph, const Packing& packing, const std::vector<VertexId>& set,
                           const AnalysisTolerances& tol = {}) {
  detail::require_valid(graph, packing, tol);
  detail::require_set(set, graph.vertex_count());
  return radius_set_rank(graph, packing, set, tol) == graph.edge_count() + static_cast<int>(set.size());
}

/** \brief True iff fixing S determines every radius to first order: rank([R; E_S]) = rank([R; E_V]). */
inline bool is_maximal(const PlanarEmbeddedGraph& graph, const Packing& packing, const std::vector<VertexId>& set,
                       const AnalysisTolerances& tol = {}) {
  return radius_set_rank(graph, packing, set, tol) ==
         radius_set_rank(graph, packing, detail::all_vertices(graph.vertex_count()), tol);
}

/** \brief Bar framework with every radius fixed is infinitesimally rigid. */
inline bool bar_framework_rigid(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                const AnalysisTolerances& tol = {}) {
  const int n = graph.vertex_count();
  return 3 * n - radius_set_rank(graph, packing, detail::all_vertices(n), tol) == trivial_dimension(n);
}

struct GreedyResult {
  RadiusSet set;
  double total_cost = 0.0;
  /** Disks skipped because their independence test was indeterminate. */
  std::vector<VertexId> indeterminate;
};

/**
 * \brief Minimum-cost maximal independent radius set by the matroid greedy rule.
 *
 * Disks are scanned by increasing cost, ties broken by lower id. Requires an
 * infinitesimally rigid bar framework; the result then has 3n - m - 3 disks.
 */
inline GreedyResult greedy_min_cost_set(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                        const std::vector<double>& cost, const AnalysisTolerances& tol = {}) {
  detail::require_valid(graph, packing, tol);
  const int n = graph.vertex_count();
  if (static_cast<int>(cost.size()) != n) throw InvalidInput("cost vector length differs from vertex count");
  for (double c : cost)
    if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidInput("costs must be finite and nonnegative");
  if (!bar_framework_rigid(graph, packing, tol))
    throw InvalidInput("greedy selection needs an infinitesimally rigid bar framework");
  std::vector<VertexId> order = detail::all_vertices(n);
  std::stable_sort(order.begin(), order.end(),
                   [&](VertexId a, VertexId b) { return cost[a - 1] < cost[b - 1]; });
  const Packing unit = detail::normalized(packing);
  detail::RowSpaceTracker tracker(detail::rigidity_matrix_unchecked(graph, unit).matrix, tol.tol_rank);
  GreedyResult out;
  for (VertexId v : order) {
    const Independence ind = tracker.try_add(column(v, Coord::R));
    if (ind == Independence::Independent) {
      out.set.members.push_back(v);
      out.total_cost += cost[v - 1];
    } else if (ind == Independence::Indeterminate) {
      out.indeterminate.push_back(v);
    }
  }
  std::sort(out.set.members.begin(), out.set.members.end());
  out.set.rank = tracker.rank();
  return out;
}

}  // namespace packrig

#endif  // PACKRIG_MATROID_HPP
