#ifndef PACKRIG_LINALG_HPP
#define PACKRIG_LINALG_HPP

#include <Eigen/Dense>

#include "packrig/core.hpp"

namespace packrig {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/** \brief Rank decision together with the spectrum it was read from. */
struct RankInfo {
  int rank = 0;
  Vector singular_values;
  /** Cutoff actually applied: tol_rank times the largest singular value. */
  double cutoff = 0.0;
  /** Some singular value lies within a factor 10 of the cutoff. */
  bool near_degenerate = false;
};

namespace detail {

inline void require_finite(const Matrix& m) {
  if (!m.allFinite()) throw NumericalFailure("matrix has non-finite entries");
}

inline RankInfo rank_from_spectrum(const Vector& sv, double tol_rank) {
  RankInfo info;
  info.singular_values = sv;
  const double smax = sv.size() > 0 ? sv.maxCoeff() : 0.0;
  if (smax == 0.0) return info;
  info.cutoff = tol_rank * smax;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] > info.cutoff) ++info.rank;
    if (sv[k] > info.cutoff / 10.0 && sv[k] < info.cutoff * 10.0) info.near_degenerate = true;
  }
  return info;
}

}  // namespace detail

/** \brief Singular-value based rank with a relative cutoff. */
inline RankInfo rank_info(const Matrix& m, double tol_rank) {
  detail::require_finite(m);
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<Matrix> svd(m);
  return detail::rank_from_spectrum(svd.singularValues(), tol_rank);
}

inline int numerical_rank(const Matrix& m, double tol_rank) { return rank_info(m, tol_rank).rank; }

/** \brief Orthonormal basis (as columns) of the right null space of m. */
inline Matrix kernel_basis(const Matrix& m, double tol_rank) {
  detail::require_finite(m);
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0 || cols == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const int rank = detail::rank_from_spectrum(svd.singularValues(), tol_rank).rank;
  return svd.matrixV().rightCols(cols - rank);
}

/** \brief Orthonormal basis (as columns) of the left null space of m. */
inline Matrix cokernel_basis(const Matrix& m, double tol_rank) {
  return kernel_basis(m.transpose(), tol_rank);
}

/** \brief Rows of a stacked on top of rows of b. */
inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  if (a.cols() != b.cols()) throw InvalidInput("vstack column mismatch");
  Matrix out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

}  // namespace packrig

#endif  // PACKRIG_LINALG_HPP
