#ifndef PACKRIG_LP_HPP
#define PACKRIG_LP_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "packrig/linalg.hpp"

namespace packrig {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/** \brief A constraint row a.x (= or <=) rhs. */
struct LpRow {
  Vector coeffs;
  double rhs = 0.0;
};

/**
 * \brief maximize c.x subject to equalities, inequalities a.x <= b and optional bounds.
 *
 * Absent bounds are stored as -inf / +inf. Variables default to free.
 */
class LinearProgram {
 public:
  explicit LinearProgram(int variable_count)
      : n_(variable_count),
        objective_(Vector::Zero(variable_count)),
        lower_(Vector::Constant(variable_count, -inf)),
        upper_(Vector::Constant(variable_count, inf)) {
    if (variable_count < 0) throw InvalidInput("negative variable count");
  }

  int variable_count() const { return n_; }

  void set_objective(const Vector& c) {
    check_row(c);
    objective_ = c;
  }
  void add_equality(const Vector& row, double rhs) {
    check_row(row);
    check_value(rhs);
    eq_.push_back({row, rhs});
  }
  void add_inequality(const Vector& row, double rhs) {
    check_row(row);
    check_value(rhs);
    ineq_.push_back({row, rhs});
  }
  void set_bounds(int j, double lo, double hi) {
    if (j < 0 || j >= n_) throw InvalidInput("bound on unknown variable");
    if (std::isnan(lo) || std::isnan(hi) || lo == inf || hi == -inf) throw InvalidInput("invalid bound");
    lower_[j] = lo;
    upper_[j] = hi;
  }

  const Vector& objective() const { return objective_; }
  const std::vector<LpRow>& equalities() const { return eq_; }
  const std::vector<LpRow>& inequalities() const { return ineq_; }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

 private:
  void check_row(const Vector& row) const {
    if (row.size() != n_) throw InvalidInput("constraint row length differs from variable count");
    if (!row.allFinite()) throw InvalidInput("non-finite constraint coefficient");
  }
  static void check_value(double v) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite right-hand side");
  }

  int n_;
  Vector objective_;
  std::vector<LpRow> eq_;
  std::vector<LpRow> ineq_;
  Vector lower_;
  Vector upper_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/**
 * \brief Multipliers on equalities, inequalities, lower and upper bounds.
 *
 * For an optimal outcome they form a dual solution:
 *   A_eq' eq + A_ub' ineq - lower + upper = c.
 * For an infeasible outcome they form a Farkas certificate:
 *   A_eq' eq + A_ub' ineq - lower + upper = 0 and
 *   b_eq.eq + b_ub.ineq - l.lower + u.upper < 0,
 * with ineq, lower, upper nonnegative in both cases.
 */
struct LpCertificate {
  Vector eq;
  Vector ineq;
  Vector lower;
  Vector upper;
};

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::optional<Vector> point;
  std::optional<LpCertificate> certificate;
  /** Improving feasible direction when Unbounded. */
  std::optional<Vector> ray;
  double objective_value = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
};

namespace detail {

/** \brief Dense two-phase tableau simplex over z >= 0 with Bland's entering rule. */
class SimplexSolver {
 public:
  SimplexSolver(const LinearProgram& lp, double tol_lp) : lp_(lp), tol_(tol_lp) {}

  LpOutcome run() {
    build_standard_form();
    LpOutcome out;
    const int m = static_cast<int>(a_.rows());

    // Phase 1 drives artificial columns out of the basis.
    Vector cost1 = Vector::Zero(cols_);
    for (int k = first_artificial_; k < cols_; ++k) cost1[k] = 1.0;
    allowed_.assign(cols_, true);
    load_tableau();
    iterate(cost1, out, false);
    refactor();
    const double infeas = phase_value(cost1);
    double bscale = 1.0;
    if (m > 0) bscale = std::max(1.0, b_.cwiseAbs().maxCoeff());
    if (infeas > tol_ * bscale) {
      out.status = LpStatus::Infeasible;
      out.certificate = certificate_from_basis(cost1, Vector::Zero(lp_.variable_count()));
      return out;
    }
    drive_out_artificials();
    for (int k = first_artificial_; k < cols_; ++k) allowed_[k] = false;

    Vector cost2 = Vector::Zero(cols_);
    cost2.head(structural_) = -cz_;
    const int entering = iterate(cost2, out, true);
    refactor();
    if (entering >= 0) {
      out.status = LpStatus::Unbounded;
      out.point = x_from_z(current_z(false));
      Vector dz = Vector::Zero(cols_);
      dz[entering] = 1.0;
      for (int r = 0; r < static_cast<int>(basis_.size()); ++r) dz[basis_[r]] = -t_(r, entering);
      Vector d = Vector::Zero(lp_.variable_count());
      for (int j = 0; j < lp_.variable_count(); ++j)
        for (const auto& [k, s] : transform_[j].terms) d[j] += s * dz[k];
      out.ray = d;
      out.objective_value = inf;
      return out;
    }
    out.status = LpStatus::Optimal;
    const Vector x = x_from_z(current_z(true));
    out.point = x;
    out.objective_value = lp_.objective().dot(x);
    out.certificate = certificate_from_basis(cost2, lp_.objective());
    return out;
  }

 private:
  enum class RowKind { Eq, Ineq, Bound };
  struct RowOrigin {
    RowKind kind;
    int index;
    double sign;
  };
  struct Transform {
    double offset = 0.0;
    std::vector<std::pair<int, double>> terms;
  };

  void build_standard_form() {
    const int n = lp_.variable_count();
    transform_.assign(n, {});
    std::vector<std::pair<int, double>> bound_rows;
    int z = 0;
    for (int j = 0; j < n; ++j) {
      const double lo = lp_.lower()[j];
      const double hi = lp_.upper()[j];
      if (std::isfinite(lo)) {
        transform_[j] = {lo, {{z, 1.0}}};
        if (std::isfinite(hi)) bound_rows.emplace_back(z, hi - lo);
        ++z;
      } else if (std::isfinite(hi)) {
        transform_[j] = {hi, {{z, -1.0}}};
        ++z;
      } else {
        transform_[j] = {0.0, {{z, 1.0}, {z + 1, -1.0}}};
        z += 2;
      }
    }
    structural_ = z;
    cz_ = Vector::Zero(structural_);
    for (int j = 0; j < n; ++j)
      for (const auto& [k, s] : transform_[j].terms) cz_[k] += s * lp_.objective()[j];

    const auto& eqs = lp_.equalities();
    const auto& ins = lp_.inequalities();
    const int rows = static_cast<int>(eqs.size() + ins.size() + bound_rows.size());
    const int slacks = static_cast<int>(ins.size() + bound_rows.size());
    // Every row gets an artificial column; unused ones stay out of the basis.
    first_artificial_ = structural_ + slacks;
    cols_ = first_artificial_ + rows;
    a_ = Matrix::Zero(rows, cols_);
    b_ = Vector::Zero(rows);
    origin_.clear();
    basis_.assign(rows, -1);

    auto fill_structural = [&](int r, const Vector& coeffs, double rhs) {
      double shifted = rhs;
      for (int j = 0; j < n; ++j) {
        if (coeffs[j] == 0.0) continue;
        shifted -= coeffs[j] * transform_[j].offset;
        for (const auto& [k, s] : transform_[j].terms) a_(r, k) += coeffs[j] * s;
      }
      b_[r] = shifted;
    };

    int r = 0;
    int slack = structural_;
    for (std::size_t i = 0; i < eqs.size(); ++i, ++r) {
      fill_structural(r, eqs[i].coeffs, eqs[i].rhs);
      origin_.push_back({RowKind::Eq, static_cast<int>(i), 1.0});
    }
    for (std::size_t i = 0; i < ins.size(); ++i, ++r, ++slack) {
      fill_structural(r, ins[i].coeffs, ins[i].rhs);
      a_(r, slack) = 1.0;
      origin_.push_back({RowKind::Ineq, static_cast<int>(i), 1.0});
    }
    for (const auto& [k, cap] : bound_rows) {
      a_(r, k) = 1.0;
      a_(r, slack) = 1.0;
      b_[r] = cap;
      int var = 0;
      for (int j = 0; j < n; ++j)
        if (!transform_[j].terms.empty() && transform_[j].terms[0].first == k) var = j;
      origin_.push_back({RowKind::Bound, var, 1.0});
      ++r;
      ++slack;
    }
    for (int i = 0; i < rows; ++i) {
      if (b_[i] < 0.0) {
        a_.row(i) *= -1.0;
        b_[i] = -b_[i];
        origin_[i].sign = -1.0;
      }
      a_(i, first_artificial_ + i) = 1.0;
      const bool has_slack = origin_[i].kind != RowKind::Eq;
      if (has_slack && origin_[i].sign > 0.0) {
        basis_[i] = structural_ + slack_of_row(i);
      } else {
        basis_[i] = first_artificial_ + i;
      }
    }
  }

  int slack_of_row(int i) const { return i - static_cast<int>(lp_.equalities().size()); }

  void load_tableau() {
    t_ = a_;
    rhs_ = b_;
  }

  double phase_value(const Vector& cost) const {
    double v = 0.0;
    for (int r = 0; r < static_cast<int>(basis_.size()); ++r) v += cost[basis_[r]] * rhs_[r];
    return v;
  }

  /**
   * \brief Runs simplex to optimality; returns an entering column if unbounded, else -1.
   *
   * A column with no admissible pivot is first re-examined on a refactored
   * tableau. If it still has none and its reduced cost is within noise, or the
   * phase cannot be unbounded, it is set aside until the next pivot.
   */
  int iterate(const Vector& cost, LpOutcome& out, bool may_be_unbounded) {
    const int m = static_cast<int>(basis_.size());
    const int guard = 50000 + 100 * (m + cols_);
    Vector d(cols_);
    std::vector<char> set_aside(cols_, 0);
    bool fresh = false;
    for (;;) {
      if (out.iterations++ > guard) throw NumericalFailure("simplex iteration guard exceeded");
      // Reduced costs d_j = c_j - c_B' T_j.
      d = cost;
      for (int r = 0; r < m; ++r) {
        const double cb = cost[basis_[r]];
        if (cb != 0.0) d -= cb * t_.row(r).transpose();
      }
      std::vector<char> basic(cols_, 0);
      for (int b : basis_) basic[b] = 1;
      int enter = -1;
      for (int j = 0; j < cols_; ++j) {
        if (!allowed_[j] || basic[j] || set_aside[j]) continue;
        if (d[j] < -kCostEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return -1;
      double colmax = 0.0;
      for (int r = 0; r < m; ++r) colmax = std::max(colmax, t_(r, enter));
      const double pivot_floor = std::max(kPivotEps, kPivotRel * colmax);
      double best = inf;
      for (int r = 0; r < m; ++r) {
        const double a = t_(r, enter);
        if (a > pivot_floor) best = std::min(best, std::max(rhs_[r], 0.0) / a);
      }
      // Near-ties prefer the largest pivot; a long degenerate run falls back to Bland's lowest index.
      const bool bland = degenerate_run_ >= kBlandAfter;
      const double tie = kTieRel * (1.0 + best);
      int leave = -1;
      for (int r = 0; r < m; ++r) {
        const double a = t_(r, enter);
        if (a <= pivot_floor || std::max(rhs_[r], 0.0) / a > best + tie) continue;
        if (leave < 0 || (bland ? basis_[r] < basis_[leave] : a > t_(leave, enter))) leave = r;
      }
      if (leave < 0) {
        if (!fresh) {
          refactor();
          fresh = true;
          continue;
        }
        if (may_be_unbounded && d[enter] < -kNoiseCost) return enter;
        set_aside[enter] = 1;
        continue;
      }
      degenerate_run_ = best <= kTieRel ? degenerate_run_ + 1 : 0;
      pivot(leave, enter);
      std::fill(set_aside.begin(), set_aside.end(), 0);
      fresh = false;
      if (++since_refactor_ >= kRefactorPeriod) {
        refactor();
        fresh = true;
      }
    }
  }

  /** \brief Rebuilds the tableau from the original rows and the current basis. */
  void refactor() {
    since_refactor_ = 0;
    const auto rows = active_rows();
    if (rows.empty()) return;
    const Eigen::PartialPivLU<Matrix> lu(basis_matrix(rows));
    Matrix a(rows.size(), cols_);
    Vector b(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      a.row(static_cast<Eigen::Index>(r)) = a_.row(rows[r]);
      b[static_cast<Eigen::Index>(r)] = b_[rows[r]];
    }
    Matrix t = lu.solve(a);
    Vector rhs = lu.solve(b);
    if (!t.allFinite() || !rhs.allFinite()) return;
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      t.col(basis_[static_cast<std::size_t>(r)]).setZero();
      t(r, basis_[static_cast<std::size_t>(r)]) = 1.0;
    }
    t_ = std::move(t);
    rhs_ = std::move(rhs);
  }

  void pivot(int r, int j) {
    const double p = t_(r, j);
    t_.row(r) /= p;
    rhs_[r] /= p;
    for (int i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, j);
      if (f == 0.0) continue;
      t_.row(i) -= f * t_.row(r);
      rhs_[i] -= f * rhs_[r];
    }
    basis_[r] = j;
  }

  void drive_out_artificials() {
    for (int r = 0; r < static_cast<int>(basis_.size());) {
      if (basis_[r] < first_artificial_) {
        ++r;
        continue;
      }
      std::vector<char> basic(cols_, 0);
      for (int b : basis_) basic[b] = 1;
      int best = -1;
      for (int j = 0; j < first_artificial_; ++j) {
        if (basic[j] || std::abs(t_(r, j)) <= 1e-9) continue;
        if (best < 0 || std::abs(t_(r, j)) > std::abs(t_(r, best))) best = j;
      }
      if (best >= 0) {
        pivot(r, best);
        ++r;
        continue;
      }
      // Redundant row: the original row owning this artificial is a combination of the others.
      removed_.push_back(basis_[r] - first_artificial_);
      erase_row(r);
    }
  }

  void erase_row(int r) {
    const Eigen::Index rows = t_.rows();
    Matrix t(rows - 1, t_.cols());
    Vector rhs(rows - 1);
    for (Eigen::Index i = 0, k = 0; i < rows; ++i) {
      if (i == r) continue;
      t.row(k) = t_.row(i);
      rhs[k] = rhs_[i];
      ++k;
    }
    t_ = std::move(t);
    rhs_ = std::move(rhs);
    basis_.erase(basis_.begin() + r);
  }

  std::vector<int> active_rows() const {
    std::vector<int> rows;
    for (int i = 0; i < static_cast<int>(origin_.size()); ++i)
      if (std::find(removed_.begin(), removed_.end(), i) == removed_.end()) rows.push_back(i);
    return rows;
  }

  Matrix basis_matrix(const std::vector<int>& rows) const {
    const int m = static_cast<int>(rows.size());
    Matrix bm(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) bm(r, c) = a_(rows[r], basis_[c]);
    return bm;
  }

  /** \brief Basic solution; optionally re-solved from the original data for accuracy. */
  Vector current_z(bool polish) const {
    Vector zfull = Vector::Zero(cols_);
    for (int r = 0; r < static_cast<int>(basis_.size()); ++r) zfull[basis_[r]] = std::max(rhs_[r], 0.0);
    if (polish && !basis_.empty()) {
      const auto rows = active_rows();
      Vector b(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) b[r] = b_[rows[r]];
      const Vector zb = basis_matrix(rows).partialPivLu().solve(b);
      const Matrix bm = basis_matrix(rows);
      const bool accurate = zb.allFinite() && (bm * zb - b).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + b.cwiseAbs().maxCoeff());
      if (accurate && zb.minCoeff() > -tol_) {
        for (int r = 0; r < static_cast<int>(basis_.size()); ++r) zfull[basis_[r]] = std::max(zb[r], 0.0);
      }
    }
    return zfull;
  }

  Vector x_from_z(const Vector& z) const {
    const int n = lp_.variable_count();
    Vector x(n);
    for (int j = 0; j < n; ++j) {
      x[j] = transform_[j].offset;
      for (const auto& [k, s] : transform_[j].terms) x[j] += s * z[k];
    }
    return x;
  }

  /** \brief Maps the basis duals back to multipliers on the original constraints. */
  LpCertificate certificate_from_basis(const Vector& cost, const Vector& c) const {
    const int n = lp_.variable_count();
    const auto rows = active_rows();
    Vector y = Vector::Zero(static_cast<Eigen::Index>(origin_.size()));
    if (!rows.empty()) {
      Vector cb(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) cb[r] = cost[basis_[r]];
      const Vector yr = basis_matrix(rows).transpose().partialPivLu().solve(cb);
      for (std::size_t r = 0; r < rows.size(); ++r) y[rows[r]] = yr[r];
    }
    LpCertificate cert;
    cert.eq = Vector::Zero(static_cast<Eigen::Index>(lp_.equalities().size()));
    cert.ineq = Vector::Zero(static_cast<Eigen::Index>(lp_.inequalities().size()));
    cert.lower = Vector::Zero(n);
    cert.upper = Vector::Zero(n);
    Vector g = -c;
    for (std::size_t i = 0; i < origin_.size(); ++i) {
      const RowOrigin& o = origin_[i];
      const double mu = -o.sign * y[static_cast<Eigen::Index>(i)];
      switch (o.kind) {
        case RowKind::Eq:
          cert.eq[o.index] = mu;
          g += mu * lp_.equalities()[o.index].coeffs;
          break;
        case RowKind::Ineq:
          cert.ineq[o.index] = std::max(mu, 0.0);
          g += cert.ineq[o.index] * lp_.inequalities()[o.index].coeffs;
          break;
        case RowKind::Bound:
          cert.upper[o.index] += std::max(mu, 0.0);
          g[o.index] += std::max(mu, 0.0);
          break;
      }
    }
    for (int j = 0; j < n; ++j) {
      if (g[j] > 0.0 && std::isfinite(lp_.lower()[j])) cert.lower[j] = g[j];
      if (g[j] < 0.0 && std::isfinite(lp_.upper()[j])) cert.upper[j] += -g[j];
    }
    return cert;
  }

  static constexpr double kCostEps = 1e-10;
  static constexpr double kNoiseCost = 1e-7;
  static constexpr double kTieRel = 1e-9;
  static constexpr int kBlandAfter = 200;
  static constexpr int kRefactorPeriod = 10;
  static constexpr double kPivotEps = 1e-10;
  static constexpr double kPivotRel = 1e-9;

  const LinearProgram& lp_;
  double tol_;
  std::vector<Transform> transform_;
  int structural_ = 0;
  int first_artificial_ = 0;
  int cols_ = 0;
  Vector cz_;
  Matrix a_;
  Vector b_;
  std::vector<RowOrigin> origin_;
  std::vector<int> removed_;
  std::vector<int> basis_;
  std::vector<bool> allowed_;
  Matrix t_;
  Vector rhs_;
  int since_refactor_ = 0;
  int degenerate_run_ = 0;
};

}  // namespace detail

namespace detail {

inline double lp_scale(const LinearProgram& lp) {
  double s = 1.0;
  for (const auto& row : lp.equalities()) s = std::max(s, std::abs(row.rhs));
  for (const auto& row : lp.inequalities()) s = std::max(s, std::abs(row.rhs));
  return s;
}

inline bool point_feasible(const LinearProgram& lp, const Vector& x, double tol) {
  if (x.size() != lp.variable_count() || !x.allFinite()) return false;
  for (const auto& row : lp.equalities())
    if (std::abs(row.coeffs.dot(x) - row.rhs) > tol) return false;
  for (const auto& row : lp.inequalities())
    if (row.coeffs.dot(x) - row.rhs > tol) return false;
  for (int j = 0; j < lp.variable_count(); ++j) {
    if (x[j] < lp.lower()[j] - tol) return false;
    if (x[j] > lp.upper()[j] + tol) return false;
  }
  return true;
}

/** \brief Checks sign conditions and A' y - lower + upper = target; returns the dual value. */
inline std::optional<double> certificate_value(const LinearProgram& lp, const LpCertificate& y,
                                               const Vector& target, double tol) {
  const int n = lp.variable_count();
  if (y.eq.size() != static_cast<Eigen::Index>(lp.equalities().size()) ||
      y.ineq.size() != static_cast<Eigen::Index>(lp.inequalities().size()) || y.lower.size() != n ||
      y.upper.size() != n)
    return std::nullopt;
  if ((y.ineq.size() > 0 && y.ineq.minCoeff() < -tol) || (n > 0 && y.lower.minCoeff() < -tol) ||
      (n > 0 && y.upper.minCoeff() < -tol))
    return std::nullopt;
  Vector g = y.upper - y.lower - target;
  double value = 0.0;
  for (std::size_t i = 0; i < lp.equalities().size(); ++i) {
    g += y.eq[static_cast<Eigen::Index>(i)] * lp.equalities()[i].coeffs;
    value += y.eq[static_cast<Eigen::Index>(i)] * lp.equalities()[i].rhs;
  }
  for (std::size_t i = 0; i < lp.inequalities().size(); ++i) {
    g += y.ineq[static_cast<Eigen::Index>(i)] * lp.inequalities()[i].coeffs;
    value += y.ineq[static_cast<Eigen::Index>(i)] * lp.inequalities()[i].rhs;
  }
  for (int j = 0; j < n; ++j) {
    if (y.lower[j] > tol) {
      if (!std::isfinite(lp.lower()[j])) return std::nullopt;
      value -= y.lower[j] * lp.lower()[j];
    }
    if (y.upper[j] > tol) {
      if (!std::isfinite(lp.upper()[j])) return std::nullopt;
      value += y.upper[j] * lp.upper()[j];
    }
  }
  const double mag = 1.0 + y.eq.cwiseAbs().sum() + y.ineq.cwiseAbs().sum();
  if (n > 0 && g.cwiseAbs().maxCoeff() > tol * mag) return std::nullopt;
  return value;
}

}  // namespace detail

/**
 * \brief Solves the program with a deterministic pivot rule.
 *
 * Throws NumericalFailure when the iteration guard trips or when a claimed
 * optimum fails to satisfy the original constraints, which is distinct from
 * an Infeasible status.
 */
inline LpOutcome solve(const LinearProgram& lp, double tol_lp) {
  LpOutcome out = detail::SimplexSolver(lp, tol_lp).run();
  if (out.status == LpStatus::Optimal && !detail::point_feasible(lp, *out.point, 1e-7 * detail::lp_scale(lp)))
    throw NumericalFailure("simplex optimum does not satisfy the constraints");
  return out;
}

/**
 * \brief Independently re-verifies whichever side of the alternative an outcome claims.
 *
 * Optimal: the point is feasible and the attached dual certificate closes the
 * duality gap. Infeasible: the Farkas certificate satisfies its sign
 * conditions and proves a contradiction. Unbounded: the point is feasible and
 * the ray is an improving recession direction.
 */
inline bool farkas_check(const LpOutcome& outcome, const LinearProgram& lp, double tol_lp) {
  const double scale = detail::lp_scale(lp);
  const double tol = tol_lp * scale;
  const int n = lp.variable_count();
  switch (outcome.status) {
    case LpStatus::Optimal: {
      if (!outcome.point || !detail::point_feasible(lp, *outcome.point, tol)) return false;
      if (!outcome.certificate) return true;
      const auto dual = detail::certificate_value(lp, *outcome.certificate, lp.objective(), tol);
      if (!dual) return false;
      const double primal = lp.objective().dot(*outcome.point);
      return std::abs(*dual - primal) <= tol * (1.0 + std::abs(primal));
    }
    case LpStatus::Infeasible: {
      if (!outcome.certificate) return false;
      const auto value = detail::certificate_value(lp, *outcome.certificate, Vector::Zero(n), tol);
      return value.has_value() && *value < -tol;
    }
    case LpStatus::Unbounded: {
      if (!outcome.point || !outcome.ray || !detail::point_feasible(lp, *outcome.point, tol)) return false;
      const Vector& d = *outcome.ray;
      if (d.size() != n || lp.objective().dot(d) <= tol) return false;
      for (const auto& row : lp.equalities())
        if (std::abs(row.coeffs.dot(d)) > tol) return false;
      for (const auto& row : lp.inequalities())
        if (row.coeffs.dot(d) > tol) return false;
      for (int j = 0; j < n; ++j) {
        if (std::isfinite(lp.lower()[j]) && d[j] < -tol) return false;
        if (std::isfinite(lp.upper()[j]) && d[j] > tol) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace packrig

#endif  // PACKRIG_LP_HPP
