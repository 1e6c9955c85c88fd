#ifndef PACKRIG_CASEBOOK_HPP
#define PACKRIG_CASEBOOK_HPP

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "packrig/layout.hpp"

namespace packrig {

/** \brief Where an expected fact about a case comes from. */
enum class FactSource {
  /** Stated explicitly for the instance in its published description. */
  Stated,
  /** Computed here by an independent route and frozen. */
  Derived,
  /** True by the way the instance is built. */
  Construction
};

struct ExpectedFact {
  std::string key;
  std::string value;
  FactSource source = FactSource::Stated;
};

/** \brief A named instance with its coloring, recipe and expected analysis facts. */
struct CaseRecord {
  std::string name;
  std::optional<PlanarEmbeddedGraph> graph;
  std::optional<Packing> packing;
  std::optional<ConstraintPartition> partition;
  std::string construction;
  std::vector<ExpectedFact> facts;
  /** Set for scalar cases that carry a number instead of a packing. */
  std::optional<double> scalar;

  bool has_instance() const { return graph.has_value(); }
  std::optional<std::string> fact(const std::string& key) const {
    for (const auto& f : facts)
      if (f.key == key) return f.value;
    return std::nullopt;
  }
};

namespace detail {

/** \brief Root of an increasing function on [lo, hi] by bisection to machine precision. */
inline double bisect_increasing(const std::function<double(double)>& f, double lo, double hi, const char* what) {
  double flo = f(lo);
  double fhi = f(hi);
  if (!(flo <= 0.0 && fhi >= 0.0)) throw InvalidInput(std::string("no root in range for ") + what);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (fm < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/** \brief Angle sum at disk 4 of the ten-disk instance with r4 = q and r2, r5 given. */
inline double min_r5_contour(double q, double r2, double r5) {
  return triangle_angle(q, 1, 1) + 2 * triangle_angle(q, r5, 1) + 2 * triangle_angle(q, r2, 1) - two_pi;
}

/** \brief Angle sum at disk 7 (radius 1) of the ten-disk instance with r4 = q and r2, r5 given. */
inline double max_r5_contour(double q, double r2, double r5) {
  return 3 * triangle_angle(1, q, q) + 2 * triangle_angle(1, q, r2) + 2 * triangle_angle(1, q, r5) - two_pi;
}

/** \brief Smallest r5 keeping disk 4 closed up: root of min_r5_contour in r5. */
inline double min_r5(double q, double r2, double tol = 1e-15) {
  if (!(q > 0 && r2 > 0)) throw InvalidInput("radii must be positive");
  (void)tol;
  return detail::bisect_increasing([&](double r5) { return min_r5_contour(q, r2, r5); }, 1e-9, 1e9, "min_r5");
}

/** \brief Largest r5 keeping disk 7 at radius 1: root of max_r5_contour in r5. */
inline double max_r5(double q, double r2, double tol = 1e-15) {
  if (!(q > 0 && r2 > 0)) throw InvalidInput("radii must be positive");
  (void)tol;
  return detail::bisect_increasing([&](double r5) { return max_r5_contour(q, r2, r5); }, 1e-9, 1e9, "max_r5");
}

/** \brief Closed-form solution of min_r5_contour. */
inline double min_r5_closed_form(double q, double r2) {
  const double a = std::acos((q * q + 2 * q - 1) / ((q + 1) * (q + 1)));
  const double b = std::acos(((q - 1) * r2 + q * (q + 1)) / ((q + 1) * (q + r2)));
  const double c = std::cos((a + 2 * b) / 4);
  return -2 * q * (q + 1) * c * c / ((q + 1) * std::cos(a / 2 + b) + q - 1);
}

/** \brief Closed-form solution of max_r5_contour. */
inline double max_r5_closed_form(double q, double r2) {
  const double a = std::acos((-q * q + 2 * q + 1) / ((q + 1) * (q + 1)));
  const double b = std::acos((-q * r2 + q + r2 + 1) / (q * r2 + q + r2 + 1));
  const double c = std::cos((3 * a + 2 * b) / 4);
  return -2 * (q + 1) * c * c / ((q + 1) * std::cos(3 * a / 2 + b) - q + 1);
}

inline double gap(double q, double r2) { return min_r5(q, r2) - max_r5(q, r2); }

struct GapReport {
  double r2_star = 0.0;
  double gap = 0.0;
  double first_derivative = 0.0;
  double second_derivative = 0.0;
};

/**
 * \brief Minimizer of gap(q, .) on a range with central-difference derivatives there.
 *
 * Golden-section search down to tol in r2; derivatives use h = 1e-4 r2*.
 */
inline GapReport gap_analysis(double q, double r2_lo, double r2_hi, double tol = 1e-10) {
  if (!(r2_lo > 0 && r2_hi > r2_lo)) throw InvalidInput("invalid r2 range");
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double a = r2_lo;
  double b = r2_hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = gap(q, c);
  double fd = gap(q, d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = gap(q, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = gap(q, d);
    }
  }
  GapReport rep;
  rep.r2_star = 0.5 * (a + b);
  const double span = r2_hi - r2_lo;
  if (rep.r2_star - r2_lo < 1e-6 * span || r2_hi - rep.r2_star < 1e-6 * span)
    throw InvalidInput("gap has no interior minimum in range");
  const double h = 1e-4 * rep.r2_star;
  const double g0 = gap(q, rep.r2_star);
  const double gp = gap(q, rep.r2_star + h);
  const double gm = gap(q, rep.r2_star - h);
  rep.gap = g0;
  rep.first_derivative = (gp - gm) / (2 * h);
  rep.second_derivative = (gp - 2 * g0 + gm) / (h * h);
  return rep;
}

/** \brief 89x^8+1344x^7+4008x^6-464x^5-2410x^4+176x^3+296x^2-96x+1. */
inline double conjecture_polynomial(double x) {
  static constexpr std::array<double, 9> c{89, 1344, 4008, -464, -2410, 176, 296, -96, 1};
  double v = 0.0;
  for (double k : c) v = v * x + k;
  return v;
}

/** \brief The root of conjecture_polynomial in (0.6, 0.7), by bisection. */
inline double conjecture_ratio_root(double tol = 1e-12) {
  double lo = 0.6;
  double hi = 0.7;
  const double plo = conjecture_polynomial(lo);
  if (!(plo * conjecture_polynomial(hi) < 0)) throw NumericalFailure("polynomial root is not bracketed");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double pm = conjecture_polynomial(mid);
    if (std::abs(pm) < tol * 1e-3 || mid <= lo || mid >= hi) return mid;
    if ((pm < 0) == (plo < 0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

/**
 * \brief (q, r) with r4 = r6 = r8 = r9 = r10 = q and r2 = r5 = r closing both interior disks at radius 1 and q.
 *
 * For each q the disk-4 and disk-7 equations each give r; the two curves are
 * intersected by bisection on q.
 */
inline std::pair<double, double> symmetric_ten_disk_radii() {
  auto r_from_4 = [](double q) {
    return bisect_increasing([&](double r) { return triangle_angle(q, 1, 1) + 4 * triangle_angle(q, r, 1) - two_pi; },
                             1e-6, 1e6, "disk 4 equation");
  };
  auto r_from_7 = [](double q) {
    return bisect_increasing([&](double r) { return 3 * triangle_angle(1, q, q) + 4 * triangle_angle(1, q, r) - two_pi; },
                             1e-6, 1e6, "disk 7 equation");
  };
  const double q = bisect_increasing([&](double x) { return r_from_4(x) - r_from_7(x); }, 0.6, 0.8, "symmetric radii");
  return {q, r_from_4(q)};
}

inline PlanarEmbeddedGraph ten_disk_graph() {
  return graph_from_triangles(10, {{2, 1, 4}, {1, 3, 4}, {3, 5, 4}, {5, 7, 4}, {7, 2, 4},
                                   {5, 6, 7}, {6, 8, 7}, {8, 9, 7}, {9, 10, 7}, {10, 2, 7}});
}

inline PlanarEmbeddedGraph fifteen_disk_graph() {
  const std::map<int, VertexId> a{{1, 1}, {2, 2}, {3, 3}}, o{{1, 4}, {2, 5}, {3, 6}};
  const std::map<int, VertexId> b{{1, 11}, {2, 14}, {3, 8}}, f{{1, 10}, {2, 15}, {3, 7}}, g{{1, 12}, {2, 13}, {3, 9}};
  std::vector<Triangle> tris{{1, 2, 3}};
  for (int k = 1; k <= 3; ++k) {
    const int k1 = k % 3 + 1;
    const int tip = k1 % 3 + 1;
    tris.push_back({a.at(k), o.at(tip), a.at(k1)});
    tris.push_back({a.at(k), b.at(k), f.at(tip)});
    tris.push_back({a.at(k), f.at(tip), o.at(tip)});
    tris.push_back({o.at(tip), f.at(tip), g.at(tip)});
    tris.push_back({o.at(tip), g.at(tip), a.at(k1)});
    tris.push_back({a.at(k1), g.at(tip), b.at(k1)});
  }
  return graph_from_triangles(15, tris);
}

inline ConstraintPartition tagged(int n, const std::vector<VertexId>& dec, const std::vector<VertexId>& inc,
                                  const std::vector<VertexId>& fixed) {
  ConstraintPartition p(n, RadiusTag::Free);
  for (VertexId v : dec) p.set(v, RadiusTag::Decrease);
  for (VertexId v : inc) p.set(v, RadiusTag::Increase);
  for (VertexId v : fixed) p.set(v, RadiusTag::Fixed);
  return p;
}

inline Packing solved(const PlanarEmbeddedGraph& g, const std::map<VertexId, double>& boundary) {
  LayoutProblem problem{g, boundary, 100000, 1e-12, std::nullopt};
  return layout(problem);
}

}  // namespace detail

/** \brief Names accepted by build_case. */
inline std::vector<std::string> case_names() {
  return {"flower4", "prestress10", "general10", "prestress15", "sumr27", "fernique_ratio"};
}

/** \brief Builds a catalogued instance by name. */
inline CaseRecord build_case(const std::string& name) {
  CaseRecord rec;
  rec.name = name;
  using F = FactSource;
  if (name == "flower4") {
    rec.graph = graph_from_triangles(5, {{5, 1, 4}, {5, 4, 3}, {5, 3, 2}, {5, 2, 1}});
    const double s = std::sqrt(2.0) - 1.0;
    rec.packing = Packing({{1, 1, 1}, {1, -1, 1}, {-1, -1, 1}, {-1, 1, 1}, {0, 0, s}});
    rec.partition = detail::tagged(5, {1, 2, 3, 4}, {5}, {});
    rec.construction = "explicit coordinates: unit disks at (1,1), (1,-1), (-1,-1), (-1,1) around a disk of radius sqrt(2)-1";
    rec.facts = {{"n", "5", F::Stated},           {"m", "8", F::Stated},       {"kernel_Re", "3", F::Stated},
                 {"cokernel_Re", "1", F::Stated}, {"rigid", "true", F::Stated}, {"boundary_count", "4", F::Stated}};
  } else if (name == "prestress10") {
    rec.graph = detail::ten_disk_graph();
    const auto [q, r] = detail::symmetric_ten_disk_radii();
    rec.packing = detail::solved(*rec.graph, {{1, 1.0}, {3, 1.0}, {2, r}, {5, r}, {6, q}, {8, q}, {9, q}, {10, q}});
    rec.partition = detail::tagged(10, {1, 3, 7}, {4, 6, 8, 9, 10}, {});
    rec.construction = "layout from boundary radii r1=r3=1, r2=r5=r, r6=r8=r9=r10=q, with (q, r) closing disk 4 at "
                       "radius q and disk 7 at radius 1";
    rec.facts = {{"n", "10", F::Stated},          {"m", "19", F::Derived},
                 {"boundary_count", "8", F::Stated}, {"kernel_Re", "4", F::Stated},
                 {"rigid", "false", F::Stated},   {"flex_dim", "1", F::Stated},
                 {"blocked", "true", F::Stated},  {"prestress_stable", "true", F::Stated},
                 {"flex_support", "2,5", F::Stated}};
  } else if (name == "general10") {
    rec.graph = detail::ten_disk_graph();
    rec.packing = detail::solved(*rec.graph, {{1, 1.0}, {2, 0.9}, {3, 1.1}, {5, 0.95},
                                              {6, 0.7}, {8, 0.75}, {9, 0.65}, {10, 0.8}});
    rec.partition = detail::tagged(10, {}, {}, {2, 4, 5, 6, 8, 9, 10});
    rec.construction = "same graph as prestress10, layout from generic boundary radii "
                       "r1=1, r2=0.9, r3=1.1, r5=0.95, r6=0.7, r8=0.75, r9=0.65, r10=0.8";
    rec.facts = {{"n", "10", F::Stated},
                 {"independent", "2,4,5,6,8,9,10", F::Stated},
                 {"dependent", "2,4,5,6,7,8,9,10", F::Stated},
                 {"maximal", "1,2,4,5,6,8,9,10", F::Stated},
                 {"maximal_size", "8", F::Derived},
                 {"rigid", "false", F::Stated}};
  } else if (name == "prestress15") {
    rec.graph = detail::fifteen_disk_graph();
    std::map<VertexId, double> boundary;
    for (VertexId v : {7, 8, 9, 10, 11, 12, 13, 14, 15}) boundary[v] = 1.0;
    rec.packing = detail::solved(*rec.graph, boundary);
    rec.partition = detail::tagged(15, {1, 2, 3}, {4, 5, 6, 8, 11, 14}, {});
    rec.construction = "threefold symmetric triangulated disk: inner triangle 1,2,3, tips 4,5,6, boundary ring "
                       "11,10,12,14,15,13,8,7,9 of unit disks";
    rec.facts = {{"n", "15", F::Construction},       {"m", "33", F::Construction},
                 {"boundary_count", "9", F::Construction}, {"kernel_Re", "4", F::Derived},
                 {"flex_dim", "1", F::Stated},        {"flex_grows", "7,10,15", F::Stated},
                 {"flex_shrinks", "9,12,13", F::Stated}, {"blocked", "true", F::Stated},
                 {"prestress_stable", "true", F::Stated}};
  } else if (name == "sumr27") {
    rec.graph = random_triangulated_disk(27, 10, 27);
    std::map<VertexId, double> boundary;
    for (int v = 1; v <= 27; ++v)
      if (rec.graph->is_boundary(v)) boundary[v] = 1.0;
    rec.packing = detail::solved(*rec.graph, boundary);
    ConstraintPartition p(27, RadiusTag::Free);
    for (const auto& [v, r] : boundary) p.set(v, RadiusTag::Decrease);
    rec.partition = p;
    rec.construction = "fixed-seed triangulated disk with 27 disks, 17 of them unit disks on the boundary; "
                       "reproduces the counts only";
    rec.facts = {{"n", "27", F::Stated}, {"m", "61", F::Stated}, {"dof", "17", F::Stated},
                 {"boundary_count", "17", F::Derived}};
  } else if (name == "fernique_ratio") {
    rec.scalar = conjecture_ratio_root();
    rec.construction = "real root in (0.6, 0.7) of 89x^8+1344x^7+4008x^6-464x^5-2410x^4+176x^3+296x^2-96x+1";
    rec.facts = {{"root_approx", "0.651", F::Stated}};
  } else {
    throw InvalidInput("unknown case '" + name + "'");
  }
  return rec;
}

}  // namespace packrig

#endif  // PACKRIG_CASEBOOK_HPP
