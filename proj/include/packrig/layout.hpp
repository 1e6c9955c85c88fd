#ifndef PACKRIG_LAYOUT_HPP
#define PACKRIG_LAYOUT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "packrig/core.hpp"

namespace packrig {

using Triangle = std::array<VertexId, 3>;

/**
 * \brief Graph of a triangulated disk given by counterclockwise triangles on vertices 1..n.
 *
 * Rotations are read off the triangles; a vertex whose incident triangles
 * close up around it is interior, otherwise it is on the boundary.
 */
inline PlanarEmbeddedGraph graph_from_triangles(int n, const std::vector<Triangle>& triangles) {
  std::vector<std::map<VertexId, VertexId>> next(n);
  for (const Triangle& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      const VertexId a = t[k];
      const VertexId b = t[(k + 1) % 3];
      const VertexId c = t[(k + 2) % 3];
      if (a < 1 || a > n || b < 1 || b > n || c < 1 || c > n) throw InvalidInput("triangle names unknown vertex");
      if (!next[a - 1].emplace(b, c).second)
        throw InvalidInput("triangles overlap around vertex " + std::to_string(a));
    }
  }
  std::vector<std::vector<VertexId>> rotation(n);
  std::vector<bool> boundary(n, false);
  for (int v = 1; v <= n; ++v) {
    const auto& nx = next[v - 1];
    if (nx.empty()) throw InvalidInput("vertex " + std::to_string(v) + " is in no triangle");
    std::set<VertexId> targets;
    for (const auto& [from, to] : nx) targets.insert(to);
    VertexId start = nx.begin()->first;
    for (const auto& [from, to] : nx)
      if (!targets.count(from)) {
        start = from;
        boundary[v - 1] = true;
      }
    std::vector<VertexId>& rot = rotation[v - 1];
    VertexId cur = start;
    for (;;) {
      rot.push_back(cur);
      auto it = nx.find(cur);
      if (it == nx.end() || it->second == start) break;
      cur = it->second;
      if (rot.size() > nx.size()) throw InvalidInput("link of vertex " + std::to_string(v) + " is not a path");
    }
    const std::size_t expected = boundary[v - 1] ? nx.size() + 1 : nx.size();
    if (rot.size() != expected) throw InvalidInput("link of vertex " + std::to_string(v) + " is not connected");
  }
  return PlanarEmbeddedGraph(std::move(rotation), std::move(boundary));
}

/** \brief Structure of a triangulated disk read from the face trace. */
struct TriangulationInfo {
  bool simple = false;
  int boundary_count = 0;
  /** Outer boundary in counterclockwise order. */
  std::vector<VertexId> boundary_cycle;
  /** Bounded faces, each counterclockwise. */
  std::vector<Triangle> triangles;
  std::string reason;
};

/**
 * \brief Checks that the graph is a simple triangulated disk.
 *
 * The outer face is the unique face whose vertices are exactly the flagged
 * boundary vertices; every other face must be a triangle, the interior
 * vertices must be edge-connected and every boundary vertex must touch the
 * interior.
 */
inline TriangulationInfo analyze_triangulation(const PlanarEmbeddedGraph& graph) {
  TriangulationInfo info;
  const int n = graph.vertex_count();
  info.boundary_count = graph.boundary_count();
  std::set<VertexId> bset;
  for (int v = 1; v <= n; ++v)
    if (graph.is_boundary(v)) bset.insert(v);
  int outer = -1;
  const auto& faces = graph.faces();
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const std::set<VertexId> fs(faces[f].begin(), faces[f].end());
    if (fs == bset && faces[f].size() == bset.size()) {
      if (outer >= 0) {
        info.reason = "outer face is ambiguous";
        return info;
      }
      outer = static_cast<int>(f);
    }
  }
  if (bset.size() < 3 || outer < 0) {
    info.reason = "boundary flags do not form a face of the embedding";
    return info;
  }
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (static_cast<int>(f) == outer) continue;
    if (faces[f].size() != 3) {
      info.reason = "bounded face of length " + std::to_string(faces[f].size());
      return info;
    }
    info.triangles.push_back({faces[f][0], faces[f][1], faces[f][2]});
  }
  info.boundary_cycle.assign(faces[outer].rbegin(), faces[outer].rend());

  std::vector<VertexId> interior;
  for (int v = 1; v <= n; ++v)
    if (!graph.is_boundary(v)) interior.push_back(v);
  if (interior.empty()) {
    info.reason = "no interior disks";
    return info;
  }
  std::set<VertexId> seen{interior.front()};
  std::vector<VertexId> stack{interior.front()};
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (VertexId u : graph.rotation(v))
      if (!graph.is_boundary(u) && seen.insert(u).second) stack.push_back(u);
  }
  if (seen.size() != interior.size()) {
    info.reason = "interior disks are not edge connected";
    return info;
  }
  for (VertexId b : bset) {
    bool touches = false;
    for (VertexId u : graph.rotation(b)) touches = touches || !graph.is_boundary(u);
    if (!touches) {
      info.reason = "boundary disk " + std::to_string(b) + " does not touch the interior";
      return info;
    }
  }
  info.simple = true;
  return info;
}

inline bool is_simple_triangulated(const PlanarEmbeddedGraph& graph) { return analyze_triangulation(graph).simple; }

/** \brief The angle-sum iteration stopped before every interior residual fell below tolerance. */
class NonConvergence : public NumericalFailure {
 public:
  NonConvergence(const std::string& what, double worst) : NumericalFailure(what), worst_residual(worst) {}
  double worst_residual;
};

/** \brief Boundary radii for a simple triangulated disk plus iteration controls. */
struct LayoutProblem {
  PlanarEmbeddedGraph graph;
  std::map<VertexId, double> boundary_radii;
  int max_iter = 100000;
  double tol_angle = 1e-12;
  /** Starting interior radius; defaults to the mean boundary radius. */
  std::optional<double> initial_interior;
};

struct InteriorSolution {
  std::vector<double> radii;
  int sweeps = 0;
  double worst_residual = 0.0;
};

namespace detail {

inline void check_problem(const LayoutProblem& problem) {
  const TriangulationInfo info = analyze_triangulation(problem.graph);
  if (!info.simple) throw InvalidInput("layout needs a simple triangulated disk: " + info.reason);
  for (int v = 1; v <= problem.graph.vertex_count(); ++v) {
    const bool given = problem.boundary_radii.count(v) > 0;
    if (given != problem.graph.is_boundary(v))
      throw InvalidInput("boundary radii must cover exactly the boundary disks (vertex " + std::to_string(v) + ")");
    if (given && !(problem.boundary_radii.at(v) > 0.0 && std::isfinite(problem.boundary_radii.at(v))))
      throw InvalidInput("boundary radius of disk " + std::to_string(v) + " must be positive");
  }
  if (problem.max_iter < 1 || !(problem.tol_angle > 0.0)) throw InvalidInput("invalid iteration controls");
}

/** \brief Solves angle_sum(x) = 2 pi for one interior radius by safeguarded Newton in log x. */
inline double solve_center_radius(const PlanarEmbeddedGraph& graph, const std::vector<double>& radii, VertexId v,
                                  double lo, double hi) {
  const auto& rot = graph.rotation(v);
  auto eval = [&](double x, double& deriv) {
    double sum = 0.0;
    deriv = 0.0;
    for (std::size_t k = 0; k < rot.size(); ++k) {
      const double y = radii[rot[k] - 1];
      const double z = radii[rot[(k + 1) % rot.size()] - 1];
      sum += triangle_angle(x, y, z);
      deriv += triangle_angle_dx(x, y, z);
    }
    return sum - two_pi;
  };
  double x = std::clamp(radii[v - 1], lo, hi);
  for (int it = 0; it < 200; ++it) {
    double d = 0.0;
    const double f = eval(x, d);
    if (f == 0.0) break;
    if (f > 0.0)
      lo = x;
    else
      hi = x;
    double xn = x * std::exp(-f / (x * d));
    if (!(xn > lo && xn < hi)) xn = std::sqrt(lo * hi);
    const bool done = std::abs(xn - x) <= 4e-16 * x;
    x = xn;
    if (done || hi - lo <= 4e-16 * hi) break;
  }
  return x;
}

}  // namespace detail

/**
 * \brief Interior radii making every interior angle sum 2 pi, by Gauss-Seidel sweeps.
 *
 * Each sweep re-solves every interior radius in id order against its current
 * neighbors; sweeps stop once the largest residual is below tol_angle.
 */
inline InteriorSolution solve_interior_radii(const LayoutProblem& problem) {
  detail::check_problem(problem);
  const PlanarEmbeddedGraph& g = problem.graph;
  const int n = g.vertex_count();
  double mean = 0.0;
  for (const auto& [v, r] : problem.boundary_radii) mean += r;
  mean /= static_cast<double>(problem.boundary_radii.size());
  const double start = problem.initial_interior.value_or(mean);
  if (!(start > 0.0)) throw InvalidInput("initial interior radius must be positive");
  InteriorSolution sol;
  sol.radii.assign(n, start);
  for (const auto& [v, r] : problem.boundary_radii) sol.radii[v - 1] = r;
  const double lo = 1e-9 * mean;
  const double hi = 1e9 * mean;
  auto worst = [&] {
    double w = 0.0;
    for (int v = 1; v <= n; ++v)
      if (!g.is_boundary(v)) w = std::max(w, std::abs(angle_sum(g, std::span<const double>(sol.radii), v) - two_pi));
    return w;
  };
  sol.worst_residual = worst();
  while (sol.worst_residual >= problem.tol_angle) {
    if (sol.sweeps >= problem.max_iter)
      throw NonConvergence("angle-sum iteration did not converge; worst residual " +
                               std::to_string(sol.worst_residual),
                           sol.worst_residual);
    for (int v = 1; v <= n; ++v)
      if (!g.is_boundary(v)) sol.radii[v - 1] = detail::solve_center_radius(g, sol.radii, v, lo, hi);
    ++sol.sweeps;
    sol.worst_residual = worst();
  }
  return sol;
}

/**
 * \brief Centers realizing the radii: disk 1 at the origin, its first rotation neighbor on the +x axis.
 *
 * Triangles are laid out breadth-first from placed edges using tangency
 * distances and triangle angles. Boundary disks whose triangle angles add up
 * to 2 pi or more are rejected, since such radii cannot be laid out in the
 * plane. Throws if the closed-up placement is not tangent within
 * tol_tangency, which means the radii were not converged.
 */
inline Packing place_centers(const PlanarEmbeddedGraph& graph, const std::vector<double>& radii,
                             const AnalysisTolerances& tol = {}) {
  detail::require_sizes(graph, static_cast<int>(radii.size()), "radius vector");
  const TriangulationInfo info = analyze_triangulation(graph);
  if (!info.simple) throw InvalidInput("placement needs a simple triangulated disk: " + info.reason);
  const int n = graph.vertex_count();
  for (double r : radii)
    if (!(r > 0.0)) throw InvalidInput("radii must be positive");
  std::vector<double> corner_sum(n, 0.0);
  for (const Triangle& t : info.triangles)
    for (int k = 0; k < 3; ++k)
      corner_sum[t[k] - 1] += triangle_angle(radii[t[k] - 1], radii[t[(k + 1) % 3] - 1], radii[t[(k + 2) % 3] - 1]);
  for (VertexId v : info.boundary_cycle)
    if (corner_sum[v - 1] >= two_pi)
      throw InvalidInput("boundary disk " + std::to_string(v) + " has angle sum " + std::to_string(corner_sum[v - 1]) +
                         " >= 2 pi, so the layout would overlap itself");
  std::vector<Disk> disks(n);
  std::vector<bool> placed(n, false);
  for (int v = 1; v <= n; ++v) disks[v - 1].r = radii[v - 1];
  const VertexId first = graph.rotation(1).front();
  disks[0].x = disks[0].y = 0.0;
  disks[first - 1].x = radii[0] + radii[first - 1];
  disks[first - 1].y = 0.0;
  placed[0] = placed[first - 1] = true;
  int count = 2;
  bool progress = true;
  while (count < n && progress) {
    progress = false;
    for (const Triangle& t : info.triangles) {
      for (int k = 0; k < 3; ++k) {
        const VertexId a = t[k];
        const VertexId b = t[(k + 1) % 3];
        const VertexId c = t[(k + 2) % 3];
        if (!placed[a - 1] || !placed[b - 1] || placed[c - 1]) continue;
        const Disk& da = disks[a - 1];
        const Disk& db = disks[b - 1];
        const double ang = std::atan2(db.y - da.y, db.x - da.x) + triangle_angle(da.r, db.r, radii[c - 1]);
        const double dist = da.r + radii[c - 1];
        disks[c - 1].x = da.x + dist * std::cos(ang);
        disks[c - 1].y = da.y + dist * std::sin(ang);
        placed[c - 1] = true;
        ++count;
        progress = true;
      }
    }
  }
  if (count < n) throw NumericalFailure("placement could not reach every disk");
  Packing packing(std::move(disks));
  const ValidationReport report = validate_packing(graph, packing, tol);
  if (!report.ok()) throw NumericalFailure("placement inconsistency: " + report.violations.front().message);
  return packing;
}

/** \brief Solves the radii and places the centers. */
inline Packing layout(const LayoutProblem& problem, const AnalysisTolerances& tol = {}) {
  return place_centers(problem.graph, solve_interior_radii(problem).radii, tol);
}

/** \brief Change of every interior radius when one boundary radius grows by delta. */
inline std::map<VertexId, double> monotonicity_probe(const LayoutProblem& problem, VertexId boundary_vertex,
                                                     double delta) {
  if (!problem.graph.is_boundary(boundary_vertex))
    throw InvalidInput("probe vertex " + std::to_string(boundary_vertex) + " is not on the boundary");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw InvalidInput("probe delta must be finite and nonnegative");
  const InteriorSolution base = solve_interior_radii(problem);
  LayoutProblem grown = problem;
  grown.boundary_radii[boundary_vertex] += delta;
  const InteriorSolution moved = solve_interior_radii(grown);
  std::map<VertexId, double> out;
  for (int v = 1; v <= problem.graph.vertex_count(); ++v)
    if (!problem.graph.is_boundary(v)) out[v] = moved.radii[v - 1] - base.radii[v - 1];
  return out;
}

/**
 * \brief Random simple triangulated disk with n vertices of which `interior` are interior.
 *
 * Starts from a wheel around one interior disk and applies three moves that
 * keep every boundary disk touching the edge-connected interior: attach a disk
 * and close its neighbor (boundary size kept), attach disks on both sides of a
 * boundary disk and close it (boundary grows by one), or close a boundary ear
 * (boundary shrinks by one). The result depends only on the seed.
 */
inline PlanarEmbeddedGraph random_triangulated_disk(int n, int interior, std::uint64_t seed) {
  const int boundary = n - interior;
  if (interior < 1 || boundary < 3) throw InvalidInput("need interior >= 1 and n - interior >= 3");
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t k) { return static_cast<std::size_t>(rng() % k); };
  const int k_lo = std::max(3, n + 1 - 2 * interior);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int k = k_lo + static_cast<int>(pick(static_cast<std::size_t>(boundary - k_lo + 1)));
    std::vector<Triangle> tris;
    std::vector<VertexId> ring;
    std::set<std::pair<VertexId, VertexId>> edges;
    auto has_edge = [&](VertexId a, VertexId b) { return edges.count({std::min(a, b), std::max(a, b)}) > 0; };
    auto add_edge = [&](VertexId a, VertexId b) { edges.insert({std::min(a, b), std::max(a, b)}); };
    for (int i = 0; i < k; ++i) {
      const VertexId a = 2 + i;
      const VertexId b = 2 + (i + 1) % k;
      ring.push_back(a);
      tris.push_back({1, a, b});
      add_edge(1, a);
      add_edge(a, b);
    }
    int next = k + 2;
    int verts = k + 1;
    int inner = 1;
    auto grow = [&](std::size_t i) {
      const VertexId u = ring[i];
      const VertexId v = ring[(i + 1) % ring.size()];
      const VertexId x = next++;
      tris.push_back({v, u, x});
      add_edge(u, x);
      add_edge(v, x);
      ring.insert(ring.begin() + static_cast<std::ptrdiff_t>(i + 1), x);
      ++verts;
    };
    auto position = [&](VertexId v) {
      return static_cast<std::size_t>(std::find(ring.begin(), ring.end(), v) - ring.begin());
    };
    auto close = [&](std::size_t i) {
      const VertexId u = ring[i];
      const VertexId v = ring[(i + 1) % ring.size()];
      const VertexId w = ring[(i + 2) % ring.size()];
      tris.push_back({u, w, v});
      add_edge(u, w);
      ring.erase(ring.begin() + static_cast<std::ptrdiff_t>((i + 1) % ring.size()));
      ++inner;
    };
    auto feasible = [](int dn, int di) { return dn >= 0 && di >= 0 && std::max(0, dn - di) <= dn / 2; };
    bool stuck = false;
    while (verts < n || inner < interior) {
      const int dn = n - verts;
      const int di = interior - inner;
      std::vector<int> moves;
      if (feasible(dn - 1, di - 1)) moves.push_back(0);
      if (feasible(dn - 2, di - 1)) moves.push_back(1);
      std::vector<std::size_t> ears;
      if (ring.size() >= 4 && feasible(dn, di - 1))
        for (std::size_t i = 0; i < ring.size(); ++i)
          if (!has_edge(ring[i], ring[(i + 2) % ring.size()])) ears.push_back(i);
      if (!ears.empty()) moves.push_back(2);
      if (moves.empty()) {
        stuck = true;
        break;
      }
      const int move = moves[pick(moves.size())];
      const std::size_t i = pick(ring.size());
      const VertexId v = ring[(i + 1) % ring.size()];
      if (move == 0) {
        grow(i);
        close((position(v) + ring.size() - 1) % ring.size());
      } else if (move == 1) {
        grow(i);
        grow(position(v));
        close((position(v) + ring.size() - 1) % ring.size());
      } else {
        close(ears[pick(ears.size())]);
      }
    }
    if (stuck) continue;
    PlanarEmbeddedGraph g = graph_from_triangles(n, tris);
    if (is_simple_triangulated(g)) return g;
  }
  throw NumericalFailure("could not generate a simple triangulated disk");
}

}  // namespace packrig

#endif  // PACKRIG_LAYOUT_HPP
