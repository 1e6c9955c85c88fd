#ifndef PACKRIG_TESTS_SUPPORT_HPP
#define PACKRIG_TESTS_SUPPORT_HPP

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "packrig/packrig.hpp"

namespace packrig::testing {

/** \brief Casebook records are built once per test binary. */
inline const CaseRecord& cached_case(const std::string& name) {
  static std::map<std::string, CaseRecord> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, build_case(name)).first;
  return it->second;
}

struct Instance {
  PlanarEmbeddedGraph graph;
  Packing packing;
};

/**
 * \brief Random simple triangulated disk laid out from random boundary radii in [0.5, 2].
 *
 * A boundary disk whose corner angles reach 2 pi cannot be laid out in the
 * plane; its radius is enlarged by half until every boundary disk fits.
 */
inline Instance random_instance(int n, int interior, std::uint64_t seed) {
  PlanarEmbeddedGraph g = random_triangulated_disk(n, interior, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> radius(0.5, 2.0);
  std::map<VertexId, double> boundary;
  for (int v = 1; v <= n; ++v)
    if (g.is_boundary(v)) boundary[v] = radius(rng);
  const TriangulationInfo info = analyze_triangulation(g);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const LayoutProblem problem{g, boundary, 100000, 1e-12, std::nullopt};
    const std::vector<double> radii = solve_interior_radii(problem).radii;
    std::vector<double> corner(static_cast<std::size_t>(n), 0.0);
    for (const Triangle& t : info.triangles)
      for (int k = 0; k < 3; ++k)
        corner[t[k] - 1] += triangle_angle(radii[t[k] - 1], radii[t[(k + 1) % 3] - 1], radii[t[(k + 2) % 3] - 1]);
    bool fits = true;
    for (auto& [v, r] : boundary)
      if (corner[v - 1] > two_pi - 0.05) {
        r *= 1.5;
        fits = false;
      }
    if (fits) return {g, place_centers(g, radii)};
  }
  throw NumericalFailure("random instance could not be laid out");
}

/** \brief Uniformly random tag per disk. */
inline ConstraintPartition random_partition(int n, std::mt19937_64& rng) {
  ConstraintPartition p(n, RadiusTag::Free);
  for (int v = 1; v <= n; ++v) p.set(v, static_cast<RadiusTag>(rng() % 4));
  return p;
}

inline Packing flower4_packing() { return *cached_case("flower4").packing; }

/** \brief Largest entry of |a - b| after optimally rotating and translating the centers of b onto a. */
inline double distance_modulo_isometry(const Packing& a, const Packing& b) {
  const int n = a.size();
  Eigen::MatrixXd pa(2, n), pb(2, n);
  for (int v = 1; v <= n; ++v) {
    pa.col(v - 1) << a.disk(v).x, a.disk(v).y;
    pb.col(v - 1) << b.disk(v).x, b.disk(v).y;
  }
  const Eigen::Vector2d ca = pa.rowwise().mean();
  const Eigen::Vector2d cb = pb.rowwise().mean();
  pa.colwise() -= ca;
  pb.colwise() -= cb;
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(pa * pb.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix2d rot = svd.matrixU() * svd.matrixV().transpose();
  if (rot.determinant() < 0) {
    Eigen::Matrix2d d = Eigen::Matrix2d::Identity();
    d(1, 1) = -1;
    rot = svd.matrixU() * d * svd.matrixV().transpose();
  }
  double worst = ((rot * pb) - pa).cwiseAbs().maxCoeff();
  for (int v = 1; v <= n; ++v) worst = std::max(worst, std::abs(a.disk(v).r - b.disk(v).r));
  return worst;
}

/** \brief Same graph and packing with vertex v renamed to perm[v-1]. */
inline Instance relabeled(const PlanarEmbeddedGraph& g, const Packing& p, const std::vector<VertexId>& perm) {
  const int n = g.vertex_count();
  std::vector<std::vector<VertexId>> rot(static_cast<std::size_t>(n));
  std::vector<bool> boundary(static_cast<std::size_t>(n));
  std::vector<Disk> disks(static_cast<std::size_t>(n));
  for (int v = 1; v <= n; ++v) {
    const VertexId w = perm[v - 1];
    for (VertexId u : g.rotation(v)) rot[w - 1].push_back(perm[u - 1]);
    boundary[w - 1] = g.is_boundary(v);
    disks[w - 1] = p.disk(v);
  }
  return {PlanarEmbeddedGraph(rot, boundary), Packing(disks)};
}

inline ConstraintPartition relabeled(const ConstraintPartition& part, const std::vector<VertexId>& perm) {
  ConstraintPartition out(part.size(), RadiusTag::Free);
  for (int v = 1; v <= part.size(); ++v) out.set(perm[v - 1], part.tag(v));
  return out;
}

}  // namespace packrig::testing

#endif  // PACKRIG_TESTS_SUPPORT_HPP
