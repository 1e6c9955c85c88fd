#ifndef PACKRIG_CORE_HPP
#define PACKRIG_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace packrig {

/** \brief Base class of every error raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** \brief Input that violates a documented precondition (bad ids, sizes, radii). */
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/** \brief A numerical routine could not produce a trustworthy answer. */
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/** \brief Vertex ids are dense integers 1..n. */
using VertexId = int;

/** \brief Unordered edge stored with u < v. */
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/** \brief Planar graph with a counterclockwise rotation system and boundary flags. */
class PlanarEmbeddedGraph {
 public:
  PlanarEmbeddedGraph() = default;

  /**
   * \brief Builds the graph from per-vertex counterclockwise neighbor lists.
   *
   * rotation[v-1] lists the neighbors of v; edges are implied and must be
   * symmetric. The rotation system must describe a connected genus-0 embedding.
   */
  PlanarEmbeddedGraph(std::vector<std::vector<VertexId>> rotation, std::vector<bool> boundary)
      : rotation_(std::move(rotation)), boundary_(std::move(boundary)) {
    const int n = static_cast<int>(rotation_.size());
    if (n < 1) throw InvalidInput("graph must have at least one vertex");
    if (static_cast<int>(boundary_.size()) != n)
      throw InvalidInput("boundary flag count does not match vertex count");
    for (int v = 1; v <= n; ++v) {
      const auto& nbrs = rotation_[v - 1];
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const VertexId u = nbrs[k];
        if (u < 1 || u > n)
          throw InvalidInput("rotation of vertex " + std::to_string(v) + " names unknown vertex " +
                             std::to_string(u));
        if (u == v) throw InvalidInput("self-loop at vertex " + std::to_string(v));
        if (std::count(nbrs.begin(), nbrs.end(), u) != 1)
          throw InvalidInput("duplicate neighbor " + std::to_string(u) + " in rotation of vertex " +
                             std::to_string(v));
        const auto& back = rotation_[u - 1];
        if (std::find(back.begin(), back.end(), v) == back.end())
          throw InvalidInput("edge (" + std::to_string(v) + "," + std::to_string(u) +
                             ") is listed at vertex " + std::to_string(v) + " only");
        if (v < u) edges_.push_back({v, u});
      }
    }
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t e = 0; e < edges_.size(); ++e)
      edge_index_.emplace(std::make_pair(edges_[e].u, edges_[e].v), static_cast<int>(e));
    check_connected();
    faces_ = trace_faces();
    const int f = static_cast<int>(faces_.size());
    if (n - edge_count() + f != 2)
      throw InvalidInput("rotation system is not a planar embedding (Euler characteristic " +
                         std::to_string(n - edge_count() + f) + ")");
  }

  int vertex_count() const { return static_cast<int>(rotation_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  const std::vector<VertexId>& rotation(VertexId v) const { return rotation_.at(checked(v) - 1); }
  const std::vector<std::vector<VertexId>>& rotations() const { return rotation_; }
  int degree(VertexId v) const { return static_cast<int>(rotation(v).size()); }

  bool is_boundary(VertexId v) const { return boundary_.at(checked(v) - 1); }
  const std::vector<bool>& boundary_flags() const { return boundary_; }
  int boundary_count() const { return static_cast<int>(std::count(boundary_.begin(), boundary_.end(), true)); }

  /** \brief Row index of edge {a,b} in edges(), or -1 if absent. */
  int edge_index(VertexId a, VertexId b) const {
    if (a > b) std::swap(a, b);
    auto it = edge_index_.find({a, b});
    return it == edge_index_.end() ? -1 : it->second;
  }
  bool adjacent(VertexId a, VertexId b) const { return edge_index(a, b) >= 0; }

  /**
   * \brief Faces of the embedding, each a cyclic vertex sequence.
   *
   * The face to the left of dart (u,v) continues with (v,w) where w precedes u
   * in the counterclockwise rotation at v; bounded faces come out counterclockwise.
   */
  const std::vector<std::vector<VertexId>>& faces() const { return faces_; }

  VertexId checked(VertexId v) const {
    if (v < 1 || v > vertex_count()) throw InvalidInput("unknown vertex id " + std::to_string(v));
    return v;
  }

 private:
  void check_connected() const {
    const int n = vertex_count();
    std::vector<bool> seen(n, false);
    std::vector<VertexId> stack{1};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (VertexId u : rotation_[v - 1])
        if (!seen[u - 1]) {
          seen[u - 1] = true;
          ++reached;
          stack.push_back(u);
        }
    }
    if (reached != n) throw InvalidInput("graph is not connected");
  }

  std::vector<std::vector<VertexId>> trace_faces() const {
    std::vector<std::vector<VertexId>> faces;
    if (edges_.empty()) {
      faces.push_back({1});
      return faces;
    }
    std::map<std::pair<VertexId, VertexId>, bool> used;
    for (int v = 1; v <= vertex_count(); ++v)
      for (VertexId u : rotation_[v - 1]) used[{v, u}] = false;
    for (auto& [dart, done] : used) {
      if (done) continue;
      std::vector<VertexId> face;
      VertexId a = dart.first;
      VertexId b = dart.second;
      while (!used[{a, b}]) {
        used[{a, b}] = true;
        face.push_back(a);
        const auto& rot = rotation_[b - 1];
        const auto pos = std::find(rot.begin(), rot.end(), a) - rot.begin();
        const VertexId c = rot[(pos + rot.size() - 1) % rot.size()];
        a = b;
        b = c;
      }
      faces.push_back(std::move(face));
    }
    return faces;
  }

  std::vector<std::vector<VertexId>> rotation_;
  std::vector<bool> boundary_;
  std::vector<Edge> edges_;
  std::map<std::pair<VertexId, VertexId>, int> edge_index_;
  std::vector<std::vector<VertexId>> faces_;
};

/** \brief Radius constraint of a disk: V+ (Increase), V- (Decrease), V= (Fixed), V0 (Free). */
enum class RadiusTag { Increase, Decrease, Fixed, Free };

inline char tag_symbol(RadiusTag t) {
  switch (t) {
    case RadiusTag::Increase: return '+';
    case RadiusTag::Decrease: return '-';
    case RadiusTag::Fixed: return '=';
    case RadiusTag::Free: return '0';
  }
  return '?';
}

/** \brief Total assignment of one RadiusTag per vertex. */
class ConstraintPartition {
 public:
  ConstraintPartition() = default;
  explicit ConstraintPartition(std::vector<RadiusTag> tags) : tags_(std::move(tags)) {}
  ConstraintPartition(int n, RadiusTag fill) : tags_(static_cast<std::size_t>(n), fill) {}

  int size() const { return static_cast<int>(tags_.size()); }
  RadiusTag tag(VertexId v) const {
    if (v < 1 || v > size()) throw InvalidInput("unknown vertex id " + std::to_string(v));
    return tags_[v - 1];
  }
  void set(VertexId v, RadiusTag t) {
    if (v < 1 || v > size()) throw InvalidInput("unknown vertex id " + std::to_string(v));
    tags_[v - 1] = t;
  }
  const std::vector<RadiusTag>& tags() const { return tags_; }

  /** \brief Vertices carrying tag t, in increasing id order. */
  std::vector<VertexId> members(RadiusTag t) const {
    std::vector<VertexId> out;
    for (int v = 1; v <= size(); ++v)
      if (tags_[v - 1] == t) out.push_back(v);
    return out;
  }

  /** \brief Same partition with V+ and V- exchanged. */
  ConstraintPartition swapped() const {
    ConstraintPartition out(*this);
    for (auto& t : out.tags_) {
      if (t == RadiusTag::Increase)
        t = RadiusTag::Decrease;
      else if (t == RadiusTag::Decrease)
        t = RadiusTag::Increase;
    }
    return out;
  }

  friend bool operator==(const ConstraintPartition&, const ConstraintPartition&) = default;

 private:
  std::vector<RadiusTag> tags_;
};

/** \brief One disk: center (x, y) and radius r. */
struct Disk {
  double x = 0.0;
  double y = 0.0;
  double r = 1.0;
  friend bool operator==(const Disk&, const Disk&) = default;
};

/** \brief Centers and radii of n disks, jointly the vector p in R^{3n}. */
class Packing {
 public:
  Packing() = default;
  explicit Packing(std::vector<Disk> disks) : disks_(std::move(disks)) {
    for (std::size_t i = 0; i < disks_.size(); ++i) {
      const Disk& d = disks_[i];
      if (!std::isfinite(d.x) || !std::isfinite(d.y) || !std::isfinite(d.r))
        throw InvalidInput("disk " + std::to_string(i + 1) + " has a non-finite coordinate");
      if (!(d.r > 0.0))
        throw InvalidInput("disk " + std::to_string(i + 1) + " has non-positive radius");
    }
  }

  int size() const { return static_cast<int>(disks_.size()); }
  const Disk& disk(VertexId v) const {
    if (v < 1 || v > size()) throw InvalidInput("unknown vertex id " + std::to_string(v));
    return disks_[v - 1];
  }
  const std::vector<Disk>& disks() const { return disks_; }

  std::vector<double> radii() const {
    std::vector<double> r;
    r.reserve(disks_.size());
    for (const Disk& d : disks_) r.push_back(d.r);
    return r;
  }

  double mean_radius() const {
    double s = 0.0;
    for (const Disk& d : disks_) s += d.r;
    return disks_.empty() ? 1.0 : s / static_cast<double>(disks_.size());
  }

  /** \brief Every coordinate multiplied by s. */
  Packing scaled(double s) const {
    std::vector<Disk> out = disks_;
    for (Disk& d : out) {
      d.x *= s;
      d.y *= s;
      d.r *= s;
    }
    return Packing(std::move(out));
  }

  friend bool operator==(const Packing&, const Packing&) = default;

 private:
  std::vector<Disk> disks_;
};

/** \brief Thresholds used by every numerical decision. */
struct AnalysisTolerances {
  double tol_tangency = 1e-8;
  double tol_rank = 1e-9;
  double tol_strict = 1e-6;
  double tol_lp = 1e-7;
  double tol_angle = 1e-12;

  void validate() const {
    if (!(tol_tangency > 0 && tol_rank > 0 && tol_strict > 0 && tol_lp > 0 && tol_angle > 0))
      throw InvalidInput("tolerances must be strictly positive");
    if (!(tol_strict > tol_rank)) throw InvalidInput("tol_strict must exceed tol_rank");
  }
};

/** \brief (x_i-x_j)^2 + (y_i-y_j)^2 - (r_i+r_j)^2 for the pair (a, b). */
inline double tangency_residual(const Packing& packing, VertexId a, VertexId b) {
  const Disk& p = packing.disk(a);
  const Disk& q = packing.disk(b);
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  const double s = p.r + q.r;
  return dx * dx + dy * dy - s * s;
}

enum class ViolationKind { Tangency, Orientation };

struct Violation {
  ViolationKind kind = ViolationKind::Tangency;
  VertexId a = 0;
  VertexId b = 0;
  double residual = 0.0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

/** \brief True iff seq equals ref up to a cyclic shift. */
inline bool same_cycle(const std::vector<VertexId>& seq, const std::vector<VertexId>& ref) {
  if (seq.size() != ref.size()) return false;
  if (seq.empty()) return true;
  const auto start = std::find(ref.begin(), ref.end(), seq[0]);
  if (start == ref.end()) return false;
  const std::size_t off = static_cast<std::size_t>(start - ref.begin());
  for (std::size_t k = 0; k < seq.size(); ++k)
    if (seq[k] != ref[(off + k) % ref.size()]) return false;
  return true;
}

inline void require_sizes(const PlanarEmbeddedGraph& graph, int count, const char* what) {
  if (graph.vertex_count() != count)
    throw InvalidInput(std::string(what) + " size " + std::to_string(count) +
                       " does not match vertex count " + std::to_string(graph.vertex_count()));
}

}  // namespace detail

/**
 * \brief Checks tangency on every edge and counterclockwise neighbor order at every vertex.
 *
 * Tangency is judged relative to (r_i+r_j)^2. Vertices of degree at most two
 * have no cyclic order to check.
 */
inline ValidationReport validate_packing(const PlanarEmbeddedGraph& graph, const Packing& packing,
                                         const AnalysisTolerances& tol = {}) {
  detail::require_sizes(graph, packing.size(), "packing");
  ValidationReport report;
  for (const Edge& e : graph.edges()) {
    const double s = packing.disk(e.u).r + packing.disk(e.v).r;
    const double res = tangency_residual(packing, e.u, e.v);
    if (std::abs(res) > tol.tol_tangency * s * s) {
      std::ostringstream msg;
      msg << "disks " << e.u << " and " << e.v << " are not tangent (relative residual " << res / (s * s)
          << ")";
      report.violations.push_back({ViolationKind::Tangency, e.u, e.v, res / (s * s), msg.str()});
    }
  }
  for (int v = 1; v <= graph.vertex_count(); ++v) {
    const auto& rot = graph.rotation(v);
    if (rot.size() <= 2) continue;
    const Disk& c = packing.disk(v);
    std::vector<std::pair<double, VertexId>> by_angle;
    for (VertexId u : rot) {
      const Disk& d = packing.disk(u);
      by_angle.emplace_back(std::atan2(d.y - c.y, d.x - c.x), u);
    }
    std::sort(by_angle.begin(), by_angle.end());
    std::vector<VertexId> order;
    for (const auto& pr : by_angle) order.push_back(pr.second);
    if (!detail::same_cycle(order, rot)) {
      report.violations.push_back({ViolationKind::Orientation, v, 0, 0.0,
                                   "neighbors of disk " + std::to_string(v) +
                                       " are not in counterclockwise rotation order"});
    }
  }
  return report;
}

/**
 * \brief Angle at the center of the disk of radius x in a mutually tangent triple (x, y, z).
 *
 * Evaluated as 2 atan(sqrt(yz / (x(x+y+z)))), which equals the law-of-cosines
 * form but stays accurate for very thin and very wide triangles.
 */
inline double triangle_angle(double x, double y, double z) {
  if (!(x > 0.0 && y > 0.0 && z > 0.0)) throw InvalidInput("triangle_angle needs positive radii");
  return 2.0 * std::atan(std::sqrt(y * z / (x * (x + y + z))));
}

/** \brief Derivative of triangle_angle with respect to its first argument. */
inline double triangle_angle_dx(double x, double y, double z) {
  const double s = x * (x + y + z);
  const double u = y * z / s;
  const double du = -y * z * (2.0 * x + y + z) / (s * s);
  return du / ((1.0 + u) * std::sqrt(u));
}

/** \brief Sum of triangle angles at interior vertex v for radii indexed by vertex id - 1. */
inline double angle_sum(const PlanarEmbeddedGraph& graph, std::span<const double> radii, VertexId v) {
  detail::require_sizes(graph, static_cast<int>(radii.size()), "radius vector");
  if (graph.is_boundary(v))
    throw InvalidInput("angle sum requested at boundary vertex " + std::to_string(v));
  const auto& rot = graph.rotation(v);
  if (rot.size() < 3) throw InvalidInput("interior vertex " + std::to_string(v) + " has degree below 3");
  double sum = 0.0;
  for (std::size_t k = 0; k < rot.size(); ++k) {
    const VertexId u = rot[k];
    const VertexId w = rot[(k + 1) % rot.size()];
    if (!graph.adjacent(u, w))
      throw InvalidInput("neighbors " + std::to_string(u) + " and " + std::to_string(w) + " of vertex " +
                         std::to_string(v) + " are not tangent");
    sum += triangle_angle(radii[v - 1], radii[u - 1], radii[w - 1]);
  }
  return sum;
}

inline double angle_sum(const PlanarEmbeddedGraph& graph, const Packing& packing, VertexId v) {
  const std::vector<double> r = packing.radii();
  return angle_sum(graph, std::span<const double>(r), v);
}

inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace packrig

#endif  // PACKRIG_CORE_HPP
