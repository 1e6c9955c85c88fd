#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "support.hpp"

using namespace packrig;
using packrig::testing::cached_case;

namespace {

std::vector<VertexId> subset_of(unsigned mask, int n) {
  std::vector<VertexId> s;
  for (int v = 1; v <= n; ++v)
    if (mask & (1u << (v - 1))) s.push_back(v);
  return s;
}

std::vector<VertexId> ids(std::initializer_list<VertexId> l) { return l; }

}  // namespace

TEST(Matroid, TenDiskStatedMemberships) {
  const auto& c = cached_case("general10");
  const auto s = ids({2, 4, 5, 6, 8, 9, 10});
  EXPECT_EQ(independence(*c.graph, *c.packing, s), Independence::Independent);
  EXPECT_TRUE(is_independent(*c.graph, *c.packing, s));
  EXPECT_FALSE(is_maximal(*c.graph, *c.packing, s));
  EXPECT_EQ(independence(*c.graph, *c.packing, ids({2, 4, 5, 6, 7, 8, 9, 10})), Independence::Dependent);
  const auto m = ids({1, 2, 4, 5, 6, 8, 9, 10});
  EXPECT_TRUE(is_independent(*c.graph, *c.packing, m));
  EXPECT_TRUE(is_maximal(*c.graph, *c.packing, m));
  EXPECT_EQ(radius_set_rank(*c.graph, *c.packing, s), 26);
}

TEST(Matroid, RadiusSevenIsDeterminedByTheRest) {
  const auto& c = cached_case("general10");
  const auto s = ids({2, 4, 5, 6, 8, 9, 10});
  auto with7 = s;
  with7.push_back(7);
  EXPECT_EQ(radius_set_rank(*c.graph, *c.packing, with7), radius_set_rank(*c.graph, *c.packing, s));
}

TEST(Matroid, EmptyAndFullSets) {
  const auto& c = cached_case("general10");
  EXPECT_TRUE(is_independent(*c.graph, *c.packing, {}));
  EXPECT_FALSE(is_maximal(*c.graph, *c.packing, {}));
  const auto all = subset_of((1u << 10) - 1, 10);
  EXPECT_FALSE(is_independent(*c.graph, *c.packing, all));
  EXPECT_TRUE(is_maximal(*c.graph, *c.packing, all));
  EXPECT_EQ(radius_set_rank(*c.graph, *c.packing, all), 27);
}

TEST(Matroid, RejectsBadSets) {
  const auto& c = cached_case("general10");
  EXPECT_THROW(is_independent(*c.graph, *c.packing, {1, 1}), InvalidInput);
  EXPECT_THROW(is_independent(*c.graph, *c.packing, {11}), InvalidInput);
  EXPECT_THROW(greedy_min_cost_set(*c.graph, *c.packing, std::vector<double>(9, 1.0)), InvalidInput);
  EXPECT_THROW(greedy_min_cost_set(*c.graph, *c.packing, std::vector<double>(10, -1.0)), InvalidInput);
}

TEST(Matroid, GreedyWithUnitCosts) {
  const auto& c = cached_case("general10");
  const GreedyResult g = greedy_min_cost_set(*c.graph, *c.packing, std::vector<double>(10, 1.0));
  EXPECT_EQ(g.set.members, ids({1, 2, 3, 4, 5, 6, 8, 9}));
  EXPECT_EQ(g.set.rank, 27);
  EXPECT_DOUBLE_EQ(g.total_cost, 8.0);
  EXPECT_TRUE(g.indeterminate.empty());
}

TEST(Matroid, FreeDisksAreTakenFirst) {
  const auto& c = cached_case("general10");
  std::vector<double> cost(10, 1.0);
  for (VertexId v : {2, 4, 5, 6, 8, 9, 10}) cost[v - 1] = 0.0;
  const GreedyResult g = greedy_min_cost_set(*c.graph, *c.packing, cost);
  EXPECT_EQ(g.set.members.size(), 8u);
  EXPECT_DOUBLE_EQ(g.total_cost, 1.0);
  for (VertexId v : {2, 4, 5, 6, 8, 9, 10})
    EXPECT_NE(std::find(g.set.members.begin(), g.set.members.end(), v), g.set.members.end());
}

TEST(Matroid, GreedyMatchesExhaustiveSearch) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0;
  for (int t = 0; tested < 10 && t < 40; ++t) {
    const int n = 6 + t % 7;
    const auto inst = packrig::testing::random_instance(n, 1 + t % (n - 5), 300 + static_cast<std::uint64_t>(t));
    if (!bar_framework_rigid(inst.graph, inst.packing)) continue;
    ++tested;
    std::vector<double> cost(static_cast<std::size_t>(n));
    for (auto& x : cost) x = u(rng);
    const GreedyResult g = greedy_min_cost_set(inst.graph, inst.packing, cost);
    const int size = 3 * n - inst.graph.edge_count() - 3;
    EXPECT_EQ(static_cast<int>(g.set.members.size()), size);
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      const auto s = subset_of(mask, n);
      if (!is_independent(inst.graph, inst.packing, s)) continue;
      if (is_maximal(inst.graph, inst.packing, s)) {
        EXPECT_EQ(static_cast<int>(s.size()), size) << "instance " << t;
        double total = 0.0;
        for (VertexId v : s) total += cost[v - 1];
        best = std::min(best, total);
      }
    }
    EXPECT_NEAR(g.total_cost, best, 1e-12) << "instance " << t;
  }
  EXPECT_EQ(tested, 10);
}

TEST(Matroid, HereditaryAndExchange) {
  const auto& c = cached_case("general10");
  const int n = 10;
  std::vector<unsigned> independent;
  for (unsigned mask = 0; mask < (1u << n); ++mask)
    if (is_independent(*c.graph, *c.packing, subset_of(mask, n))) independent.push_back(mask);
  const auto is_ind = [&](unsigned m) { return std::binary_search(independent.begin(), independent.end(), m); };
  for (unsigned m : independent)
    for (int v = 0; v < n; ++v)
      if (m & (1u << v)) {
        EXPECT_TRUE(is_ind(m & ~(1u << v)));
      }
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    const unsigned a = independent[rng() % independent.size()];
    const unsigned b = independent[rng() % independent.size()];
    if (__builtin_popcount(a) >= __builtin_popcount(b)) continue;
    bool exchanged = false;
    for (int v = 0; v < n && !exchanged; ++v)
      if ((b & (1u << v)) && !(a & (1u << v))) exchanged = is_ind(a | (1u << v));
    EXPECT_TRUE(exchanged);
  }
}

TEST(Matroid, TrackerAgreesWithFullRank) {
  const auto& c = cached_case("general10");
  const Packing unit = detail::normalized(*c.packing);
  detail::RowSpaceTracker tracker(detail::rigidity_matrix_unchecked(*c.graph, unit).matrix, 1e-9);
  std::vector<VertexId> taken;
  for (VertexId v = 1; v <= 10; ++v) {
    const int before = tracker.rank();
    const Independence ind = tracker.try_add(column(v, Coord::R));
    if (ind == Independence::Independent) taken.push_back(v);
    EXPECT_EQ(tracker.rank(), radius_set_rank(*c.graph, *c.packing, taken));
    EXPECT_EQ(tracker.rank() - before, ind == Independence::Independent ? 1 : 0);
  }
}

TEST(Matroid, GreedyNeedsRigidBarFramework) {
  EXPECT_TRUE(bar_framework_rigid(PlanarEmbeddedGraph({{2}, {1}}, {true, true}), Packing({{0, 0, 1}, {2, 0, 1}})));
  const PlanarEmbeddedGraph hinge({{2}, {1, 3}, {2}}, {true, true, true});
  const Packing p({{0, 0, 1}, {2, 0, 1}, {4, 0, 1}});
  EXPECT_FALSE(bar_framework_rigid(hinge, p));
  EXPECT_THROW(greedy_min_cost_set(hinge, p, {1.0, 1.0, 1.0}), InvalidInput);
}
