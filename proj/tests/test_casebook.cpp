#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support.hpp"

using namespace packrig;
using packrig::testing::cached_case;

namespace {

std::string joined(const std::vector<VertexId>& ids) {
  std::ostringstream out;
  for (std::size_t k = 0; k < ids.size(); ++k) out << (k ? "," : "") << ids[k];
  return out.str();
}

std::vector<VertexId> parse_ids(const std::string& s) {
  std::vector<VertexId> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

/** The first analyzed flex, oriented so its lowest-id moving disk grows. */
FlexVector oriented_flex(const SecondOrderReport& rep) {
  const FlexVector& f = rep.verdicts.front().flex;
  const double scale = f.values().cwiseAbs().maxCoeff();
  for (int v = 1; v <= f.vertex_count(); ++v)
    if (std::abs(f.r(v)) > 1e-6 * scale) return f.r(v) > 0 ? f : FlexVector(-f.values());
  return f;
}

std::vector<VertexId> moving(const FlexVector& f, int sign) {
  std::vector<VertexId> out;
  double scale = 0.0;
  for (int v = 1; v <= f.vertex_count(); ++v) scale = std::max(scale, std::abs(f.r(v)));
  for (int v = 1; v <= f.vertex_count(); ++v)
    if (sign * f.r(v) > 1e-6 * scale) out.push_back(v);
  return out;
}

/** Recomputes one catalogued fact from the instance by running the analyses. */
std::string observe(const CaseRecord& c, const std::string& key) {
  const auto& g = *c.graph;
  const auto& p = *c.packing;
  const auto& part = *c.partition;
  const auto tf = [](bool b) { return std::string(b ? "true" : "false"); };
  if (key == "n") return std::to_string(g.vertex_count());
  if (key == "m") return std::to_string(g.edge_count());
  if (key == "boundary_count") return std::to_string(g.boundary_count());
  if (key == "dof") return std::to_string(3 * g.vertex_count() - g.edge_count() - 3);
  if (key == "kernel_Re") return std::to_string(flex_space_report(g, p, part).dim_kernel_Re);
  if (key == "cokernel_Re") return std::to_string(flex_space_report(g, p, part).cokernel_Re);
  if (key == "rigid") return tf(is_infinitesimally_rigid(g, p, part).rigid);
  if (key == "independent") return is_independent(g, p, parse_ids(*c.fact(key))) ? *c.fact(key) : "";
  if (key == "dependent") return is_independent(g, p, parse_ids(*c.fact(key))) ? "" : *c.fact(key);
  if (key == "maximal") {
    const auto s = parse_ids(*c.fact(key));
    return is_independent(g, p, s) && is_maximal(g, p, s) ? *c.fact(key) : "";
  }
  if (key == "maximal_size")
    return std::to_string(greedy_min_cost_set(g, p, std::vector<double>(g.vertex_count(), 1.0)).set.members.size());
  const SecondOrderReport rep = second_order_analysis(g, p, part);
  if (key == "flex_dim") return std::to_string(rep.flex_dim);
  if (key == "prestress_stable") return tf(rep.prestress_stable);
  if (key == "blocked") {
    bool all = !rep.verdicts.empty();
    for (const auto& v : rep.verdicts) all = all && v.blocked();
    return tf(all);
  }
  if (rep.verdicts.empty()) return "no flex";
  const FlexVector f = oriented_flex(rep);
  if (key == "flex_support") {
    auto s = moving(f, 1);
    const auto neg = moving(f, -1);
    s.insert(s.end(), neg.begin(), neg.end());
    std::sort(s.begin(), s.end());
    return joined(s);
  }
  if (key == "flex_grows") return joined(moving(f, 1));
  if (key == "flex_shrinks") return joined(moving(f, -1));
  return "unknown key " + key;
}

class CaseFacts : public ::testing::TestWithParam<std::string> {};

}  // namespace

TEST_P(CaseFacts, EveryFactIsReproduced) {
  const CaseRecord& c = cached_case(GetParam());
  ASSERT_TRUE(c.has_instance());
  EXPECT_TRUE(validate_packing(*c.graph, *c.packing).ok());
  EXPECT_TRUE(is_simple_triangulated(*c.graph));
  EXPECT_FALSE(c.construction.empty());
  for (const ExpectedFact& fact : c.facts) {
    EXPECT_EQ(observe(c, fact.key), fact.value) << c.name << ": " << fact.key;
  }
}

INSTANTIATE_TEST_SUITE_P(Cases, CaseFacts,
                         ::testing::Values("flower4", "prestress10", "general10", "prestress15", "sumr27"));

TEST(Casebook, NamesAndScalarCase) {
  EXPECT_EQ(case_names().size(), 6u);
  const CaseRecord r = build_case("fernique_ratio");
  EXPECT_FALSE(r.has_instance());
  ASSERT_TRUE(r.scalar.has_value());
  EXPECT_NEAR(*r.scalar, std::stod(*r.fact("root_approx")), 1e-3);
  EXPECT_THROW(build_case("nonesuch"), InvalidInput);
  EXPECT_FALSE(r.fact("nonesuch").has_value());
}

TEST(Casebook, TenDiskRadiiAreSymmetric) {
  const auto& c = cached_case("prestress10");
  const auto [q, r] = detail::symmetric_ten_disk_radii();
  const Packing& p = *c.packing;
  EXPECT_NEAR(p.disk(4).r, q, 1e-10);
  EXPECT_NEAR(p.disk(7).r, 1.0, 1e-10);
  EXPECT_NEAR(p.disk(2).r, r, 1e-15);
  EXPECT_NEAR(min_r5_contour(q, p.disk(2).r, p.disk(5).r), 0.0, 1e-9);
  EXPECT_NEAR(max_r5_contour(q, p.disk(2).r, p.disk(5).r), 0.0, 1e-9);
}

TEST(Casebook, ClosedFormsMatchBisection) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uq(0.6, 0.8), ur(0.7, 1.3);
  for (int k = 0; k < 20; ++k) {
    const double q = uq(rng);
    const double r2 = ur(rng);
    EXPECT_NEAR(min_r5_closed_form(q, r2), min_r5(q, r2), 1e-10) << q << " " << r2;
    EXPECT_NEAR(max_r5_closed_form(q, r2), max_r5(q, r2), 1e-10) << q << " " << r2;
    EXPECT_NEAR(min_r5_contour(q, r2, min_r5(q, r2)), 0.0, 1e-12);
    EXPECT_NEAR(max_r5_contour(q, r2, max_r5(q, r2)), 0.0, 1e-12);
  }
  EXPECT_THROW(min_r5(0.0, 1.0), InvalidInput);
}

TEST(Casebook, GapHasDoubleRootAtSymmetricRadii) {
  const auto [q, r] = detail::symmetric_ten_disk_radii();
  const GapReport g = gap_analysis(q, r - 0.2, r + 0.2);
  EXPECT_NEAR(g.r2_star, r, 1e-4);
  EXPECT_LT(std::abs(g.gap), 1e-6);
  EXPECT_LT(std::abs(g.first_derivative), 1e-4);
  EXPECT_GT(g.second_derivative, 0.0);
  EXPECT_GT(gap(q, g.r2_star + 0.05), 0.0);
  EXPECT_GT(gap(q, g.r2_star - 0.05), 0.0);
  EXPECT_THROW(gap_analysis(q, r + 0.01, r + 0.2), InvalidInput);
}

TEST(Casebook, ConjectureRoot) {
  const double x = conjecture_ratio_root();
  EXPECT_GT(x, 0.650);
  EXPECT_LT(x, 0.652);
  EXPECT_LT(std::abs(conjecture_polynomial(x)), 1e-12);
  int changes = 0;
  double prev = conjecture_polynomial(0.6);
  for (int k = 1; k <= 1000; ++k) {
    const double cur = conjecture_polynomial(0.6 + 0.1 * k / 1000.0);
    if ((cur < 0) != (prev < 0)) ++changes;
    prev = cur;
  }
  EXPECT_EQ(changes, 1);
  EXPECT_DOUBLE_EQ(conjecture_polynomial(0.0), 1.0);
  EXPECT_DOUBLE_EQ(conjecture_polynomial(1.0), 89 + 1344 + 4008 - 464 - 2410 + 176 + 296 - 96 + 1);
}
