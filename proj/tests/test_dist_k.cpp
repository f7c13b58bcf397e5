#include <bucket_trees/dist_k.hpp>
#include <bucket_trees/enumerate.hpp>

#include <gtest/gtest.h>

using namespace bucket_trees;

namespace {
Rational R(std::int64_t p, std::int64_t q = 1) { return make_rational(p, q); }

std::vector<FamilySpec> grid() {
  return {FamilySpec::recursive(1), FamilySpec::recursive(2), FamilySpec::recursive(3), FamilySpec::ary(1, 2),
          FamilySpec::ary(2, 2), FamilySpec::ary(2, 3), FamilySpec::port(1, 1), FamilySpec::port(2, 1),
          FamilySpec::port(2, 2), FamilySpec::port(3, R(1, 2))};
}
}  // namespace

TEST(PmfK, Examples) {
  auto spec = FamilySpec::recursive(2);
  EXPECT_DOUBLE_EQ(pmf_K(spec, 2)[2], 1.0);
  EXPECT_NEAR(pmf_K(spec, 4)[2], 1.0 / 3, 1e-10);
  EXPECT_NEAR(pmf_K(spec, 3)[1], 1.0, 1e-10);
  for (auto s : {FamilySpec::ary(3, 2), FamilySpec::port(3, 1)}) EXPECT_DOUBLE_EQ(pmf_K(s, 2)[2], 1.0);
}

TEST(PmfK, MatchesEnumerationOracle) {
  for (const auto& spec : grid()) {
    for (int n = 1; n <= 8; ++n) {
      auto oracle = to_double(exact_statistic_pmf(spec, n, Statistic::parse("K")));
      EXPECT_LE(max_abs_diff(pmf_K(spec, n), oracle), 1e-10) << spec.to_string() << " n=" << n;
    }
  }
}

TEST(PmfK, ChainMatchesEnumerationExactly) {
  for (const auto& spec : grid()) {
    auto law = node_type_law(spec, 7);
    for (int n = 1; n <= 7; ++n)
      EXPECT_EQ(law.K[static_cast<std::size_t>(n)], exact_statistic_pmf(spec, n, Statistic::parse("K")))
          << spec.to_string() << " n=" << n;
  }
}

TEST(PmfK, MatchesChainAtModerateN) {
  for (auto spec : {FamilySpec::recursive(4), FamilySpec::ary(3, 3), FamilySpec::port(4, R(3, 2))}) {
    auto law = node_type_law(spec, 40);
    for (int n : {9, 15, 25, 40})
      EXPECT_LE(max_abs_diff(pmf_K(spec, n), to_double(law.K[static_cast<std::size_t>(n)])), 1e-10)
          << spec.to_string() << " n=" << n;
  }
}

TEST(PmfK, SumsToOne) {
  for (int b = 1; b <= 10; ++b)
    for (auto spec : {FamilySpec::recursive(b), FamilySpec::ary(b, 2), FamilySpec::ary(b, 3), FamilySpec::port(b, 1),
                      FamilySpec::port(b, 2)})
      for (int n : {b + 1, b + 2, 20, 100, 1000, 10000}) {
        auto p = pmf_K(spec, n);
        EXPECT_TRUE(is_probability(p)) << spec.to_string() << " n=" << n << " total=" << p.total();
      }
}

TEST(LimitK, Zipf) {
  auto z = limit_K_exact(FamilySpec::recursive(2));
  EXPECT_EQ(z[1], R(2, 3));
  EXPECT_EQ(z[2], R(1, 3));
  EXPECT_EQ(limit_K_exact(FamilySpec::recursive(1)), ExactPmf::point_mass(1));
  for (int b = 1; b <= 8; ++b) {
    Rational h = 0;
    for (int k = 1; k <= b; ++k) h += Rational(1) / k;
    auto l = limit_K_exact(FamilySpec::recursive(b));
    for (int m = 1; m <= b; ++m) EXPECT_EQ(l[m], 1 / (m * h));
  }
}

TEST(LimitK, PortAndAry) {
  auto port = limit_K_exact(FamilySpec::port(2, 1));
  EXPECT_EQ(port[1], R(3, 4));
  EXPECT_EQ(port[2], R(1, 4));
  for (auto spec : {FamilySpec::port(2, 1), FamilySpec::port(3, 2), FamilySpec::ary(3, 2), FamilySpec::ary(2, 3),
                    FamilySpec::recursive(2), FamilySpec::port(4, R(1, 2))}) {
    auto l = limit_K_exact(spec);
    EXPECT_EQ(l.total(), 1) << spec.to_string();
    EXPECT_LE(max_abs_diff(to_double(l), pmf_K(spec, 10000)), 0.02) << spec.to_string();
  }
}

TEST(NodeTypeRelation, Examples) {
  auto spec = FamilySpec::recursive(2);
  auto p = node_type_relation<Rational>(spec, 3, {Rational(1), Rational(1)});
  EXPECT_EQ(p[2], R(1, 3));
  EXPECT_EQ(p[1], R(2, 3));
  auto tiny = node_type_relation<Rational>(FamilySpec::port(4, 1), 2, {Rational(0), Rational(1), Rational(0), Rational(0)});
  EXPECT_EQ(tiny[3], 1);
  EXPECT_THROW(node_type_relation<Rational>(spec, 3, {Rational(1)}), std::invalid_argument);
}

TEST(NodeTypeRelation, ReproducesKFromEnumerationMeans) {
  for (const auto& spec : grid()) {
    for (int n = 1; n <= 6; ++n) {
      std::vector<Statistic> stats;
      for (int k = 1; k <= spec.b(); ++k) stats.push_back({Statistic::Kind::N, k});
      auto pmfs = exact_statistic_pmfs(spec, n, stats);
      std::vector<Rational> means;
      for (auto& p : pmfs) means.push_back(p.mean());
      EXPECT_EQ(node_type_relation(spec, n, means), exact_statistic_pmf(spec, n + 1, Statistic::parse("K")))
          << spec.to_string() << " n=" << n;
    }
  }
}
