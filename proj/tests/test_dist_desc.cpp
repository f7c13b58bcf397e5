#include <bucket_trees/dist_desc.hpp>
#include <bucket_trees/enumerate.hpp>
#include <bucket_trees/stats.hpp>

#include <gtest/gtest.h>

using namespace bucket_trees;

namespace {
Rational R(std::int64_t p, std::int64_t q = 1) { return make_rational(p, q); }

std::vector<FamilySpec> small_grid() {
  return {FamilySpec::recursive(1), FamilySpec::recursive(2), FamilySpec::recursive(3), FamilySpec::port(2, 1),
          FamilySpec::port(1, 2), FamilySpec::port(3, R(1, 2)), FamilySpec::ary(2, 3), FamilySpec::ary(2, 2)};
}

// Oracle: conditional descendants form a Polya urn, so Y-1 is beta-binomial with
// N = n-j trials, a = l + kappa, beta = j - l.
Rational beta_binomial(int N, const Rational& a, const Rational& beta, int s) {
  return binom(Rational(N), s) * rising(a, s) * rising(beta, N - s) / rising(Rational(a + beta), N);
}

Rational harmonic(int n) {
  Rational h = 0;
  for (int k = 1; k <= n; ++k) h += Rational(1) / k;
  return h;
}
}  // namespace

TEST(YConditional, Examples) {
  auto spec = FamilySpec::recursive(2);
  EXPECT_EQ(pmf_Y_conditional_exact(spec, 5, 1, 5), ExactPmf::point_mass(1));
  auto row = pmf_Y_conditional_exact(spec, 4, 1, 3);
  EXPECT_EQ(row[2], R(1, 3));
  EXPECT_EQ(row[1], R(2, 3));
  for (auto s : small_grid())
    for (int l = 1; l <= s.b(); ++l) EXPECT_EQ(pmf_Y_conditional_exact(s, s.b() + 6, l, s.b() + 1).total(), 1);
  EXPECT_THROW(pmf_Y_conditional(spec, 5, 1, 2), std::invalid_argument);
  EXPECT_THROW(pmf_Y_conditional(spec, 5, 3, 4), std::invalid_argument);
}

TEST(YConditional, BetaBinomialOracle) {
  for (auto spec : small_grid()) {
    const int b = spec.b();
    const Rational k = kappa(spec);
    for (int j = b + 1; j <= b + 4; ++j)
      for (int l = 1; l <= b; ++l)
        for (int n = j; n <= j + 6; ++n) {
          auto row = pmf_Y_conditional_exact(spec, n, l, j);
          for (int s = 0; s <= n - j; ++s)
            EXPECT_EQ(row[s + 1], beta_binomial(n - j, l + k, Rational(j - l), s)) << spec.to_string();
          auto approx = pmf_Y_conditional(spec, n, l, j);
          EXPECT_LE(max_abs_diff(approx, to_double(row)), 1e-12);
        }
  }
}

TEST(Y, Examples) {
  auto spec = FamilySpec::recursive(2);
  EXPECT_EQ(pmf_Y_exact(FamilySpec::port(2, 1), 9, 1), ExactPmf::point_mass(9));
  EXPECT_EQ(pmf_Y_exact(spec, 4, 3)[2], R(1, 3));
  EXPECT_NEAR(pmf_Y(spec, 4, 3)[2], 1.0 / 3, 1e-12);
}

TEST(Y, MatchesOracle) {
  for (auto spec : small_grid())
    for (int n = 1; n <= 7; ++n) {
      std::vector<Statistic> stats;
      for (int j = 1; j <= n; ++j) stats.push_back({Statistic::Kind::Y, j});
      auto oracle = exact_statistic_pmfs(spec, n, stats);
      for (int j = 1; j <= n; ++j) {
        EXPECT_EQ(pmf_Y_exact(spec, n, j), oracle[static_cast<std::size_t>(j - 1)])
            << spec.to_string() << " n=" << n << " j=" << j;
        EXPECT_LE(max_abs_diff(pmf_Y(spec, n, j), to_double(oracle[static_cast<std::size_t>(j - 1)])), 1e-10);
      }
    }
}

TEST(Tau, Examples) {
  auto spec = FamilySpec::recursive(2);
  for (int j : {1, 2}) EXPECT_EQ(pmf_tau_exact(spec, 6, j), ExactPmf::point_mass(2));
  for (int n = 5; n <= 9; ++n) EXPECT_EQ(pmf_tau_exact(spec, n, 3)[4], R(1, 3));
  for (auto s : small_grid()) EXPECT_EQ(pmf_tau_exact(s, 9, 3).total(), 1);
}

TEST(Tau, MatchesOracle) {
  for (auto spec : small_grid())
    for (int n = 1; n <= 7; ++n) {
      std::vector<Statistic> stats;
      for (int j = 1; j <= n; ++j) stats.push_back({Statistic::Kind::Tau, j});
      auto oracle = exact_statistic_pmfs(spec, n, stats);
      for (int j = 1; j <= n; ++j) {
        EXPECT_EQ(pmf_tau_exact(spec, n, j), oracle[static_cast<std::size_t>(j - 1)])
            << spec.to_string() << " n=" << n << " j=" << j;
        EXPECT_LE(max_abs_diff(pmf_tau(spec, n, j), to_double(oracle[static_cast<std::size_t>(j - 1)])), 1e-10);
      }
    }
}

TEST(X, RootDegreeOfRecursiveTree) {
  // n=3: root has one child w.p. 1/2 (path) and two children w.p. 1/2
  auto x = pmf_X_exact(FamilySpec::recursive(1), 3, 1);
  EXPECT_EQ(x[0], 0);
  EXPECT_EQ(x[1], R(1, 2));
  EXPECT_EQ(x[2], R(1, 2));
  for (int n = 2; n <= 30; ++n) {
    EXPECT_EQ(pmf_X_exact(FamilySpec::recursive(1), n, 1).mean(), harmonic(n - 1));
    EXPECT_NEAR(pmf_X(FamilySpec::recursive(1), n, 1).mean(), to_double(harmonic(n - 1)), 1e-12);
  }
}

TEST(X, MatchesOracle) {
  for (auto spec : small_grid()) {
    if (spec.kind() == FamilyKind::BDAry) continue;
    for (int n = 1; n <= 7; ++n) {
      std::vector<Statistic> stats;
      for (int j = 1; j <= n; ++j) stats.push_back({Statistic::Kind::X, j});
      auto oracle = exact_statistic_pmfs(spec, n, stats);
      for (int j = 1; j <= n; ++j) {
        EXPECT_EQ(pmf_X_exact(spec, n, j), oracle[static_cast<std::size_t>(j - 1)])
            << spec.to_string() << " n=" << n << " j=" << j;
        EXPECT_LE(max_abs_diff(pmf_X(spec, n, j), to_double(oracle[static_cast<std::size_t>(j - 1)])), 1e-10);
      }
    }
  }
  EXPECT_THROW(pmf_X(FamilySpec::ary(2, 2), 5, 1), std::invalid_argument);
}

TEST(X, TriangularUrnForFixedSaturation) {
  // j <= b saturates at b, so X is the white-draw count of W_{n-b}(b(alpha+1)-1, 0)
  for (auto alpha : {Rational(1), R(1, 2), Rational(3)}) {
    auto spec = FamilySpec::port(2, alpha);
    for (int n = 2; n <= 12; ++n)
      EXPECT_EQ(pmf_X_exact(spec, n, 1), triangular_urn_white_draws<Rational>(2 * (alpha + 1) - 1, 0, alpha, n - 2));
  }
  // j > b: conditional on tau = t the urn starts from (b(alpha+1)-1, (alpha+1)(t-b))
  auto spec = FamilySpec::port(2, 1);
  const int n = 9, j = 4;
  auto tau = pmf_tau_exact(spec, n, j);
  ExactPmf mix;
  for (const auto& [t, pt] : tau)
    for (const auto& [x, px] : triangular_urn_white_draws<Rational>(3, 2 * (t - 2), 1, n - t)) mix.add(x, pt * px);
  EXPECT_EQ(pmf_X_exact(spec, n, j), mix);
}

TEST(X, PortRootDegreeBySimulation) {
  auto spec = FamilySpec::port(1, 1);
  const int n = 20;
  auto expected = pmf_X(spec, n, 1);
  std::map<int, std::int64_t> counts;
  RngStream rng(31);
  for (int rep = 0; rep < 1'000'000; ++rep) {
    GrowthProcess g(spec, n);
    g.grow_to(n, rng);
    ++counts[g.degree(0)];
  }
  auto r = gof_chi_square(expected, counts);
  EXPECT_TRUE(r.pass) << r.statistic << " p=" << r.p_value;
}

TEST(Descendants, SamplerMatchesPmf) {
  for (auto spec : {FamilySpec::recursive(2), FamilySpec::port(2, 1), FamilySpec::ary(2, 3)}) {
    const int n = 200, j = 5;
    std::map<int, std::int64_t> counts;
    RngStream rng(8);
    for (int rep = 0; rep < 100000; ++rep) ++counts[sample_descendants(spec, n, j, rng).y];
    auto r = gof_chi_square(pmf_Y(spec, n, j), counts);
    EXPECT_TRUE(r.pass) << spec.to_string() << " p=" << r.p_value;
  }
}

TEST(Limits, Descriptors) {
  Pmf k;
  k.add(1, 2.0 / 3);
  k.add(2, 1.0 / 3);
  auto beta = limit_reference(FamilySpec::recursive(2), LimitRegion::fixed_j(4), k);
  ASSERT_EQ(beta.components.size(), 2u);
  EXPECT_DOUBLE_EQ(beta.components[0].shape, 1.0);
  EXPECT_DOUBLE_EQ(beta.components[0].param, 3.0);
  EXPECT_DOUBLE_EQ(beta.components[1].shape, 2.0);
  EXPECT_DOUBLE_EQ(beta.components[1].param, 2.0);
  // Beta(1,3): 1-(1-x)^3; Beta(2,2): 3x^2-2x^3
  const double x = 0.3;
  EXPECT_NEAR(beta.cdf(x), 2.0 / 3 * (1 - std::pow(0.7, 3)) + 1.0 / 3 * (3 * x * x - 2 * x * x * x), 1e-12);

  auto large = limit_reference(FamilySpec::recursive(2), LimitRegion::large_j(), k);
  EXPECT_EQ(large.cdf(0.999), 0.0);
  EXPECT_EQ(large.cdf(1.0), 1.0);

  auto nb = limit_reference(FamilySpec::port(1, 1), LimitRegion::central(0.25), Pmf::point_mass(1));
  ASSERT_EQ(nb.components.size(), 1u);
  EXPECT_DOUBLE_EQ(nb.components[0].shape, 0.5);
  // NegBin(1/2, 1/4): P{0} = rho^a
  EXPECT_NEAR(nb.cdf(0.0), std::sqrt(0.25), 1e-12);

  auto gamma = limit_reference(FamilySpec::recursive(1), LimitRegion::small_j(), Pmf::point_mass(1));
  EXPECT_NEAR(gamma.cdf(1.0), 1 - std::exp(-1.0), 1e-12);

  EXPECT_THROW(limit_reference(FamilySpec::recursive(2), LimitRegion::central(1.5), k), std::invalid_argument);
}
