#include <bucket_trees/dist_k.hpp>
#include <bucket_trees/grow.hpp>
#include <bucket_trees/urn.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace bucket_trees;

namespace {
Rational R(std::int64_t p, std::int64_t q = 1) { return make_rational(p, q); }

RationalMatrix M(std::initializer_list<std::initializer_list<int>> rows) {
  RationalMatrix m;
  for (auto r : rows) {
    m.emplace_back();
    for (int x : r) m.back().push_back(Rational(x));
  }
  return m;
}

// Oracle: cofactor expansion of det(M - lambda I) with polynomial entries.
using Poly = std::vector<Rational>;
Poly padd(Poly a, const Poly& b, int sign) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += sign * b[i];
  return a;
}
Poly pmul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}
Poly det(const std::vector<std::vector<Poly>>& m) {
  if (m.size() == 1) return m[0][0];
  Poly out{Rational(0)};
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[0][j] == Poly{Rational(0)}) continue;
    std::vector<std::vector<Poly>> minor;
    for (std::size_t i = 1; i < m.size(); ++i) {
      minor.emplace_back();
      for (std::size_t k = 0; k < m.size(); ++k)
        if (k != j) minor.back().push_back(m[i][k]);
    }
    out = padd(out, pmul(m[0][j], det(minor)), j % 2 ? -1 : 1);
  }
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}
Poly cofactor_charpoly(const RationalMatrix& a) {
  std::vector<std::vector<Poly>> m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      m[i].push_back(i == j ? Poly{a[i][j], Rational(-1)} : Poly{a[i][j]});
  return det(m);
}

std::vector<FamilySpec> urn_grid() {
  return {FamilySpec::recursive(2), FamilySpec::recursive(3), FamilySpec::port(2, 1), FamilySpec::port(3, R(1, 2)),
          FamilySpec::ary(2, 3), FamilySpec::ary(3, 2)};
}
}  // namespace

TEST(BuildUrn, Examples) {
  auto r = build_urn(FamilySpec::recursive(2));
  EXPECT_EQ(r.replacement, M({{-1, 2}, {1, 0}}));
  EXPECT_EQ(r.divisors, (std::vector<Rational>{1, 2}));
  EXPECT_EQ(r.initial, (std::vector<Rational>{1, 0}));

  auto p = build_urn(FamilySpec::port(2, 1));
  EXPECT_EQ(p.replacement, M({{-1, 3}, {1, 1}}));
  EXPECT_EQ(p.balance, 2);

  auto a = build_urn(FamilySpec::ary(2, 2));
  EXPECT_EQ(a.replacement, M({{-2, 3}, {2, -1}}));
  EXPECT_EQ(a.balance, 1);
  EXPECT_EQ(a.initial[0], 2);

  auto big = build_urn(FamilySpec::recursive(4));
  EXPECT_EQ(big.replacement, M({{-1, 2, 0, 0}, {0, -2, 3, 0}, {0, 0, -3, 4}, {1, 0, 0, 0}}));

  EXPECT_THROW(build_urn(FamilySpec::recursive(1)), std::invalid_argument);
  EXPECT_THROW(build_urn(FamilySpec::linear(2, 1, 0, 1)), std::invalid_argument);
}

TEST(BuildUrn, RationalAlpha) {
  auto u = build_urn(FamilySpec::port(2, R(1, 2)));
  EXPECT_EQ(u.replacement[0][0], R(-1, 2));
  EXPECT_EQ(u.replacement[0][1], 2);
  EXPECT_EQ(u.replacement[1][0], R(1, 2));
  EXPECT_EQ(u.balance, R(3, 2));
  EXPECT_EQ(u.scale, 2);
}

TEST(SimulateUrn, ForcedSteps) {
  auto u = build_urn(FamilySpec::recursive(2));
  RngStream rng(1);
  auto tr = simulate_urn(u, 2, rng);
  EXPECT_EQ(tr.compositions[1], (std::vector<Rational>{0, 2}));
  EXPECT_EQ(tr.compositions[2], (std::vector<Rational>{1, 2}));
  EXPECT_EQ(node_types(u, tr.compositions[2]), (std::vector<Rational>{1, 1}));
}

TEST(SimulateUrn, InitialNodeCountIsOne) {
  for (auto spec : urn_grid()) {
    auto u = build_urn(spec);
    auto n = node_types(u, u.initial);
    EXPECT_EQ(n[0], 1) << spec.to_string();
  }
}

TEST(SimulateUrn, TotalGrowsByBalance) {
  RngStream rng(5);
  for (auto spec : urn_grid()) {
    auto u = build_urn(spec);
    auto tr = simulate_urn(u, 300, rng);
    Rational init = 0;
    for (auto& x : u.initial) init += x;
    for (std::size_t i = 0; i < tr.compositions.size(); ++i) {
      Rational s = 0;
      for (auto& x : tr.compositions[i]) s += x;
      ASSERT_EQ(s, init + static_cast<long>(i) * u.balance) << spec.to_string();
      Rational nodes_labels = 0;
      auto n = node_types(u, tr.compositions[i]);
      for (std::size_t m = 0; m < n.size(); ++m) {
        EXPECT_TRUE(is_integer(n[m]) && n[m] >= 0) << spec.to_string();
        nodes_labels += n[m] * static_cast<long>(m + 1);
      }
      EXPECT_EQ(nodes_labels, static_cast<long>(i) + 1);
    }
    UrnSimulator sim(u);
    sim.reset();
    for (int i = 0; i < 50; ++i) sim.step(rng);
    std::vector<Rational> q;
    for (auto c : sim.counts()) q.push_back(Rational(c) / Rational(u.scale));
    auto exact = node_types(u, q);
    auto fast = sim.node_counts();
    for (std::size_t m = 0; m < exact.size(); ++m) EXPECT_NEAR(fast[m], to_double(exact[m]), 1e-9);
  }
}

TEST(SimulateUrn, MeansMatchExactNodeTypes) {
  const int reps = 1000000;
  for (auto spec : urn_grid()) {
    auto u = build_urn(spec);
    auto law = node_type_law(spec, 7);
    UrnSimulator sim(u);
    RngStream rng(17);
    const int b = spec.b();
    std::vector<std::vector<double>> s1(8, std::vector<double>(static_cast<std::size_t>(b))), s2 = s1;
    for (int r = 0; r < reps; ++r) {
      sim.reset();
      for (int n = 1; n <= 7; ++n) {
        if (n > 1) sim.step(rng);
        auto nt = sim.node_counts();
        for (int m = 0; m < b; ++m) {
          double x = nt[static_cast<std::size_t>(m)];
          s1[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] += x;
          s2[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] += x * x;
        }
      }
    }
    for (int n = 1; n <= 7; ++n)
      for (int m = 0; m < b; ++m) {
        double mean = s1[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] / reps;
        double var = s2[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] / reps - mean * mean;
        double se = std::sqrt(std::max(var, 0.0) / reps);
        double exact = to_double(law.mean_counts[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)]);
        EXPECT_LE(std::abs(mean - exact), 3 * se + 1e-12) << spec.to_string() << " n=" << n << " m=" << m + 1;
      }
  }
}

TEST(Spectrum, FaddeevLeVerrierMatchesCofactorOracle) {
  for (auto m : {M({{2}}), M({{1, 2}, {3, 4}}), M({{0, 1, 0}, {0, 0, 1}, {6, -11, 6}}), M({{-1, 2, 0, 0}, {0, -2, 3, 0}, {0, 0, -3, 4}, {1, 0, 0, 0}})})
    EXPECT_EQ(characteristic_polynomial(m), cofactor_charpoly(m));
  EXPECT_EQ(characteristic_polynomial(M({{1, 2}, {3, 4}})), (Poly{-2, -5, 1}));
}

TEST(Spectrum, ClosedFormsAgree) {
  for (int b = 2; b <= 10; ++b)
    for (auto spec : {FamilySpec::recursive(b), FamilySpec::port(b, 1), FamilySpec::port(b, 2), FamilySpec::port(b, R(1, 2)),
                      FamilySpec::ary(b, 2), FamilySpec::ary(b, 3)}) {
      auto u = build_urn(spec);
      EXPECT_EQ(characteristic_polynomial(u.replacement), characteristic_closed_form(spec)) << spec.to_string();
      if (b <= 6) EXPECT_EQ(cofactor_charpoly(u.replacement), characteristic_closed_form(spec)) << spec.to_string();
    }
}

TEST(Spectrum, Examples) {
  auto r = urn_spectrum(FamilySpec::recursive(2));
  EXPECT_EQ(r.charpoly, (Poly{-2, 1, 1}));
  EXPECT_NEAR(r.eigenvalues[0].real(), 1.0, 1e-12);
  EXPECT_NEAR(r.eigenvalues[1].real(), -2.0, 1e-12);

  auto p = urn_spectrum(FamilySpec::port(2, 1));
  EXPECT_NEAR(p.eigenvalues[0].real(), 2.0, 1e-12);
  EXPECT_NEAR(p.eigenvalues[1].real(), -2.0, 1e-12);  // 1 + 2 * (-3/2)
  EXPECT_EQ(p.charpoly, (Poly{-4, 0, 1}));
}

TEST(Spectrum, AffineImagesAreRoots) {
  for (int b = 2; b <= 30; ++b)
    for (auto spec : {FamilySpec::recursive(b), FamilySpec::port(b, 1), FamilySpec::port(b, 2), FamilySpec::ary(b, 2),
                      FamilySpec::ary(b, 3)}) {
      auto s = urn_spectrum(spec);
      EXPECT_LE(s.max_residual, 1e-9) << spec.to_string();
      EXPECT_NEAR(s.eigenvalues[0].real(), to_double(build_urn(spec).balance), 1e-9) << spec.to_string();
    }
}

TEST(Spectrum, PhaseChange) {
  for (int b = 2; b <= 26; ++b) EXPECT_LT(urn_spectrum(FamilySpec::recursive(b)).phase_indicator, 0.5) << b;
  for (int b = 27; b <= 30; ++b) EXPECT_GT(urn_spectrum(FamilySpec::recursive(b)).phase_indicator, 0.5) << b;
}

TEST(Urn, AgreesWithGrowthSimulation) {
  const int n = 1000, reps = 4000;
  for (auto spec : {FamilySpec::recursive(3), FamilySpec::port(2, 1), FamilySpec::ary(2, 3)}) {
    const int b = spec.b();
    auto u = build_urn(spec);
    UrnSimulator sim(u);
    RngStream r1(3), r2(4);
    std::vector<double> a1(static_cast<std::size_t>(b)), a2 = a1, g1 = a1, g2 = a1;
    for (int rep = 0; rep < reps; ++rep) {
      sim.reset();
      for (int i = 1; i < n; ++i) sim.step(r1);
      std::vector<Rational> q;
      for (auto c : sim.counts()) q.push_back(Rational(c) / Rational(u.scale));
      auto nt = node_types(u, q);
      GrowthProcess g(spec, n);
      g.grow_to(n, r2);
      std::vector<double> cnt(static_cast<std::size_t>(b));
      for (int v = 0; v < g.node_count(); ++v) cnt[static_cast<std::size_t>(g.capacity(v) - 1)] += 1;
      for (int m = 0; m < b; ++m) {
        double x = to_double(nt[static_cast<std::size_t>(m)]), y = cnt[static_cast<std::size_t>(m)];
        a1[static_cast<std::size_t>(m)] += x;
        a2[static_cast<std::size_t>(m)] += x * x;
        g1[static_cast<std::size_t>(m)] += y;
        g2[static_cast<std::size_t>(m)] += y * y;
      }
    }
    for (int m = 0; m < b; ++m) {
      auto k = static_cast<std::size_t>(m);
      double ma = a1[k] / reps, mg = g1[k] / reps;
      double va = a2[k] / reps - ma * ma, vg = g2[k] / reps - mg * mg;
      EXPECT_LE(std::abs(ma - mg), 3 * std::sqrt((va + vg) / reps) + 1e-12) << spec.to_string() << " m=" << m + 1;
    }
  }
}
