#include <bucket_trees/rng.hpp>
#include <bucket_trees/stats.hpp>

#include <gtest/gtest.h>

using namespace bucket_trees;

TEST(ChiSquare, ProportionalObservations) {
  Pmf e;
  e.add(0, 0.25);
  e.add(1, 0.75);
  auto r = gof_chi_square(e, {{0, 250}, {1, 750}});
  EXPECT_DOUBLE_EQ(r.statistic, 0.0);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
  EXPECT_TRUE(r.pass);
}

TEST(ChiSquare, TwoCells) {
  // (660-2000/3)^2/(2000/3) + (340-1000/3)^2/(1000/3) = 0.2
  Pmf e;
  e.add(1, 2.0 / 3);
  e.add(2, 1.0 / 3);
  auto r = gof_chi_square(e, {{1, 660}, {2, 340}});
  EXPECT_NEAR(r.statistic, 0.2, 1e-12);
  EXPECT_EQ(r.dof_or_n, 1);
  EXPECT_NEAR(r.p_value, 0.654720846, 1e-8);
  EXPECT_TRUE(r.pass);
}

TEST(ChiSquare, OffSupportFails) {
  auto r = gof_chi_square(Pmf::point_mass(3), {{3, 99}, {4, 1}});
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.p_value, 0);
}

TEST(ChiSquare, Errors) {
  EXPECT_THROW(gof_chi_square(Pmf::point_mass(1), {}), std::invalid_argument);
  EXPECT_THROW(gof_chi_square(Pmf::point_mass(1), {{1, 100}}), std::invalid_argument);
}

TEST(ChiSquare, Pooling) {
  Pmf e;
  e.add(0, 0.5);
  e.add(1, 0.49);
  e.add(2, 0.005);
  e.add(3, 0.005);
  auto r = gof_chi_square(e, {{0, 50}, {1, 49}, {2, 1}});
  EXPECT_EQ(r.dof_or_n, 1);  // the tail cells merge into cell 1
}

TEST(ChiSquare, PValueMonotone) {
  double last = 1.0;
  for (double s = 0.5; s < 40; s += 0.5) {
    double p = chi_square_tail(s, 4);
    EXPECT_LT(p, last);
    last = p;
  }
}

TEST(KS, UniformCalibration) {
  RngStream rng(123);
  int passes = 0;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(10000);
    for (auto& v : x) v = rng.uniform01();
    passes += gof_ks(x, [](double t) { return std::clamp(t, 0.0, 1.0); }).pass;
  }
  EXPECT_GE(passes, 19);
}

TEST(KS, ConstantSampleFails) {
  std::vector<double> x(100, 0.3);
  auto r = gof_ks(x, [](double t) { return std::clamp(t, 0.0, 1.0); });
  EXPECT_GE(r.statistic, 0.7);
  EXPECT_FALSE(r.pass);
}

TEST(KS, Errors) {
  EXPECT_THROW(gof_ks({}, [](double) { return 0.0; }), std::invalid_argument);
  EXPECT_THROW(gof_ks(std::vector<double>(10, 0.5), [](double) { return 0.0; }), std::invalid_argument);
}

TEST(KS, KolmogorovTail) {
  EXPECT_NEAR(kolmogorov_tail(1.36), 0.0494, 1e-3);
  EXPECT_NEAR(kolmogorov_tail(1.95), 0.001, 2e-4);
  EXPECT_EQ(kolmogorov_tail(0.01), 1.0);
}
