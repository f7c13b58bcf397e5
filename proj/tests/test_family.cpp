#include <bucket_trees/family.hpp>

#include <gtest/gtest.h>

using namespace bucket_trees;

namespace {
Rational R(std::int64_t p, std::int64_t q = 1) { return make_rational(p, q); }

std::int64_t double_factorial_odd(int n) {  // (2n-3)!!
  std::int64_t r = 1;
  for (int k = 2 * n - 3; k > 1; k -= 2) r *= k;
  return r;
}
}  // namespace

TEST(Weights, RecursiveB2) {
  auto w = weights(FamilySpec::recursive(2));
  EXPECT_EQ(w.phi(0), 1);
  EXPECT_EQ(w.phi(1), 2);
  EXPECT_EQ(w.phi(2), 2);
  EXPECT_EQ(w.phi(3), R(4, 3));
  EXPECT_EQ(w.psi(1), 1);
}

TEST(Weights, BinaryB1) {
  auto w = weights(FamilySpec::ary(1, 2));
  EXPECT_EQ(w.phi(0), 1);
  EXPECT_EQ(w.phi(1), 2);
  EXPECT_EQ(w.phi(2), 1);
  EXPECT_EQ(w.phi(3), 0);
}

TEST(Weights, PortB2) {
  auto w = weights(FamilySpec::port(2, 1));
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(w.phi(k), binom(Rational(k + 2), k)) << k;
  EXPECT_EQ(w.psi(1), 1);
}

TEST(Weights, LinearRejected) {
  EXPECT_THROW(weights(FamilySpec::linear(2, 1, 1, 1)), std::invalid_argument);
}

TEST(Weights, BoundaryIdentities) {
  // psi_k = T_k and phi_0 = T_b
  for (auto spec : {FamilySpec::recursive(4), FamilySpec::ary(4, 3), FamilySpec::port(4, R(3, 2))}) {
    auto w = weights(spec);
    for (int k = 1; k < 4; ++k) EXPECT_EQ(w.psi(k), total_weight_closed(spec, k));
    EXPECT_EQ(w.phi(0), total_weight_closed(spec, 4));
  }
}

TEST(TreeWeight, Examples) {
  auto spec = FamilySpec::recursive(2);
  EXPECT_EQ(tree_weight(spec, parse_tree("{1,2}({3,4})", 2)), 2);
  EXPECT_EQ(tree_weight(spec, parse_tree("{1,2}({3},{4})", 2)), 2);
  auto spec3 = FamilySpec::port(3, 2);
  EXPECT_EQ(tree_weight(spec3, parse_tree("{1,2}", 3)), weights(spec3).psi(2));
}

TEST(TotalWeight, ClosedForms) {
  auto rec = FamilySpec::recursive(2);
  EXPECT_EQ(total_weight_closed(rec, 4), 6);
  for (int n = 1; n <= 9; ++n) EXPECT_EQ(total_weight_closed(rec, n), factorial(n - 1));
  EXPECT_EQ(total_weight_closed(FamilySpec::ary(2, 2), 3), 6);
  for (int n = 1; n <= 9; ++n) EXPECT_EQ(total_weight_closed(FamilySpec::ary(2, 2), n), factorial(n));
  auto port = FamilySpec::port(2, 1);
  EXPECT_EQ(total_weight_closed(port, 4), 15);
  for (int n = 1; n <= 9; ++n) EXPECT_EQ(total_weight_closed(port, n), double_factorial_odd(n));
  // ternary increasing trees: prod_{k<n} (2k+1)
  std::int64_t t = 1;
  for (int n = 1; n <= 8; ++n) {
    EXPECT_EQ(total_weight_closed(FamilySpec::ary(1, 3), n), t);
    t *= 2 * n + 1;
  }
  EXPECT_THROW(total_weight_closed(FamilySpec::linear(2, 1, 1, 1), 3), std::invalid_argument);
}

TEST(Kappa, CaseTable) {
  EXPECT_EQ(kappa(FamilySpec::recursive(3)), 0);
  EXPECT_EQ(kappa(FamilySpec::ary(2, 3)), R(1, 2));
  EXPECT_EQ(kappa(FamilySpec::ary(2, 2)), 1);
  EXPECT_EQ(kappa(FamilySpec::port(2, 1)), R(-1, 2));
  EXPECT_EQ(kappa(FamilySpec::port(2, R(1, 3))), R(-3, 4));
}

TEST(Spec, TextForm) {
  for (const char* s : {"recursive:b=2", "ary:b=2,d=3", "port:b=3,alpha=1", "port:b=2,alpha=1/2",
                        "linear:b=2,alpha=1,beta=2,m=1"}) {
    EXPECT_EQ(FamilySpec::parse(s).to_string(), s);
  }
  EXPECT_EQ(FamilySpec::parse("port:b=2,alpha=0.5").alpha(), R(1, 2));
  EXPECT_THROW(FamilySpec::parse("ary:b=2"), std::invalid_argument);
  EXPECT_THROW(FamilySpec::parse("ary:b=2,d=1"), std::invalid_argument);
  EXPECT_THROW(FamilySpec::parse("port:b=2,alpha=-1"), std::invalid_argument);
  EXPECT_THROW(FamilySpec::parse("tree:b=2"), std::invalid_argument);
  EXPECT_THROW(FamilySpec::parse("recursive:b=2,z=1"), std::invalid_argument);
  EXPECT_THROW(FamilySpec::parse("recursive:b=0"), std::invalid_argument);
}
