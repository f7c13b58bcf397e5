// Grows bucket recursive trees and compares the empirical K_n with its exact law.
#include <bucket_trees/dist_k.hpp>
#include <bucket_trees/grow.hpp>
#include <bucket_trees/montecarlo.hpp>
#include <bucket_trees/stats.hpp>

#include <cstdio>

int main() {
  using namespace bucket_trees;
  const auto spec = FamilySpec::parse("recursive:b=3");
  const int n = 40;
  auto acc = monte_carlo<CountAcc>(42, 200'000, [&](RngStream& rng, CountAcc& a) {
    GrowthProcess g(spec, n);
    g.grow_to(n - 1, rng);
    a.add(g.insert_next(rng).capacity_after);
  });
  const auto exact = pmf_K(spec, n);
  std::printf("m  exact     empirical\n");
  for (const auto& [m, p] : exact)
    std::printf("%d  %.6f  %.6f\n", m, p, static_cast<double>(acc.counts[m]) / 200'000);
  auto r = gof_chi_square(exact, acc.counts);
  std::printf("chi-square %.3f, p = %.3f\n", r.statistic, r.p_value);
}
