#pragma once

#include "bijections.hpp"
#include "dist_desc.hpp"
#include "dist_k.hpp"
#include "enumerate.hpp"
#include "grow.hpp"
#include "montecarlo.hpp"
#include "spectral.hpp"
#include "stats.hpp"
#include "urn.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace bucket_trees {

enum class VerifyLevel { Quick, Full };

struct CheckResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct CriterionReport {
  int id = 0;
  std::string title;
  bool pass = true;
  double seconds = 0;
  std::vector<CheckResult> checks;

  void add(std::string name, bool ok, std::string detail = {}) {
    pass = pass && ok;
    checks.push_back({std::move(name), ok, std::move(detail)});
  }
};

struct SuiteReport {
  VerifyLevel level = VerifyLevel::Quick;
  std::uint64_t seed = 0;
  std::vector<CriterionReport> criteria;

  bool pass() const {
    for (const auto& c : criteria)
      if (!c.pass) return false;
    return true;
  }
};

inline nlohmann::json to_json(const CriterionReport& c) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& k : c.checks) checks.push_back({{"name", k.name}, {"pass", k.pass}, {"detail", k.detail}});
  return {{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"seconds", c.seconds}, {"checks", checks}};
}

inline nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json crit = nlohmann::json::array();
  for (const auto& c : r.criteria) crit.push_back(to_json(c));
  return {{"level", r.level == VerifyLevel::Quick ? "quick" : "full"},
          {"seed", r.seed},
          {"pass", r.pass()},
          {"criteria", crit}};
}

namespace detail {

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

inline std::vector<FamilySpec> criterion_grid() {
  std::vector<FamilySpec> g;
  for (int b : {1, 2, 3}) g.push_back(FamilySpec::recursive(b));
  for (int b : {1, 2})
    for (int d : {2, 3}) g.push_back(FamilySpec::ary(b, d));
  for (int b : {1, 2})
    for (int a : {1, 2}) g.push_back(FamilySpec::port(b, a));
  return g;
}

inline std::uint64_t derived_seed(std::uint64_t seed, int id) {
  RngStream r = RngStream(seed).split(static_cast<std::uint64_t>(id));
  return r();
}

// ---- 1: total weights
inline void criterion_total_weights(CriterionReport& rep, VerifyLevel level) {
  const int N = level == VerifyLevel::Full ? 8 : 6;
  for (const auto& spec : criterion_grid()) {
    std::string bad;
    for (int n = 1; n <= N && bad.empty(); ++n) {
      Rational sum = 0;
      for_each_tree(spec, n, [&](const BucketTree&, const Rational& w) { sum += w; });
      if (sum != total_weight_closed(spec, n)) bad = "n=" + std::to_string(n) + " enumerated " + to_string(sum);
    }
    rep.add("T_n " + spec.to_string() + " n<=" + std::to_string(N), bad.empty(), bad);
  }
  std::string bad;
  Rational fact = 1, dfact = 1;
  for (int n = 1; n <= N; ++n) {
    if (n > 1) fact *= n - 1;
    if (n > 1) dfact *= 2 * n - 3;
    if (total_weight_closed(FamilySpec::recursive(1), n) != fact) bad += " (n-1)! fails at n=" + std::to_string(n);
    if (total_weight_closed(FamilySpec::port(1, 1), n) != dfact) bad += " (2n-3)!! fails at n=" + std::to_string(n);
  }
  rep.add("spot values (n-1)! and (2n-3)!!", bad.empty(), bad);
}

// ---- 2: measure equality
inline void criterion_measures(CriterionReport& rep, VerifyLevel level) {
  const int N = level == VerifyLevel::Full ? 6 : 5;
  for (const auto& spec : criterion_grid()) {
    std::string bad;
    std::int64_t trees = 0;
    for (int n = 1; n <= N; ++n) {
      Rational total = 0;
      for_each_tree(spec, n, [&](const BucketTree& t, const Rational&) {
        if (!is_canonical(t)) return;
        ++trees;
        Rational g = exact_probability(spec, t, Measure::UnorderedGrowth);
        Rational m = exact_probability(spec, t, Measure::UnorderedModel);
        total += m;
        if (g != m && bad.empty()) bad = to_text(t) + ": growth " + to_string(g) + " model " + to_string(m);
      });
      if (total != 1 && bad.empty()) bad = "n=" + std::to_string(n) + " unordered model total " + to_string(total);
    }
    rep.add(spec.to_string() + " (" + std::to_string(trees) + " canonical trees)", bad.empty(), bad);
  }
}

// ---- 3: K_n
inline void criterion_k(CriterionReport& rep, VerifyLevel level, std::uint64_t seed) {
  const int N = level == VerifyLevel::Full ? 8 : 6;
  for (const auto& spec : criterion_grid()) {
    double worst = 0;
    for (int n = 1; n <= N; ++n)
      worst = std::max(worst, max_abs_diff(pmf_K(spec, n), to_double(exact_statistic_pmf(spec, n, Statistic::parse("K")))));
    rep.add("pmf_K vs oracle " + spec.to_string(), worst <= 1e-10, "max diff " + fmt(worst));
  }
  const std::int64_t reps = level == VerifyLevel::Full ? 1'000'000 : 20'000;
  const int n = 50;
  int idx = 0;
  for (auto spec : {FamilySpec::recursive(3), FamilySpec::port(2, 1), FamilySpec::ary(3, 2)}) {
    auto acc = monte_carlo<CountAcc>(RngStream(seed).split(static_cast<std::uint64_t>(idx++)).seed(), reps,
                                     [&](RngStream& rng, CountAcc& a) {
                                       GrowthProcess g(spec, n);
                                       g.grow_to(n - 1, rng);
                                       a.add(g.insert_next(rng).capacity_after);
                                     });
    auto r = gof_chi_square(pmf_K(spec, n), acc.counts);
    rep.add("K_50 Monte Carlo " + spec.to_string() + " (" + std::to_string(reps) + ")", r.pass,
            "chi2=" + fmt(r.statistic) + " dof=" + fmt(r.dof_or_n) + " p=" + fmt(r.p_value));
  }
  for (auto spec : {FamilySpec::recursive(2), FamilySpec::recursive(4), FamilySpec::port(2, 1), FamilySpec::ary(3, 2)}) {
    double d = max_abs_diff(pmf_K(spec, 10000), limit_K(spec));
    rep.add("limit atoms at n=1e4 " + spec.to_string(), d <= 0.02, "max diff " + fmt(d));
  }
  auto z = limit_K_exact(FamilySpec::recursive(2));
  rep.add("Zipf limit b=2 is (2/3, 1/3)", z[1] == make_rational(2, 3) && z[2] == make_rational(1, 3));
}

// ---- 4: spectral
inline void criterion_spectral(CriterionReport& rep) {
  double worst_res = 0, worst_l1 = 0;
  std::string where;
  std::vector<FamilySpec> fams;
  for (int b = 1; b <= 30; ++b) {
    for (auto spec : {FamilySpec::recursive(b), FamilySpec::ary(b, 2), FamilySpec::ary(b, 3), FamilySpec::port(b, 1),
                      FamilySpec::port(b, 2), FamilySpec::port(b, make_rational(1, 2))}) {
      const Rational k = kappa(spec);
      const auto& r = indicial_roots(b, k);
      if (r.max_residual() > worst_res) {
        worst_res = r.max_residual();
        where = spec.to_string();
      }
      worst_l1 = std::max(worst_l1, std::abs(r.roots[0] - Complex(to_double(1 + k), 0)));
    }
  }
  rep.add("indicial residuals b<=30", worst_res <= 1e-10, "max " + fmt(worst_res) + " at " + where);
  rep.add("lambda_1 = 1 + kappa", worst_l1 <= 1e-12, "max deviation " + fmt(worst_l1));
  auto second = [](int b) { return urn_spectrum(FamilySpec::recursive(b)).phase_indicator; };
  bool below = true;
  for (int b = 2; b <= 26; ++b) below = below && second(b) < 0.5;
  rep.add("phase indicator < 1/2 for b<=26", below, "b=26: " + fmt(second(26)));
  rep.add("phase indicator > 1/2 at b=27", second(27) > 0.5, "b=27: " + fmt(second(27)));
}

// ---- 5: bijections
inline void criterion_bijections(CriterionReport& rep, VerifyLevel level) {
  const int ND = level == VerifyLevel::Full ? 7 : 6;
  const int NB = level == VerifyLevel::Full ? 6 : 5;
  auto family = FamilySpec::custom(2, [](int k) { return binom(Rational(k + 2), 2); }, {Rational(1)}, "diamond");
  {
    std::string bad;
    std::int64_t instances = 0;
    bool inner_ok = true;
    for (int n = 1; n <= ND; ++n) {
      Rational weight = 0, expected = 1;
      for (int k = 2 * n - 3; k > 1; k -= 2) expected *= k;
      std::set<std::string> images;
      std::int64_t at_n = 0;
      for_each_tree(family, n, [&](const BucketTree& t, const Rational& w) {
        ++instances;
        ++at_n;
        weight += w;
        auto f = bucket_to_diamond(t);
        if (!(diamond_to_bucket(f) == t) && bad.empty()) bad = "round trip fails at " + to_text(t);
        if (!(bucket_to_diamond(diamond_to_bucket(f)) == f) && bad.empty()) bad = "inverse round trip fails at " + to_text(f);
        inner_ok = inner_ok && f.inner_count() == census(t).unsaturated_count(1);
        images.insert(to_text(f));
      });
      if (weight != expected && bad.empty()) bad = "n=" + std::to_string(n) + " weighted count " + to_string(weight);
      if (static_cast<std::int64_t>(images.size()) != at_n && bad.empty()) bad = "duplicate diamonds";
    }
    rep.add("diamond<->bucket round trip and (2n-3)!! count, n<=" + std::to_string(ND), bad.empty(), bad);
    rep.add("inner nodes = capacity-one buckets (" + std::to_string(instances) + " instances)", inner_ok);
  }
  {
    std::string bad;
    for (int n = 1; n <= NB; ++n) {
      std::set<std::string> images;
      std::int64_t count = 0;
      for_each_tree(FamilySpec::port(1, 1), n, [&](const BucketTree& t, const Rational&) {
        ++count;
        auto c = cluster_bundled(t, BundleVariant::ThreeBundlePort);
        if (!(uncluster_bundled(c, BundleVariant::ThreeBundlePort) == t) && bad.empty()) bad = "PORT " + to_text(t);
        images.insert(to_text(c));
      });
      if (static_cast<std::int64_t>(images.size()) != count && bad.empty()) bad = "three-bundle map not injective";
      std::set<std::string> sources, rimages;
      for_each_tree(FamilySpec::recursive(1), n, [&](const BucketTree& t, const Rational&) {
        auto canon = canonicalize(t);
        if (!sources.insert(to_text(canon)).second) return;
        auto c = cluster_bundled(canon, BundleVariant::TwoBundleRecursive);
        if (!(uncluster_bundled(c, BundleVariant::TwoBundleRecursive) == canon) && bad.empty())
          bad = "recursive " + to_text(canon);
        rimages.insert(to_text(c));
      });
      if (rimages.size() != sources.size() && bad.empty()) bad = "two-bundle map not injective";
    }
    rep.add("bundled round trips n<=" + std::to_string(NB), bad.empty(), bad);
  }
  {
    std::string bad;
    for (int b : {2, 3})
      for (auto spec : {FamilySpec::recursive(1), FamilySpec::port(1, 1), FamilySpec::port(1, 2), FamilySpec::ary(1, 2),
                        FamilySpec::ary(1, 3)}) {
        auto w = weights(spec.with_b(b));
        for (int k = 0; k <= 6; ++k)
          if (weight_preserving_phi(spec, b, k) != w.phi(k) && bad.empty())
            bad = spec.to_string() + " b=" + std::to_string(b) + " k=" + std::to_string(k);
      }
    rep.add("weight-preserving phi_k = closed form, k<=6, b in {2,3}", bad.empty(), bad);
  }
}

// ---- 6: urns
inline void criterion_urns(CriterionReport& rep, VerifyLevel level, std::uint64_t seed) {
  {
    std::string bad;
    for (int b = 2; b <= 10; ++b)
      for (auto spec : {FamilySpec::recursive(b), FamilySpec::port(b, 1), FamilySpec::port(b, 2), FamilySpec::ary(b, 2),
                        FamilySpec::ary(b, 3)})
        if (characteristic_polynomial(build_urn(spec).replacement) != characteristic_closed_form(spec) && bad.empty())
          bad = spec.to_string();
    rep.add("characteristic polynomials equal closed forms, b<=10", bad.empty(), bad);
  }
  {
    double worst = 0;
    std::string where;
    for (int b = 2; b <= 30; ++b)
      for (auto spec : {FamilySpec::recursive(b), FamilySpec::port(b, 1), FamilySpec::port(b, 2), FamilySpec::ary(b, 2),
                        FamilySpec::ary(b, 3)}) {
        auto s = urn_spectrum(spec);
        if (s.max_residual > worst) {
          worst = s.max_residual;
          where = spec.to_string();
        }
      }
    rep.add("affine eigenvalue images are roots, b<=30", worst <= 1e-9, "max residual " + fmt(worst) + " at " + where);
  }
  const std::int64_t reps = level == VerifyLevel::Full ? 1'000'000 : 100'000;
  const int N = level == VerifyLevel::Full ? 7 : 6;
  int idx = 0;
  for (auto spec : {FamilySpec::recursive(2), FamilySpec::recursive(3), FamilySpec::port(2, 1),
                    FamilySpec::port(3, make_rational(1, 2)), FamilySpec::ary(2, 3), FamilySpec::ary(3, 2)}) {
    const int b = spec.b();
    auto u = build_urn(spec);
    auto law = node_type_law(spec, N);
    auto acc = monte_carlo<MomentAcc>(RngStream(seed).split(static_cast<std::uint64_t>(idx++)).seed(), reps,
                                      [&](RngStream& rng, MomentAcc& a) {
                                        UrnSimulator sim(u);
                                        sim.reset();
                                        std::vector<double> row;
                                        for (int n = 1; n <= N; ++n) {
                                          if (n > 1) sim.step(rng);
                                          auto nt = sim.node_counts();
                                          row.insert(row.end(), nt.begin(), nt.end());
                                        }
                                        a.add(row);
                                      });
    double worst_z = 0;
    std::string where;
    bool ok = true;
    for (int n = 1; n <= N; ++n)
      for (int m = 0; m < b; ++m) {
        auto i = static_cast<std::size_t>((n - 1) * b + m);
        double exact = to_double(law.mean_counts[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)]);
        double diff = std::abs(acc.mean(i) - exact), se = acc.std_error(i);
        if (diff > 3 * se + 1e-12) ok = false;
        double z = se > 0 ? diff / se : 0;
        if (z > worst_z) {
          worst_z = z;
          where = "n=" + std::to_string(n) + " m=" + std::to_string(m + 1);
        }
      }
    rep.add("urn means vs exact node types " + spec.to_string() + " n<=" + std::to_string(N), ok,
            "max |z| " + fmt(worst_z) + " at " + where);
  }
  const int n = level == VerifyLevel::Full ? 1000 : 200;
  const std::int64_t creps = level == VerifyLevel::Full ? 100'000 : 2'000;
  for (auto spec : {FamilySpec::recursive(3), FamilySpec::port(2, 1), FamilySpec::ary(2, 3)}) {
    const int b = spec.b();
    auto u = build_urn(spec);
    auto urn = monte_carlo<MomentAcc>(RngStream(seed).split(static_cast<std::uint64_t>(idx++)).seed(), creps,
                                      [&](RngStream& rng, MomentAcc& a) {
                                        UrnSimulator sim(u);
                                        sim.reset();
                                        for (int i = 1; i < n; ++i) sim.step(rng);
                                        a.add(sim.node_counts());
                                      });
    auto grow = monte_carlo<MomentAcc>(RngStream(seed).split(static_cast<std::uint64_t>(idx++)).seed(), creps,
                                       [&](RngStream& rng, MomentAcc& a) {
                                         GrowthProcess g(spec, n);
                                         g.grow_to(n, rng);
                                         std::vector<double> cnt(static_cast<std::size_t>(b));
                                         for (int v = 0; v < g.node_count(); ++v)
                                           cnt[static_cast<std::size_t>(g.capacity(v) - 1)] += 1;
                                         a.add(cnt);
                                       });
    bool ok = true;
    double worst_z = 0;
    for (int m = 0; m < b; ++m) {
      auto i = static_cast<std::size_t>(m);
      double diff = std::abs(urn.mean(i) - grow.mean(i));
      double se = std::hypot(urn.std_error(i), grow.std_error(i));
      if (diff > 3 * se + 1e-12) ok = false;
      if (se > 0) worst_z = std::max(worst_z, diff / se);
    }
    rep.add("urn vs growth node types at n=" + std::to_string(n) + " " + spec.to_string(), ok, "max |z| " + fmt(worst_z));
  }
}

// ---- 7: descendants and degrees
inline void criterion_descendants(CriterionReport& rep, VerifyLevel level, std::uint64_t seed) {
  const int N = 7;
  for (auto spec : {FamilySpec::recursive(2), FamilySpec::port(2, 1)}) {
    std::string bad;
    for (int n = 1; n <= N; ++n) {
      std::vector<Statistic> stats;
      for (int j = 1; j <= n; ++j) {
        stats.push_back({Statistic::Kind::Y, j});
        stats.push_back({Statistic::Kind::Tau, j});
        stats.push_back({Statistic::Kind::X, j});
      }
      auto oracle = exact_statistic_pmfs(spec, n, stats);
      for (int j = 1; j <= n; ++j) {
        auto base = static_cast<std::size_t>(3 * (j - 1));
        auto tag = " n=" + std::to_string(n) + " j=" + std::to_string(j);
        if (pmf_Y_exact(spec, n, j) != oracle[base] && bad.empty()) bad = "Y" + tag;
        if (pmf_tau_exact(spec, n, j) != oracle[base + 1] && bad.empty()) bad = "tau" + tag;
        if (pmf_X_exact(spec, n, j) != oracle[base + 2] && bad.empty()) bad = "X" + tag;
      }
    }
    rep.add("pmf_Y, pmf_tau, pmf_X exact vs oracle n<=7 " + spec.to_string(), bad.empty(), bad);
  }
  {
    // as stated: E[X_{n,1}] = H_n - 1
    double worst = 0, worst_shifted = 0;
    int at = 0;
    for (int n = 2; n <= 30; ++n) {
      double h = 0;
      for (int k = 1; k <= n; ++k) h += 1.0 / k;
      double mean = pmf_X(FamilySpec::recursive(1), n, 1).mean();
      if (std::abs(mean - (h - 1)) > worst) {
        worst = std::abs(mean - (h - 1));
        at = n;
      }
      worst_shifted = std::max(worst_shifted, std::abs(mean - (h - 1.0 / n)));
    }
    rep.add("E[X_{n,1}] = H_n - 1 for b=1 recursive, n<=30", worst <= 1e-12,
            "max deviation " + fmt(worst) + " at n=" + std::to_string(at) + "; deviation from H_{n-1} is " +
                fmt(worst_shifted));
  }
  const auto spec = FamilySpec::recursive(2);
  const std::int64_t beta_reps = level == VerifyLevel::Full ? 100'000 : 5'000;
  int idx = 0;
  for (int j : {4, 6}) {
    const int n = 10'000;
    auto acc = monte_carlo<SampleAcc>(RngStream(seed).split(static_cast<std::uint64_t>(idx++)).seed(), beta_reps,
                                      [&](RngStream& rng, SampleAcc& a) {
                                        a.add(static_cast<double>(sample_descendants(spec, n, j, rng).y) / n);
                                      });
    auto law = limit_reference(spec, LimitRegion::fixed_j(j), pmf_K(spec, j));
    auto r = gof_ks(acc.values, [&](double x) { return law.cdf(x); });
    rep.add("KS Y/n vs " + law.describe() + " (n=1e4, j=" + std::to_string(j) + ")", r.pass,
            "D=" + fmt(r.statistic) + " p=" + fmt(r.p_value) + " samples=" + std::to_string(beta_reps));
  }
  {
    const int n = 100'000;
    const int j = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
    const std::int64_t reps = level == VerifyLevel::Full ? 10'000 : 1'000;
    auto acc = monte_carlo<SampleAcc>(RngStream(seed).split(static_cast<std::uint64_t>(idx++)).seed(), reps,
                                      [&](RngStream& rng, SampleAcc& a) {
                                        a.add(static_cast<double>(j) * sample_descendants(spec, n, j, rng).y / n);
                                      });
    auto law = limit_reference(spec, LimitRegion::small_j(), pmf_K(spec, j));
    auto r = gof_ks(acc.values, [&](double x) { return law.cdf(x); });
    rep.add("KS jY/n vs Gamma mixture (n=1e5, j=" + std::to_string(j) + ")", r.pass,
            "D=" + fmt(r.statistic) + " p=" + fmt(r.p_value) + " samples=" + std::to_string(reps));
  }
}

// ---- 8: growth-rule conservation
inline void criterion_conservation(CriterionReport& rep, VerifyLevel level, std::uint64_t seed) {
  const int trees = level == VerifyLevel::Full ? 10'000 : 500;
  int idx = 0;
  for (auto spec : {FamilySpec::recursive(3), FamilySpec::ary(2, 3), FamilySpec::port(2, make_rational(1, 2)),
                    FamilySpec::linear(2, 1, 1, 1)}) {
    RngStream rng = RngStream(seed).split(static_cast<std::uint64_t>(idx++));
    std::string bad;
    int largest = 0;
    for (int t = 0; t < trees && bad.empty(); ++t) {
      int n = 1 + static_cast<int>(rng.below(1000));
      largest = std::max(largest, n);
      auto tree = sample_tree(spec, n, rng);
      auto table = attraction_probs(spec, tree);
      // entries of a named family share the denominator A n - B; sum numerators exactly
      Rational total = table.total();
      if (total != 1) bad = "sum " + to_string(total) + " at " + to_text(tree);
    }
    rep.add("sum of attraction probabilities = 1 on " + std::to_string(trees) + " trees " + spec.to_string() +
                " (sizes <= " + std::to_string(largest) + ")",
            bad.empty(), bad);
  }
}

inline const char* criterion_title(int id) {
  switch (id) {
    case 1: return "total weights";
    case 2: return "measure equality";
    case 3: return "initial bucket size K_n";
    case 4: return "indicial roots and phase change";
    case 5: return "bijections";
    case 6: return "urn models";
    case 7: return "descendants and degrees";
    case 8: return "growth-rule conservation";
    default: throw std::invalid_argument("criterion id must be in 1..8");
  }
}

}  // namespace detail

inline CriterionReport run_criterion(int id, VerifyLevel level, std::uint64_t seed) {
  CriterionReport rep;
  rep.id = id;
  rep.title = detail::criterion_title(id);
  const auto s = detail::derived_seed(seed, id);
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: detail::criterion_total_weights(rep, level); break;
      case 2: detail::criterion_measures(rep, level); break;
      case 3: detail::criterion_k(rep, level, s); break;
      case 4: detail::criterion_spectral(rep); break;
      case 5: detail::criterion_bijections(rep, level); break;
      case 6: detail::criterion_urns(rep, level, s); break;
      case 7: detail::criterion_descendants(rep, level, s); break;
      case 8: detail::criterion_conservation(rep, level, s); break;
    }
  } catch (const std::exception& e) {
    rep.add("exception", false, e.what());
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

/// Quick runs criteria 1-6 at reduced bounds; full runs all eight. Criteria run concurrently when cores allow.
inline SuiteReport verify_suite(VerifyLevel level, std::uint64_t seed = 20240601, std::vector<int> ids = {}) {
  if (ids.empty()) {
    const int last = level == VerifyLevel::Full ? 8 : 6;
    for (int i = 1; i <= last; ++i) ids.push_back(i);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  SuiteReport out;
  out.level = level;
  out.seed = seed;
  if (std::thread::hardware_concurrency() > 1) {
    std::vector<std::future<CriterionReport>> jobs;
    for (int id : ids) jobs.push_back(std::async(std::launch::async, [=] { return run_criterion(id, level, seed); }));
    for (auto& j : jobs) out.criteria.push_back(j.get());
  } else {
    for (int id : ids) out.criteria.push_back(run_criterion(id, level, seed));
  }
  return out;
}

}  // namespace bucket_trees
