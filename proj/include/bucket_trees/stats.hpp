#pragma once

#include "pmf.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bucket_trees {

struct GofReport {
  std::string test;
  double statistic = 0;
  double dof_or_n = 0;  // chi-square degrees of freedom, or KS sample size
  double p_value = 1;
  double significance = 0.001;
  bool pass = true;
};

inline double chi_square_tail(double statistic, double dof) {
  if (statistic <= 0) return 1.0;
  return boost::math::gamma_q(dof / 2, statistic / 2);
}

/// Pearson test; adjacent cells pooled until the expected count reaches 5.
inline GofReport gof_chi_square(const Pmf& expected, const std::map<int, std::int64_t>& observed,
                                double significance = 0.001) {
  std::int64_t total = 0;
  for (const auto& [v, c] : observed) total += c;
  if (total == 0) throw std::invalid_argument("chi-square test needs a nonempty sample");
  const double N = static_cast<double>(total);

  std::int64_t off_support = 0;
  for (const auto& [v, c] : observed)
    if (!(expected[v] > 0) && c > 0) off_support += c;

  std::vector<std::pair<double, double>> cells;  // (expected count, observed count)
  double e_acc = 0, o_acc = 0;
  for (const auto& [v, p] : expected) {
    if (!(p > 0)) continue;
    e_acc += p * N;
    auto it = observed.find(v);
    o_acc += it == observed.end() ? 0.0 : static_cast<double>(it->second);
    if (e_acc >= 5) {
      cells.push_back({e_acc, o_acc});
      e_acc = o_acc = 0;
    }
  }
  if (e_acc > 0 || o_acc > 0) {
    if (cells.empty()) cells.push_back({e_acc, o_acc});
    else {
      cells.back().first += e_acc;
      cells.back().second += o_acc;
    }
  }

  GofReport r;
  r.test = "chi-square";
  r.significance = significance;
  r.dof_or_n = static_cast<double>(cells.size()) - 1;
  if (off_support > 0) {
    r.statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0;
    r.pass = false;
    return r;
  }
  if (cells.size() < 2) throw std::invalid_argument("chi-square test has a single pooled cell");
  for (const auto& [e, o] : cells) r.statistic += (o - e) * (o - e) / e;
  r.p_value = chi_square_tail(r.statistic, r.dof_or_n);
  r.pass = r.p_value >= significance;
  return r;
}

/// Asymptotic Kolmogorov tail P{sqrt(n) D > lambda}.
inline double kolmogorov_tail(double lambda) {
  if (lambda < 0.2) return 1.0;
  double s = 0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
inline GofReport gof_ks(std::vector<double> samples, const std::function<double(double)>& cdf,
                        double significance = 0.001) {
  if (samples.empty()) throw std::invalid_argument("KS test needs a nonempty sample");
  if (samples.size() < 30) throw std::invalid_argument("KS test needs at least 30 samples");
  std::sort(samples.begin(), samples.end());
  const double N = static_cast<double>(samples.size());
  double D = 0;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t k = i;
    while (k < samples.size() && samples[k] == samples[i]) ++k;
    const double F = cdf(samples[i]);
    D = std::max({D, static_cast<double>(k) / N - F, F - static_cast<double>(i) / N});
    i = k;
  }
  GofReport r;
  r.test = "kolmogorov-smirnov";
  r.statistic = D;
  r.dof_or_n = N;
  r.significance = significance;
  const double sq = std::sqrt(N);
  r.p_value = kolmogorov_tail((sq + 0.12 + 0.11 / sq) * D);
  r.pass = r.p_value >= significance;
  return r;
}

}  // namespace bucket_trees
