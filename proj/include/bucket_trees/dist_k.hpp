#pragma once

#include "family.hpp"
#include "grow.hpp"
#include "pmf.hpp"
#include "spectral.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace bucket_trees {

namespace detail {
// C(b, m-1) (b-m+1) C(b+kappa, b) / C(m-1+kappa, m-1)
inline Rational k_denominator(int b, int m, const Rational& k) {
  return binom(Rational(b), m - 1) * (b - m + 1) * binom(Rational(b) + k, b) / binom(Rational(m - 1) + k, m - 1);
}

inline void require_named(const FamilySpec& spec) {
  if (!spec.is_named()) throw std::invalid_argument("closed-form distributions need a named family");
}
}  // namespace detail

/// P{K_n = m} from the indicial roots. Point mass at n when n <= b.
inline Pmf pmf_K(const FamilySpec& spec, int n) {
  detail::require_named(spec);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const int b = spec.b();
  if (n <= b) return Pmf::point_mass(n);
  const Rational k = kappa(spec);
  const double kd = to_double(k);
  const auto& roots = indicial_roots(b, k);
  std::vector<Complex> mass(static_cast<std::size_t>(b) + 1, Complex(0));
  std::vector<double> denom(static_cast<std::size_t>(b) + 1);
  for (int m = 1; m <= b; ++m) denom[static_cast<std::size_t>(m)] = to_double(detail::k_denominator(b, m, k));
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const Complex lam = roots[i];
    // C(lam+n-2, n-1) / C(n-1+kappa, n-1), factor by factor
    Complex ratio(1);
    if (i > 0)
      for (int j = 1; j <= n - 1; ++j) ratio *= (lam - 1.0 + double(j)) / (kd + j);
    const Complex hd = harmonic_diff(lam, b);
    for (int m = 1; m <= b; ++m)
      mass[static_cast<std::size_t>(m)] += ratio * gbinom(lam, b - 1, b - m) / (hd * denom[static_cast<std::size_t>(m)]);
  }
  Pmf p;
  for (int m = 1; m <= b; ++m) {
    const Complex z = mass[static_cast<std::size_t>(m)];
    if (std::abs(z.imag()) > 1e-10) throw SpectralError("K_n mass has a non-negligible imaginary part");
    p.add(m, z.real());
  }
  return p;
}

/// Limit law of K_n: the dominant-root term, exact.
inline ExactPmf limit_K_exact(const FamilySpec& spec) {
  detail::require_named(spec);
  const int b = spec.b();
  const Rational k = kappa(spec);
  const Rational lam = 1 + k;
  const Rational hd = harmonic_diff(lam, b);
  ExactPmf p;
  for (int m = 1; m <= b; ++m) p.add(m, gbinom(lam, b - 1, b - m) / (hd * detail::k_denominator(b, m, k)));
  return p;
}

inline Pmf limit_K(const FamilySpec& spec) { return to_double(limit_K_exact(spec)); }

/// Exact law of the node-type vector (N_1..N_b) along the growth process.
/// Total degree is (number of nodes - 1), so the vector alone is a Markov chain.
struct NodeTypeLaw {
  std::vector<ExactPmf> K;                          // K[s]: law of K_s, s = 1..n
  std::vector<std::vector<Rational>> mean_counts;  // mean_counts[s][k-1] = E[N_{s,k}]
};

inline NodeTypeLaw node_type_law(const FamilySpec& spec, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const int b = spec.b();
  const auto rule = AttractionRule::for_family(spec);
  check_rule_reachable(rule, b, n);
  using State = std::vector<int>;
  std::map<State, Rational> dist;
  State start(static_cast<std::size_t>(b), 0);
  start[0] = 1;
  dist[start] = 1;
  NodeTypeLaw law;
  law.K.resize(static_cast<std::size_t>(n) + 1);
  law.mean_counts.resize(static_cast<std::size_t>(n) + 1);
  law.K[1] = ExactPmf::point_mass(1);
  auto record_means = [&](int s) {
    std::vector<Rational> mean(static_cast<std::size_t>(b), Rational(0));
    for (const auto& [st, p] : dist)
      for (int k = 0; k < b; ++k) mean[static_cast<std::size_t>(k)] += p * st[static_cast<std::size_t>(k)];
    law.mean_counts[static_cast<std::size_t>(s)] = std::move(mean);
  };
  record_means(1);
  for (int s = 1; s < n; ++s) {
    std::map<State, Rational> next;
    ExactPmf k_next;
    for (const auto& [st, p] : dist) {
      std::int64_t nodes = 0;
      for (int c : st) nodes += c;
      std::vector<std::int64_t> w(static_cast<std::size_t>(b));
      std::int64_t total = 0;
      for (int c = 1; c <= b; ++c) {
        std::int64_t cnt = st[static_cast<std::size_t>(c - 1)];
        std::int64_t x = cnt * rule.weight(c, 0);
        if (c == b) x += rule.B * (nodes - 1);
        w[static_cast<std::size_t>(c - 1)] = x;
        total += x;
      }
      for (int c = 1; c <= b; ++c) {
        std::int64_t x = w[static_cast<std::size_t>(c - 1)];
        if (x == 0) continue;
        Rational q = p * Rational(BigInt(x), BigInt(total));
        State t = st;
        if (c < b) {
          --t[static_cast<std::size_t>(c - 1)];
          ++t[static_cast<std::size_t>(c)];
          k_next.add(c + 1, q);
        } else {
          ++t[0];
          k_next.add(1, q);
        }
        next[t] += q;
      }
    }
    dist = std::move(next);
    law.K[static_cast<std::size_t>(s) + 1] = std::move(k_next);
    record_means(s + 1);
  }
  return law;
}

inline ExactPmf pmf_K_exact(const FamilySpec& spec, int n) {
  return node_type_law(spec, n).K[static_cast<std::size_t>(n)];
}

/// P{K_{n+1} = m} from the expected node counts E[N_{n,k}] (counts[k-1]).
template <class T>
BasicPmf<T> node_type_relation(const FamilySpec& spec, int n, const std::vector<T>& counts) {
  const int b = spec.b();
  if (counts.size() != static_cast<std::size_t>(b)) throw std::invalid_argument("expected counts do not match b");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const auto rule = AttractionRule::for_family(spec);
  T nodes = T(0);
  for (const auto& c : counts) nodes += c;
  const T total = T(rule.A * n - rule.B);
  BasicPmf<T> p;
  T sat = counts[static_cast<std::size_t>(b - 1)] * T(rule.weight(b, 0)) + T(rule.B) * (nodes - T(1));
  p.add(1, sat / total);
  for (int m = 2; m <= b; ++m)
    p.add(m, counts[static_cast<std::size_t>(m - 2)] * T(rule.weight(m - 1, 0)) / total);
  return p;
}

}  // namespace bucket_trees
