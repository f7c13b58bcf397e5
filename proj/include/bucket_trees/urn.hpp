#pragma once

#include "family.hpp"
#include "rng.hpp"
#include "spectral.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bucket_trees {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Balanced b-colour urn whose ball counts track node types of a growing bucket tree.
struct UrnModel {
  FamilySpec family;
  RationalMatrix replacement;     // row = drawn type
  std::vector<Rational> initial;  // composition before the first draw
  std::vector<Rational> divisors;
  Rational balance;
  int saturated_shift = 0;  // +1 PORT, -1 ary, 0 recursive: degree contribution of saturated nodes
  BigInt scale = 1;         // common denominator; scale * masses are integers

  int types() const { return static_cast<int>(initial.size()); }
};

inline UrnModel build_urn(const FamilySpec& spec) {
  if (!spec.is_named()) throw std::invalid_argument("urn models exist for named families only");
  const int b = spec.b();
  if (b < 2) throw std::invalid_argument("urn model needs b >= 2");
  UrnModel u{spec, RationalMatrix(static_cast<std::size_t>(b), std::vector<Rational>(static_cast<std::size_t>(b))),
             std::vector<Rational>(static_cast<std::size_t>(b)), {}, 0};
  // D_m: balls carried by one node of capacity m
  auto D = [&](int m) -> Rational {
    switch (spec.kind()) {
      case FamilyKind::BucketRecursive: return Rational(m);
      case FamilyKind::BPort: return m * spec.alpha() + m - 1;
      case FamilyKind::BDAry: return Rational(m * spec.d() - (m - 1));
      default: throw std::logic_error("unreachable family kind");
    }
  };
  for (int m = 1; m <= b; ++m) u.divisors.push_back(D(m));
  for (int m = 1; m < b; ++m) {
    u.replacement[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(m - 1)] = -D(m);
    u.replacement[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(m)] = D(m + 1);
  }
  auto& last = u.replacement[static_cast<std::size_t>(b - 1)];
  last[0] = D(1);
  switch (spec.kind()) {
    case FamilyKind::BucketRecursive: u.saturated_shift = 0; break;
    case FamilyKind::BPort: u.saturated_shift = 1; break;
    default: u.saturated_shift = -1; break;
  }
  last[static_cast<std::size_t>(b - 1)] += u.saturated_shift;
  u.initial[0] = D(1);
  u.balance = D(1) + u.saturated_shift;
  for (const auto& row : u.replacement) {
    Rational s = 0;
    for (const auto& x : row) {
      s += x;
      u.scale = boost::multiprecision::lcm(u.scale, boost::multiprecision::denominator(x));
    }
    if (s != u.balance) throw std::logic_error("urn is not balanced");
  }
  return u;
}

/// Node counts from a composition. Saturated balls also carry the total degree, which equals nodes - 1.
inline std::vector<Rational> node_types(const UrnModel& u, const std::vector<Rational>& q) {
  const int b = u.types();
  std::vector<Rational> n(static_cast<std::size_t>(b));
  Rational unsat = 0;
  for (int m = 0; m + 1 < b; ++m) {
    n[static_cast<std::size_t>(m)] = q[static_cast<std::size_t>(m)] / u.divisors[static_cast<std::size_t>(m)];
    unsat += n[static_cast<std::size_t>(m)];
  }
  const int s = u.saturated_shift;
  n[static_cast<std::size_t>(b - 1)] =
      (q[static_cast<std::size_t>(b - 1)] - s * (unsat - 1)) / (u.divisors[static_cast<std::size_t>(b - 1)] + s);
  return n;
}

/// Integer-mass urn state; draws use exact cumulative counts.
class UrnSimulator {
 public:
  explicit UrnSimulator(const UrnModel& u) : b_(u.types()) {
    const Rational sc(u.scale);
    for (const auto& row : u.replacement)
      for (const auto& x : row) delta_.push_back(to_int(x * sc));
    for (const auto& x : u.initial) counts_.push_back(to_int(x * sc));
    reset_counts_ = counts_;
    for (const auto& d : u.divisors) inv_mass_.push_back(1.0 / to_double(d * sc));
    shift_ = u.saturated_shift;
    last_den_ = to_double(u.divisors.back() + shift_);
    inv_scale_ = 1.0 / to_double(sc);
  }

  void reset() { counts_ = reset_counts_; total_ = sum(); }
  const std::vector<std::int64_t>& counts() const { return counts_; }

  /// node_types() in floating point, for bulk replicates.
  std::vector<double> node_counts() const {
    std::vector<double> n(static_cast<std::size_t>(b_));
    double unsat = 0;
    for (int m = 0; m + 1 < b_; ++m) {
      n[static_cast<std::size_t>(m)] = static_cast<double>(counts_[static_cast<std::size_t>(m)]) * inv_mass_[static_cast<std::size_t>(m)];
      unsat += n[static_cast<std::size_t>(m)];
    }
    n.back() = (static_cast<double>(counts_.back()) * inv_scale_ - shift_ * (unsat - 1)) / last_den_;
    return n;
  }

  int step(RngStream& rng) {
    if (total_ == 0) total_ = sum();
    std::int64_t r = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total_)));
    int t = 0;
    while (r >= counts_[static_cast<std::size_t>(t)]) r -= counts_[static_cast<std::size_t>(t++)];
    const std::int64_t* d = &delta_[static_cast<std::size_t>(t * b_)];
    for (int m = 0; m < b_; ++m) {
      counts_[static_cast<std::size_t>(m)] += d[m];
      total_ += d[m];
      if (counts_[static_cast<std::size_t>(m)] < 0) throw std::logic_error("urn composition became negative");
    }
    return t;
  }

 private:
  static std::int64_t to_int(const Rational& x) {
    if (!is_integer(x)) throw std::logic_error("urn mass is not integral after scaling");
    return boost::multiprecision::numerator(x).convert_to<std::int64_t>();
  }
  std::int64_t sum() const {
    std::int64_t s = 0;
    for (auto c : counts_) s += c;
    return s;
  }

  int b_;
  std::vector<std::int64_t> delta_;
  std::vector<std::int64_t> counts_, reset_counts_;
  std::int64_t total_ = 0;
  std::vector<double> inv_mass_;
  int shift_ = 0;
  double last_den_ = 1, inv_scale_ = 1;
};

struct UrnTrajectory {
  std::vector<std::vector<Rational>> compositions;  // Q_0 .. Q_steps
};

inline UrnTrajectory simulate_urn(const UrnModel& u, int steps, RngStream& rng) {
  if (steps < 0) throw std::invalid_argument("steps must be >= 0");
  UrnSimulator sim(u);
  sim.reset();
  const Rational sc(u.scale);
  UrnTrajectory tr;
  auto record = [&] {
    std::vector<Rational> q;
    for (auto c : sim.counts()) q.push_back(Rational(c) / sc);
    tr.compositions.push_back(std::move(q));
  };
  record();
  for (int i = 0; i < steps; ++i) {
    sim.step(rng);
    record();
  }
  return tr;
}

// ---------------------------------------------------------------- spectrum

/// Coefficients (ascending) of det(M - lambda I) by Faddeev-LeVerrier.
inline std::vector<Rational> characteristic_polynomial(const RationalMatrix& a) {
  const std::size_t n = a.size();
  std::vector<Rational> c(n + 1);  // det(lambda I - A)
  c[n] = 1;
  RationalMatrix m(n, std::vector<Rational>(n));
  for (std::size_t k = 1; k <= n; ++k) {
    RationalMatrix next(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (a[i][l] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) next[i][j] += a[i][l] * m[l][j];
      }
    for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
    m = std::move(next);
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
    c[n - k] = -tr / static_cast<long>(k);
  }
  if (n % 2)
    for (auto& x : c) x = -x;
  return c;
}

namespace detail {
inline std::vector<Rational> poly_mul_linear(const std::vector<Rational>& p, const Rational& slope, const Rational& shift) {
  std::vector<Rational> out(p.size() + 1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i + 1] += p[i] * slope;
    out[i] += p[i] * shift;
  }
  return out;
}
}  // namespace detail

/// Closed form of det(M - lambda I): (-1)^b s^b [ ((lambda - t)/s)^{rising b} - c^{rising b} ].
inline std::vector<Rational> characteristic_closed_form(const FamilySpec& spec) {
  const int b = spec.b();
  Rational s, t, c;
  switch (spec.kind()) {
    case FamilyKind::BucketRecursive: s = 1; t = 0; c = 1; break;
    case FamilyKind::BPort: s = spec.alpha() + 1; t = 1; c = spec.alpha() / s; break;
    case FamilyKind::BDAry: s = spec.d() - 1; t = -1; c = Rational(spec.d()) / s; break;
    default: throw std::invalid_argument("closed form exists for named families only");
  }
  std::vector<Rational> p{Rational(1)};
  for (int i = 0; i < b; ++i) p = detail::poly_mul_linear(p, 1 / s, i - t / s);
  p[0] -= rising(c, b);
  Rational f = ipow(s, b);
  if (b % 2) f = -f;
  for (auto& x : p) x *= f;
  return p;
}

/// Urn eigenvalue as an affine image of an indicial root.
inline Complex urn_eigenvalue_from_indicial(const FamilySpec& spec, Complex mu) {
  switch (spec.kind()) {
    case FamilyKind::BucketRecursive: return mu;
    case FamilyKind::BPort: return 1.0 + to_double(spec.alpha() + 1) * mu;
    case FamilyKind::BDAry: return double(spec.d() - 1) * mu - 1.0;
    default: throw std::invalid_argument("affine map exists for named families only");
  }
}

/// |p(z)| / sum |c_k| |z|^k in long double.
inline double normalized_poly_residual(const std::vector<Rational>& c, Complex z) {
  using LC = std::complex<long double>;
  LC zz(z.real(), z.imag()), v(0);
  long double scale = 0, az = std::abs(zz);
  for (std::size_t k = c.size(); k-- > 0;) {
    long double ck = c[k].convert_to<long double>();
    v = v * zz + ck;
    scale = scale * az + std::fabs(ck);
  }
  return static_cast<double>(std::abs(v) / scale);
}

struct UrnSpectrum {
  std::vector<Rational> charpoly;  // det(M - lambda I), ascending
  std::vector<Complex> eigenvalues;  // descending real part
  std::vector<double> residuals;
  double max_residual = 0;
  double phase_indicator = 0;  // Re lambda_2 / lambda_1
  bool normal_phase() const { return phase_indicator <= 0.5; }
};

inline UrnSpectrum urn_spectrum(const UrnModel& u) {
  UrnSpectrum out;
  out.charpoly = characteristic_polynomial(u.replacement);
  if (out.charpoly != characteristic_closed_form(u.family))
    throw std::logic_error("characteristic polynomial differs from its closed form");
  const auto& ind = indicial_roots(u.family.b(), kappa(u.family));
  for (const auto& mu : ind.roots) {
    Complex l = urn_eigenvalue_from_indicial(u.family, mu);
    out.eigenvalues.push_back(l);
    out.residuals.push_back(normalized_poly_residual(out.charpoly, l));
    out.max_residual = std::max(out.max_residual, out.residuals.back());
  }
  out.phase_indicator = out.eigenvalues.size() > 1 ? out.eigenvalues[1].real() / out.eigenvalues[0].real() : 0.0;
  return out;
}

inline UrnSpectrum urn_spectrum(const FamilySpec& spec) { return urn_spectrum(build_urn(spec)); }

}  // namespace bucket_trees
