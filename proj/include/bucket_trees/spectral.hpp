#pragma once

#include "rational.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bucket_trees {

using Complex = std::complex<double>;

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sum_{k=0}^{b-1} 1/(lambda+k).
template <class T>
T harmonic_diff(const T& lambda, int b) {
  T s = T(0);
  for (int k = 0; k < b; ++k) {
    T x = lambda + T(k);
    if (x == T(0)) throw std::domain_error("harmonic difference has a pole");
    s += T(1) / x;
  }
  return s;
}

/// C(lambda + top_offset, m) as prod_{k=1}^{m} (lambda + top_offset - m + k) / k.
template <class T>
T gbinom(const T& lambda, int top_offset, int m) {
  if (m < 0) return T(0);
  T r = T(1);
  for (int k = 1; k <= m; ++k) r *= (lambda + T(top_offset - m + k)) / T(k);
  return r;
}

/// Monic coefficients c_0..c_b (ascending) of lambda^{rising b} - (b+kappa)^{falling b}.
inline std::vector<Rational> indicial_polynomial(int b, const Rational& kappa) {
  std::vector<Rational> c{Rational(1)};  // rising factorial of order 0
  for (int n = 0; n < b; ++n) {
    std::vector<Rational> next(c.size() + 1, Rational(0));
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k] += c[k] * n;
      next[k + 1] += c[k];
    }
    c = std::move(next);
  }
  c[0] -= falling(Rational(b) + kappa, b);
  return c;
}

/// |lambda^{rising b} / (b+kappa)^{falling b} - 1|: residual relative to the constant term.
inline double indicial_residual(Complex lambda, int b, double constant) {
  Complex p(1);
  for (int k = 0; k < b; ++k) p *= lambda + double(k);
  return std::abs(p / constant - 1.0);
}

struct IndicialRoots {
  int b = 0;
  Rational kappa;
  std::vector<Complex> roots;     // descending real part, ties by descending imaginary part
  std::vector<double> residuals;  // relative residuals, see indicial_residual

  std::size_t size() const { return roots.size(); }
  const Complex& operator[](std::size_t i) const { return roots[i]; }
  double max_residual() const {
    return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
  }
};

namespace detail {

struct IndicialEval {
  int b;
  double constant;

  // p(z) and p'(z) without divisions, so poles of the log-derivative are harmless.
  std::pair<Complex, Complex> operator()(Complex z) const {
    Complex value(1), deriv(0);
    for (int k = 0; k < b; ++k) {
      Complex f = z + double(k);
      deriv = deriv * f + value;
      value *= f;
    }
    return {value - constant, deriv};
  }
};

inline IndicialRoots solve_indicial(int b, const Rational& kappa) {
  if (b < 1) throw std::invalid_argument("indicial equation needs b >= 1");
  if (kappa <= -1) throw std::invalid_argument("indicial equation needs kappa > -1");
  const double constant = to_double(falling(Rational(b) + kappa, b));
  const Complex lambda1(to_double(1 + kappa), 0.0);
  IndicialEval eval{b, constant};

  std::vector<Complex> z;
  const int m = b - 1;
  const double center = -(b - 1) / 2.0, radius = (b + 1) / 2.0;
  for (int k = 0; k < m; ++k)
    z.push_back(Complex(center, 0.0) +
                std::polar(radius, 2 * std::numbers::pi * k / m + 0.4));

  // Aberth-Ehrlich iteration on the unknown roots; lambda1 is kept fixed as a
  // known root so the iteration effectively works on p / (z - lambda1).
  bool converged = m == 0;
  for (int iter = 0; iter < 2000 && !converged; ++iter) {
    converged = true;
    for (int i = 0; i < m; ++i) {
      auto [p, dp] = eval(z[static_cast<std::size_t>(i)]);
      if (p == Complex(0)) continue;
      Complex newton = p / dp;
      Complex repulse = 1.0 / (z[static_cast<std::size_t>(i)] - lambda1);
      for (int j = 0; j < m; ++j)
        if (j != i) repulse += 1.0 / (z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]);
      Complex w = newton / (1.0 - newton * repulse);
      z[static_cast<std::size_t>(i)] -= w;
      if (std::abs(w) > 1e-15 * std::max(1.0, std::abs(z[static_cast<std::size_t>(i)]))) converged = false;
    }
  }
  if (!converged) throw SpectralError("indicial root iteration did not converge for b=" + std::to_string(b));

  for (auto& x : z) {
    for (int k = 0; k < 3; ++k) {
      auto [p, dp] = eval(x);
      if (dp == Complex(0)) break;
      Complex step = p / dp;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      Complex trial = x - step;
      if (indicial_residual(trial, b, constant) <= indicial_residual(x, b, constant)) x = trial;
    }
    if (std::abs(x.imag()) < 1e-12 * (1.0 + std::abs(x))) x = Complex(x.real(), 0.0);
  }
  z.push_back(lambda1);

  std::sort(z.begin(), z.end(), [](const Complex& a, const Complex& c) {
    if (std::abs(a.real() - c.real()) > 1e-9 * (1.0 + std::abs(a.real()))) return a.real() > c.real();
    return a.imag() > c.imag();
  });

  IndicialRoots out;
  out.b = b;
  out.kappa = kappa;
  out.roots = z;
  for (const auto& x : z) {
    double r = indicial_residual(x, b, constant);
    if (!(r <= 1e-10)) throw SpectralError("indicial residual tolerance not met for b=" + std::to_string(b));
    out.residuals.push_back(r);
    for (int k = 0; k < b; ++k)
      if (std::abs(x + double(k)) < 1e-8) throw SpectralError("indicial root at a pole");
  }
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (std::abs(z[i] - z[j]) <= 1e-8) throw SpectralError("indicial roots are not simple");
  if (std::abs(z[0] - lambda1) > 1e-12) throw SpectralError("dominant root is not 1+kappa");
  return out;
}

}  // namespace detail

/// Roots of lambda(lambda+1)...(lambda+b-1) = (b+kappa)(b+kappa-1)...(kappa+1). Cached per (b, kappa).
inline const IndicialRoots& indicial_roots(int b, const Rational& kappa) {
  static std::mutex mutex;
  static std::map<std::pair<int, std::string>, IndicialRoots> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(b, kappa.str());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, detail::solve_indicial(b, kappa)).first;
  return it->second;
}

}  // namespace bucket_trees
