#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bucket_trees {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

/// Parses "p", "p/q" or a finite decimal such as "0.25".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  try {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      BigInt num(s.substr(0, slash));
      BigInt den(s.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("rational with zero denominator");
      return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(s.size() - dot - 1));
      if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument(s);
      return Rational(BigInt(digits), den);
    }
    return Rational(BigInt(s));
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational: " + s);
  }
}

inline std::string to_string(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline bool is_integer(const Rational& r) {
  return boost::multiprecision::denominator(r) == 1;
}

inline Rational factorial(int k) {
  Rational r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

/// x (x+1) ... (x+k-1)
template <class T>
T rising(const T& x, int k) {
  T r = T(1);
  for (int i = 0; i < k; ++i) r *= (x + T(i));
  return r;
}

/// x (x-1) ... (x-k+1)
template <class T>
T falling(const T& x, int k) {
  T r = T(1);
  for (int i = 0; i < k; ++i) r *= (x - T(i));
  return r;
}

/// Generalized binomial C(x, k) for k >= 0; zero for k < 0.
inline Rational binom(const Rational& x, int k) {
  if (k < 0) return Rational(0);
  return falling(x, k) / factorial(k);
}

inline Rational ipow(const Rational& x, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace bucket_trees
