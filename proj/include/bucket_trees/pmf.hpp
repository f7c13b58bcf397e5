#pragma once

#include "rational.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace bucket_trees {

/// Finite probability mass function over integers.
template <class T>
class BasicPmf {
 public:
  using map_type = std::map<int, T>;

  BasicPmf() = default;

  static BasicPmf point_mass(int v) {
    BasicPmf p;
    p.mass_[v] = T(1);
    return p;
  }

  void add(int v, const T& p) {
    auto it = mass_.find(v);
    if (it == mass_.end()) mass_.emplace(v, p);
    else it->second += p;
  }

  T operator[](int v) const {
    auto it = mass_.find(v);
    return it == mass_.end() ? T(0) : it->second;
  }

  T total() const {
    T s = T(0);
    for (const auto& [v, p] : mass_) s += p;
    return s;
  }

  T mean() const {
    T s = T(0);
    for (const auto& [v, p] : mass_) s += T(v) * p;
    return s;
  }

  /// Drops exact zeros so supports compare cleanly.
  BasicPmf pruned() const {
    BasicPmf r;
    for (const auto& [v, p] : mass_)
      if (p != T(0)) r.mass_.emplace(v, p);
    return r;
  }

  bool empty() const { return mass_.empty(); }
  int min_value() const { return mass_.begin()->first; }
  int max_value() const { return mass_.rbegin()->first; }
  const map_type& masses() const { return mass_; }
  auto begin() const { return mass_.begin(); }
  auto end() const { return mass_.end(); }

  friend bool operator==(const BasicPmf& a, const BasicPmf& b) {
    return a.pruned().mass_ == b.pruned().mass_;
  }

 private:
  map_type mass_;
};

using Pmf = BasicPmf<double>;
using ExactPmf = BasicPmf<Rational>;

inline Pmf to_double(const ExactPmf& p) {
  Pmf r;
  for (const auto& [v, m] : p) r.add(v, to_double(m));
  return r;
}

/// Largest absolute difference of masses over the union of supports.
inline double max_abs_diff(const Pmf& a, const Pmf& b) {
  double d = 0;
  for (const auto& [v, p] : a) d = std::max(d, std::abs(p - b[v]));
  for (const auto& [v, p] : b) d = std::max(d, std::abs(p - a[v]));
  return d;
}

/// Masses >= -slack and total within tol of one.
inline bool is_probability(const Pmf& p, double tol = 1e-9, double slack = 1e-12) {
  for (const auto& [v, m] : p)
    if (!(m >= -slack)) return false;
  return std::abs(p.total() - 1.0) <= tol;
}

inline bool is_probability(const ExactPmf& p) {
  for (const auto& [v, m] : p)
    if (m < 0) return false;
  return p.total() == 1;
}

}  // namespace bucket_trees
