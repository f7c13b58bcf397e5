#pragma once

#include "dist_k.hpp"
#include "family.hpp"
#include "grow.hpp"
#include "pmf.hpp"
#include "rng.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bucket_trees {

/// Descendant recurrence constants with c2/c1 = kappa.
struct DescendantConstants {
  Rational c1, c2;

  static DescendantConstants for_family(const FamilySpec& spec) {
    switch (spec.kind()) {
      case FamilyKind::BucketRecursive: return {1, 0};
      case FamilyKind::BDAry: return {spec.d() - 1, 1};
      case FamilyKind::BPort: return {spec.alpha() + 1, -1};
      default: throw std::invalid_argument("descendant laws need a named family");
    }
  }
};

namespace detail {

template <class T>
T scalar(const Rational& r) {
  if constexpr (std::is_same_v<T, Rational>) return r;
  else return to_double(r);
}

template <class T>
BasicPmf<T> k_law(const FamilySpec& spec, int j) {
  if constexpr (std::is_same_v<T, Rational>) return pmf_K_exact(spec, j);
  else return pmf_K(spec, j);
}

inline void check_range(int n, int j) {
  if (j < 1 || n < j) throw std::invalid_argument("need n >= j >= 1");
}

// Row P{Y_{n,l,j} = m}, m = 1..n+1-j, stored at index m-1.
template <class T>
std::vector<T> y_conditional_row(const FamilySpec& spec, int n, int l, int j) {
  const auto cc = DescendantConstants::for_family(spec);
  const T c1 = scalar<T>(cc.c1), c2 = scalar<T>(cc.c2);
  std::vector<T> row{T(1)};
  for (int i = j; i < n; ++i) {
    std::vector<T> next(row.size() + 1, T(0));
    const T denom = c1 * T(i) + c2;
    for (std::size_t idx = 0; idx < row.size(); ++idx) {
      if (row[idx] == T(0)) continue;
      const int m = static_cast<int>(idx) + 1;
      const T up = (c1 * T(m + l - 1) + c2) / denom;
      next[idx + 1] += row[idx] * up;
      next[idx] += row[idx] * (T(1) - up);
    }
    row = std::move(next);
  }
  return row;
}

}  // namespace detail

template <class T>
BasicPmf<T> pmf_Y_conditional_t(const FamilySpec& spec, int n, int l, int j) {
  if (j <= spec.b()) throw std::invalid_argument("conditional descendants need j > b; use Y = n+1-j");
  if (l < 1 || l > spec.b()) throw std::invalid_argument("need 1 <= l <= b");
  detail::check_range(n, j);
  auto row = detail::y_conditional_row<T>(spec, n, l, j);
  BasicPmf<T> p;
  for (std::size_t i = 0; i < row.size(); ++i) p.add(static_cast<int>(i) + 1, row[i]);
  return p;
}

inline Pmf pmf_Y_conditional(const FamilySpec& spec, int n, int l, int j) {
  return pmf_Y_conditional_t<double>(spec, n, l, j);
}
inline ExactPmf pmf_Y_conditional_exact(const FamilySpec& spec, int n, int l, int j) {
  return pmf_Y_conditional_t<Rational>(spec, n, l, j);
}

template <class T>
BasicPmf<T> pmf_Y_t(const FamilySpec& spec, int n, int j) {
  detail::check_range(n, j);
  const int b = spec.b();
  if (j <= b) return BasicPmf<T>::point_mass(n + 1 - j);
  auto kj = detail::k_law<T>(spec, j);
  BasicPmf<T> p;
  for (int l = 1; l <= b; ++l) {
    T w = kj[l];
    if (w == T(0)) continue;
    auto row = detail::y_conditional_row<T>(spec, n, l, j);
    for (std::size_t i = 0; i < row.size(); ++i) p.add(static_cast<int>(i) + 1, w * row[i]);
  }
  return p;
}

inline Pmf pmf_Y(const FamilySpec& spec, int n, int j) { return pmf_Y_t<double>(spec, n, j); }
inline ExactPmf pmf_Y_exact(const FamilySpec& spec, int n, int j) { return pmf_Y_t<Rational>(spec, n, j); }

/// Saturation time of label j's bucket; mass at n also covers "not saturated by n".
template <class T>
BasicPmf<T> pmf_tau_t(const FamilySpec& spec, int n, int j) {
  detail::check_range(n, j);
  const int b = spec.b();
  if (j <= b) return BasicPmf<T>::point_mass(std::min(b, n));
  if (n == j) return BasicPmf<T>::point_mass(j);
  const auto cc = DescendantConstants::for_family(spec);
  const T c1 = detail::scalar<T>(cc.c1), c2 = detail::scalar<T>(cc.c2);
  auto kj = detail::k_law<T>(spec, j);
  BasicPmf<T> p;
  p.add(j, kj[b]);
  for (int l = 1; l < b; ++l) {
    const T w = kj[l];
    if (w == T(0)) continue;
    // Y restricted to unsaturated states 1..b-l
    std::vector<T> row(static_cast<std::size_t>(b - l), T(0));
    row[0] = T(1);
    for (int i = j; i < n; ++i) {
      const T denom = c1 * T(i) + c2;
      const T p_sat = (c1 * T(b - 1) + c2) / denom;
      p.add(i + 1, w * row.back() * p_sat);
      std::vector<T> next(row.size(), T(0));
      for (std::size_t idx = 0; idx < row.size(); ++idx) {
        const int m = static_cast<int>(idx) + 1;
        const T up = (c1 * T(m + l - 1) + c2) / denom;
        if (idx + 1 < row.size()) next[idx + 1] += row[idx] * up;
        next[idx] += row[idx] * (T(1) - up);
      }
      row = std::move(next);
    }
    T rest = T(0);
    for (const auto& x : row) rest += x;
    p.add(n, w * rest);
  }
  return p;
}

inline Pmf pmf_tau(const FamilySpec& spec, int n, int j) { return pmf_tau_t<double>(spec, n, j); }
inline ExactPmf pmf_tau_exact(const FamilySpec& spec, int n, int j) { return pmf_tau_t<Rational>(spec, n, j); }

/// White draws in N steps of the urn with rows (1, alpha; 0, 1+alpha) from (w0, b0).
template <class T>
BasicPmf<T> triangular_urn_white_draws(const Rational& w0, const Rational& b0, const Rational& alpha, int steps) {
  if (w0 < 0 || b0 < 0 || w0 + b0 <= 0 || alpha < 0) throw std::invalid_argument("invalid triangular urn");
  std::vector<T> row{T(1)};
  for (int t = 0; t < steps; ++t) {
    const T total = detail::scalar<T>(w0 + b0 + t * (alpha + 1));
    std::vector<T> next(row.size() + 1, T(0));
    for (std::size_t x = 0; x < row.size(); ++x) {
      const T white = (detail::scalar<T>(w0) + T(static_cast<int>(x))) / total;
      next[x + 1] += row[x] * white;
      next[x] += row[x] * (T(1) - white);
    }
    row = std::move(next);
  }
  BasicPmf<T> p;
  for (std::size_t x = 0; x < row.size(); ++x) p.add(static_cast<int>(x), row[x]);
  return p;
}

/// Out-degree of label j's bucket. Once the bucket saturates at time t, label i+1
/// attaches to it with probability w(b, deg)/total(i); the kernel does not depend on t,
/// so one forward pass mixes over the saturation time.
template <class T>
BasicPmf<T> pmf_X_t(const FamilySpec& spec, int n, int j) {
  detail::check_range(n, j);
  if (spec.kind() != FamilyKind::BucketRecursive && spec.kind() != FamilyKind::BPort)
    throw std::invalid_argument("out-degree law is available for bucket recursive and PORT families only");
  const int b = spec.b();
  if (n < b) return BasicPmf<T>::point_mass(0);  // the root is still an unsaturated leaf
  const auto rule = AttractionRule::for_family(spec);
  auto tau = pmf_tau_t<T>(spec, n, j);
  if (tau.max_value() > n) throw std::logic_error("saturation time beyond n");
  std::vector<T> deg{T(0)};
  for (int i = tau.min_value(); i <= n; ++i) {
    deg[0] += tau[i];
    if (i == n) break;
    const T total = T(rule.A * i - rule.B);
    std::vector<T> next(deg.size() + 1, T(0));
    for (std::size_t x = 0; x < deg.size(); ++x) {
      if (deg[x] == T(0)) continue;
      const T attach = T(rule.weight(b, static_cast<int>(x))) / total;
      next[x + 1] += deg[x] * attach;
      next[x] += deg[x] * (T(1) - attach);
    }
    deg = std::move(next);
  }
  BasicPmf<T> p;
  for (std::size_t x = 0; x < deg.size(); ++x) p.add(static_cast<int>(x), deg[x]);
  return p;
}

inline Pmf pmf_X(const FamilySpec& spec, int n, int j) { return pmf_X_t<double>(spec, n, j); }
inline ExactPmf pmf_X_exact(const FamilySpec& spec, int n, int j) { return pmf_X_t<Rational>(spec, n, j); }

// ---------------------------------------------------------------- limit laws

enum class LimitRegionKind { FixedJ, SmallJ, Central, LargeJ };

struct LimitRegion {
  LimitRegionKind kind = LimitRegionKind::FixedJ;
  int j = 0;         // FixedJ
  double rho = 0.0;  // Central

  static LimitRegion fixed_j(int j) { return {LimitRegionKind::FixedJ, j, 0.0}; }
  static LimitRegion small_j() { return {LimitRegionKind::SmallJ, 0, 0.0}; }
  static LimitRegion central(double rho) { return {LimitRegionKind::Central, 0, rho}; }
  static LimitRegion large_j() { return {LimitRegionKind::LargeJ, 0, 0.0}; }
};

/// Mixture over K of Beta(K+kappa, j-K) for Y/n, Gamma(K+kappa, 1) for jY/n,
/// NegBin(K+kappa, rho) for Y-1, or the point mass at 1 for Y.
struct LimitLaw {
  struct Component {
    double weight;
    double shape;
    double param;  // Beta second shape, Gamma scale, NegBin rho
  };
  LimitRegionKind kind;
  std::vector<Component> components;

  double cdf(double x) const {
    if (kind == LimitRegionKind::LargeJ) return x >= 1.0 ? 1.0 : 0.0;
    double F = 0;
    for (const auto& c : components) {
      double v = 0;
      switch (kind) {
        case LimitRegionKind::FixedJ:
          v = x <= 0 ? 0.0 : x >= 1 ? 1.0 : boost::math::ibeta(c.shape, c.param, x);
          break;
        case LimitRegionKind::SmallJ: v = x <= 0 ? 0.0 : boost::math::gamma_p(c.shape, x / c.param); break;
        case LimitRegionKind::Central: {
          double k = std::floor(x);
          v = k < 0 ? 0.0 : boost::math::ibeta(c.shape, k + 1, c.param);
          break;
        }
        case LimitRegionKind::LargeJ: break;
      }
      F += c.weight * v;
    }
    return F;
  }

  std::string describe() const {
    std::ostringstream os;
    const char* name = kind == LimitRegionKind::FixedJ   ? "Beta"
                       : kind == LimitRegionKind::SmallJ ? "Gamma"
                       : kind == LimitRegionKind::Central ? "NegBin"
                                                          : "PointMass";
    if (kind == LimitRegionKind::LargeJ) return "PointMass(1)";
    for (std::size_t i = 0; i < components.size(); ++i)
      os << (i ? " + " : "") << components[i].weight << "*" << name << "(" << components[i].shape << ","
         << components[i].param << ")";
    return os.str();
  }
};

inline LimitLaw limit_reference(const FamilySpec& spec, const LimitRegion& region, const Pmf& kmix) {
  LimitLaw law{region.kind, {}};
  if (region.kind == LimitRegionKind::LargeJ) return law;
  const double k = to_double(kappa(spec));
  if (region.kind == LimitRegionKind::FixedJ && region.j <= spec.b())
    throw std::invalid_argument("fixed-j limit needs j > b");
  if (region.kind == LimitRegionKind::Central && !(region.rho > 0 && region.rho < 1))
    throw std::invalid_argument("central region needs 0 < rho < 1");
  for (const auto& [l, w] : kmix) {
    if (w == 0) continue;
    const double shape = l + k;
    switch (region.kind) {
      case LimitRegionKind::FixedJ: law.components.push_back({w, shape, double(region.j - l)}); break;
      case LimitRegionKind::SmallJ: law.components.push_back({w, shape, 1.0}); break;
      case LimitRegionKind::Central: law.components.push_back({w, shape, region.rho}); break;
      case LimitRegionKind::LargeJ: break;
    }
  }
  return law;
}

// ---------------------------------------------------------------- sampling

struct DescendantSample {
  int k;  // K_j
  int y;  // Y_{n,j}
};

/// Grows the tree to size j, then follows the subtree of j's bucket as a
/// two-class chain: the subtree attracts with weight A*L - B out of A*i - B,
/// where L counts its labels including the l-1 older labels of the bucket.
inline DescendantSample sample_descendants(const FamilySpec& spec, int n, int j, RngStream& rng) {
  detail::check_range(n, j);
  if (!spec.is_named()) throw std::invalid_argument("descendant sampling needs a named family");
  GrowthProcess g(spec, j);
  g.grow_to(j, rng);
  const int v = g.node_of(j);
  int k = 0;
  for (Label l = 1; l <= j; ++l) k += g.node_of(l) == v;
  const auto rule = g.rule();
  std::int64_t L = k;  // labels of the subtree, counting older bucket labels
  for (std::int64_t i = j; i < n; ++i) {
    const auto total = static_cast<std::uint64_t>(rule.A * i - rule.B);
    const std::int64_t mine = rule.A * L - rule.B;
    if (static_cast<std::int64_t>(rng.below(total)) < mine) ++L;
  }
  return {k, static_cast<int>(L - k + 1)};
}

}  // namespace bucket_trees
