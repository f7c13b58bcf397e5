#pragma once

#include "rational.hpp"
#include "tree.hpp"

#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bucket_trees {

enum class FamilyKind { BucketRecursive, BDAry, BPort, Linear, Custom };

struct LinearParams {
  Rational alpha, beta, m;
};

/// Selects a tree family and its capacity bound.
class FamilySpec {
 public:
  static FamilySpec recursive(int b) {
    FamilySpec s(FamilyKind::BucketRecursive, b);
    return s;
  }
  static FamilySpec ary(int b, int d) {
    if (d < 2) throw std::invalid_argument("ary family needs d >= 2");
    FamilySpec s(FamilyKind::BDAry, b);
    s.d_ = d;
    return s;
  }
  static FamilySpec port(int b, Rational alpha) {
    if (alpha <= 0) throw std::invalid_argument("PORT family needs alpha > 0");
    FamilySpec s(FamilyKind::BPort, b);
    s.alpha_ = std::move(alpha);
    return s;
  }
  static FamilySpec linear(int b, Rational alpha, Rational beta, Rational m) {
    FamilySpec s(FamilyKind::Linear, b);
    s.linear_ = LinearParams{std::move(alpha), std::move(beta), std::move(m)};
    return s;
  }
  /// phi(k) for k >= 0, psi[k-1] for 1 <= k < b. max_degree bounds the nonzero phi range if known.
  static FamilySpec custom(int b, std::function<Rational(int)> phi, std::vector<Rational> psi,
                           std::string name = "custom", std::optional<int> max_degree = std::nullopt) {
    if (psi.size() != static_cast<std::size_t>(b - 1))
      throw std::invalid_argument("custom family needs b-1 psi values");
    FamilySpec s(FamilyKind::Custom, b);
    s.phi_ = std::move(phi);
    s.psi_ = std::move(psi);
    s.name_ = std::move(name);
    s.max_degree_ = max_degree;
    return s;
  }

  FamilyKind kind() const { return kind_; }
  int b() const { return b_; }
  int d() const { return d_; }
  const Rational& alpha() const { return alpha_; }
  const LinearParams& linear_params() const { return linear_; }
  bool is_named() const {
    return kind_ == FamilyKind::BucketRecursive || kind_ == FamilyKind::BDAry || kind_ == FamilyKind::BPort;
  }

  /// Same family with a different capacity bound.
  FamilySpec with_b(int b) const {
    if (kind_ == FamilyKind::Custom) throw std::invalid_argument("cannot rebind b of a custom family");
    FamilySpec s = *this;
    if (b < 1) throw std::invalid_argument("capacity bound must be >= 1");
    s.b_ = b;
    return s;
  }

  std::string to_string() const {
    std::ostringstream os;
    switch (kind_) {
      case FamilyKind::BucketRecursive: os << "recursive:b=" << b_; break;
      case FamilyKind::BDAry: os << "ary:b=" << b_ << ",d=" << d_; break;
      case FamilyKind::BPort: os << "port:b=" << b_ << ",alpha=" << alpha_.str(); break;
      case FamilyKind::Linear:
        os << "linear:b=" << b_ << ",alpha=" << linear_.alpha.str() << ",beta=" << linear_.beta.str()
           << ",m=" << linear_.m.str();
        break;
      case FamilyKind::Custom: os << name_ << ":b=" << b_; break;
    }
    return os.str();
  }

  /// Parses `recursive:b=2`, `ary:b=2,d=3`, `port:b=3,alpha=1`, `linear:b=2,alpha=1,beta=1,m=1`.
  static FamilySpec parse(std::string_view text) {
    auto colon = text.find(':');
    std::string kind(text.substr(0, colon));
    std::map<std::string, std::string> kv;
    if (colon != std::string_view::npos) {
      std::string rest(text.substr(colon + 1));
      std::stringstream ss(rest);
      std::string item;
      while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("malformed family parameter: " + item);
        kv[item.substr(0, eq)] = item.substr(eq + 1);
      }
    }
    auto take = [&](const std::string& key, std::optional<std::string> fallback = std::nullopt) {
      auto it = kv.find(key);
      if (it == kv.end()) {
        if (fallback) return *fallback;
        throw std::invalid_argument("family '" + kind + "' needs parameter " + key);
      }
      std::string v = it->second;
      kv.erase(it);
      return v;
    };
    auto integer = [](const std::string& v) {
      std::size_t used = 0;
      int x = std::stoi(v, &used);
      if (used != v.size()) throw std::invalid_argument("not an integer: " + v);
      return x;
    };
    int b = integer(take("b", "1"));
    FamilySpec spec = [&] {
      if (kind == "recursive") return recursive(b);
      if (kind == "ary") return ary(b, integer(take("d")));
      if (kind == "port") return port(b, parse_rational(take("alpha")));
      if (kind == "linear")
        return linear(b, parse_rational(take("alpha")), parse_rational(take("beta")),
                      parse_rational(take("m")));
      throw std::invalid_argument("unknown family kind: " + kind);
    }();
    if (!kv.empty()) throw std::invalid_argument("unknown family parameter: " + kv.begin()->first);
    if (b < 1) throw std::invalid_argument("capacity bound must be >= 1");
    return spec;
  }

  // Custom weights; empty for other kinds.
  const std::function<Rational(int)>& custom_phi() const { return phi_; }
  const std::vector<Rational>& custom_psi() const { return psi_; }
  std::optional<int> custom_max_degree() const { return max_degree_; }

 private:
  FamilySpec(FamilyKind kind, int b) : kind_(kind), b_(b) {
    if (b < 1) throw std::invalid_argument("capacity bound must be >= 1");
  }

  FamilyKind kind_;
  int b_;
  int d_ = 0;
  Rational alpha_ = 0;
  LinearParams linear_{};
  std::function<Rational(int)> phi_;
  std::vector<Rational> psi_;
  std::string name_;
  std::optional<int> max_degree_;
};

inline Rational kappa(const FamilySpec& spec) {
  switch (spec.kind()) {
    case FamilyKind::BucketRecursive: return 0;
    case FamilyKind::BDAry: return make_rational(1, spec.d() - 1);
    case FamilyKind::BPort: return Rational(-1) / (spec.alpha() + 1);
    default: throw std::invalid_argument("kappa is defined for the named families only");
  }
}

namespace detail {
// Total weight of the b=1 counterpart; also psi_k.
inline Rational unit_total(const FamilySpec& spec, int n) {
  switch (spec.kind()) {
    case FamilyKind::BucketRecursive: return factorial(n - 1);
    case FamilyKind::BDAry: {
      Rational q = spec.d() - 1;
      return factorial(n - 1) * ipow(q, n - 1) * binom(Rational(n - 1) + 1 / q, n - 1);
    }
    case FamilyKind::BPort: {
      Rational a = spec.alpha() + 1;
      return factorial(n - 1) * ipow(a, n - 1) * binom(Rational(n - 1) - 1 / a, n - 1);
    }
    default: throw std::invalid_argument("closed-form totals exist for the named families only");
  }
}
}  // namespace detail

/// phi_k (saturated node of out-degree k) and psi_k (unsaturated leaf of capacity k).
class WeightSequences {
 public:
  explicit WeightSequences(FamilySpec spec) : spec_(std::move(spec)) {
    if (spec_.kind() == FamilyKind::Linear)
      throw std::invalid_argument("linear families have no combinatorial weights");
    if (spec_.kind() == FamilyKind::BDAry) max_degree_ = spec_.b() * (spec_.d() - 1) + 1;
    if (spec_.kind() == FamilyKind::Custom) max_degree_ = spec_.custom_max_degree();
    if (spec_.is_named()) phi0_ = detail::unit_total(spec_, spec_.b());
  }

  int b() const { return spec_.b(); }
  std::optional<int> max_degree() const { return max_degree_; }

  Rational phi(int k) const {
    if (k < 0) return 0;
    const int b = spec_.b();
    switch (spec_.kind()) {
      case FamilyKind::BucketRecursive: return phi0_ * ipow(Rational(b), k) / factorial(k);
      case FamilyKind::BDAry: return phi0_ * binom(Rational(b * (spec_.d() - 1) + 1), k);
      case FamilyKind::BPort: return phi0_ * binom((spec_.alpha() + 1) * b - 2 + k, k);
      case FamilyKind::Custom: return spec_.custom_phi()(k);
      default: throw std::logic_error("unreachable");
    }
  }

  Rational psi(int k) const {
    if (k < 1 || k >= spec_.b()) throw std::out_of_range("psi index out of range");
    if (spec_.kind() == FamilyKind::Custom) return spec_.custom_psi()[static_cast<std::size_t>(k - 1)];
    return detail::unit_total(spec_, k);
  }

 private:
  FamilySpec spec_;
  Rational phi0_ = 0;
  std::optional<int> max_degree_;
};

inline WeightSequences weights(const FamilySpec& spec) { return WeightSequences(spec); }

inline Rational tree_weight(const WeightSequences& w, const BucketTree& tree) {
  Rational r = 1;
  const int b = tree.capacity_bound();
  for_each_node(tree, [&](const BucketNode& v, const NodePath&) {
    r *= v.capacity() == b ? w.phi(v.out_degree()) : w.psi(v.capacity());
  });
  return r;
}

inline Rational tree_weight(const FamilySpec& spec, const BucketTree& tree) {
  require_valid(tree);
  if (tree.capacity_bound() != spec.b()) throw InvalidTree("tree capacity bound differs from family");
  return tree_weight(weights(spec), tree);
}

/// T_n in closed form.
inline Rational total_weight_closed(const FamilySpec& spec, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!spec.is_named()) throw std::invalid_argument("closed-form totals exist for the named families only");
  return detail::unit_total(spec, n);
}

}  // namespace bucket_trees
