#pragma once

#include "enumerate.hpp"
#include "family.hpp"
#include "tree.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bucket_trees {

// ---------------------------------------------------------------- clustering

namespace detail {

/// Flat adjacency view of a capacity-one tree, indexed by label.
struct FlatTree {
  std::vector<std::vector<Label>> children;  // children[label], in original order

  explicit FlatTree(const BucketTree& tree) {
    if (tree.capacity_bound() != 1) throw std::invalid_argument("clustering needs an ordinary (b=1) tree");
    require_valid(tree);
    children.resize(static_cast<std::size_t>(tree.size()) + 1);
    fill(tree.root());
  }

 private:
  void fill(const BucketNode& v) {
    for (const auto& c : v.children) {
      children[static_cast<std::size_t>(v.labels[0])].push_back(c->labels[0]);
      fill(*c);
    }
  }
};

/// The s smallest labels of the subtree of `top` (s = b or the whole subtree).
inline std::vector<Label> smallest_cluster(const FlatTree& t, Label top, int b) {
  std::priority_queue<Label, std::vector<Label>, std::greater<>> frontier;
  frontier.push(top);
  std::vector<Label> cluster;
  while (!frontier.empty() && static_cast<int>(cluster.size()) < b) {
    Label v = frontier.top();
    frontier.pop();
    cluster.push_back(v);
    for (Label c : t.children[static_cast<std::size_t>(v)]) frontier.push(c);
  }
  return cluster;  // increasing, since pops are increasing
}

inline NodePtr cluster_from(const FlatTree& t, Label top, int b) {
  auto members = smallest_cluster(t, top, b);
  std::vector<NodePtr> kids;
  for (Label m : members)
    for (Label c : t.children[static_cast<std::size_t>(m)])
      if (!std::binary_search(members.begin(), members.end(), c)) kids.push_back(cluster_from(t, c, b));
  return make_node(std::move(members), std::move(kids));
}

}  // namespace detail

/// Merges the b smallest labels of each remaining subtree into a bucket.
/// Children are ordered by the source node's rank in the bucket, then original position.
inline BucketTree cluster(const BucketTree& tree, int b) {
  if (b < 2) throw std::invalid_argument("cluster needs b >= 2");
  detail::FlatTree t(tree);
  return BucketTree(b, detail::cluster_from(t, 1, b));
}

namespace detail {
inline NodePtr chain(const BucketNode& v, std::size_t i) {
  if (i + 1 == v.labels.size()) {
    std::vector<NodePtr> kids;
    for (const auto& c : v.children) kids.push_back(chain(*c, 0));
    return make_node({v.labels[i]}, std::move(kids));
  }
  return make_node({v.labels[i]}, {chain(v, i + 1)});
}
}  // namespace detail

/// Replaces each bucket by an increasing chain; the bucket's children hang off the last chain node.
inline BucketTree debucket(const BucketTree& tree) {
  require_valid(tree);
  return BucketTree(1, detail::chain(tree.root(), 0));
}

// ---------------------------------------------------------------- weight preservation

/// Brute-force phi_k of the weight-preserving bucketed family, summed over all size-b ordinary trees.
inline Rational weight_preserving_phi(const FamilySpec& b1_spec, int b, int k, EnumerationLimits limits = {}) {
  if (b1_spec.b() != 1) throw std::invalid_argument("weight_preserving_phi needs a b=1 family");
  if (b < 1) throw std::invalid_argument("b must be >= 1");
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  auto w = weights(b1_spec);
  Rational total = 0;
  for_each_tree(
      b1_spec, b,
      [&](const BucketTree& tree, const Rational& wt) {
        std::vector<int> deg;
        for_each_node(tree, [&](const BucketNode& v, const NodePath&) { deg.push_back(v.out_degree()); });
        // coeff[j] for one node: phi_{d+j}/phi_d * C(d+j, j); convolve over nodes
        std::vector<Rational> acc(static_cast<std::size_t>(k) + 1, Rational(0));
        acc[0] = 1;
        for (int d : deg) {
          std::vector<Rational> next(acc.size(), Rational(0));
          const Rational base = w.phi(d);
          for (int j = 0; j <= k; ++j) {
            Rational c = w.phi(d + j) / base * binom(Rational(d + j), j);
            if (c == 0) continue;
            for (int i = 0; i + j <= k; ++i) next[static_cast<std::size_t>(i + j)] += acc[static_cast<std::size_t>(i)] * c;
          }
          acc = std::move(next);
        }
        total += wt * acc[static_cast<std::size_t>(k)];
      },
      limits);
  return total;
}

// ---------------------------------------------------------------- bundled clustering

enum class BundleVariant { ThreeBundlePort, TwoBundleRecursive };

inline int bundle_count(BundleVariant v) { return v == BundleVariant::ThreeBundlePort ? 3 : 2; }

namespace detail {
inline BundledPtr bundled_from(const FlatTree& t, Label top, BundleVariant variant) {
  const auto& below = t.children[static_cast<std::size_t>(top)];
  const std::size_t nb = static_cast<std::size_t>(bundle_count(variant));
  if (below.empty())
    return std::make_shared<const BundledNode>(BundledNode{{top}, {}, std::vector<std::size_t>(nb, 0)});
  Label hi = *std::min_element(below.begin(), below.end());
  std::vector<BundledPtr> left, mid, right;
  bool seen = false;
  for (Label c : below) {
    if (c == hi) {
      seen = true;
      continue;
    }
    (seen && variant == BundleVariant::ThreeBundlePort ? right : left).push_back(bundled_from(t, c, variant));
  }
  for (Label c : t.children[static_cast<std::size_t>(hi)]) mid.push_back(bundled_from(t, c, variant));
  std::vector<std::size_t> sizes{left.size(), mid.size()};
  std::vector<BundledPtr> kids = std::move(left);
  kids.insert(kids.end(), mid.begin(), mid.end());
  if (variant == BundleVariant::ThreeBundlePort) {
    sizes.push_back(right.size());
    kids.insert(kids.end(), right.begin(), right.end());
  }
  return std::make_shared<const BundledNode>(BundledNode{{top, hi}, std::move(kids), std::move(sizes)});
}

inline NodePtr unbundle(const BundledNode& v, BundleVariant variant) {
  const std::size_t nb = static_cast<std::size_t>(bundle_count(variant));
  if (v.bundle_sizes.size() != nb) throw std::invalid_argument("malformed bundle structure: wrong bundle count");
  std::vector<std::vector<NodePtr>> bundles(nb);
  for (std::size_t i = 0; i < nb; ++i)
    for (const auto& c : v.bundle(i)) bundles[i].push_back(unbundle(*c, variant));
  if (v.labels.size() == 1) {
    if (!v.children.empty()) throw std::invalid_argument("malformed bundle structure: capacity-one bucket with children");
    return make_node({v.labels[0]});
  }
  if (v.labels.size() != 2 || v.labels[0] >= v.labels[1])
    throw std::invalid_argument("malformed bundle structure: bucket is not a label pair");
  NodePtr hi = make_node({v.labels[1]}, std::move(bundles[1]));
  std::vector<NodePtr> low = std::move(bundles[0]);
  if (variant == BundleVariant::ThreeBundlePort) {
    low.push_back(hi);
    low.insert(low.end(), bundles[2].begin(), bundles[2].end());
  } else {
    low.push_back(hi);
    std::sort(low.begin(), low.end(), [](const NodePtr& a, const NodePtr& c) { return a->min_label() < c->min_label(); });
  }
  return make_node({v.labels[0]}, std::move(low));
}
}  // namespace detail

/// Bundled b=2 clustering. Recursive input is read up to child order (canonical form).
inline BundledBucketTree cluster_bundled(const BucketTree& tree, BundleVariant variant) {
  const BucketTree src = variant == BundleVariant::TwoBundleRecursive ? canonicalize(tree) : tree;
  detail::FlatTree t(src);
  return BundledBucketTree(2, bundle_count(variant), detail::bundled_from(t, 1, variant));
}

/// Inverse of cluster_bundled; recursive output is canonical.
inline BucketTree uncluster_bundled(const BundledBucketTree& tree, BundleVariant variant) {
  if (tree.capacity_bound() != 2) throw std::invalid_argument("malformed bundle structure: capacity bound must be 2");
  BucketTree out(1, detail::unbundle(tree.root(), variant));
  require_valid(out);
  return out;
}

// ---------------------------------------------------------------- increasing diamonds

/// Inner(label) when parts is empty and large is absent; otherwise Composite(small, large, parts).
struct IncreasingDiamond {
  Label small = 0;
  std::optional<Label> large;
  std::vector<IncreasingDiamond> parts;

  static IncreasingDiamond inner(Label v) { return {v, std::nullopt, {}}; }
  static IncreasingDiamond composite(Label s, Label l, std::vector<IncreasingDiamond> parts) {
    return {s, l, std::move(parts)};
  }
  bool is_inner() const { return !large.has_value(); }

  int size() const {
    if (is_inner()) return 1;
    int n = 2;
    for (const auto& p : parts) n += p.size();
    return n;
  }
  void collect(std::vector<Label>& out) const {
    out.push_back(small);
    if (large) out.push_back(*large);
    for (const auto& p : parts) p.collect(out);
  }
  int inner_count() const {
    if (is_inner()) return 1;
    int k = 0;
    for (const auto& p : parts) k += p.inner_count();
    return k;
  }
  friend bool operator==(const IncreasingDiamond&, const IncreasingDiamond&) = default;
};

class InvalidDiamond : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {
inline void check_diamond(const IncreasingDiamond& f) {
  if (f.is_inner()) {
    if (!f.parts.empty()) throw InvalidDiamond("inner node with parts");
    return;
  }
  if (f.small >= *f.large) throw InvalidDiamond("small label not below large label");
  for (const auto& p : f.parts) {
    std::vector<Label> ls;
    p.collect(ls);
    for (Label l : ls)
      if (l <= f.small || l >= *f.large) throw InvalidDiamond("part label outside (small, large)");
    check_diamond(p);
  }
}

inline void check_label_set(std::vector<Label> ls, const char* what) {
  std::sort(ls.begin(), ls.end());
  for (std::size_t i = 0; i < ls.size(); ++i)
    if (ls[i] != static_cast<Label>(i + 1)) throw InvalidDiamond(std::string(what) + ": label set is not {1..n}");
}
}  // namespace detail

inline void require_valid(const IncreasingDiamond& f) {
  detail::check_diamond(f);
  std::vector<Label> ls;
  f.collect(ls);
  detail::check_label_set(std::move(ls), "diamond");
}

/// Bucket of (first, optional second); first is the subtree minimum, second the subtree maximum.
struct IncDecNode {
  Label first = 0;
  std::optional<Label> second;
  std::vector<IncDecNode> children;

  int size() const {
    int n = second ? 2 : 1;
    for (const auto& c : children) n += c.size();
    return n;
  }
  void collect(std::vector<Label>& out) const {
    out.push_back(first);
    if (second) out.push_back(*second);
    for (const auto& c : children) c.collect(out);
  }
  friend bool operator==(const IncDecNode&, const IncDecNode&) = default;
};
using IncDecTree = IncDecNode;

inline void require_valid(const IncDecTree& t) {
  std::function<void(const IncDecNode&)> rec = [&](const IncDecNode& v) {
    if (!v.second && !v.children.empty()) throw InvalidDiamond("absent second label on an internal bucket");
    std::vector<Label> ls;
    v.collect(ls);
    auto [lo, hi] = std::minmax_element(ls.begin(), ls.end());
    if (*lo != v.first) throw InvalidDiamond("first label is not the subtree minimum");
    if (v.second && *hi != *v.second) throw InvalidDiamond("second label is not the subtree maximum");
    if (v.second && *v.second == v.first) throw InvalidDiamond("repeated label");
    for (const auto& c : v.children) rec(c);
  };
  rec(t);
  std::vector<Label> ls;
  t.collect(ls);
  detail::check_label_set(std::move(ls), "inc-dec tree");
}

inline IncDecTree diamond_to_incdec(const IncreasingDiamond& f) {
  detail::check_diamond(f);
  if (f.is_inner()) return {f.small, std::nullopt, {}};
  IncDecNode v{f.small, f.large, {}};
  for (const auto& p : f.parts) v.children.push_back(diamond_to_incdec(p));
  return v;
}

inline IncreasingDiamond incdec_to_diamond(const IncDecTree& t) {
  if (!t.second) {
    if (!t.children.empty()) throw InvalidDiamond("absent second label on an internal bucket");
    return IncreasingDiamond::inner(t.first);
  }
  std::vector<IncreasingDiamond> parts;
  for (const auto& c : t.children) parts.push_back(incdec_to_diamond(c));
  return IncreasingDiamond::composite(t.first, *t.second, std::move(parts));
}

namespace detail {
// Builds the bucket subtree for v whose final label set is `target` (sorted).
// The cycle (l1)(l2 ... ln) keeps the relative order of labels below the root bucket,
// so child c receives target[rank + 1] for each rank of its original labels.
inline NodePtr incdec_build(const IncDecNode& v, const std::vector<Label>& target) {
  if (target.size() == 1) return make_node({target[0]});
  std::vector<Label> orig;
  v.collect(orig);
  std::sort(orig.begin(), orig.end());
  std::vector<NodePtr> kids;
  for (const auto& c : v.children) {
    std::vector<Label> own;
    c.collect(own);
    std::sort(own.begin(), own.end());
    std::vector<Label> sub;
    for (Label l : own) {
      auto r = std::lower_bound(orig.begin(), orig.end(), l) - orig.begin();
      sub.push_back(target[static_cast<std::size_t>(r) + 1]);
    }
    kids.push_back(incdec_build(c, sub));
  }
  return make_node({target[0], target[1]}, std::move(kids));
}

inline IncDecNode bucket_to_incdec_node(const BucketNode& v, std::vector<Label> labels) {
  // labels: sorted label set of the subtree rooted at v
  if (v.capacity() == 1) {
    if (!v.children.empty() || labels.size() != 1)
      throw InvalidDiamond("capacity-one bucket must be a leaf");
    return {v.labels[0], std::nullopt, {}};
  }
  if (v.capacity() != 2) throw InvalidDiamond("bucket capacity must be 1 or 2");
  if (v.labels[0] != labels[0] || v.labels[1] != labels[1])
    throw InvalidDiamond("root bucket does not hold the two smallest labels");
  // children keep their label sets; the inverse cycle shifts l3..ln down and sends l2 to ln
  IncDecNode out{labels[0], labels.back(), {}};
  for (const auto& c : v.children) {
    std::vector<Label> own;
    for_each_node(BucketTree(2, c), [&](const BucketNode& u, const NodePath&) {
      own.insert(own.end(), u.labels.begin(), u.labels.end());
    });
    std::sort(own.begin(), own.end());
    IncDecNode sub = bucket_to_incdec_node(*c, own);
    std::function<void(IncDecNode&)> shift = [&](IncDecNode& u) {
      auto down = [&](Label l) {
        auto r = std::lower_bound(labels.begin(), labels.end(), l) - labels.begin();
        return labels[static_cast<std::size_t>(r) - 1];
      };
      u.first = down(u.first);
      if (u.second) u.second = down(*u.second);
      for (auto& w : u.children) shift(w);
    };
    shift(sub);
    out.children.push_back(std::move(sub));
  }
  return out;
}
}  // namespace detail

inline BucketTree incdec_to_bucket(const IncDecTree& t) {
  require_valid(t);
  std::vector<Label> ls;
  t.collect(ls);
  std::sort(ls.begin(), ls.end());
  BucketTree out(2, detail::incdec_build(t, ls));
  require_valid(out);
  return out;
}

inline IncDecTree bucket_to_incdec(const BucketTree& tree) {
  if (tree.capacity_bound() != 2) throw InvalidDiamond("diamond bijection needs b=2");
  require_valid(tree);
  std::vector<Label> ls;
  for (Label l = 1; l <= tree.size(); ++l) ls.push_back(l);
  return detail::bucket_to_incdec_node(tree.root(), ls);
}

inline BucketTree diamond_to_bucket(const IncreasingDiamond& f) {
  require_valid(f);
  return incdec_to_bucket(diamond_to_incdec(f));
}

inline IncreasingDiamond bucket_to_diamond(const BucketTree& tree) { return incdec_to_diamond(bucket_to_incdec(tree)); }

// ---------------------------------------------------------------- diamond text codec

inline void write_text(const IncreasingDiamond& f, std::string& out) {
  if (f.is_inner()) {
    out += '(' + std::to_string(f.small) + ')';
    return;
  }
  out += '<' + std::to_string(f.small) + ',' + std::to_string(*f.large) + '>';
  if (f.parts.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < f.parts.size(); ++i) {
    if (i) out += ',';
    write_text(f.parts[i], out);
  }
  out += ')';
}

/// `<1,5>((2),<3,4>)`: composites as <small,large>(parts), inner nodes as (v).
inline std::string to_text(const IncreasingDiamond& f) {
  std::string s;
  write_text(f, s);
  return s;
}

namespace detail {
inline IncreasingDiamond parse_diamond(TextCursor& cur) {
  if (cur.peek('(')) {
    cur.expect('(');
    Label v = cur.integer();
    cur.expect(')');
    return IncreasingDiamond::inner(v);
  }
  cur.expect('<');
  Label s = cur.integer();
  cur.expect(',');
  Label l = cur.integer();
  cur.expect('>');
  std::vector<IncreasingDiamond> parts;
  if (cur.peek('(')) {
    cur.expect('(');
    if (!cur.peek(')')) {
      parts.push_back(parse_diamond(cur));
      while (cur.peek(',')) {
        cur.expect(',');
        parts.push_back(parse_diamond(cur));
      }
    }
    cur.expect(')');
  }
  return IncreasingDiamond::composite(s, l, std::move(parts));
}
}  // namespace detail

inline IncreasingDiamond parse_diamond(std::string_view text) {
  detail::TextCursor cur(text);
  auto f = detail::parse_diamond(cur);
  cur.finish();
  require_valid(f);
  return f;
}

}  // namespace bucket_trees
