#pragma once

#include "family.hpp"
#include "rng.hpp"
#include "tree.hpp"

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace bucket_trees {

/// Integer-scaled attraction weight w(c, deg) = A*c + B*deg + C.
/// The probability of a node is w / (sum of w over the tree).
struct AttractionRule {
  std::int64_t A = 0, B = 0, C = 0;

  std::int64_t weight(int capacity, int degree) const { return A * capacity + B * degree + C; }

  /// Sum of weights of a tree with n labels, the given node and edge counts.
  std::int64_t total(std::int64_t n, std::int64_t nodes, std::int64_t edges) const {
    return A * n + B * edges + C * nodes;
  }

  static AttractionRule for_family(const FamilySpec& spec) {
    switch (spec.kind()) {
      case FamilyKind::BucketRecursive: return {1, 0, 0};
      case FamilyKind::BDAry: return {spec.d() - 1, -1, 1};
      case FamilyKind::BPort: {
        // deg + (alpha+1)c - 1, scaled by the denominator q of alpha
        auto p = static_cast<std::int64_t>(boost::multiprecision::numerator(spec.alpha()));
        auto q = static_cast<std::int64_t>(boost::multiprecision::denominator(spec.alpha()));
        return {p + q, q, -q};
      }
      case FamilyKind::Linear: {
        // alpha(c-1) + beta*deg + m, scaled by a common denominator
        const auto& lp = spec.linear_params();
        BigInt L = boost::multiprecision::lcm(
            boost::multiprecision::lcm(boost::multiprecision::denominator(lp.alpha),
                                       boost::multiprecision::denominator(lp.beta)),
            boost::multiprecision::denominator(lp.m));
        auto scaled = [&](const Rational& x) {
          Rational y = x * Rational(L);
          return static_cast<std::int64_t>(boost::multiprecision::numerator(y));
        };
        return {scaled(lp.alpha), scaled(lp.beta), scaled(lp.m - lp.alpha)};
      }
      case FamilyKind::Custom: break;
    }
    throw std::invalid_argument("custom families have no growth rule");
  }
};

/// Checks nonnegativity on every state reachable up to size n; throws otherwise.
/// A saturated node stops gaining children once its weight reaches zero.
inline void check_rule_reachable(const AttractionRule& rule, int b, int n) {
  for (int c = 1; c < b && c < n; ++c)
    if (rule.weight(c, 0) < 0) throw std::invalid_argument("growth rule negative on an unsaturated node");
  if (n <= b) return;
  const std::int64_t w0 = rule.weight(b, 0);
  if (w0 < 0) throw std::invalid_argument("growth rule negative on a saturated node");
  if (rule.B >= 0 || w0 == 0) return;
  const std::int64_t stop = (w0 + (-rule.B) - 1) / (-rule.B);  // first degree with weight <= 0
  if (stop <= n - b && rule.weight(b, static_cast<int>(stop)) < 0)
    throw std::invalid_argument("growth rule negative on a saturated node");
}

struct AttractionEntry {
  NodePath path;
  Rational probability;
};

struct AttractionTable {
  std::vector<AttractionEntry> entries;

  Rational total() const {
    Rational s = 0;
    for (const auto& e : entries) s += e.probability;
    return s;
  }
};

/// Probability that each node attracts label n+1. Named families divide by the
/// closed-form normaliser A*n - B; linear families by the summed weights.
inline AttractionTable attraction_probs(const FamilySpec& spec, const BucketTree& tree) {
  require_valid(tree);
  if (tree.capacity_bound() != spec.b()) throw InvalidTree("tree capacity bound differs from family");
  const auto rule = AttractionRule::for_family(spec);
  AttractionTable table;
  std::vector<std::int64_t> w;
  for_each_node(tree, [&](const BucketNode& v, const NodePath& path) {
    std::int64_t x = rule.weight(v.capacity(), v.out_degree());
    if (x < 0) throw std::logic_error("negative attraction weight at " + path_string(path));
    table.entries.push_back({path, 0});
    w.push_back(x);
  });
  std::int64_t denom = spec.is_named() ? rule.A * tree.size() - rule.B
                                       : std::accumulate(w.begin(), w.end(), std::int64_t{0});
  if (denom <= 0) throw std::logic_error("attraction weights have no positive total");
  for (std::size_t i = 0; i < w.size(); ++i)
    table.entries[i].probability = Rational(BigInt(w[i]), BigInt(denom));
  return table;
}

/// Fenwick tree over nonnegative integer weights with inverse-CDF lookup.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {
    while (top_ * 2 <= n) top_ *= 2;
  }
  void add(std::size_t i, std::int64_t delta) {
    total_ += delta;
    for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }
  std::int64_t total() const { return total_; }
  /// Smallest index whose prefix sum exceeds u (0 <= u < total).
  std::size_t find(std::int64_t u) const {
    std::size_t pos = 0;
    for (std::size_t step = top_; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= u) {
        pos += step;
        u -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<std::int64_t> tree_;
  std::size_t top_ = 1;
  std::int64_t total_ = 0;
};

/// Mutable growth engine; nodes are numbered in creation order.
class GrowthProcess {
 public:
  struct Step {
    int node;
    int capacity_after;
    bool new_node;
  };

  GrowthProcess(const FamilySpec& spec, int max_size)
      : b_(spec.b()), max_size_(max_size), rule_(AttractionRule::for_family(spec)),
        weights_(static_cast<std::size_t>(std::max(max_size, 1))) {
    if (max_size < 1) throw std::invalid_argument("max size must be >= 1");
    check_rule_reachable(rule_, b_, max_size);
    capacity_.reserve(static_cast<std::size_t>(max_size));
    degree_.reserve(static_cast<std::size_t>(max_size));
    parent_.reserve(static_cast<std::size_t>(max_size));
    node_of_.reserve(static_cast<std::size_t>(max_size) + 1);
    node_of_.push_back(-1);
    create(-1);
  }

  int size() const { return size_; }
  int node_count() const { return static_cast<int>(capacity_.size()); }
  int capacity(int node) const { return capacity_[static_cast<std::size_t>(node)]; }
  int degree(int node) const { return degree_[static_cast<std::size_t>(node)]; }
  int parent(int node) const { return parent_[static_cast<std::size_t>(node)]; }
  int node_of(Label l) const { return node_of_[static_cast<std::size_t>(l)]; }
  const AttractionRule& rule() const { return rule_; }
  std::int64_t total_weight() const { return weights_.total(); }

  Step insert_next(RngStream& rng) {
    if (size_ >= max_size_) throw std::out_of_range("growth process is at its maximum size");
    if (weights_.total() <= 0) throw std::logic_error("growth rule has zero total weight");
    int v = static_cast<int>(weights_.find(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(weights_.total())))));
    auto vi = static_cast<std::size_t>(v);
    ++size_;
    if (capacity_[vi] < b_) {
      set_weight(v, capacity_[vi] + 1, degree_[vi]);
      node_of_.push_back(v);
      return {v, capacity_[vi], false};
    }
    set_weight(v, capacity_[vi], degree_[vi] + 1);
    int child = create(v);
    return {child, 1, true};
  }

  void grow_to(int n, RngStream& rng) {
    while (size_ < n) insert_next(rng);
  }

  BucketTree snapshot() const {
    const auto nodes = capacity_.size();
    std::vector<std::vector<Label>> labels(nodes);
    for (Label l = 1; l <= size_; ++l) labels[static_cast<std::size_t>(node_of(l))].push_back(l);
    std::vector<std::vector<int>> kids(nodes);
    for (std::size_t v = 1; v < nodes; ++v) kids[static_cast<std::size_t>(parent_[v])].push_back(static_cast<int>(v));
    std::vector<NodePtr> built(nodes);
    for (std::size_t v = nodes; v-- > 0;) {
      std::vector<NodePtr> ch;
      ch.reserve(kids[v].size());
      for (int c : kids[v]) ch.push_back(std::move(built[static_cast<std::size_t>(c)]));
      built[v] = make_node(std::move(labels[v]), std::move(ch));
    }
    return BucketTree(b_, built[0]);
  }

 private:
  int create(int parent) {
    int id = static_cast<int>(capacity_.size());
    capacity_.push_back(0);
    degree_.push_back(0);
    parent_.push_back(parent);
    node_of_.push_back(id);
    set_weight(id, 1, 0);
    return id;
  }

  void set_weight(int v, int c, int deg) {
    auto vi = static_cast<std::size_t>(v);
    std::int64_t old = capacity_[vi] == 0 ? 0 : rule_.weight(capacity_[vi], degree_[vi]);
    std::int64_t now = rule_.weight(c, deg);
    if (now < 0) throw std::logic_error("negative attraction weight during growth");
    capacity_[vi] = c;
    degree_[vi] = deg;
    if (now != old) weights_.add(vi, now - old);
  }

  int b_;
  int max_size_;
  AttractionRule rule_;
  Fenwick weights_;
  std::vector<int> capacity_, degree_, parent_;
  std::vector<int> node_of_;
  int size_ = 1;
};

inline BucketTree sample_tree(const FamilySpec& spec, int n, RngStream& rng) {
  GrowthProcess g(spec, n);
  g.grow_to(n, rng);
  return g.snapshot();
}

/// One growth step on an immutable tree; untouched subtrees are shared with the input.
inline BucketTree grow_step(const FamilySpec& spec, const BucketTree& tree, RngStream& rng) {
  auto table = attraction_probs(spec, tree);
  const auto rule = AttractionRule::for_family(spec);
  std::vector<std::int64_t> w;
  for_each_node(tree, [&](const BucketNode& v, const NodePath&) { w.push_back(rule.weight(v.capacity(), v.out_degree())); });
  std::int64_t total = std::accumulate(w.begin(), w.end(), std::int64_t{0});
  auto u = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total)));
  std::size_t pick = 0;
  while (u >= w[pick]) u -= w[pick++];
  const NodePath& path = table.entries[pick].path;
  const Label next = tree.size() + 1;
  const int b = tree.capacity_bound();
  std::function<NodePtr(const NodePtr&, std::size_t)> rebuild = [&](const NodePtr& v, std::size_t depth) {
    if (depth == path.size()) {
      if (v->capacity() < b) {
        auto labels = v->labels;
        labels.push_back(next);
        return make_node(std::move(labels), v->children);
      }
      auto kids = v->children;
      kids.push_back(make_node({next}));
      return make_node(v->labels, std::move(kids));
    }
    auto kids = v->children;
    kids[path[depth]] = rebuild(kids[path[depth]], depth + 1);
    return make_node(v->labels, std::move(kids));
  };
  return BucketTree(b, rebuild(tree.root_ptr(), 0));
}

}  // namespace bucket_trees
