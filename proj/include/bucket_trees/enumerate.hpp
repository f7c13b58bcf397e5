#pragma once

#include "family.hpp"
#include "grow.hpp"
#include "pmf.hpp"
#include "tree.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bucket_trees {

struct WeightedTree {
  BucketTree tree;
  Rational weight;
};

struct WeightedTreeSet {
  int size = 0;
  std::vector<WeightedTree> trees;

  Rational total_weight() const {
    Rational s = 0;
    for (const auto& t : trees) s += t.weight;
    return s;
  }
};

struct EnumerationLimits {
  int max_size = 10;
};

namespace detail {

struct Shape {
  NodePtr root;  // labels 1..k
  Rational weight;
};

inline NodePtr relabel(const NodePtr& v, const std::vector<Label>& to) {
  std::vector<Label> labels;
  labels.reserve(v->labels.size());
  for (Label l : v->labels) labels.push_back(to[static_cast<std::size_t>(l - 1)]);
  std::vector<NodePtr> kids;
  kids.reserve(v->children.size());
  for (const auto& c : v->children) kids.push_back(relabel(c, to));
  return make_node(std::move(labels), std::move(kids));
}

class Enumerator {
 public:
  explicit Enumerator(const FamilySpec& spec) : w_(spec), b_(spec.b()) {}

  /// All trees of size n, nonzero weight, labels 1..n; final level streamed.
  void visit(int n, const std::function<void(const NodePtr&, const Rational&)>& fn) {
    for (int k = static_cast<int>(memo_.size()); k < n; ++k) {
      std::vector<Shape> level;
      generate(k, [&](const NodePtr& r, const Rational& w) { level.push_back({r, w}); });
      memo_.push_back(std::move(level));
    }
    generate(n, fn);
  }

 private:
  void generate(int k, const std::function<void(const NodePtr&, const Rational&)>& fn) {
    if (k == 0) return;
    if (k < b_) {
      std::vector<Label> labels(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) labels[static_cast<std::size_t>(i)] = i + 1;
      Rational w = w_.psi(k);
      if (w != 0) fn(make_node(std::move(labels)), w);
      return;
    }
    std::vector<Label> root_labels(static_cast<std::size_t>(b_));
    for (int i = 0; i < b_; ++i) root_labels[static_cast<std::size_t>(i)] = i + 1;
    std::vector<Label> rest;
    for (int l = b_ + 1; l <= k; ++l) rest.push_back(l);
    std::vector<NodePtr> kids;
    compose(rest, kids, Rational(1), [&](const std::vector<NodePtr>& children, const Rational& w) {
      Rational phi = w_.phi(static_cast<int>(children.size()));
      if (phi != 0) fn(make_node(root_labels, children), phi * w);
    });
  }

  // Ordered set partitions of `remaining` into subtrees drawn from the memo.
  void compose(const std::vector<Label>& remaining, std::vector<NodePtr>& kids, const Rational& acc,
               const std::function<void(const std::vector<NodePtr>&, const Rational&)>& emit) {
    if (remaining.empty()) {
      emit(kids, acc);
      return;
    }
    if (w_.max_degree() && static_cast<int>(kids.size()) >= *w_.max_degree()) return;
    const std::size_t r = remaining.size();
    if (r > 30) throw std::length_error("enumeration too large");
    for (std::uint32_t mask = 1; mask < (1u << r); ++mask) {
      std::vector<Label> block, rest;
      for (std::size_t i = 0; i < r; ++i) ((mask >> i) & 1u ? block : rest).push_back(remaining[i]);
      for (const auto& shape : memo_[block.size()]) {
        kids.push_back(relabel(shape.root, block));
        compose(rest, kids, acc * shape.weight, emit);
        kids.pop_back();
      }
    }
  }

  WeightSequences w_;
  int b_;
  std::vector<std::vector<Shape>> memo_{std::vector<Shape>{}};
};

}  // namespace detail

/// Streams every ordered tree of size n with nonzero weight.
inline void for_each_tree(const FamilySpec& spec, int n,
                          const std::function<void(const BucketTree&, const Rational&)>& fn,
                          EnumerationLimits limits = {}) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (n > limits.max_size) throw std::length_error("n exceeds the enumeration bound");
  detail::Enumerator e(spec);
  e.visit(n, [&](const NodePtr& root, const Rational& w) { fn(BucketTree(spec.b(), root), w); });
}

inline WeightedTreeSet enumerate_trees(const FamilySpec& spec, int n, EnumerationLimits limits = {}) {
  WeightedTreeSet set;
  set.size = n;
  for_each_tree(spec, n, [&](const BucketTree& t, const Rational& w) { set.trees.push_back({t, w}); }, limits);
  return set;
}

/// T_n: closed form for named families, enumerated otherwise.
inline Rational total_weight(const FamilySpec& spec, int n, EnumerationLimits limits = {}) {
  if (spec.is_named()) return total_weight_closed(spec, n);
  Rational s = 0;
  for_each_tree(spec, n, [&](const BucketTree&, const Rational& w) { s += w; }, limits);
  return s;
}

enum class Measure { OrderedModel, UnorderedModel, UnorderedGrowth };

/// Probability of label j's insertion step in the restriction to labels < j,
/// multiplied over j = 2..n.
inline Rational unordered_growth_probability(const FamilySpec& spec, const BucketTree& tree) {
  const auto rule = AttractionRule::for_family(spec);
  const int n = tree.size();
  const int b = tree.capacity_bound();
  std::vector<const BucketNode*> node_of(static_cast<std::size_t>(n) + 1);
  std::vector<const BucketNode*> parent_of(static_cast<std::size_t>(n) + 1, nullptr);
  std::vector<const BucketNode*> nodes;
  std::function<void(const BucketNode&, const BucketNode*)> index = [&](const BucketNode& v, const BucketNode* parent) {
    nodes.push_back(&v);
    for (Label l : v.labels) {
      node_of[static_cast<std::size_t>(l)] = &v;
      parent_of[static_cast<std::size_t>(l)] = parent;
    }
    for (const auto& c : v.children) index(*c, &v);
  };
  index(tree.root(), nullptr);

  auto restricted = [](const BucketNode& v, Label j, int& cap, int& deg) {
    cap = 0;
    for (Label l : v.labels) cap += l < j;
    deg = 0;
    for (const auto& c : v.children) deg += c->min_label() < j;
  };

  Rational p = 1;
  for (Label j = 2; j <= n; ++j) {
    const BucketNode* v = node_of[static_cast<std::size_t>(j)];
    const BucketNode* attr = v->min_label() == j ? parent_of[static_cast<std::size_t>(j)] : v;
    std::int64_t total = 0, mine = 0;
    for (const BucketNode* u : nodes) {
      if (u->min_label() >= j) continue;
      int cap, deg;
      restricted(*u, j, cap, deg);
      if (u->children.size() > 0 && cap < b && deg > 0) throw std::logic_error("inconsistent restriction");
      std::int64_t w = rule.weight(cap, deg);
      total += w;
      if (u == attr) mine = w;
    }
    p *= Rational(BigInt(mine), BigInt(total));
  }
  return p;
}

inline Rational exact_probability(const FamilySpec& spec, const BucketTree& tree, Measure measure) {
  require_valid(tree);
  if (tree.capacity_bound() != spec.b()) throw InvalidTree("tree capacity bound differs from family");
  if (measure != Measure::OrderedModel && !is_canonical(tree))
    throw std::invalid_argument("unordered measures need the canonical representative");
  switch (measure) {
    case Measure::OrderedModel: return tree_weight(spec, tree) / total_weight(spec, tree.size());
    case Measure::UnorderedModel: {
      Rational r = tree_weight(spec, tree);
      for_each_node(tree, [&](const BucketNode& v, const NodePath&) { r *= factorial(v.out_degree()); });
      return r / total_weight(spec, tree.size());
    }
    case Measure::UnorderedGrowth: return unordered_growth_probability(spec, tree);
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------- statistics on static trees

struct Statistic {
  enum class Kind { K, Y, X, N, Tau };
  Kind kind = Kind::K;
  int param = 0;

  /// "K", "Y:3", "X:1", "N:2", "tau:4".
  static Statistic parse(const std::string& text) {
    auto colon = text.find(':');
    std::string name = text.substr(0, colon);
    int param = 0;
    if (colon != std::string::npos) param = std::stoi(text.substr(colon + 1));
    if (name == "K" && colon == std::string::npos) return {Kind::K, 0};
    if (colon == std::string::npos) throw std::invalid_argument("statistic needs a parameter: " + text);
    if (name == "Y") return {Kind::Y, param};
    if (name == "X") return {Kind::X, param};
    if (name == "N") return {Kind::N, param};
    if (name == "tau") return {Kind::Tau, param};
    throw std::invalid_argument("unknown statistic: " + text);
  }
};

namespace detail {
inline int subtree_labels(const BucketNode& v) {
  int s = v.capacity();
  for (const auto& c : v.children) s += subtree_labels(*c);
  return s;
}
}  // namespace detail

/// Value of a statistic on a static tree.
inline int evaluate_statistic(const BucketTree& tree, const Statistic& st) {
  const int n = tree.size();
  const int b = tree.capacity_bound();
  if (st.kind == Statistic::Kind::N) {
    if (st.param < 1 || st.param > b) throw std::out_of_range("N(k) needs 1 <= k <= b");
    int count = 0;
    for_each_node(tree, [&](const BucketNode& v, const NodePath&) { count += v.capacity() == st.param; });
    return count;
  }
  const Label target = st.kind == Statistic::Kind::K ? n : st.param;
  if (target < 1 || target > n) throw std::out_of_range("label parameter out of range");
  const BucketNode* holder = nullptr;
  for_each_node(tree, [&](const BucketNode& v, const NodePath&) {
    for (Label l : v.labels)
      if (l == target) holder = &v;
  });
  int rank = 0;
  for (Label l : holder->labels) rank += l <= target;
  switch (st.kind) {
    case Statistic::Kind::K: return rank;
    case Statistic::Kind::Y: {
      int y = holder->capacity() - rank + 1;
      for (const auto& c : holder->children) y += detail::subtree_labels(*c);
      return y;
    }
    case Statistic::Kind::X: return holder->out_degree();
    case Statistic::Kind::Tau: return holder->capacity() == b ? holder->max_label() : n;
    default: break;
  }
  throw std::logic_error("unreachable");
}

/// Exact PMFs of several statistics in one pass over the canonical trees.
inline std::vector<ExactPmf> exact_statistic_pmfs(const FamilySpec& spec, int n,
                                                  const std::vector<Statistic>& stats,
                                                  EnumerationLimits limits = {}) {
  std::vector<ExactPmf> out(stats.size());
  const Rational total = total_weight(spec, n, limits);
  for_each_tree(spec, n, [&](const BucketTree& t, const Rational& w) {
    if (!is_canonical(t)) return;
    Rational p = w / total;
    for_each_node(t, [&](const BucketNode& v, const NodePath&) { p *= factorial(v.out_degree()); });
    for (std::size_t i = 0; i < stats.size(); ++i) out[i].add(evaluate_statistic(t, stats[i]), p);
  }, limits);
  return out;
}

inline ExactPmf exact_statistic_pmf(const FamilySpec& spec, int n, const Statistic& st,
                                    EnumerationLimits limits = {}) {
  return exact_statistic_pmfs(spec, n, {st}, limits).front();
}

}  // namespace bucket_trees
