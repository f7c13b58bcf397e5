#pragma once

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bucket_trees {

using Label = std::int32_t;

struct BucketNode;
using NodePtr = std::shared_ptr<const BucketNode>;

/// A bucket of increasing labels with an ordered list of child buckets.
struct BucketNode {
  std::vector<Label> labels;
  std::vector<NodePtr> children;

  int capacity() const { return static_cast<int>(labels.size()); }
  int out_degree() const { return static_cast<int>(children.size()); }
  Label min_label() const { return labels.front(); }
  Label max_label() const { return labels.back(); }
};

inline NodePtr make_node(std::vector<Label> labels, std::vector<NodePtr> children = {}) {
  return std::make_shared<const BucketNode>(BucketNode{std::move(labels), std::move(children)});
}

class InvalidTree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable ordered bucket tree; subtrees may be shared between trees.
class BucketTree {
 public:
  BucketTree(int capacity_bound, NodePtr root)
      : capacity_bound_(capacity_bound), root_(std::move(root)) {
    if (capacity_bound_ < 1) throw std::invalid_argument("capacity bound must be >= 1");
    if (!root_) throw std::invalid_argument("null root");
    size_ = count_labels(*root_);
  }

  int capacity_bound() const { return capacity_bound_; }
  const BucketNode& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  int size() const { return size_; }

  friend bool operator==(const BucketTree& a, const BucketTree& b) {
    return a.capacity_bound_ == b.capacity_bound_ && same_shape(*a.root_, *b.root_);
  }

  static bool same_shape(const BucketNode& x, const BucketNode& y) {
    if (&x == &y) return true;
    if (x.labels != y.labels || x.children.size() != y.children.size()) return false;
    for (std::size_t i = 0; i < x.children.size(); ++i)
      if (!same_shape(*x.children[i], *y.children[i])) return false;
    return true;
  }

 private:
  static int count_labels(const BucketNode& v) {
    int n = v.capacity();
    for (const auto& c : v.children) n += count_labels(*c);
    return n;
  }

  int capacity_bound_;
  NodePtr root_;
  int size_ = 0;
};

/// Child-index path from the root, printed as "root/0/2".
using NodePath = std::vector<std::size_t>;

inline std::string path_string(const NodePath& path) {
  std::string s = "root";
  for (auto i : path) s += "/" + std::to_string(i);
  return s;
}

/// Pre-order visit with paths.
inline void for_each_node(const BucketTree& tree,
                          const std::function<void(const BucketNode&, const NodePath&)>& fn) {
  NodePath path;
  std::function<void(const BucketNode&)> rec = [&](const BucketNode& v) {
    fn(v, path);
    for (std::size_t i = 0; i < v.children.size(); ++i) {
      path.push_back(i);
      rec(*v.children[i]);
      path.pop_back();
    }
  };
  rec(tree.root());
}

// ---------------------------------------------------------------- validation

struct Violation {
  NodePath path;
  std::string rule;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string message() const {
    std::string s;
    for (const auto& v : violations) {
      if (!s.empty()) s += "; ";
      s += path_string(v.path) + ": " + v.rule;
    }
    return s;
  }
};

inline ValidationResult validate(const BucketTree& tree) {
  ValidationResult result;
  const int b = tree.capacity_bound();
  std::vector<char> seen(static_cast<std::size_t>(tree.size()) + 1, 0);
  bool labels_ok = true;
  for_each_node(tree, [&](const BucketNode& v, const NodePath& path) {
    auto flag = [&](std::string rule) { result.violations.push_back({path, std::move(rule)}); };
    if (v.labels.empty() || v.capacity() > b) {
      flag("capacity out of range");
      if (v.labels.empty()) return;
    }
    if (!std::is_sorted(v.labels.begin(), v.labels.end()) ||
        std::adjacent_find(v.labels.begin(), v.labels.end()) != v.labels.end())
      flag("labels not increasing within bucket");
    if (!v.children.empty() && v.capacity() != b) flag("internal node unsaturated");
    for (const auto& c : v.children) {
      if (c->labels.empty()) continue;
      if (*std::min_element(c->labels.begin(), c->labels.end()) <= v.max_label()) {
        flag("child labels not greater than parent");
        break;
      }
    }
    for (Label l : v.labels) {
      if (l < 1 || l > tree.size() || seen[static_cast<std::size_t>(l)]) labels_ok = false;
      else seen[static_cast<std::size_t>(l)] = 1;
    }
  });
  if (!labels_ok) result.violations.push_back({{}, "label set is not {1..n}"});
  return result;
}

inline void require_valid(const BucketTree& tree) {
  auto r = validate(tree);
  if (!r.ok()) throw InvalidTree("invalid bucket tree: " + r.message());
}

// ---------------------------------------------------------------- canonical form

namespace detail {
inline NodePtr canonical_node(const NodePtr& v) {
  std::vector<NodePtr> kids;
  kids.reserve(v->children.size());
  bool changed = false;
  for (const auto& c : v->children) {
    kids.push_back(canonical_node(c));
    changed |= kids.back() != c;
  }
  if (!std::is_sorted(kids.begin(), kids.end(),
                      [](const NodePtr& a, const NodePtr& b) { return a->min_label() < b->min_label(); })) {
    std::sort(kids.begin(), kids.end(),
              [](const NodePtr& a, const NodePtr& b) { return a->min_label() < b->min_label(); });
    changed = true;
  }
  if (!changed) return v;
  return make_node(v->labels, std::move(kids));
}
}  // namespace detail

/// Children sorted by minimum label at every node. Unchanged subtrees are shared.
inline BucketTree canonicalize(const BucketTree& tree) {
  require_valid(tree);
  return BucketTree(tree.capacity_bound(), detail::canonical_node(tree.root_ptr()));
}

inline bool is_canonical(const BucketTree& tree) {
  bool ok = true;
  for_each_node(tree, [&](const BucketNode& v, const NodePath&) {
    for (std::size_t i = 1; i < v.children.size(); ++i)
      if (v.children[i - 1]->min_label() > v.children[i]->min_label()) ok = false;
  });
  return ok;
}

// ---------------------------------------------------------------- census

struct NodeCensus {
  std::map<int, std::int64_t> unsaturated;  // capacity k < b -> count
  std::map<int, std::int64_t> saturated;    // out-degree -> count

  std::int64_t unsaturated_count(int k) const {
    auto it = unsaturated.find(k);
    return it == unsaturated.end() ? 0 : it->second;
  }
  std::int64_t saturated_count(int deg) const {
    auto it = saturated.find(deg);
    return it == saturated.end() ? 0 : it->second;
  }
  std::int64_t saturated_total() const {
    std::int64_t s = 0;
    for (auto& [d, c] : saturated) s += c;
    return s;
  }
};

inline NodeCensus census(const BucketTree& tree) {
  require_valid(tree);
  NodeCensus c;
  const int b = tree.capacity_bound();
  for_each_node(tree, [&](const BucketNode& v, const NodePath&) {
    if (v.capacity() < b) ++c.unsaturated[v.capacity()];
    else ++c.saturated[v.out_degree()];
  });
  return c;
}

/// Node-size and node/edge identities.
inline bool census_identities_hold(const NodeCensus& c, int n, int b) {
  std::int64_t size = 0, edge = 0;
  for (auto& [k, m] : c.unsaturated) {
    size += k * m;
    edge += m;
  }
  for (auto& [d, cnt] : c.saturated) {
    size += static_cast<std::int64_t>(b) * cnt;
    edge -= static_cast<std::int64_t>(d - 1) * cnt;
  }
  return size == n && edge == 1;
}

// ---------------------------------------------------------------- text codec

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

inline void write_text(const BucketNode& v, std::string& out) {
  out += '{';
  for (std::size_t i = 0; i < v.labels.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v.labels[i]);
  }
  out += '}';
  if (v.children.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < v.children.size(); ++i) {
    if (i) out += ',';
    write_text(*v.children[i], out);
  }
  out += ')';
}

inline std::string to_text(const BucketTree& tree) {
  std::string s;
  write_text(tree.root(), s);
  return s;
}

namespace detail {
class TextCursor {
 public:
  explicit TextCursor(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  Label integer() {
    skip_ws();
    std::size_t start = pos_;
    std::int64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > 1'000'000'000) fail("label too large");
      ++pos_;
    }
    if (pos_ == start) fail("expected label");
    return static_cast<Label>(v);
  }
  void finish() {
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
  std::size_t position() const { return pos_; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

inline NodePtr parse_node(TextCursor& cur) {
  cur.expect('{');
  std::vector<Label> labels{cur.integer()};
  while (cur.peek(',')) {
    cur.expect(',');
    labels.push_back(cur.integer());
  }
  cur.expect('}');
  std::vector<NodePtr> children;
  if (cur.peek('(')) {
    cur.expect('(');
    children.push_back(parse_node(cur));
    while (cur.peek(',')) {
      cur.expect(',');
      children.push_back(parse_node(cur));
    }
    cur.expect(')');
  }
  return make_node(std::move(labels), std::move(children));
}
}  // namespace detail

/// Parses `{1,2}({3},{4,5})`; throws ParseError or InvalidTree.
inline BucketTree parse_tree(std::string_view text, int capacity_bound) {
  detail::TextCursor cur(text);
  NodePtr root = detail::parse_node(cur);
  cur.finish();
  BucketTree tree(capacity_bound, std::move(root));
  require_valid(tree);
  return tree;
}

// ---------------------------------------------------------------- document codec

inline nlohmann::json node_to_doc(const BucketNode& v) {
  nlohmann::json kids = nlohmann::json::array();
  for (const auto& c : v.children) kids.push_back(node_to_doc(*c));
  return {{"labels", v.labels}, {"children", std::move(kids)}};
}

inline nlohmann::json to_doc(const BucketTree& tree) {
  return {{"capacity_bound", tree.capacity_bound()},
          {"size", tree.size()},
          {"root", node_to_doc(tree.root())}};
}

inline NodePtr node_from_doc(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("labels")) throw std::invalid_argument("node document needs labels");
  std::vector<Label> labels = j.at("labels").get<std::vector<Label>>();
  std::vector<NodePtr> kids;
  if (j.contains("children"))
    for (const auto& c : j.at("children")) kids.push_back(node_from_doc(c));
  return make_node(std::move(labels), std::move(kids));
}

inline BucketTree from_doc(const nlohmann::json& j) {
  BucketTree tree(j.at("capacity_bound").get<int>(), node_from_doc(j.at("root")));
  require_valid(tree);
  return tree;
}

// ---------------------------------------------------------------- bundled trees

struct BundledNode;
using BundledPtr = std::shared_ptr<const BundledNode>;

/// Children split into consecutive bundles; bundle_sizes sums to children.size().
struct BundledNode {
  std::vector<Label> labels;
  std::vector<BundledPtr> children;
  std::vector<std::size_t> bundle_sizes;

  std::vector<BundledPtr> bundle(std::size_t i) const {
    std::size_t start = std::accumulate(bundle_sizes.begin(), bundle_sizes.begin() + i, std::size_t{0});
    return {children.begin() + start, children.begin() + start + bundle_sizes[i]};
  }
};

class BundledBucketTree {
 public:
  BundledBucketTree(int capacity_bound, int bundles, BundledPtr root)
      : capacity_bound_(capacity_bound), bundles_(bundles), root_(std::move(root)) {
    check(*root_);
  }
  int capacity_bound() const { return capacity_bound_; }
  int bundles() const { return bundles_; }
  const BundledNode& root() const { return *root_; }
  const BundledPtr& root_ptr() const { return root_; }

  friend bool operator==(const BundledBucketTree& a, const BundledBucketTree& b) {
    return a.capacity_bound_ == b.capacity_bound_ && a.bundles_ == b.bundles_ && equal(*a.root_, *b.root_);
  }

  /// Forgets bundle boundaries.
  BucketTree flatten() const { return BucketTree(capacity_bound_, flat(*root_)); }

 private:
  void check(const BundledNode& v) const {
    if (v.bundle_sizes.size() != static_cast<std::size_t>(bundles_))
      throw std::invalid_argument("bundle count differs from tree bundle count");
    if (std::accumulate(v.bundle_sizes.begin(), v.bundle_sizes.end(), std::size_t{0}) != v.children.size())
      throw std::invalid_argument("bundle sizes do not cover children");
    for (const auto& c : v.children) check(*c);
  }
  static bool equal(const BundledNode& x, const BundledNode& y) {
    if (x.labels != y.labels || x.bundle_sizes != y.bundle_sizes) return false;
    for (std::size_t i = 0; i < x.children.size(); ++i)
      if (!equal(*x.children[i], *y.children[i])) return false;
    return true;
  }
  static NodePtr flat(const BundledNode& v) {
    std::vector<NodePtr> kids;
    for (const auto& c : v.children) kids.push_back(flat(*c));
    return make_node(v.labels, std::move(kids));
  }

  int capacity_bound_;
  int bundles_;
  BundledPtr root_;
};

inline void write_text(const BundledNode& v, std::string& out) {
  out += '{';
  for (std::size_t i = 0; i < v.labels.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v.labels[i]);
  }
  out += '}';
  if (v.children.empty()) return;
  out += '(';
  std::size_t k = 0;
  for (std::size_t bi = 0; bi < v.bundle_sizes.size(); ++bi) {
    if (bi) out += '|';
    for (std::size_t i = 0; i < v.bundle_sizes[bi]; ++i, ++k) {
      if (i) out += ',';
      write_text(*v.children[k], out);
    }
  }
  out += ')';
}

/// `{1,2}({3}||{4})`: bundles separated by '|'.
inline std::string to_text(const BundledBucketTree& tree) {
  std::string s;
  write_text(tree.root(), s);
  return s;
}

}  // namespace bucket_trees
