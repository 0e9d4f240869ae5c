#pragma once

// AND/OR attack trees over independent basic attack events, and aggregation
// of attacker sources into the cyberattack demand rate.

#include <clopa/core.hpp>
#include <clopa/error.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace clopa {

struct BasicEvent {
  std::string id;
  std::string description;
  Probability probability;

  friend bool operator==(const BasicEvent&, const BasicEvent&) = default;
};

/// Basic events keyed by id, in insertion order.
class EventTable {
 public:
  EventTable() = default;
  explicit EventTable(std::vector<BasicEvent> events) {
    for (auto& e : events) add(std::move(e));
  }

  void add(BasicEvent event) {
    if (index_.count(event.id) != 0) {
      throw Error(ErrorCode::DuplicateEventName, "basic event '" + event.id + "' defined twice");
    }
    index_.emplace(event.id, events_.size());
    events_.push_back(std::move(event));
  }

  const BasicEvent* find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &events_[it->second];
  }

  std::size_t index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) {
      throw Error(ErrorCode::UnresolvedLeaf, "leaf references unknown event '" + std::string(id) + "'");
    }
    return it->second;
  }

  const std::vector<BasicEvent>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }

  friend bool operator==(const EventTable& a, const EventTable& b) { return a.events_ == b.events_; }

 private:
  std::vector<BasicEvent> events_;
  std::map<std::string, std::size_t> index_;
};

enum class Gate { Leaf, And, Or };

/// A node of an attack tree. The same event id may appear on several leaves;
/// all of them denote one and the same event.
struct AttackNode {
  Gate gate = Gate::Leaf;
  std::string event_id;              // Leaf only
  std::vector<AttackNode> children;  // And / Or only
  std::string label;                 // optional, for reports

  friend bool operator==(const AttackNode&, const AttackNode&) = default;
};

inline AttackNode leaf(std::string event_id) {
  return AttackNode{Gate::Leaf, std::move(event_id), {}, {}};
}

inline AttackNode all_of(std::vector<AttackNode> children, std::string label = {}) {
  return AttackNode{Gate::And, {}, std::move(children), std::move(label)};
}

inline AttackNode any_of(std::vector<AttackNode> children, std::string label = {}) {
  return AttackNode{Gate::Or, {}, std::move(children), std::move(label)};
}

struct AttackTree {
  std::string name;
  EventTable events;
  AttackNode root;

  friend bool operator==(const AttackTree&, const AttackTree&) = default;
};

struct AttackerSource {
  std::string name;
  Rate lambda;                      // attempts per year
  Probability success_probability;  // of reaching the control network

  friend bool operator==(const AttackerSource&, const AttackerSource&) = default;
};

/// Expected successful attacks per year: sum of lambda_i * P_i.
inline Rate aggregate_attack_rate(std::span<const AttackerSource> sources) {
  double total = 0.0;
  for (const auto& s : sources) total += s.lambda.value() * s.success_probability.value();
  return Rate(total);
}

namespace detail {

// Tree with leaves resolved to event indices.
struct FlatNode {
  Gate gate;
  std::size_t event = 0;
  std::vector<std::size_t> children;
};

struct FlatTree {
  std::vector<FlatNode> nodes;  // children precede parents; root is last
  std::vector<std::size_t> leaf_count;  // per event index
};

inline std::size_t flatten(const AttackNode& node, const EventTable& events, FlatTree& out) {
  FlatNode flat{node.gate, 0, {}};
  if (node.gate == Gate::Leaf) {
    flat.event = events.index_of(node.event_id);
    ++out.leaf_count[flat.event];
  } else {
    if (node.children.empty()) {
      throw Error(ErrorCode::SchemaError, "gate '" + node.label + "' has no children");
    }
    flat.children.reserve(node.children.size());
    for (const auto& child : node.children) flat.children.push_back(flatten(child, events, out));
  }
  out.nodes.push_back(std::move(flat));
  return out.nodes.size() - 1;
}

inline FlatTree flatten(const AttackNode& root, const EventTable& events) {
  FlatTree tree;
  tree.leaf_count.assign(events.size(), 0);
  flatten(root, events, tree);
  return tree;
}

}  // namespace detail

/// Maximum number of repeated events eval_tree will condition on.
inline constexpr std::size_t kMaxSharedEvents = 30;

/// Exact probability that the root goal is achieved, with basic events mutually
/// independent. Events that occur on several leaves are conditioned on (Shannon
/// expansion); once they are fixed the remaining leaves are distinct and the
/// AND = prod p, OR = 1 - prod(1 - p) recursion is exact.
inline Probability eval_tree(const AttackNode& root, const EventTable& events) {
  const detail::FlatTree tree = detail::flatten(root, events);
  const auto& table = events.events();

  std::vector<std::size_t> shared;
  for (std::size_t e = 0; e < tree.leaf_count.size(); ++e) {
    if (tree.leaf_count[e] > 1) shared.push_back(e);
  }
  if (shared.size() > kMaxSharedEvents) {
    throw Error(ErrorCode::TooManyEvents, std::to_string(shared.size()) +
                                              " repeated events exceed the conditioning limit");
  }

  // Subtrees without repeated events are evaluated once.
  const std::size_t n = tree.nodes.size();
  std::vector<char> depends(n, 0);
  std::vector<double> value(n, 0.0);
  auto combine = [&](const detail::FlatNode& node, auto&& leaf_value) {
    if (node.gate == Gate::Leaf) return leaf_value(node.event);
    double acc = 1.0;
    if (node.gate == Gate::And) {
      for (auto c : node.children) acc *= value[c];
      return acc;
    }
    for (auto c : node.children) acc *= 1.0 - value[c];
    return 1.0 - acc;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = tree.nodes[i];
    if (node.gate == Gate::Leaf) {
      depends[i] = tree.leaf_count[node.event] > 1;
    } else {
      for (auto c : node.children) depends[i] |= depends[c];
    }
    if (!depends[i]) {
      value[i] = combine(node, [&](std::size_t e) { return table[e].probability.value(); });
    }
  }
  if (!depends[n - 1]) return Probability(value[n - 1]);

  std::vector<double> fixed(table.size(), 0.0);
  double total = 0.0;
  const std::uint64_t branches = std::uint64_t{1} << shared.size();
  for (std::uint64_t mask = 0; mask < branches; ++mask) {
    double weight = 1.0;
    for (std::size_t k = 0; k < shared.size(); ++k) {
      const bool on = (mask >> k) & 1U;
      const double p = table[shared[k]].probability.value();
      fixed[shared[k]] = on ? 1.0 : 0.0;
      weight *= on ? p : 1.0 - p;
    }
    if (weight == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (depends[i]) {
        value[i] = combine(tree.nodes[i], [&](std::size_t e) { return fixed[e]; });
      }
    }
    total += weight * value[n - 1];
  }
  return Probability(std::min(1.0, std::max(0.0, total)));
}

inline Probability eval_tree(const AttackTree& tree) { return eval_tree(tree.root, tree.events); }

/// Maximum number of distinct events eval_tree_by_enumeration accepts.
inline constexpr std::size_t kMaxEnumeratedEvents = 24;

/// Reference evaluation: sums the probability of every truth assignment of the
/// distinct events that satisfies the root. Cost 2^n.
inline Probability eval_tree_by_enumeration(const AttackNode& root, const EventTable& events) {
  const detail::FlatTree tree = detail::flatten(root, events);
  std::vector<std::size_t> used;
  for (std::size_t e = 0; e < tree.leaf_count.size(); ++e) {
    if (tree.leaf_count[e] > 0) used.push_back(e);
  }
  if (used.size() > kMaxEnumeratedEvents) {
    throw Error(ErrorCode::TooManyEvents,
                std::to_string(used.size()) + " distinct events exceed the enumeration limit");
  }

  std::vector<char> truth(events.size(), 0);
  std::vector<char> sat(tree.nodes.size(), 0);
  double total = 0.0;
  const std::uint64_t assignments = std::uint64_t{1} << used.size();
  for (std::uint64_t mask = 0; mask < assignments; ++mask) {
    double weight = 1.0;
    for (std::size_t k = 0; k < used.size(); ++k) {
      const bool on = (mask >> k) & 1U;
      truth[used[k]] = on;
      const double p = events.events()[used[k]].probability.value();
      weight *= on ? p : 1.0 - p;
    }
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      const auto& node = tree.nodes[i];
      switch (node.gate) {
        case Gate::Leaf: sat[i] = truth[node.event]; break;
        case Gate::And: {
          bool all = true;
          for (auto c : node.children) all = all && sat[c];
          sat[i] = all;
          break;
        }
        case Gate::Or: {
          bool any = false;
          for (auto c : node.children) any = any || sat[c];
          sat[i] = any;
          break;
        }
      }
    }
    if (sat.back()) total += weight;
  }
  return Probability(std::min(1.0, total));
}

inline Probability eval_tree_by_enumeration(const AttackTree& tree) {
  return eval_tree_by_enumeration(tree.root, tree.events);
}

}  // namespace clopa
