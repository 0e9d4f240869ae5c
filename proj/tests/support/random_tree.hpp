#pragma once

#include <clopa/attack_tree.hpp>

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

/// Random AND/OR tree over at most `max_events` events, with leaves drawn
/// with replacement so events repeat.
template <class Rng>
clopa::AttackTree random_tree(Rng& rng, std::size_t max_events = 12) {
  std::uniform_int_distribution<std::size_t> n_events(1, max_events);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  std::uniform_int_distribution<int> fanout(1, 4);
  std::bernoulli_distribution coin(0.5);
  clopa::AttackTree tree;
  const std::size_t n = n_events(rng);
  for (std::size_t i = 0; i < n; ++i) {
    // Edge values 0, 1/2 and 1 turn up often.
    const int kind = std::uniform_int_distribution<int>(0, 5)(rng);
    const double p = kind == 0 ? 0.0 : kind == 1 ? 1.0 : kind == 2 ? 0.5 : prob(rng);
    tree.events.add({"e" + std::to_string(i), "", clopa::Probability(p)});
  }
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::function<clopa::AttackNode(int)> grow = [&](int depth) {
    if (depth == 0 || std::bernoulli_distribution(0.3)(rng)) {
      return clopa::leaf("e" + std::to_string(pick(rng)));
    }
    std::vector<clopa::AttackNode> children;
    const int k = fanout(rng);
    for (int i = 0; i < k; ++i) children.push_back(grow(depth - 1));
    return coin(rng) ? clopa::all_of(std::move(children)) : clopa::any_of(std::move(children));
  };
  tree.root = grow(4);
  return tree;
}

/// Truth value of a node under an assignment, recursively.
inline bool satisfied(const clopa::AttackNode& node, const std::vector<std::string>& ids,
                      const std::vector<bool>& truth) {
  switch (node.gate) {
    case clopa::Gate::Leaf:
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == node.event_id) return truth[i];
      }
      return false;
    case clopa::Gate::And:
      for (const auto& c : node.children) {
        if (!satisfied(c, ids, truth)) return false;
      }
      return true;
    case clopa::Gate::Or:
      for (const auto& c : node.children) {
        if (satisfied(c, ids, truth)) return true;
      }
      return false;
  }
  return false;
}

/// Probability mass of satisfying assignments over every table event.
inline double brute_force(const clopa::AttackTree& tree) {
  std::vector<std::string> ids;
  std::vector<double> p;
  for (const auto& e : tree.events.events()) {
    ids.push_back(e.id);
    p.push_back(e.probability.value());
  }
  double total = 0.0;
  std::vector<bool> truth(ids.size());
  for (unsigned long mask = 0; mask < (1UL << ids.size()); ++mask) {
    double w = 1.0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      truth[i] = (mask >> i) & 1UL;
      w *= truth[i] ? p[i] : 1.0 - p[i];
    }
    if (satisfied(tree.root, ids, truth)) total += w;
  }
  return total;
}

}  // namespace fixtures
