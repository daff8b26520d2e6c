#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skinet/skillset.hpp"

namespace skinet {

// One state per resource, keyed by resource name.
using Assignment = std::map<std::string, std::string>;

struct MissingResource : std::runtime_error {
  explicit MissingResource(const std::string& resource)
      : std::runtime_error("assignment has no state for resource '" + resource + "'"), resource(resource) {}
  std::string resource;
};

struct SolutionSet {
  std::vector<std::string> resources;  // skillset declaration order
  std::vector<Assignment> assignments;
};

namespace detail {

inline void collect_resources(const Guard& g, std::set<std::string>& out) {
  if (g.kind == Guard::Kind::Atom) out.insert(g.resource);
  for (const auto& op : g.operands) collect_resources(op, out);
}

inline void collect_resources_ordered(const Guard& g, std::vector<std::string>& out) {
  if (g.kind == Guard::Kind::Atom && std::find(out.begin(), out.end(), g.resource) == out.end())
    out.push_back(g.resource);
  for (const auto& op : g.operands) collect_resources_ordered(op, out);
}

}  // namespace detail

inline std::set<std::string> involved_resources(const Guard& guard) {
  std::set<std::string> out;
  detail::collect_resources(guard, out);
  return out;
}

// Same set, in order of first appearance in the formula.
inline std::vector<std::string> involved_resources_in_order(const Guard& guard) {
  std::vector<std::string> out;
  detail::collect_resources_ordered(guard, out);
  return out;
}

inline bool evaluate(const Guard& guard, const Assignment& assignment) {
  switch (guard.kind) {
    case Guard::Kind::True:
      return true;
    case Guard::Kind::Atom: {
      auto it = assignment.find(guard.resource);
      if (it == assignment.end()) throw MissingResource(guard.resource);
      return it->second == guard.state;
    }
    case Guard::Kind::Not:
      return !evaluate(guard.operands.front(), assignment);
    case Guard::Kind::And:
      for (const auto& op : guard.operands)
        if (!evaluate(op, assignment)) return false;
      return true;
    case Guard::Kind::Or:
      for (const auto& op : guard.operands)
        if (evaluate(op, assignment)) return true;
      return false;
  }
  return false;
}

// A guard resolved against a skillset: atoms become (resource index, state
// index) pairs, evaluated over a vector of current state indices.
class CompiledGuard {
 public:
  CompiledGuard() = default;

  CompiledGuard(const Guard& guard, const Skillset& ss) { root_ = compile(guard, ss); }

  bool operator()(std::span<const std::size_t> states) const { return eval(root_, states); }

 private:
  struct Node {
    Guard::Kind kind = Guard::Kind::True;
    std::size_t resource = 0;
    std::size_t state = 0;
    std::vector<std::size_t> children;
  };

  std::size_t compile(const Guard& g, const Skillset& ss) {
    Node n;
    n.kind = g.kind;
    if (g.kind == Guard::Kind::Atom) {
      auto r = ss.resource_index(g.resource);
      if (!r) throw std::invalid_argument("guard names undeclared resource '" + g.resource + "'");
      auto s = ss.resources[*r].state_index(g.state);
      if (!s) throw std::invalid_argument("guard names undeclared state '" + g.state + "'");
      n.resource = *r;
      n.state = *s;
    }
    for (const auto& op : g.operands) n.children.push_back(compile(op, ss));
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
  }

  bool eval(std::size_t idx, std::span<const std::size_t> states) const {
    const Node& n = nodes_[idx];
    switch (n.kind) {
      case Guard::Kind::True: return true;
      case Guard::Kind::Atom: return states[n.resource] == n.state;
      case Guard::Kind::Not: return !eval(n.children.front(), states);
      case Guard::Kind::And:
        for (auto c : n.children)
          if (!eval(c, states)) return false;
        return true;
      case Guard::Kind::Or:
        for (auto c : n.children)
          if (eval(c, states)) return true;
        return false;
    }
    return false;
  }

  std::vector<Node> nodes_{Node{}};
  std::size_t root_ = 0;
};

// Exhaustive enumeration over the product of the involved resources' state
// sets. Cost is the product of their state counts, which stays tiny for
// skillset resources. The first declared resource varies slowest.
inline SolutionSet solutions(const Guard& guard, const Skillset& ss) {
  SolutionSet out;
  const auto involved = involved_resources(guard);
  std::vector<std::size_t> idx;
  for (std::size_t r = 0; r < ss.resources.size(); ++r) {
    if (involved.count(ss.resources[r].name)) {
      out.resources.push_back(ss.resources[r].name);
      idx.push_back(r);
    }
  }
  const CompiledGuard compiled(guard, ss);
  std::vector<std::size_t> states(ss.resources.size(), 0);
  std::vector<std::size_t> digit(idx.size(), 0);
  for (;;) {
    for (std::size_t k = 0; k < idx.size(); ++k) states[idx[k]] = digit[k];
    if (compiled(states)) {
      Assignment a;
      for (std::size_t k = 0; k < idx.size(); ++k) a[out.resources[k]] = ss.resources[idx[k]].states[digit[k]];
      out.assignments.push_back(std::move(a));
    }
    std::size_t k = idx.size();
    for (;;) {
      if (k == 0) return out;
      --k;
      if (++digit[k] < ss.resources[idx[k]].states.size()) break;
      digit[k] = 0;
    }
  }
}

}  // namespace skinet
