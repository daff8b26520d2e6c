#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "skinet/petri.hpp"

namespace skinet {

struct StateLimitExceeded : std::runtime_error {
  explicit StateLimitExceeded(std::size_t limit)
      : std::runtime_error("reachable state space exceeds the limit of " + std::to_string(limit) + " states"),
        limit(limit) {}
  std::size_t limit;
};

struct Edge {
  std::size_t source;
  std::size_t transition;
  std::size_t target;
};

// A firing that would have put a second token on a place. Only recorded
// when exploring with UnsafePolicy::Record.
struct UnsafeFiring {
  std::size_t source;
  std::size_t transition;
  std::vector<std::size_t> places;
};

enum class UnsafePolicy { Throw, Record };

struct ExploreOptions {
  std::size_t limit = 1'000'000;
  UnsafePolicy on_unsafe = UnsafePolicy::Throw;
};

// Kripke view of the net: state 0 is the initial marking, states are
// numbered in BFS discovery order and each state's atomic propositions are
// its marked places.
class ReachabilityGraph {
 public:
  std::size_t state_count() const { return states_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const Marking& marking(std::size_t s) const { return states_.at(s); }
  const std::vector<Marking>& markings() const { return states_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<UnsafeFiring>& unsafe_firings() const { return unsafe_; }

  std::span<const Edge> out_edges(std::size_t s) const {
    return std::span<const Edge>(edges_).subspan(first_edge_[s], first_edge_[s + 1] - first_edge_[s]);
  }

  bool is_deadlock(std::size_t s) const { return first_edge_[s] == first_edge_[s + 1] && !has_unsafe_[s]; }

  std::optional<std::size_t> find(const Marking& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  friend ReachabilityGraph explore(const PetriNet&, const ExploreOptions&);

  std::vector<Marking> states_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> first_edge_{0};
  std::vector<bool> has_unsafe_;
  std::vector<UnsafeFiring> unsafe_;
  std::unordered_map<Marking, std::size_t, MarkingHash> index_;
};

// Breadth-first exploration under priority semantics. Fireable transitions
// are expanded in ascending id order, so numbering is reproducible.
inline ReachabilityGraph explore(const PetriNet& net, const ExploreOptions& options = {}) {
  ReachabilityGraph g;
  auto intern = [&](const Marking& m) {
    auto [it, inserted] = g.index_.try_emplace(m, g.states_.size());
    if (inserted) {
      if (g.states_.size() >= options.limit) throw StateLimitExceeded(options.limit);
      g.states_.push_back(m);
    }
    return it->second;
  };
  intern(net.initial_marking());
  for (std::size_t s = 0; s < g.states_.size(); ++s) {
    const Marking current = g.states_[s];
    bool unsafe = false;
    for (auto t : fireable(net, current)) {
      try {
        const auto target = intern(fire_unchecked(net, current, t));
        g.edges_.push_back({s, t, target});
      } catch (const SafetyViolation& v) {
        if (options.on_unsafe == UnsafePolicy::Throw) throw;
        g.unsafe_.push_back({s, t, v.places});
        unsafe = true;
      }
    }
    g.first_edge_.push_back(g.edges_.size());
    g.has_unsafe_.push_back(unsafe);
  }
  return g;
}

inline ReachabilityGraph explore(const PetriNet& net, std::size_t limit) {
  return explore(net, ExploreOptions{limit, UnsafePolicy::Throw});
}

struct Path {
  std::vector<std::size_t> states;       // states.front() is the start state
  std::vector<std::size_t> transitions;  // transitions[i] leads states[i] -> states[i + 1]

  std::size_t length() const { return transitions.size(); }
};

// States satisfying EF goal: least fixpoint over reversed edges.
template <class Goal>
std::vector<bool> backward_reachable(const ReachabilityGraph& g, Goal&& goal) {
  const std::size_t n = g.state_count();
  std::vector<std::vector<std::size_t>> preds(n);
  for (const auto& e : g.edges()) preds[e.target].push_back(e.source);
  std::vector<bool> in(n, false);
  std::deque<std::size_t> work;
  for (std::size_t s = 0; s < n; ++s)
    if (goal(s)) {
      in[s] = true;
      work.push_back(s);
    }
  while (!work.empty()) {
    const auto s = work.front();
    work.pop_front();
    for (auto p : preds[s])
      if (!in[p]) {
        in[p] = true;
        work.push_back(p);
      }
  }
  return in;
}

// Shortest path from `from` to the first state (in BFS order) satisfying
// target; ties between equal-length routes go to the lower transition id.
template <class Target>
std::optional<Path> path_from(const ReachabilityGraph& g, std::size_t from, Target&& target) {
  const std::size_t n = g.state_count();
  constexpr auto none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(n, none), via(n, none);
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    if (target(s)) {
      Path p;
      for (auto cur = s; cur != from; cur = parent[cur]) {
        p.states.push_back(cur);
        p.transitions.push_back(via[cur]);
      }
      p.states.push_back(from);
      std::reverse(p.states.begin(), p.states.end());
      std::reverse(p.transitions.begin(), p.transitions.end());
      return p;
    }
    for (const auto& e : g.out_edges(s))
      if (!seen[e.target]) {
        seen[e.target] = true;
        parent[e.target] = s;
        via[e.target] = e.transition;
        queue.push_back(e.target);
      }
  }
  return std::nullopt;
}

template <class Target>
std::optional<Path> path_to(const ReachabilityGraph& g, Target&& target) {
  if (g.state_count() == 0) return std::nullopt;
  return path_from(g, 0, std::forward<Target>(target));
}

// Marks states in bottom strongly connected components (no edge leaves the
// component). Iterative Tarjan.
inline std::vector<bool> bottom_components(const ReachabilityGraph& g) {
  const std::size_t n = g.state_count();
  constexpr auto unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0, comps = 0;

  struct Frame {
    std::size_t state;
    std::size_t next_edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& f = call.back();
      const auto edges = g.out_edges(f.state);
      if (f.next_edge < edges.size()) {
        const auto w = edges[f.next_edge++].target;
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.state] = std::min(low[f.state], index[w]);
        }
        continue;
      }
      const auto v = f.state;
      call.pop_back();
      if (!call.empty()) low[call.back().state] = std::min(low[call.back().state], low[v]);
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
    }
  }
  std::vector<bool> bottom(comps, true);
  for (const auto& e : g.edges())
    if (comp[e.source] != comp[e.target]) bottom[comp[e.source]] = false;
  std::vector<bool> out(n);
  for (std::size_t s = 0; s < n; ++s) out[s] = bottom[comp[s]];
  return out;
}

inline std::string to_dot(const PetriNet& net, const ReachabilityGraph& g) {
  std::ostringstream os;
  os << "digraph \"" << net.name() << "\" {\n";
  for (std::size_t s = 0; s < g.state_count(); ++s) {
    os << "  s" << s << " [label=\"" << s << ":";
    for (auto p : g.marking(s).marked()) os << " " << net.place(p).name;
    os << "\"";
    if (g.is_deadlock(s)) os << ", shape=box";
    os << "];\n";
  }
  for (const auto& e : g.edges())
    os << "  s" << e.source << " -> s" << e.target << " [label=\"" << net.transition(e.transition).name
       << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace skinet
