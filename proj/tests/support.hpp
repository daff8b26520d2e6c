#pragma once

#include <cstddef>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "skinet/skinet.hpp"

namespace skinet::testing {

inline std::string sample_path(const std::string& file) { return std::string(SKINET_SAMPLES_DIR) + "/" + file; }

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

inline const Skillset& spot() {
  static const Skillset ss = parse_skillset(read_file(sample_path("spot.skillset")));
  return ss;
}

inline const Skillset& spot_fixed() {
  static const Skillset ss = parse_skillset(read_file(sample_path("spot_fixed.skillset")));
  return ss;
}

inline const SkillsetTransition& lowered(const Skillset& ss, const std::string& base_name) {
  static std::vector<std::pair<const Skillset*, std::vector<SkillsetTransition>>> cache;
  const std::vector<SkillsetTransition>* all = nullptr;
  for (const auto& [key, value] : cache)
    if (key == &ss) all = &value;
  if (!all) all = &cache.emplace_back(&ss, lower_skillset(ss)).second;
  for (const auto& t : *all)
    if (t.label.base_name() == base_name) return t;
  throw std::runtime_error("no lowered transition " + base_name);
}

inline std::size_t place(const PetriNet& net, const std::string& name) {
  auto p = net.place_id(name);
  if (!p) throw std::runtime_error("no place " + name);
  return *p;
}

inline std::size_t transition(const PetriNet& net, const std::string& name) {
  auto t = net.transition_id(name);
  if (!t) throw std::runtime_error("no transition " + name);
  return *t;
}

inline std::set<std::string> marked_names(const PetriNet& net, const Marking& m) {
  std::set<std::string> out;
  for (std::size_t p = 0; p < net.place_count(); ++p)
    if (m.test(p)) out.insert(net.place(p).name);
  return out;
}

inline Marking marking_of(const PetriNet& net, const std::vector<std::string>& names) {
  Marking m(net.place_count());
  for (const auto& n : names) m.set(place(net, n));
  return m;
}

// Independent of the library's graph algorithms: plain per-state forward
// search over the edge list.
inline std::vector<std::size_t> brute_force_goal_avoiders(const ReachabilityGraph& g, std::size_t goal_place) {
  const std::size_t n = g.state_count();
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& e : g.edges()) succ[e.source].push_back(e.target);
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> q{s};
    seen[s] = true;
    bool found = false;
    while (!q.empty() && !found) {
      const auto x = q.front();
      q.pop_front();
      if (g.marking(x).test(goal_place)) found = true;
      for (auto y : succ[x])
        if (!seen[y]) {
          seen[y] = true;
          q.push_back(y);
        }
    }
    if (!found) out.push_back(s);
  }
  return out;
}

// Dead transitions by scanning every state with a local enabledness and
// priority rule, not the library's fireable().
inline std::vector<std::string> brute_force_dead_transitions(const PetriNet& net, const ReachabilityGraph& g) {
  std::vector<bool> seen(net.transition_count(), false);
  for (std::size_t s = 0; s < g.state_count(); ++s) {
    std::vector<std::size_t> normal, urgent;
    for (std::size_t t = 0; t < net.transition_count(); ++t) {
      bool ok = true;
      for (auto p : net.transition(t).inputs) ok = ok && g.marking(s).test(p);
      if (!ok) continue;
      (net.transition(t).priority == PriorityClass::InvariantFailure ? urgent : normal).push_back(t);
    }
    for (auto t : urgent.empty() ? normal : urgent) seen[t] = true;
  }
  std::vector<std::string> out;
  for (std::size_t t = 0; t < net.transition_count(); ++t)
    if (!seen[t]) out.push_back(net.transition(t).name);
  return out;
}

inline std::vector<std::string> dead_subjects(const CheckResult& r) {
  std::vector<std::string> out;
  for (const auto& f : r.findings) out.push_back(f.subject);
  return out;
}

}  // namespace skinet::testing
