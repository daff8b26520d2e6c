#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skinet/net_builder.hpp"
#include "skinet/petri.hpp"
#include "skinet/skillset.hpp"
#include "skinet/state_space.hpp"

namespace skinet {

enum class Verdict { Pass, Fail };

inline const char* to_string(Verdict v) { return v == Verdict::Pass ? "pass" : "fail"; }

struct Finding {
  std::string subject;
  std::optional<Path> path;
  // Index into path->states of the state the finding is about. The path may
  // continue past it, e.g. into the region where a skill stays blocked.
  std::size_t focus = 0;
  std::optional<std::size_t> state;
  std::string message;
};

struct CheckStats {
  std::size_t states = 0;
  std::size_t edges = 0;
  double elapsed_ms = 0.0;
};

struct CheckResult {
  std::string name;
  std::string formula;
  Verdict verdict = Verdict::Pass;
  std::vector<Finding> findings;
  CheckStats stats;

  bool passed() const { return verdict == Verdict::Pass; }
};

struct UnknownSkill : std::invalid_argument {
  explicit UnknownSkill(const std::string& skill)
      : std::invalid_argument("unknown skill '" + skill + "'"), skill(skill) {}
  std::string skill;
};

namespace detail {

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline CheckResult start_result(std::string name, std::string formula, const ReachabilityGraph& g) {
  CheckResult r;
  r.name = std::move(name);
  r.formula = std::move(formula);
  r.stats.states = g.state_count();
  r.stats.edges = g.edge_count();
  return r;
}

inline void finish(CheckResult& r, const Stopwatch& watch) {
  r.verdict = r.findings.empty() ? Verdict::Pass : Verdict::Fail;
  r.stats.elapsed_ms = watch.elapsed_ms();
}

inline std::optional<std::size_t> running_place(const PetriNet& net, std::size_t skill) {
  for (std::size_t p = 0; p < net.place_count(); ++p) {
    const auto& role = net.place(p).role;
    if (role.kind == PlaceRole::Kind::SkillRunning && role.owner == skill) return p;
  }
  return std::nullopt;
}

// Goal-avoidance core shared by deadskill and deadset: reachable states that
// cannot reach the goal, and a witness for the first of them.
template <class Goal>
void report_unreachable_goal(const ReachabilityGraph& g, Goal&& goal, const std::string& subject,
                             const std::string& goal_text, CheckResult& result) {
  const auto can_reach = backward_reachable(g, goal);
  std::size_t violating = 0;
  std::optional<std::size_t> first;
  for (std::size_t s = 0; s < g.state_count(); ++s)
    if (!can_reach[s]) {
      ++violating;
      if (!first) first = s;
    }
  if (!first) return;

  Finding f;
  f.subject = subject;
  f.state = *first;
  Path path = path_to(g, [&](std::size_t s) { return s == *first; }).value();
  f.focus = path.length();
  // Extend into a bottom component: the region the run cannot leave.
  const auto bottom = bottom_components(g);
  const auto tail = path_from(g, *first, [&](std::size_t s) { return bottom[s]; }).value();
  for (std::size_t i = 0; i < tail.length(); ++i) {
    path.transitions.push_back(tail.transitions[i]);
    path.states.push_back(tail.states[i + 1]);
  }
  f.message = std::to_string(violating) + " reachable state(s) from which " + goal_text +
              " can never be reached; first is state " + std::to_string(*first);
  if (g.is_deadlock(path.states.back()))
    f.message += "; the run ends in deadlock state " + std::to_string(path.states.back()) + " (see 'dead')";
  f.path = std::move(path);
  result.findings.push_back(std::move(f));
}

}  // namespace detail

// A ¬dead: no reachable marking without a fireable transition.
inline CheckResult check_dead(const ReachabilityGraph& g, std::size_t max_findings = 100) {
  detail::Stopwatch watch;
  auto result = detail::start_result("dead", "A ¬dead", g);
  max_findings = std::max<std::size_t>(max_findings, 1);  // a failing verdict always has a finding
  std::size_t total = 0;
  for (std::size_t s = 0; s < g.state_count(); ++s) {
    if (!g.is_deadlock(s)) continue;
    if (++total > max_findings) continue;
    Finding f;
    f.subject = "state " + std::to_string(s);
    f.state = s;
    f.path = path_to(g, [s](std::size_t x) { return x == s; });
    f.focus = f.path->length();
    f.message = "deadlock: no transition is fireable";
    result.findings.push_back(std::move(f));
  }
  if (total > max_findings)
    result.findings.back().message += " (" + std::to_string(total - max_findings) + " more deadlock states omitted)";
  detail::finish(result, watch);
  return result;
}

// Transitions labelling no edge of the graph, i.e. fireable at no reachable
// marking. `origins` (optional) names the skillset element behind each one.
inline CheckResult check_live(const PetriNet& net, const ReachabilityGraph& g,
                              const std::vector<TransitionOrigin>* origins = nullptr) {
  detail::Stopwatch watch;
  auto result = detail::start_result("live", "∀t ∈ T : A ¬t", g);
  std::vector<bool> fired(net.transition_count(), false);
  for (const auto& e : g.edges()) fired[e.transition] = true;
  for (const auto& u : g.unsafe_firings()) fired[u.transition] = true;
  for (std::size_t t = 0; t < net.transition_count(); ++t) {
    if (fired[t]) continue;
    Finding f;
    f.subject = net.transition(t).name;
    f.message = "dead transition";
    if (origins && t < origins->size()) f.message += " (" + (*origins)[t].label.describe() + ")";
    result.findings.push_back(std::move(f));
  }
  detail::finish(result, watch);
  return result;
}

inline CheckResult check_live(const SkillNet& sn, const ReachabilityGraph& g) {
  return check_live(sn.net, g, &sn.origins);
}

// Place invariants of the resource and skill state machines, and 1-safety.
inline CheckResult check_safe(const Skillset& ss, const PetriNet& net, const ReachabilityGraph& g) {
  detail::Stopwatch watch;
  auto result = detail::start_result(
      "safe", "∀r ∈ R : A (Σ p_i^r = 1) ; ∀s ∈ S : A (p_e^s + p_i^s + Σ_k p_x,k^s = 1) ; ∀p ∈ P : A ¬(p ≥ 2)",
      g);

  std::vector<std::vector<std::size_t>> resource_places(ss.resources.size());
  std::vector<std::vector<std::size_t>> skill_places(ss.skills.size());
  for (std::size_t p = 0; p < net.place_count(); ++p) {
    const auto& role = net.place(p).role;
    if (role.kind == PlaceRole::Kind::ResourceState && role.owner < resource_places.size())
      resource_places[role.owner].push_back(p);
    else if (role.is_skill() && role.owner < skill_places.size())
      skill_places[role.owner].push_back(p);
  }

  auto witness = [&](std::size_t s) { return path_to(g, [s](std::size_t x) { return x == s; }); };
  auto scan = [&](const std::string& equation, const std::string& what,
                  const std::vector<std::size_t>& places) {
    for (std::size_t s = 0; s < g.state_count(); ++s) {
      std::size_t tokens = 0;
      for (auto p : places) tokens += g.marking(s).test(p) ? 1 : 0;
      if (tokens == 1) continue;
      Finding f;
      f.subject = what;
      f.state = s;
      f.path = witness(s);
      f.focus = f.path->length();
      f.message = equation + " violated: " + std::to_string(tokens) + " tokens over the places of " + what;
      result.findings.push_back(std::move(f));
      return;  // first violating state only
    }
  };
  for (std::size_t r = 0; r < ss.resources.size(); ++r)
    scan("resource invariant", "resource " + ss.resources[r].name, resource_places[r]);
  for (std::size_t k = 0; k < ss.skills.size(); ++k)
    scan("skill invariant", "skill " + ss.skills[k].name, skill_places[k]);

  for (const auto& u : g.unsafe_firings()) {
    Finding f;
    std::string names;
    for (auto p : u.places) names += (names.empty() ? "" : ", ") + net.place(p).name;
    f.subject = "place " + names;
    f.state = u.source;
    f.path = witness(u.source);
    f.focus = f.path->length();
    // The overflowing marking is not a graph state; the path stops before it.
    f.message = "1-safety violated: firing " + net.transition(u.transition).name + " from state " +
                std::to_string(u.source) + " puts a second token on " + names;
    result.findings.push_back(std::move(f));
    break;
  }
  detail::finish(result, watch);
  return result;
}

// AG EF i_s: from every reachable state the skill can eventually run again.
inline CheckResult check_deadskill(const Skillset& ss, const PetriNet& net, const ReachabilityGraph& g,
                                   const std::string& skill) {
  detail::Stopwatch watch;
  const auto k = ss.skill_index(skill);
  if (!k) throw UnknownSkill(skill);
  const auto place = detail::running_place(net, *k);
  if (!place) throw UnknownSkill(skill);
  const std::string goal = net.place(*place).name;
  auto result = detail::start_result("deadskill", "AG EF " + goal + "   (counterexamples: ¬AF EF " + goal + ")", g);
  detail::report_unreachable_goal(
      g, [&](std::size_t s) { return g.marking(s).test(*place); }, "skill " + skill, goal, result);
  detail::finish(result, watch);
  return result;
}

// AG EF (Σ_s i_s): from every reachable state some skill can eventually run.
inline CheckResult check_deadset(const Skillset& ss, const PetriNet& net, const ReachabilityGraph& g) {
  detail::Stopwatch watch;
  std::vector<std::size_t> running;
  std::string sum;
  for (std::size_t k = 0; k < ss.skills.size(); ++k)
    if (auto p = detail::running_place(net, k)) {
      running.push_back(*p);
      sum += (sum.empty() ? "" : " + ") + net.place(*p).name;
    }
  if (sum.empty()) sum = "0";
  auto result = detail::start_result("deadset", "AG EF (" + sum + ")   (counterexamples: ¬AF EF (" + sum + "))", g);
  if (running.empty()) {
    Finding f;
    f.subject = "skillset";
    f.state = 0;
    f.path = Path{{0}, {}};
    f.message = "the skillset has no skills, so no skill can ever run";
    result.findings.push_back(std::move(f));
  } else {
    detail::report_unreachable_goal(
        g,
        [&](std::size_t s) {
          for (auto p : running)
            if (g.marking(s).test(p)) return true;
          return false;
        },
        "skillset", "any running skill place", result);
  }
  detail::finish(result, watch);
  return result;
}

// States that violate AG EF i_s, ascending.
inline std::vector<std::size_t> deadskill_violations(const Skillset& ss, const PetriNet& net,
                                                     const ReachabilityGraph& g, const std::string& skill) {
  const auto k = ss.skill_index(skill);
  if (!k) throw UnknownSkill(skill);
  const auto place = detail::running_place(net, *k).value();
  const auto can_reach = backward_reachable(g, [&](std::size_t s) { return g.marking(s).test(place); });
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < g.state_count(); ++s)
    if (!can_reach[s]) out.push_back(s);
  return out;
}

}  // namespace skinet
