#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "skinet/guard.hpp"
#include "skinet/net_builder.hpp"
#include "skinet/skillset.hpp"
#include "skinet/state_space.hpp"

// Direct interpreter of skillset execution, independent of the net
// translation. Used to cross-check the generated net state by state.
namespace skinet {

struct SkillStatus {
  enum class Phase { Idle, Running, Terminated };
  Phase phase = Phase::Idle;
  std::string mode;  // termination mode id when Terminated

  friend bool operator==(const SkillStatus&, const SkillStatus&) = default;
};

struct Configuration {
  std::vector<std::size_t> resources;  // current state index per resource
  std::vector<SkillStatus> skills;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::size_t v) { h = (h ^ v) * 0x100000001b3ULL; };
    for (auto r : c.resources) mix(r);
    for (const auto& s : c.skills) {
      mix(static_cast<std::size_t>(s.phase));
      mix(std::hash<std::string>{}(s.mode));
    }
    return h;
  }
};

inline Configuration initial_configuration(const Skillset& ss) {
  Configuration c;
  for (const auto& r : ss.resources) c.resources.push_back(r.initial);
  c.skills.assign(ss.skills.size(), SkillStatus{});
  return c;
}

inline std::string to_string(const Configuration& c, const Skillset& ss) {
  std::string out = "{";
  for (std::size_t r = 0; r < c.resources.size(); ++r)
    out += (r ? ", " : "") + ss.resources[r].name + "=" + ss.resources[r].states[c.resources[r]];
  for (std::size_t k = 0; k < c.skills.size(); ++k) {
    out += (c.resources.empty() && k == 0 ? "" : ", ") + ss.skills[k].name + "=";
    switch (c.skills[k].phase) {
      case SkillStatus::Phase::Idle: out += "idle"; break;
      case SkillStatus::Phase::Running: out += "running"; break;
      case SkillStatus::Phase::Terminated: out += "terminated(" + c.skills[k].mode + ")"; break;
    }
  }
  return out + "}";
}

struct Step {
  TransitionLabel label;
  Configuration target;
};

class SkillsetInterpreter {
 public:
  SkillsetInterpreter(const Skillset& ss, BuildOptions options) : ss_(&ss), options_(options) {
    for (const auto& ev : ss.events) events_.push_back(compile_action(ev.guard, ev.effects));
    for (const auto& sk : ss.skills) {
      CompiledSkill cs;
      std::vector<Guard> pre, inv;
      for (const auto& p : sk.preconditions) {
        cs.preconditions.push_back(CompiledGuard(p.guard, ss));
        cs.pre_failures.push_back(compile_action(p.guard, p.failure_effects));
        pre.push_back(p.guard);
      }
      for (const auto& i : sk.invariants) {
        cs.invariants.push_back(CompiledGuard(i.guard, ss));
        cs.inv_failures.push_back(compile_action(i.guard, i.failure_effects));
        inv.push_back(i.guard);
      }
      cs.start = compile_action(Guard::all_of(pre), sk.start_effects);
      const Guard all_inv = Guard::all_of(inv);
      for (const auto& t : sk.successes) cs.terminators.push_back({{TerminationKind::Success, t.name}, compile_action(all_inv, t.effects)});
      for (const auto& t : sk.failures) cs.terminators.push_back({{TerminationKind::Failure, t.name}, compile_action(all_inv, t.effects)});
      if (const EffectSet* eff = sk.interrupt())
        cs.terminators.push_back({{TerminationKind::Interrupt, {}}, compile_action(all_inv, *eff)});
      skills_.push_back(std::move(cs));
    }
  }

  const BuildOptions& options() const { return options_; }

  // If a running skill has a violated invariant whose failure step can be
  // taken, only such steps are returned.
  std::vector<Step> successors(const Configuration& c) const {
    std::vector<Step> out;
    for (std::size_t k = 0; k < skills_.size(); ++k) {
      if (c.skills[k].phase != SkillStatus::Phase::Running) continue;
      const Skill& sk = ss_->skills[k];
      for (std::size_t i = 0; i < sk.invariants.size(); ++i) {
        if (skills_[k].invariants[i](c.resources)) continue;
        if (!moves_allowed(skills_[k].inv_failures[i], c)) continue;
        out.push_back({{TransitionKind::InvFail, sk.name, sk.invariants[i].name},
                       terminate(apply(skills_[k].inv_failures[i], c), k, {TerminationKind::InvFail, sk.invariants[i].name})});
      }
    }
    if (!out.empty()) return out;

    if (options_.include_events)
      for (std::size_t v = 0; v < events_.size(); ++v)
        if (events_[v].guard(c.resources) && moves_allowed(events_[v], c))
          out.push_back({{TransitionKind::Event, ss_->events[v].name, {}}, apply(events_[v], c)});

    for (std::size_t k = 0; k < skills_.size(); ++k) {
      const Skill& sk = ss_->skills[k];
      const CompiledSkill& cs = skills_[k];
      switch (c.skills[k].phase) {
        case SkillStatus::Phase::Idle: {
          if (cs.start.guard(c.resources) && moves_allowed(cs.start, c)) {
            Configuration next = apply(cs.start, c);
            next.skills[k] = {SkillStatus::Phase::Running, {}};
            out.push_back({{TransitionKind::Start, sk.name, {}}, std::move(next)});
          }
          for (std::size_t i = 0; i < sk.preconditions.size(); ++i) {
            if (cs.preconditions[i](c.resources)) continue;
            if (!moves_allowed(cs.pre_failures[i], c)) continue;
            out.push_back({{TransitionKind::PreFail, sk.name, sk.preconditions[i].name},
                           terminate(apply(cs.pre_failures[i], c), k, {TerminationKind::PreFail, sk.preconditions[i].name})});
          }
          break;
        }
        case SkillStatus::Phase::Running: {
          for (const auto& [mode, action] : cs.terminators) {
            if (!action.guard(c.resources) || !moves_allowed(action, c)) continue;
            const auto kind = mode.kind == TerminationKind::Success   ? TransitionKind::Success
                              : mode.kind == TerminationKind::Failure ? TransitionKind::Failure
                                                                      : TransitionKind::Interrupt;
            out.push_back({{kind, sk.name, mode.name}, terminate(apply(action, c), k, mode)});
          }
          break;
        }
        case SkillStatus::Phase::Terminated: {
          Configuration next = c;
          next.skills[k] = {SkillStatus::Phase::Idle, {}};
          out.push_back({{TransitionKind::Reset, sk.name, c.skills[k].mode}, std::move(next)});
          break;
        }
      }
    }
    return out;
  }

 private:
  struct Action {
    CompiledGuard guard;
    std::vector<bool> guarded;  // per resource: mentioned by the guard
    std::vector<std::pair<std::size_t, std::size_t>> effects;
  };

  struct CompiledSkill {
    std::vector<CompiledGuard> preconditions;
    std::vector<Action> pre_failures;  // guard field holds the precondition itself
    std::vector<CompiledGuard> invariants;
    std::vector<Action> inv_failures;  // guard field holds the invariant itself
    Action start;
    std::vector<std::pair<TerminationMode, Action>> terminators;
  };

  Action compile_action(const Guard& guard, const EffectSet& effects) const {
    Action a;
    a.guard = CompiledGuard(guard, *ss_);
    a.guarded.assign(ss_->resources.size(), false);
    for (const auto& name : involved_resources(guard)) a.guarded[ss_->resource_index(name).value()] = true;
    for (const auto& e : effects) {
      const auto r = ss_->resource_index(e.resource).value();
      a.effects.emplace_back(r, ss_->resources[r].state_index(e.state).value());
    }
    return a;
  }

  // A resource can only follow its own machine (self moves included). A
  // guarded resource is exempt unless strict moves are requested: its origin
  // is pinned by the guard and taken as given.
  bool moves_allowed(const Action& a, const Configuration& c) const {
    for (const auto& [r, to] : a.effects) {
      const auto from = c.resources[r];
      if (ss_->resources[r].allows_move(from, to)) continue;
      if (a.guarded[r] && !options_.strict_resource_moves) continue;
      return false;
    }
    return true;
  }

  static Configuration apply(const Action& a, const Configuration& c) {
    Configuration next = c;
    for (const auto& [r, to] : a.effects) next.resources[r] = to;
    return next;
  }

  Configuration terminate(Configuration c, std::size_t k, const TerminationMode& mode) const {
    if (options_.keep_exit_places)
      c.skills[k] = {SkillStatus::Phase::Terminated, mode.id()};
    else
      c.skills[k] = {SkillStatus::Phase::Idle, {}};
    return c;
  }

  const Skillset* ss_;
  BuildOptions options_;
  std::vector<Action> events_;
  std::vector<CompiledSkill> skills_;
};

inline std::vector<Step> successors(const Skillset& ss, const Configuration& c, const BuildOptions& options = {}) {
  return SkillsetInterpreter(ss, options).successors(c);
}

struct LabeledTransitionSystem {
  struct Edge {
    std::size_t source;
    TransitionLabel label;
    std::size_t target;
  };

  BuildOptions options;
  std::vector<Configuration> states;
  std::vector<Edge> edges;  // grouped by source, ascending
  std::unordered_map<Configuration, std::size_t, ConfigurationHash> index;
};

inline LabeledTransitionSystem explore_direct(const Skillset& ss, const BuildOptions& options = {},
                                              std::size_t limit = 1'000'000) {
  const SkillsetInterpreter interp(ss, options);
  LabeledTransitionSystem lts;
  lts.options = options;
  auto intern = [&](const Configuration& c) {
    auto [it, inserted] = lts.index.try_emplace(c, lts.states.size());
    if (inserted) {
      if (lts.states.size() >= limit) throw StateLimitExceeded(limit);
      lts.states.push_back(c);
    }
    return it->second;
  };
  intern(initial_configuration(ss));
  for (std::size_t s = 0; s < lts.states.size(); ++s) {
    const Configuration current = lts.states[s];
    for (auto& step : interp.successors(current)) {
      const auto target = intern(step.target);
      lts.edges.push_back({s, std::move(step.label), target});
    }
  }
  return lts;
}

struct OptionMismatch : std::invalid_argument {
  OptionMismatch() : std::invalid_argument("direct exploration and net were built with different options") {}
};

// Reads a marking back as a configuration. Fails when some resource or skill
// does not hold exactly one token.
inline std::optional<Configuration> decode(const PetriNet& net, const Marking& m, const Skillset& ss) {
  Configuration c;
  c.resources.assign(ss.resources.size(), 0);
  c.skills.assign(ss.skills.size(), SkillStatus{});
  std::vector<int> resource_tokens(ss.resources.size(), 0), skill_tokens(ss.skills.size(), 0);
  for (auto p : m.marked()) {
    const auto& role = net.place(p).role;
    switch (role.kind) {
      case PlaceRole::Kind::ResourceState:
        c.resources[role.owner] = role.state;
        ++resource_tokens[role.owner];
        break;
      case PlaceRole::Kind::SkillEntry:
        c.skills[role.owner] = {SkillStatus::Phase::Idle, {}};
        ++skill_tokens[role.owner];
        break;
      case PlaceRole::Kind::SkillRunning:
        c.skills[role.owner] = {SkillStatus::Phase::Running, {}};
        ++skill_tokens[role.owner];
        break;
      case PlaceRole::Kind::SkillExit:
        c.skills[role.owner] = {SkillStatus::Phase::Terminated, role.mode};
        ++skill_tokens[role.owner];
        break;
      case PlaceRole::Kind::None:
        return std::nullopt;
    }
  }
  for (auto n : resource_tokens)
    if (n != 1) return std::nullopt;
  for (auto n : skill_tokens)
    if (n != 1) return std::nullopt;
  return c;
}

struct EquivalenceResult {
  bool equivalent = true;
  std::string mismatch;                   // first mismatch, human readable
  std::optional<std::size_t> net_state;   // where it was found, if tied to a net state
  std::optional<std::size_t> direct_state;
  std::size_t states_compared = 0;
  std::size_t edges_compared = 0;
};

// Checks that decoding markings is a bijection between the net graph and the
// direct exploration, and that outgoing steps agree state by state. A net
// edge stands for its transition's origin and every merged alias.
inline EquivalenceResult check_equivalence(const LabeledTransitionSystem& lts, const ReachabilityGraph& graph,
                                           const SkillNet& sn, const Skillset& ss) {
  if (!(lts.options == sn.options)) throw OptionMismatch();
  EquivalenceResult result;
  auto fail = [&](std::string why, std::optional<std::size_t> net_state, std::optional<std::size_t> direct) {
    result.equivalent = false;
    result.mismatch = std::move(why);
    result.net_state = net_state;
    result.direct_state = direct;
    return result;
  };

  std::vector<std::size_t> first_out(lts.states.size() + 1, 0);
  for (const auto& e : lts.edges) ++first_out[e.source + 1];
  for (std::size_t s = 0; s < lts.states.size(); ++s) first_out[s + 1] += first_out[s];

  auto counterpart = [&](std::size_t net_state) -> std::optional<std::size_t> {
    const auto c = decode(sn.net, graph.marking(net_state), ss);
    if (!c) return std::nullopt;
    auto it = lts.index.find(*c);
    if (it == lts.index.end()) return std::nullopt;
    return it->second;
  };

  std::vector<bool> covered(lts.states.size(), false);
  for (std::size_t s = 0; s < graph.state_count(); ++s) {
    const auto d = counterpart(s);
    if (!d) {
      const auto c = decode(sn.net, graph.marking(s), ss);
      return fail(c ? "net state " + std::to_string(s) + " " + to_string(*c, ss) + " is not reachable by direct execution"
                    : "net state " + std::to_string(s) + " is not a valid configuration",
                  s, std::nullopt);
    }
    if (covered[*d]) return fail("two net states map to configuration " + to_string(lts.states[*d], ss), s, *d);
    covered[*d] = true;

    using Item = std::pair<TransitionLabel, std::size_t>;
    std::vector<Item> net_steps, direct_steps;
    for (const auto& e : graph.out_edges(s)) {
      const auto target = counterpart(e.target);
      if (!target)
        return fail("net edge " + sn.net.transition(e.transition).name + " from state " + std::to_string(s) +
                        " leads outside the direct state space",
                    s, *d);
      const auto& origin = sn.origins.at(e.transition);
      net_steps.emplace_back(origin.label, *target);
      for (const auto& alias : origin.alias_labels) net_steps.emplace_back(alias, *target);
    }
    for (std::size_t i = first_out[*d]; i < first_out[*d + 1]; ++i)
      direct_steps.emplace_back(lts.edges[i].label, lts.edges[i].target);
    std::sort(net_steps.begin(), net_steps.end());
    std::sort(direct_steps.begin(), direct_steps.end());
    result.edges_compared += direct_steps.size();
    if (net_steps != direct_steps) {
      std::vector<Item> missing, extra;
      std::set_difference(direct_steps.begin(), direct_steps.end(), net_steps.begin(), net_steps.end(),
                          std::back_inserter(missing));
      std::set_difference(net_steps.begin(), net_steps.end(), direct_steps.begin(), direct_steps.end(),
                          std::back_inserter(extra));
      std::string why = "steps differ at net state " + std::to_string(s) + " " + to_string(lts.states[*d], ss);
      if (!missing.empty()) why += "; missing in net: " + missing.front().first.describe();
      if (!extra.empty()) why += "; only in net: " + extra.front().first.describe();
      return fail(std::move(why), s, *d);
    }
    ++result.states_compared;
  }
  for (std::size_t d = 0; d < lts.states.size(); ++d)
    if (!covered[d])
      return fail("configuration " + to_string(lts.states[d], ss) + " has no net counterpart", std::nullopt, d);
  return result;
}

}  // namespace skinet
