#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "skinet/guard.hpp"
#include "skinet/petri.hpp"
#include "skinet/skillset.hpp"

namespace skinet {

enum class TransitionKind { Event, Start, PreFail, InvFail, Success, Failure, Interrupt, Reset };

// Identifies the skillset element a net transition comes from.
struct TransitionLabel {
  TransitionKind kind = TransitionKind::Event;
  std::string owner;      // event or skill name
  std::string component;  // precondition/invariant/terminator name, or the mode id of a reset

  // Net transition name before any expansion index is appended.
  std::string base_name() const {
    switch (kind) {
      case TransitionKind::Event: return "t_event_" + owner;
      case TransitionKind::Start: return "t_start_" + owner;
      case TransitionKind::PreFail: return "t_" + owner + "_pre_fail_" + component;
      case TransitionKind::InvFail: return "t_" + owner + "_inv_fail_" + component;
      case TransitionKind::Success: return "t_" + owner + "_success_" + component;
      case TransitionKind::Failure: return "t_" + owner + "_failure_" + component;
      case TransitionKind::Interrupt: return "t_" + owner + "_interrupt";
      case TransitionKind::Reset: return "t_" + owner + "_reset_" + component;
    }
    return {};
  }

  std::string describe() const {
    switch (kind) {
      case TransitionKind::Event: return "event " + owner;
      case TransitionKind::Start: return "skill " + owner + ", start";
      case TransitionKind::PreFail: return "skill " + owner + ", precondition " + component + " failure";
      case TransitionKind::InvFail: return "skill " + owner + ", invariant " + component + " failure";
      case TransitionKind::Success: return "skill " + owner + ", success " + component;
      case TransitionKind::Failure: return "skill " + owner + ", failure " + component;
      case TransitionKind::Interrupt: return "skill " + owner + ", interrupt";
      case TransitionKind::Reset: return "skill " + owner + ", reset after " + component;
    }
    return {};
  }

  friend bool operator==(const TransitionLabel&, const TransitionLabel&) = default;
  friend auto operator<=>(const TransitionLabel& a, const TransitionLabel& b) {
    return std::tie(a.kind, a.owner, a.component) <=> std::tie(b.kind, b.owner, b.component);
  }
};

struct SkillsetTransition {
  TransitionLabel label;
  Guard guard;
  EffectSet effects;
  // (from, to) skill places; absent for events.
  std::optional<std::pair<PlaceRole, PlaceRole>> state_change;
  PriorityClass priority = PriorityClass::Normal;
};

struct BuildOptions {
  bool include_events = true;
  bool keep_exit_places = true;
  // Also drop solutions whose guarded origin -> effect destination move is
  // not declared in the resource machine.
  bool strict_resource_moves = false;

  friend bool operator==(const BuildOptions&, const BuildOptions&) = default;
};

// One net transition produced by expanding a skillset transition, with its
// arcs still expressed as place roles.
struct ExpandedTransition {
  std::string name;
  TransitionLabel origin;
  std::vector<PlaceRole> inputs;
  std::vector<PlaceRole> outputs;
  PriorityClass priority = PriorityClass::Normal;
};

struct TransitionOrigin {
  TransitionLabel label;
  // Structurally identical transitions merged into this one.
  std::vector<TransitionLabel> alias_labels;
  std::vector<std::string> alias_names;
};

struct BuildReport {
  std::size_t place_count = 0;
  std::size_t transition_count = 0;
  std::size_t reset_count = 0;
  std::vector<std::pair<std::string, std::size_t>> per_origin;  // base name -> transitions kept
  std::vector<std::pair<std::string, std::string>> aliases;     // kept name, dropped name
  std::vector<std::string> warnings;
};

struct SkillNet {
  PetriNet net;
  BuildOptions options;
  std::vector<TransitionOrigin> origins;  // indexed by transition id
  BuildReport report;
};

inline std::string place_name(const PlaceRole& role, const Skillset& ss) {
  switch (role.kind) {
    case PlaceRole::Kind::ResourceState: {
      const auto& r = ss.resources.at(role.owner);
      return r.name + "_" + r.states.at(role.state);
    }
    case PlaceRole::Kind::SkillEntry: return "e_" + ss.skills.at(role.owner).name;
    case PlaceRole::Kind::SkillRunning: return "i_" + ss.skills.at(role.owner).name;
    case PlaceRole::Kind::SkillExit: return "x_" + ss.skills.at(role.owner).name + "_" + role.mode;
    case PlaceRole::Kind::None: break;
  }
  return {};
}

inline std::vector<SkillsetTransition> lower_skillset(const Skillset& ss) {
  std::vector<SkillsetTransition> out;
  for (const auto& ev : ss.events)
    out.push_back({{TransitionKind::Event, ev.name, {}}, ev.guard, ev.effects, std::nullopt, PriorityClass::Normal});

  for (std::size_t k = 0; k < ss.skills.size(); ++k) {
    const Skill& sk = ss.skills[k];
    const auto entry = PlaceRole::skill_entry(k);
    const auto running = PlaceRole::skill_running(k);
    auto exit = [k](TerminationKind kind, const std::string& name) {
      return PlaceRole::skill_exit(k, TerminationMode{kind, name}.id());
    };

    std::vector<Guard> pre, inv;
    for (const auto& p : sk.preconditions) pre.push_back(p.guard);
    for (const auto& i : sk.invariants) inv.push_back(i.guard);
    const Guard all_pre = Guard::all_of(pre);
    const Guard all_inv = Guard::all_of(inv);

    out.push_back({{TransitionKind::Start, sk.name, {}}, all_pre, sk.start_effects,
                   std::pair{entry, running}, PriorityClass::Normal});
    for (const auto& p : sk.preconditions)
      out.push_back({{TransitionKind::PreFail, sk.name, p.name}, Guard::negate(p.guard), p.failure_effects,
                     std::pair{entry, exit(TerminationKind::PreFail, p.name)}, PriorityClass::Normal});
    for (const auto& i : sk.invariants)
      out.push_back({{TransitionKind::InvFail, sk.name, i.name}, Guard::negate(i.guard), i.failure_effects,
                     std::pair{running, exit(TerminationKind::InvFail, i.name)},
                     PriorityClass::InvariantFailure});
    for (const auto& t : sk.successes)
      out.push_back({{TransitionKind::Success, sk.name, t.name}, all_inv, t.effects,
                     std::pair{running, exit(TerminationKind::Success, t.name)}, PriorityClass::Normal});
    for (const auto& t : sk.failures)
      out.push_back({{TransitionKind::Failure, sk.name, t.name}, all_inv, t.effects,
                     std::pair{running, exit(TerminationKind::Failure, t.name)}, PriorityClass::Normal});
    if (const EffectSet* eff = sk.interrupt())
      out.push_back({{TransitionKind::Interrupt, sk.name, {}}, all_inv, *eff,
                     std::pair{running, exit(TerminationKind::Interrupt, {})}, PriorityClass::Normal});
  }
  return out;
}

// Expands one skillset transition into net transitions: one per guard
// solution, multiplied by the possible origins of every unguarded affected
// resource. Guarded resources without an effect get their token back.
inline std::vector<ExpandedTransition> expand_transition(const SkillsetTransition& tau, const Skillset& ss,
                                                         const BuildOptions& options) {
  const auto guarded = involved_resources_in_order(tau.guard);
  const std::set<std::string> guarded_set(guarded.begin(), guarded.end());
  std::set<std::string> affected;
  for (const auto& e : tau.effects) affected.insert(e.resource);

  auto resource_of = [&ss](const std::string& name) -> std::size_t { return ss.resource_index(name).value(); };
  auto state_of = [&ss](std::size_t r, const std::string& s) -> std::size_t {
    return ss.resources[r].state_index(s).value();
  };

  struct Unguarded {
    std::size_t resource;
    std::vector<std::size_t> origins;
  };
  std::vector<Unguarded> unguarded;
  for (const auto& e : tau.effects) {
    if (guarded_set.count(e.resource)) continue;
    const std::size_t r = resource_of(e.resource);
    unguarded.push_back({r, ss.resources[r].predecessors(state_of(r, e.state))});
  }

  std::optional<std::pair<PlaceRole, PlaceRole>> sigma = tau.state_change;
  if (sigma && !options.keep_exit_places && sigma->second.kind == PlaceRole::Kind::SkillExit)
    sigma->second = PlaceRole::skill_entry(sigma->second.owner);

  std::vector<ExpandedTransition> out;
  for (const Assignment& x : solutions(tau.guard, ss).assignments) {
    if (options.strict_resource_moves) {
      bool legal = true;
      for (const auto& e : tau.effects) {
        if (!guarded_set.count(e.resource)) continue;
        const std::size_t r = resource_of(e.resource);
        if (!ss.resources[r].allows_move(state_of(r, x.at(e.resource)), state_of(r, e.state))) legal = false;
      }
      if (!legal) continue;
    }

    std::vector<std::size_t> digit(unguarded.size(), 0);
    for (;;) {
      ExpandedTransition t;
      t.origin = tau.label;
      t.priority = tau.priority;
      for (const auto& name : guarded) {
        const std::size_t r = resource_of(name);
        t.inputs.push_back(PlaceRole::resource_state(r, state_of(r, x.at(name))));
      }
      for (std::size_t u = 0; u < unguarded.size(); ++u)
        t.inputs.push_back(PlaceRole::resource_state(unguarded[u].resource, unguarded[u].origins[digit[u]]));
      if (sigma) t.inputs.push_back(sigma->first);

      for (const auto& name : guarded) {
        if (affected.count(name)) continue;
        const std::size_t r = resource_of(name);
        t.outputs.push_back(PlaceRole::resource_state(r, state_of(r, x.at(name))));
      }
      for (const auto& e : tau.effects) {
        const std::size_t r = resource_of(e.resource);
        t.outputs.push_back(PlaceRole::resource_state(r, state_of(r, e.state)));
      }
      if (sigma) t.outputs.push_back(sigma->second);
      out.push_back(std::move(t));

      std::size_t k = unguarded.size();
      bool done = true;
      while (k > 0) {
        --k;
        if (++digit[k] < unguarded[k].origins.size()) {
          done = false;
          break;
        }
        digit[k] = 0;
      }
      if (done) break;
    }
  }

  const std::string base = tau.label.base_name();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i].name = out.size() == 1 ? base : base + "_" + std::to_string(i);
  return out;
}

inline SkillNet build_net(const Skillset& ss, const BuildOptions& options = {}) {
  SkillNet result{PetriNet(ss.name), options, {}, {}};
  PetriNet& net = result.net;
  BuildReport& report = result.report;

  for (std::size_t r = 0; r < ss.resources.size(); ++r)
    for (std::size_t s = 0; s < ss.resources[r].states.size(); ++s) {
      const auto role = PlaceRole::resource_state(r, s);
      net.add_place(place_name(role, ss), role, s == ss.resources[r].initial);
    }
  for (std::size_t k = 0; k < ss.skills.size(); ++k) {
    net.add_place(place_name(PlaceRole::skill_entry(k), ss), PlaceRole::skill_entry(k), true);
    net.add_place(place_name(PlaceRole::skill_running(k), ss), PlaceRole::skill_running(k));
    if (options.keep_exit_places)
      for (const auto& mode : termination_modes(ss.skills[k])) {
        const auto role = PlaceRole::skill_exit(k, mode.id());
        net.add_place(place_name(role, ss), role);
      }
  }

  auto ids = [&](const std::vector<PlaceRole>& roles) {
    std::vector<std::size_t> out;
    for (const auto& role : roles) out.push_back(net.place_id(place_name(role, ss)).value());
    return out;
  };

  using Key = std::tuple<std::vector<std::size_t>, std::vector<std::size_t>, PriorityClass>;
  std::map<Key, std::size_t> structural;

  auto add = [&](const ExpandedTransition& et) {
    auto in = ids(et.inputs);
    auto out = ids(et.outputs);
    auto sorted_in = in, sorted_out = out;
    std::sort(sorted_in.begin(), sorted_in.end());
    std::sort(sorted_out.begin(), sorted_out.end());
    Key key{sorted_in, sorted_out, et.priority};
    if (auto it = structural.find(key); it != structural.end()) {
      auto& origin = result.origins[it->second];
      origin.alias_labels.push_back(et.origin);
      origin.alias_names.push_back(et.name);
      report.aliases.emplace_back(net.transition(it->second).name, et.name);
      return false;
    }
    if (in.empty() && out.empty())
      report.warnings.push_back(et.name + ": touches no place (no-op transition)");
    const auto id = net.add_transition(et.name, std::move(in), std::move(out), et.priority);
    structural.emplace(std::move(key), id);
    result.origins.push_back({et.origin, {}, {}});
    return true;
  };

  for (const auto& tau : lower_skillset(ss)) {
    if (tau.label.kind == TransitionKind::Event && !options.include_events) continue;
    const auto expanded = expand_transition(tau, ss, options);
    if (expanded.empty())
      report.warnings.push_back(tau.label.base_name() + ": guard has no usable solution; no transition generated");
    std::size_t kept = 0;
    for (const auto& et : expanded) kept += add(et) ? 1 : 0;
    report.per_origin.emplace_back(tau.label.base_name(), kept);
  }

  if (options.keep_exit_places) {
    for (std::size_t k = 0; k < ss.skills.size(); ++k) {
      for (const auto& mode : termination_modes(ss.skills[k])) {
        ExpandedTransition reset;
        reset.origin = {TransitionKind::Reset, ss.skills[k].name, mode.id()};
        reset.name = reset.origin.base_name();
        reset.inputs = {PlaceRole::skill_exit(k, mode.id())};
        reset.outputs = {PlaceRole::skill_entry(k)};
        add(reset);
        ++report.reset_count;
      }
    }
  }

  report.place_count = net.place_count();
  report.transition_count = net.transition_count();
  return result;
}

}  // namespace skinet
