#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace skinet {

// Boolean formula over `resource == state` atoms. An empty And is never
// stored: all_of() folds it to True.
struct Guard {
  enum class Kind { True, Atom, Not, And, Or };

  Kind kind = Kind::True;
  std::string resource;
  std::string state;
  std::vector<Guard> operands;

  static Guard truth() { return Guard{}; }

  static Guard atom(std::string resource, std::string state) {
    Guard g;
    g.kind = Kind::Atom;
    g.resource = std::move(resource);
    g.state = std::move(state);
    return g;
  }

  static Guard negate(Guard inner) {
    Guard g;
    g.kind = Kind::Not;
    g.operands.push_back(std::move(inner));
    return g;
  }

  static Guard all_of(std::vector<Guard> parts) { return fold(Kind::And, std::move(parts)); }
  static Guard any_of(std::vector<Guard> parts) { return fold(Kind::Or, std::move(parts)); }

  bool is_true() const { return kind == Kind::True; }

  friend bool operator==(const Guard&, const Guard&) = default;

 private:
  static Guard fold(Kind kind, std::vector<Guard> parts) {
    if (parts.empty()) return truth();
    if (parts.size() == 1) return std::move(parts.front());
    Guard g;
    g.kind = kind;
    g.operands = std::move(parts);
    return g;
  }
};

struct Effect {
  std::string resource;
  std::string state;  // destination; the origin is never named
  friend bool operator==(const Effect&, const Effect&) = default;
};

// Declaration order is kept; validate() rejects two entries on one resource.
using EffectSet = std::vector<Effect>;

struct Resource {
  std::string name;
  std::vector<std::string> states;
  std::size_t initial = 0;
  std::vector<std::pair<std::size_t, std::size_t>> transitions;

  std::optional<std::size_t> state_index(const std::string& state) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == state) return i;
    return std::nullopt;
  }

  // Self moves are always valid, declared or not.
  bool allows_move(std::size_t from, std::size_t to) const {
    if (from == to) return true;
    for (const auto& [a, b] : transitions)
      if (a == from && b == to) return true;
    return false;
  }

  // Origins that can lead to `to`: declared predecessors in declaration
  // order, then `to` itself if no explicit self transition was declared.
  std::vector<std::size_t> predecessors(std::size_t to) const {
    std::vector<std::size_t> out;
    for (const auto& [a, b] : transitions)
      if (b == to && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    if (std::find(out.begin(), out.end(), to) == out.end()) out.push_back(to);
    return out;
  }

  friend bool operator==(const Resource&, const Resource&) = default;
};

struct Event {
  std::string name;
  Guard guard;
  EffectSet effects;
  friend bool operator==(const Event&, const Event&) = default;
};

// A precondition or invariant: a named guard plus the effects applied when
// it is found violated.
struct NamedGuard {
  std::string name;
  Guard guard;
  EffectSet failure_effects;
  friend bool operator==(const NamedGuard&, const NamedGuard&) = default;
};

struct Terminator {
  std::string name;
  EffectSet effects;
  friend bool operator==(const Terminator&, const Terminator&) = default;
};

struct Skill {
  std::string name;
  std::vector<NamedGuard> preconditions;
  EffectSet start_effects;
  std::vector<NamedGuard> invariants;
  std::vector<Terminator> successes;
  std::vector<Terminator> failures;
  // Kept as a list so that validate() can report duplicates; a valid skill
  // has at most one entry.
  std::vector<EffectSet> interrupts;

  const EffectSet* interrupt() const { return interrupts.empty() ? nullptr : &interrupts.front(); }

  friend bool operator==(const Skill&, const Skill&) = default;
};

struct Skillset {
  std::string name;
  std::vector<Resource> resources;
  std::vector<Event> events;
  std::vector<Skill> skills;

  std::optional<std::size_t> resource_index(const std::string& name) const {
    for (std::size_t i = 0; i < resources.size(); ++i)
      if (resources[i].name == name) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> skill_index(const std::string& name) const {
    for (std::size_t i = 0; i < skills.size(); ++i)
      if (skills[i].name == name) return i;
    return std::nullopt;
  }

  friend bool operator==(const Skillset&, const Skillset&) = default;
};

// ---------------------------------------------------------------------------
// Termination modes

enum class TerminationKind { PreFail, InvFail, Success, Failure, Interrupt };

struct TerminationMode {
  TerminationKind kind;
  std::string name;  // component name; empty for Interrupt

  // "pre_fail_canmove", "success_is_arrived", "interrupt", ...
  std::string id() const {
    switch (kind) {
      case TerminationKind::PreFail: return "pre_fail_" + name;
      case TerminationKind::InvFail: return "inv_fail_" + name;
      case TerminationKind::Success: return "success_" + name;
      case TerminationKind::Failure: return "failure_" + name;
      case TerminationKind::Interrupt: return "interrupt";
    }
    return {};
  }

  friend bool operator==(const TerminationMode&, const TerminationMode&) = default;
};

// All ways a skill can end, in canonical order: precondition failures,
// invariant failures, successes, failures, interrupt.
inline std::vector<TerminationMode> termination_modes(const Skill& skill) {
  std::vector<TerminationMode> modes;
  for (const auto& p : skill.preconditions) modes.push_back({TerminationKind::PreFail, p.name});
  for (const auto& i : skill.invariants) modes.push_back({TerminationKind::InvFail, i.name});
  for (const auto& s : skill.successes) modes.push_back({TerminationKind::Success, s.name});
  for (const auto& f : skill.failures) modes.push_back({TerminationKind::Failure, f.name});
  if (skill.interrupt()) modes.push_back({TerminationKind::Interrupt, {}});
  return modes;
}

// ---------------------------------------------------------------------------
// Pretty printing (re-parses to an equal Skillset)

namespace detail {

inline void print_guard(std::ostream& os, const Guard& g, bool nested) {
  switch (g.kind) {
    case Guard::Kind::True:
      os << "true";
      return;
    case Guard::Kind::Atom:
      os << g.resource << " == " << g.state;
      return;
    case Guard::Kind::Not:
      os << "not (";
      print_guard(os, g.operands.front(), false);
      os << ")";
      return;
    case Guard::Kind::And:
    case Guard::Kind::Or: {
      const char* op = g.kind == Guard::Kind::And ? " and " : " or ";
      if (nested) os << "(";
      for (std::size_t i = 0; i < g.operands.size(); ++i) {
        if (i) os << op;
        print_guard(os, g.operands[i], true);
      }
      if (nested) os << ")";
      return;
    }
  }
}

inline void print_effects(std::ostream& os, const EffectSet& effects, const std::string& indent) {
  if (effects.size() == 1) {
    os << effects.front().resource << " -> " << effects.front().state << "\n";
    return;
  }
  os << "{\n";
  for (const auto& e : effects) os << indent << "  " << e.resource << " -> " << e.state << "\n";
  os << indent << "}\n";
}

inline void print_named_guards(std::ostream& os, const char* keyword,
                               const std::vector<NamedGuard>& guards) {
  if (guards.empty()) return;
  os << "    " << keyword << " {\n";
  for (const auto& ng : guards) {
    os << "      " << ng.name << " {\n        guard ";
    print_guard(os, ng.guard, false);
    os << "\n";
    if (!ng.failure_effects.empty()) {
      os << "        effect ";
      print_effects(os, ng.failure_effects, "        ");
    }
    os << "      }\n";
  }
  os << "    }\n";
}

}  // namespace detail

inline std::string to_string(const Guard& g) {
  std::ostringstream os;
  detail::print_guard(os, g, false);
  return os.str();
}

inline std::string to_text(const Skillset& ss) {
  std::ostringstream os;
  os << "skillset " << ss.name << " {\n";
  if (!ss.resources.empty()) {
    os << "  resource {\n";
    for (const auto& r : ss.resources) {
      os << "    " << r.name << " {\n      initial " << r.states.at(r.initial) << "\n";
      for (const auto& [a, b] : r.transitions)
        os << "      " << r.states.at(a) << " -> " << r.states.at(b) << "\n";
      os << "    }\n";
    }
    os << "  }\n";
  }
  if (!ss.events.empty()) {
    os << "  event {\n";
    for (const auto& ev : ss.events) {
      os << "    " << ev.name << " {\n";
      if (!ev.guard.is_true()) {
        os << "      guard ";
        detail::print_guard(os, ev.guard, false);
        os << "\n";
      }
      if (!ev.effects.empty()) {
        os << "      ";
        detail::print_effects(os, ev.effects, "      ");
      }
      os << "    }\n";
    }
    os << "  }\n";
  }
  for (const auto& sk : ss.skills) {
    os << "  skill " << sk.name << " {\n";
    detail::print_named_guards(os, "precondition", sk.preconditions);
    if (!sk.start_effects.empty()) {
      os << "    start ";
      detail::print_effects(os, sk.start_effects, "    ");
    }
    detail::print_named_guards(os, "invariant", sk.invariants);
    for (const auto& eff : sk.interrupts) {
      os << "    interrupt ";
      detail::print_effects(os, eff, "    ");
    }
    for (const auto& t : sk.successes) {
      os << "    success " << t.name << " ";
      detail::print_effects(os, t.effects, "    ");
    }
    for (const auto& t : sk.failures) {
      os << "    failure " << t.name << " ";
      detail::print_effects(os, t.effects, "    ");
    }
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

namespace detail {

inline void check_guard(const Skillset& ss, const Guard& g, const std::string& where,
                        ValidationReport& report) {
  if (g.kind == Guard::Kind::Atom) {
    auto r = ss.resource_index(g.resource);
    if (!r) {
      report.errors.push_back(where + ": guard references undeclared resource '" + g.resource + "'");
    } else if (!ss.resources[*r].state_index(g.state)) {
      report.errors.push_back(where + ": guard references undeclared state '" + g.state +
                              "' of resource '" + g.resource + "'");
    }
    return;
  }
  if ((g.kind == Guard::Kind::And || g.kind == Guard::Kind::Or) && g.operands.size() < 2)
    report.errors.push_back(where + ": connective with fewer than two operands");
  if (g.kind == Guard::Kind::Not && g.operands.size() != 1)
    report.errors.push_back(where + ": negation must have exactly one operand");
  for (const auto& op : g.operands) check_guard(ss, op, where, report);
}

inline void check_effects(const Skillset& ss, const EffectSet& effects, const std::string& where,
                          ValidationReport& report) {
  std::set<std::string> seen;
  for (const auto& e : effects) {
    if (!seen.insert(e.resource).second)
      report.errors.push_back(where + ": more than one effect on resource '" + e.resource + "'");
    auto r = ss.resource_index(e.resource);
    if (!r) {
      report.errors.push_back(where + ": effect on undeclared resource '" + e.resource + "'");
    } else if (!ss.resources[*r].state_index(e.state)) {
      report.errors.push_back(where + ": effect targets undeclared state '" + e.state +
                              "' of resource '" + e.resource + "'");
    }
  }
}

}  // namespace detail

inline ValidationReport validate(const Skillset& ss) {
  ValidationReport report;
  std::set<std::string> top_names;
  auto claim = [&](const std::string& name, const char* what) {
    if (!top_names.insert(name).second)
      report.errors.push_back(std::string(what) + " '" + name + "': name already declared");
  };

  for (const auto& r : ss.resources) {
    claim(r.name, "resource");
    const std::string where = "resource '" + r.name + "'";
    if (r.states.empty()) {
      report.errors.push_back(where + ": no states");
      continue;
    }
    std::set<std::string> names(r.states.begin(), r.states.end());
    if (names.size() != r.states.size()) report.errors.push_back(where + ": duplicate state names");
    if (r.initial >= r.states.size()) report.errors.push_back(where + ": initial state is not declared");
    std::vector<bool> has_incoming(r.states.size(), false);
    for (const auto& [a, b] : r.transitions) {
      if (a >= r.states.size() || b >= r.states.size()) {
        report.errors.push_back(where + ": transition endpoint is not a declared state");
        continue;
      }
      if (a != b) has_incoming[b] = true;
    }
    for (std::size_t i = 0; i < r.states.size(); ++i)
      if (i != r.initial && !has_incoming[i])
        report.warnings.push_back(where + ": state '" + r.states[i] + "' is unreachable");
  }

  for (const auto& ev : ss.events) {
    claim(ev.name, "event");
    const std::string where = "event '" + ev.name + "'";
    detail::check_guard(ss, ev.guard, where, report);
    detail::check_effects(ss, ev.effects, where, report);
    if (ev.effects.empty() && ev.guard.is_true())
      report.errors.push_back(where + ": has neither a guard nor effects");
  }

  for (const auto& sk : ss.skills) {
    claim(sk.name, "skill");
    const std::string where = "skill '" + sk.name + "'";
    std::set<std::string> parts;
    auto claim_part = [&](const std::string& name) {
      if (!parts.insert(name).second)
        report.errors.push_back(where + ": component name '" + name + "' used twice");
    };
    for (const auto& p : sk.preconditions) {
      claim_part(p.name);
      detail::check_guard(ss, p.guard, where + " precondition '" + p.name + "'", report);
      detail::check_effects(ss, p.failure_effects, where + " precondition '" + p.name + "'", report);
    }
    detail::check_effects(ss, sk.start_effects, where + " start", report);
    for (const auto& i : sk.invariants) {
      claim_part(i.name);
      detail::check_guard(ss, i.guard, where + " invariant '" + i.name + "'", report);
      detail::check_effects(ss, i.failure_effects, where + " invariant '" + i.name + "'", report);
    }
    for (const auto& t : sk.successes) {
      claim_part(t.name);
      detail::check_effects(ss, t.effects, where + " success '" + t.name + "'", report);
    }
    for (const auto& t : sk.failures) {
      claim_part(t.name);
      detail::check_effects(ss, t.effects, where + " failure '" + t.name + "'", report);
    }
    if (sk.interrupts.size() > 1) report.errors.push_back(where + ": multiple interrupts");
    for (const auto& eff : sk.interrupts) detail::check_effects(ss, eff, where + " interrupt", report);
    if (sk.successes.empty() && sk.failures.empty() && sk.interrupts.empty())
      report.warnings.push_back(where + ": no success, failure or interrupt; it can never stop running");
  }
  return report;
}

}  // namespace skinet
