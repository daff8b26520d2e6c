#pragma once

#include <cstddef>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "skinet/petri.hpp"
#include "skinet/skillset.hpp"

namespace skinet {

struct ExportOptions {
  // Tina `pr {a} {b} > {c} {d}` instead of one pair per line.
  bool pr_grouped = false;
  // Resource places named by their state alone (`PowerOn` instead of
  // `power_status_PowerOn`). Fails if two places end up with one name.
  bool bare_state_names = false;
};

struct NameCollision : std::invalid_argument {
  explicit NameCollision(const std::string& name)
      : std::invalid_argument("bare state names collide on '" + name + "'"), name(name) {}
  std::string name;
};

inline std::vector<std::string> export_place_names(const PetriNet& net, const Skillset* ss, bool bare) {
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (const auto& p : net.places()) {
    std::string name = p.name;
    if (bare && ss && p.role.kind == PlaceRole::Kind::ResourceState)
      name = ss->resources.at(p.role.owner).states.at(p.role.state);
    if (!seen.insert(name).second) throw NameCollision(name);
    names.push_back(std::move(name));
  }
  return names;
}

// Tina textual net format. `ss` is only needed for bare state names.
inline std::string export_net(const PetriNet& net, const ExportOptions& options = {}, const Skillset* ss = nullptr) {
  const auto names = export_place_names(net, ss, options.bare_state_names);
  std::ostringstream os;
  os << "net {" << net.name() << "}\n";
  for (const auto& t : net.transitions()) {
    os << "tr {" << t.name << "}";
    for (auto p : t.inputs) os << " {" << names[p] << "}";
    os << " ->";
    for (auto p : t.outputs) os << " {" << names[p] << "}";
    os << "\n";
  }
  for (auto p : net.initial_marking().marked()) os << "pl {" << names[p] << "} (1)\n";

  std::vector<std::string> urgent, normal;
  for (const auto& t : net.transitions())
    (t.priority == PriorityClass::InvariantFailure ? urgent : normal).push_back(t.name);
  if (!urgent.empty() && !normal.empty()) {
    if (options.pr_grouped) {
      os << "pr";
      for (const auto& u : urgent) os << " {" << u << "}";
      os << " >";
      for (const auto& n : normal) os << " {" << n << "}";
      os << "\n";
    } else {
      for (const auto& u : urgent)
        for (const auto& n : normal) os << "pr {" << u << "} > {" << n << "}\n";
    }
  }
  return os.str();
}

}  // namespace skinet
