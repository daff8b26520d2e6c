#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "skinet/checks.hpp"
#include "skinet/net_builder.hpp"
#include "skinet/state_space.hpp"

namespace skinet {

inline constexpr const char* tool_version = "0.1.0";

struct ReportInput {
  const SkillNet& net;
  const ReachabilityGraph& graph;
  const std::vector<CheckResult>& checks;
  bool timing = false;  // off by default so reports are byte-stable
};

namespace detail {

inline nlohmann::ordered_json path_json(const Path& path, const SkillNet& sn, const ReachabilityGraph& g) {
  auto steps = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < path.length(); ++i) {
    const auto& before = g.marking(path.states[i]);
    const auto& after = g.marking(path.states[i + 1]);
    auto added = nlohmann::ordered_json::array();
    auto removed = nlohmann::ordered_json::array();
    for (std::size_t p = 0; p < sn.net.place_count(); ++p) {
      if (after.test(p) && !before.test(p)) added.push_back(sn.net.place(p).name);
      if (before.test(p) && !after.test(p)) removed.push_back(sn.net.place(p).name);
    }
    nlohmann::ordered_json step;
    step["transition"] = sn.net.transition(path.transitions[i]).name;
    step["marking_delta"] = {{"added", added}, {"removed", removed}};
    steps.push_back(std::move(step));
  }
  return steps;
}

inline std::string path_text(const Path& path, std::size_t focus, const PetriNet& net) {
  std::string out = "s" + std::to_string(path.states.front());
  for (std::size_t i = 0; i < path.length(); ++i) {
    out += " --" + net.transition(path.transitions[i]).name + "--> s" + std::to_string(path.states[i + 1]);
    if (i + 1 == focus && focus < path.length()) out += " (*)";
  }
  return out;
}

}  // namespace detail

inline nlohmann::ordered_json build_json(const SkillNet& sn, const ReachabilityGraph* g) {
  nlohmann::ordered_json b;
  b["places"] = sn.report.place_count;
  b["transitions"] = sn.report.transition_count;
  b["resets"] = sn.report.reset_count;
  if (g) {
    b["states"] = g->state_count();
    b["edges"] = g->edge_count();
  }
  b["options"] = {{"include_events", sn.options.include_events},
                  {"keep_exit_places", sn.options.keep_exit_places},
                  {"strict_resource_moves", sn.options.strict_resource_moves}};
  auto per_origin = nlohmann::ordered_json::array();
  for (const auto& [origin, count] : sn.report.per_origin)
    per_origin.push_back({{"origin", origin}, {"transitions", count}});
  b["per_origin"] = std::move(per_origin);
  auto aliases = nlohmann::ordered_json::array();
  for (const auto& [kept, dropped] : sn.report.aliases) aliases.push_back({{"kept", kept}, {"dropped", dropped}});
  b["aliases"] = std::move(aliases);
  b["warnings"] = sn.report.warnings;
  return b;
}

inline nlohmann::ordered_json json_report(const ReportInput& in) {
  nlohmann::ordered_json j;
  j["tool_version"] = tool_version;
  j["skillset"] = in.net.net.name();
  j["build"] = build_json(in.net, &in.graph);
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : in.checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["formula"] = c.formula;
    cj["verdict"] = to_string(c.verdict);
    auto findings = nlohmann::ordered_json::array();
    for (const auto& f : c.findings) {
      nlohmann::ordered_json fj;
      fj["subject"] = f.subject;
      if (f.state) fj["state"] = *f.state;
      if (f.path) {
        fj["focus"] = f.focus;
        fj["path"] = detail::path_json(*f.path, in.net, in.graph);
      } else {
        fj["path"] = nlohmann::ordered_json::array();
      }
      fj["message"] = f.message;
      findings.push_back(std::move(fj));
    }
    cj["findings"] = std::move(findings);
    if (in.timing) cj["elapsed_ms"] = c.stats.elapsed_ms;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j;
}

inline std::string text_report(const ReportInput& in) {
  std::ostringstream os;
  const auto& r = in.net.report;
  os << "skinet " << tool_version << ": skillset " << in.net.net.name() << "\n";
  os << "net: " << r.place_count << " places, " << r.transition_count << " transitions (" << r.reset_count
     << " resets); reachability graph: " << in.graph.state_count() << " states, " << in.graph.edge_count()
     << " edges\n";
  for (const auto& w : r.warnings) os << "warning: " << w << "\n";
  for (const auto& c : in.checks) {
    os << "\n[" << to_string(c.verdict) << "] " << c.name << "   " << c.formula;
    if (in.timing) os << "   (" << c.stats.elapsed_ms << " ms)";
    os << "\n";
    for (const auto& f : c.findings) {
      os << "  - " << f.subject << ": " << f.message << "\n";
      if (f.path) os << "    path: " << detail::path_text(*f.path, f.focus, in.net.net) << "\n";
    }
  }
  return os.str();
}

}  // namespace skinet
