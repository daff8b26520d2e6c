#pragma once

#include <cstddef>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "skinet/checks.hpp"
#include "skinet/export.hpp"
#include "skinet/net_builder.hpp"
#include "skinet/oracle.hpp"
#include "skinet/parser.hpp"
#include "skinet/report.hpp"
#include "skinet/skillset.hpp"
#include "skinet/state_space.hpp"

namespace skinet {

enum class Verb { Check, Export, Oracle, Graph };
enum class ReportFormat { Text, Json };

struct CheckSelection {
  bool dead = false;
  bool live = false;
  bool safe = false;
  bool deadskill = false;
  std::vector<std::string> deadskill_names;  // empty: every skill
  bool deadset = false;

  bool any() const { return dead || live || safe || deadskill || deadset; }
  static CheckSelection all() { return {true, true, true, true, {}, true}; }
};

struct RunConfig {
  Verb verb = Verb::Check;
  std::string input;
  CheckSelection checks;  // `check` with nothing selected runs all of them
  BuildOptions build;
  ExportOptions export_options;
  std::string net_path;
  std::string dot_path;
  std::string report_path;
  ReportFormat format = ReportFormat::Text;
  std::size_t limit = 1'000'000;
  bool timing = false;
  bool oracle = false;  // also run the equivalence self-test
};

enum ExitCode : int { exit_pass = 0, exit_check_failed = 1, exit_input_error = 2, exit_state_limit = 3 };

namespace detail {

inline bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (f) f << text;
  if (!f) {
    err << "error: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

inline std::vector<CheckResult> run_checks(const CheckSelection& sel, const Skillset& ss, const SkillNet& sn,
                                           const ReachabilityGraph& g) {
  std::vector<CheckResult> out;
  if (sel.dead) out.push_back(check_dead(g));
  if (sel.live) out.push_back(check_live(sn, g));
  if (sel.safe) out.push_back(check_safe(ss, sn.net, g));
  if (sel.deadskill) {
    if (sel.deadskill_names.empty())
      for (const auto& sk : ss.skills) out.push_back(check_deadskill(ss, sn.net, g, sk.name));
    else
      for (const auto& name : sel.deadskill_names) out.push_back(check_deadskill(ss, sn.net, g, name));
  }
  if (sel.deadset) out.push_back(check_deadset(ss, sn.net, g));
  return out;
}

}  // namespace detail

// parse, validate, build, then the verb's work. Diagnostics go to `err`,
// reports and dumps without a target path to `out`.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::string source;
  {
    std::ifstream f(config.input, std::ios::binary);
    if (!f) {
      err << "error: cannot read '" << config.input << "'\n";
      return exit_input_error;
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    source = buf.str();
  }

  Skillset ss;
  try {
    ss = parse_skillset(source);
  } catch (const ParseError& e) {
    err << config.input << ": " << e.what() << "\n";
    return exit_input_error;
  }
  const auto validation = validate(ss);
  for (const auto& w : validation.warnings) err << config.input << ": warning: " << w << "\n";
  for (const auto& e : validation.errors) err << config.input << ": error: " << e << "\n";
  if (!validation.ok()) return exit_input_error;

  for (const auto& name : config.checks.deadskill_names)
    if (!ss.skill_index(name)) {
      err << "error: unknown skill '" << name << "'\n";
      return exit_input_error;
    }

  const SkillNet sn = build_net(ss, config.build);

  if (!config.net_path.empty() || config.verb == Verb::Export) {
    std::string text;
    try {
      text = export_net(sn.net, config.export_options, &ss);
    } catch (const NameCollision& e) {
      err << "error: " << e.what() << "\n";
      return exit_input_error;
    }
    if (config.net_path.empty())
      out << text;
    else if (!detail::write_file(config.net_path, text, err))
      return exit_input_error;
  }
  const bool checks_requested = config.verb == Verb::Check || config.checks.any();
  if (config.verb == Verb::Export && !checks_requested && !config.oracle && config.dot_path.empty())
    return exit_pass;

  std::optional<ReachabilityGraph> graph;
  try {
    graph = explore(sn.net, ExploreOptions{config.limit, UnsafePolicy::Record});
  } catch (const StateLimitExceeded& e) {
    err << "error: " << e.what() << "\n";
    return exit_state_limit;
  }

  if (config.verb == Verb::Graph || !config.dot_path.empty()) {
    const auto dot = to_dot(sn.net, *graph);
    if (config.dot_path.empty())
      out << dot;
    else if (!detail::write_file(config.dot_path, dot, err))
      return exit_input_error;
  }

  int code = exit_pass;
  if (config.verb == Verb::Oracle || config.oracle) {
    try {
      const auto lts = explore_direct(ss, config.build, config.limit);
      const auto eq = check_equivalence(lts, *graph, sn, ss);
      if (eq.equivalent) {
        out << "oracle: equivalent (" << eq.states_compared << " states, " << eq.edges_compared
            << " labelled steps)\n";
      } else {
        out << "oracle: MISMATCH: " << eq.mismatch << "\n";
        code = exit_check_failed;
      }
    } catch (const StateLimitExceeded& e) {
      err << "error: " << e.what() << "\n";
      return exit_state_limit;
    }
  }

  if (checks_requested) {
    const auto selection = config.checks.any() ? config.checks : CheckSelection::all();
    const auto results = detail::run_checks(selection, ss, sn, *graph);
    const ReportInput input{sn, *graph, results, config.timing};
    const std::string report =
        config.format == ReportFormat::Json ? json_report(input).dump(2) + "\n" : text_report(input);
    if (config.report_path.empty())
      out << report;
    else if (!detail::write_file(config.report_path, report, err))
      return exit_input_error;
    for (const auto& r : results)
      if (!r.passed()) code = exit_check_failed;
  }
  return code;
}

}  // namespace skinet
