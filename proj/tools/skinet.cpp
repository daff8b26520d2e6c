#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skinet/run.hpp"

namespace {

struct Flags {
  std::string input;
  bool dead = false, live = false, safe = false, deadset = false, all = false;
  std::vector<std::string> deadskill;
  bool no_events = false, no_exit_places = false, strict_moves = false;
  bool bare_state_names = false, pr_grouped = false, timing = false, oracle = false;
  std::string net_path, dot_path, report_path;
  skinet::ReportFormat format = skinet::ReportFormat::Text;
  std::size_t limit = 1'000'000;
  CLI::Option* deadskill_opt = nullptr;
};

void add_common(CLI::App& cmd, Flags& f) {
  cmd.add_option("input", f.input, "skillset file")->required()->check(CLI::ExistingFile);
  cmd.add_flag("--dead", f.dead, "no reachable deadlock");
  cmd.add_flag("--live", f.live, "no dead transition");
  cmd.add_flag("--safe", f.safe, "resource and skill place invariants, 1-safety");
  f.deadskill_opt = cmd.add_option("--deadskill", f.deadskill, "skill can always run again (all skills if no NAME)")
                        ->expected(0, 1)
                        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  cmd.add_flag("--deadset", f.deadset, "some skill can always run again");
  cmd.add_flag("--all", f.all, "all five checks");
  cmd.add_flag("--no-events", f.no_events, "build the net without event transitions");
  cmd.add_flag("--no-exit-places", f.no_exit_places, "terminate skills straight to idle, without exit places");
  cmd.add_flag("--strict-moves", f.strict_moves, "drop guarded effects that take an undeclared resource move");
  cmd.add_flag("--bare-state-names", f.bare_state_names, "export resource places under their bare state names");
  cmd.add_flag("--pr-grouped", f.pr_grouped, "export priorities as one grouped pr line");
  cmd.add_flag("--oracle", f.oracle, "also run the equivalence self-test");
  cmd.add_flag("--timing", f.timing, "include per-check timings in reports");
  cmd.add_option("--limit", f.limit, "maximum number of reachable states")->check(CLI::PositiveNumber);
  cmd.add_option("--format", f.format, "report format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, skinet::ReportFormat>{{"text", skinet::ReportFormat::Text},
                                                      {"json", skinet::ReportFormat::Json}},
          CLI::ignore_case));
  cmd.add_option("--net", f.net_path, "write the net in Tina .net format");
  cmd.add_option("--dot", f.dot_path, "write the reachability graph in DOT format");
  cmd.add_option("--report", f.report_path, "write the check report here instead of stdout");
}

skinet::RunConfig to_config(skinet::Verb verb, const Flags& f) {
  skinet::RunConfig c;
  c.verb = verb;
  c.input = f.input;
  if (f.all) c.checks = skinet::CheckSelection::all();
  c.checks.dead |= f.dead;
  c.checks.live |= f.live;
  c.checks.safe |= f.safe;
  c.checks.deadset |= f.deadset;
  if (f.deadskill_opt->count() > 0) {
    c.checks.deadskill = true;
    if (!f.all)
      for (const auto& name : f.deadskill)
        if (!name.empty()) c.checks.deadskill_names.push_back(name);  // a bare --deadskill yields ""
  }
  c.build.include_events = !f.no_events;
  c.build.keep_exit_places = !f.no_exit_places;
  c.build.strict_resource_moves = f.strict_moves;
  c.export_options.bare_state_names = f.bare_state_names;
  c.export_options.pr_grouped = f.pr_grouped;
  c.net_path = f.net_path;
  c.dot_path = f.dot_path;
  c.report_path = f.report_path;
  c.format = f.format;
  c.limit = f.limit;
  c.timing = f.timing;
  c.oracle = f.oracle;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skinet: skillset to Petri net translation and verification"};
  app.set_version_flag("--version", skinet::tool_version);
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, skinet::Verb>> verbs = {
      {"check", skinet::Verb::Check},
      {"export", skinet::Verb::Export},
      {"oracle", skinet::Verb::Oracle},
      {"graph", skinet::Verb::Graph},
  };
  const std::map<std::string, std::string> help = {
      {"check", "run verification checks (all five when none is selected)"},
      {"export", "write the net in Tina .net format (stdout unless --net)"},
      {"oracle", "compare the net against direct execution of the skillset"},
      {"graph", "dump the reachability graph in DOT format (stdout unless --dot)"},
  };
  std::vector<Flags> flags(verbs.size());
  std::vector<CLI::App*> commands;
  for (std::size_t i = 0; i < verbs.size(); ++i) {
    commands.push_back(app.add_subcommand(verbs[i].first, help.at(verbs[i].first)));
    add_common(*commands.back(), flags[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : skinet::exit_input_error;
  }

  for (std::size_t i = 0; i < verbs.size(); ++i)
    if (commands[i]->parsed()) return skinet::run(to_config(verbs[i].second, flags[i]), std::cout, std::cerr);
  return skinet::exit_input_error;
}
