// One PASS/FAIL line per acceptance criterion; nonzero exit on any failure.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "support.hpp"

namespace {

using namespace skinet;
using Clock = std::chrono::steady_clock;

struct Failed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failed(what);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_spot_text() { return testing::read_file(testing::sample_path("spot.skillset")); }

std::set<std::string> role_names(const std::vector<PlaceRole>& roles, const Skillset& ss) {
  std::set<std::string> out;
  for (const auto& r : roles) out.insert(place_name(r, ss));
  return out;
}

// The listing, entered by hand as an AST.
Skillset expected_spot() {
  auto eq = Guard::atom;
  Skillset ss;
  ss.name = "spot";
  ss.resources = {{"power_status", {"PowerOff", "PowerOn"}, 0, {{0, 1}, {1, 0}}},
                  {"lease_status", {"AutoMode", "ManualMode"}, 0, {{0, 1}, {1, 0}}},
                  {"control_mode", {"Idle", "Busy"}, 0, {{0, 1}, {1, 0}}}};
  ss.events = {{"toauto_frommanual", eq("lease_status", "ManualMode"), {{"lease_status", "AutoMode"}}},
               {"tomanual_fromauto", eq("lease_status", "AutoMode"), {{"lease_status", "ManualMode"}}},
               {"power_switchoff", eq("power_status", "PowerOn"), {{"power_status", "PowerOff"}}},
               {"power_switchon", eq("power_status", "PowerOff"), {{"power_status", "PowerOn"}}}};
  const NamedGuard canmove{"canmove", Guard::all_of({eq("lease_status", "AutoMode"), eq("control_mode", "Idle")}), {}};
  const NamedGuard is_busy{"is_busy", eq("control_mode", "Busy"), {}};
  const EffectSet to_busy{{"control_mode", "Busy"}};
  const EffectSet to_idle{{"control_mode", "Idle"}};

  Skill init_power;
  init_power.name = "init_power";
  init_power.preconditions = {canmove, {"ispowered", eq("power_status", "PowerOff"), {}}};
  init_power.start_effects = to_busy;
  init_power.invariants = {is_busy};
  init_power.successes = {{"is_poweredon", {{"control_mode", "Idle"}, {"power_status", "PowerOn"}}}};
  init_power.failures = {{"couldnot_power", to_idle}};

  Skill safe_poweroff;
  safe_poweroff.name = "safe_poweroff";
  safe_poweroff.preconditions = {canmove, {"ispowered", eq("power_status", "PowerOn"), {}}};
  safe_poweroff.start_effects = to_busy;
  safe_poweroff.invariants = {is_busy};
  safe_poweroff.successes = {{"is_poweredoff", {{"control_mode", "Idle"}, {"power_status", "PowerOff"}}}};
  safe_poweroff.failures = {{"couldnot_poweroff", to_idle}};

  Skill go_to;
  go_to.name = "go_to";
  go_to.preconditions = {canmove, {"ispowered", eq("power_status", "PowerOn"), {}}};
  go_to.start_effects = to_busy;
  go_to.invariants = {{"is_auto", eq("lease_status", "AutoMode"), {}}, {"is_powered", eq("power_status", "PowerOn"), {}}};
  go_to.interrupts = {to_idle};
  go_to.successes = {{"is_arrived", to_idle}};
  go_to.failures = {{"not_arrived", to_idle}};

  ss.skills = {init_power, safe_poweroff, go_to};
  return ss;
}

std::string criterion1() {
  const std::string text = read_spot_text();
  const auto start = Clock::now();
  const Skillset ss = parse_skillset(text);
  const auto report = validate(ss);
  const double elapsed = seconds_since(start);
  require(ss.resources.size() == 3 && ss.events.size() == 4 && ss.skills.size() == 3, "wrong element counts");
  require(ss == expected_spot(), "parsed AST differs from the listing");
  require(report.ok(), "validation errors");
  require(elapsed < 0.1, "parse took " + std::to_string(elapsed) + " s");
  return "3 resources, 4 events, 3 skills, AST equal to the listing, valid, " + std::to_string(elapsed * 1000) + " ms";
}

std::string criterion2() {
  const Skillset& ss = testing::spot();
  const auto& tau = testing::lowered(ss, "t_start_go_to");
  const auto sol = solutions(tau.guard, ss);
  require(sol.assignments.size() == 1, "expected one solution");
  require(sol.assignments[0] ==
              Assignment{{"lease_status", "AutoMode"}, {"control_mode", "Idle"}, {"power_status", "PowerOn"}},
          "wrong solution");
  const auto out = expand_transition(tau, ss, {});
  require(out.size() == 1 && out[0].name == "t_start_go_to", "expected one transition t_start_go_to");
  require(role_names(out[0].inputs, ss) ==
              std::set<std::string>{"lease_status_AutoMode", "control_mode_Idle", "power_status_PowerOn", "e_go_to"},
          "wrong input arcs");
  require(role_names(out[0].outputs, ss) ==
              std::set<std::string>{"lease_status_AutoMode", "power_status_PowerOn", "control_mode_Busy", "i_go_to"},
          "wrong output arcs");
  return "X = {(AutoMode, Idle, PowerOn)}, one transition with the expected arcs";
}

std::string criterion3() {
  const Skillset& ss = testing::spot();
  const auto& tau = testing::lowered(ss, "t_go_to_success_is_arrived");
  const auto sol = solutions(tau.guard, ss);
  require(sol.assignments.size() == 1 &&
              sol.assignments[0] == Assignment{{"lease_status", "AutoMode"}, {"power_status", "PowerOn"}},
          "expected the single solution (AutoMode, PowerOn)");
  const auto out = expand_transition(tau, ss, {});
  require(out.size() == 2, "expected two transitions");
  require(out[0].name == "t_go_to_success_is_arrived_0" && out[1].name == "t_go_to_success_is_arrived_1",
          "wrong names");
  return "X = {(AutoMode, PowerOn)}, transitions " + out[0].name + " and " + out[1].name;
}

std::string criterion4() {
  const auto start = Clock::now();
  const auto sn = build_net(testing::spot());
  const auto g = explore(sn.net);
  const auto dead = check_dead(g);
  check_live(sn, g);
  check_safe(testing::spot(), sn.net, g);
  for (const auto& sk : testing::spot().skills) check_deadskill(testing::spot(), sn.net, g, sk.name);
  check_deadset(testing::spot(), sn.net, g);
  const double elapsed = seconds_since(start);
  require(dead.passed(), "deadlock found");
  require(elapsed <= 5.0, "took " + std::to_string(elapsed) + " s");
  return std::to_string(g.state_count()) + " states, no deadlock, build+explore+checks " +
         std::to_string(elapsed) + " s";
}

std::string criterion5() {
  const auto sn = build_net(testing::spot());
  const auto g = explore(sn.net);
  const auto dead = testing::dead_subjects(check_live(sn, g));
  auto listed = [&](const std::string& t) { return std::find(dead.begin(), dead.end(), t) != dead.end(); };
  require(listed("t_go_to_success_is_arrived_1"), "_1 not reported dead");
  require(!listed("t_go_to_success_is_arrived_0"), "_0 reported dead");
  return "t_go_to_success_is_arrived_1 dead, _0 alive (" + std::to_string(dead.size()) + " dead transitions)";
}

std::string criterion6() {
  const auto sn = build_net(testing::spot());
  const auto g = explore(sn.net);
  for (const auto& sk : testing::spot().skills) {
    const auto r = check_deadskill(testing::spot(), sn.net, g, sk.name);
    require(!r.passed(), "deadskill passes on the literal listing for " + sk.name);
    const auto& path = r.findings.at(0).path.value();
    bool through = false;
    for (auto t : path.transitions) through = through || sn.net.transition(t).name.rfind("t_go_to_inv_fail_", 0) == 0;
    require(through, "witness for " + sk.name + " does not traverse a go_to invariant failure");
  }
  require(!check_deadset(testing::spot(), sn.net, g).passed(), "deadset passes on the literal listing");

  const auto fixed = build_net(testing::spot_fixed());
  const auto fg = explore(fixed.net);
  for (const auto& sk : testing::spot_fixed().skills)
    require(check_deadskill(testing::spot_fixed(), fixed.net, fg, sk.name).passed(), "fixed: deadskill fails for " + sk.name);
  require(check_deadset(testing::spot_fixed(), fixed.net, fg).passed(), "fixed: deadset fails");
  return "literal: deadskill fails x3 via go_to invariant failure; fixed: deadskill x3 and deadset pass";
}

std::string criterion7() {
  const auto sn = build_net(testing::spot());
  require(check_safe(testing::spot(), sn.net, explore(sn.net)).passed(), "spot");
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Skillset ss = random_skillset(seed);
    const auto rn = build_net(ss);
    require(check_safe(ss, rn.net, explore(rn.net, ExploreOptions{1'000'000, UnsafePolicy::Record})).passed(),
            "seed " + std::to_string(seed));
  }
  return "spot and 200 random skillsets";
}

std::string criterion8() {
  auto equivalent = [](const Skillset& ss, bool exits) {
    BuildOptions opt;
    opt.keep_exit_places = exits;
    const auto sn = build_net(ss, opt);
    const auto r = check_equivalence(explore_direct(ss, opt), explore(sn.net), sn, ss);
    require(r.equivalent, ss.name + (exits ? "" : " (no exit places)") + ": " + r.mismatch);
  };
  for (bool exits : {true, false}) {
    equivalent(testing::spot(), exits);
    for (std::uint64_t seed = 1; seed <= 200; ++seed) equivalent(random_skillset(seed), exits);
  }
  return "spot and 200 random skillsets, with and without exit places";
}

std::string criterion9() {
  std::size_t graphs = 0;
  auto compare = [&](const Skillset& ss) {
    const auto sn = build_net(ss);
    const auto g = explore(sn.net);
    if (g.state_count() > 10'000) return;
    ++graphs;
    require(testing::dead_subjects(check_live(sn, g)) == testing::brute_force_dead_transitions(sn.net, g),
            ss.name + ": live");
    for (const auto& sk : ss.skills)
      require(deadskill_violations(ss, sn.net, g, sk.name) ==
                  testing::brute_force_goal_avoiders(g, testing::place(sn.net, "i_" + sk.name)),
              ss.name + ": deadskill " + sk.name);
  };
  compare(testing::spot());
  compare(testing::spot_fixed());
  for (std::uint64_t seed = 1; seed <= 200; ++seed) compare(random_skillset(seed));
  return std::to_string(graphs) + " graphs";
}

std::string criterion10() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("skinet_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string outcome;
  try {
    for (const char* tag : {"a", "b"}) {
      const std::string cmd = std::string(SKINET_CLI) + " check " + testing::sample_path("spot.skillset") +
                              " --format json --report " + (dir / (std::string(tag) + ".json")).string() +
                              " --net " + (dir / (std::string(tag) + ".net")).string() + " > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      require(WIFEXITED(status) && WEXITSTATUS(status) == 1, "unexpected exit status");
    }
    const auto net_a = testing::read_file((dir / "a.net").string());
    const auto json_a = testing::read_file((dir / "a.json").string());
    require(!net_a.empty() && !json_a.empty(), "empty output");
    require(net_a == testing::read_file((dir / "b.net").string()), ".net exports differ");
    require(json_a == testing::read_file((dir / "b.json").string()), "JSON reports differ");
    outcome = "two CLI runs: identical .net (" + std::to_string(net_a.size()) + " B) and JSON report (" +
              std::to_string(json_a.size()) + " B)";
  } catch (...) {
    fs::remove_all(dir);
    throw;
  }
  fs::remove_all(dir);
  return outcome;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria = {
      {"1 parse fidelity", criterion1},
      {"2 start guard solution and expansion", criterion2},
      {"3 success guard solution and expansion", criterion3},
      {"4 no deadlock", criterion4},
      {"5 liveness", criterion5},
      {"6 deadskill regression pair", criterion6},
      {"7 safety on spot and random skillsets", criterion7},
      {"8 oracle equivalence", criterion8},
      {"9 checks vs brute force", criterion9},
      {"10 determinism", criterion10},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    try {
      const auto detail = fn();
      std::cout << "PASS criterion " << name << ": " << detail << std::endl;
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "FAIL criterion " << name << ": " << e.what() << std::endl;
    }
  }
  return failures == 0 ? 0 : 1;
}
