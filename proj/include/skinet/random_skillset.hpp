#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "skinet/skillset.hpp"

// Small seeded skillsets for property tests. Output always validates.
namespace skinet {

struct RandomSkillsetLimits {
  std::size_t max_resources = 3;
  std::size_t max_states = 3;  // at least 2 per resource
  std::size_t max_events = 3;
  std::size_t max_skills = 3;
  std::size_t max_atoms = 3;
};

// States reordered as the parser sees them (initial first, then by first
// mention in a transition), dropping states nothing mentions, so printing
// and re-parsing gives back an equal resource.
inline Resource in_parse_order(const Resource& r) {
  std::vector<std::size_t> order{r.initial};
  auto mention = [&](std::size_t s) {
    if (std::find(order.begin(), order.end(), s) == order.end()) order.push_back(s);
  };
  for (const auto& [a, b] : r.transitions) {
    mention(a);
    mention(b);
  }
  std::vector<std::size_t> index(r.states.size());
  Resource out{r.name, {}, 0, {}};
  for (std::size_t i = 0; i < order.size(); ++i) {
    index[order[i]] = i;
    out.states.push_back(r.states[order[i]]);
  }
  for (const auto& [a, b] : r.transitions) out.transitions.emplace_back(index[a], index[b]);
  return out;
}

class RandomSkillsetGenerator {
 public:
  explicit RandomSkillsetGenerator(std::uint64_t seed, RandomSkillsetLimits limits = {})
      : rng_(seed), limits_(limits) {}

  Skillset generate(const std::string& name) {
    Skillset ss;
    ss.name = name;
    const auto nres = uniform(1, limits_.max_resources);
    for (std::size_t r = 0; r < nres; ++r) {
      Resource res;
      res.name = "r" + std::to_string(r);
      const auto nstates = uniform(2, std::max<std::size_t>(2, limits_.max_states));
      for (std::size_t s = 0; s < nstates; ++s) res.states.push_back("s" + std::to_string(s));
      res.initial = uniform(0, nstates - 1);
      for (std::size_t a = 0; a < nstates; ++a)
        for (std::size_t b = 0; b < nstates; ++b)
          if (a != b && coin(0.5)) res.transitions.emplace_back(a, b);
      ss.resources.push_back(in_parse_order(res));
    }

    const auto nevents = uniform(0, limits_.max_events);
    for (std::size_t v = 0; v < nevents; ++v) {
      Event ev{"v" + std::to_string(v), coin(0.2) ? Guard::truth() : guard(ss), effects(ss, 0.5)};
      if (ev.effects.empty()) ev.effects = forced_effect(ss);
      ss.events.push_back(std::move(ev));
    }

    const auto nskills = uniform(1, limits_.max_skills);
    for (std::size_t k = 0; k < nskills; ++k) {
      Skill sk;
      sk.name = "k" + std::to_string(k);
      for (std::size_t i = 0, n = uniform(0, 2); i < n; ++i)
        sk.preconditions.push_back({"p" + std::to_string(i), guard(ss), effects(ss, 0.3)});
      sk.start_effects = effects(ss, 0.4);
      for (std::size_t i = 0, n = uniform(0, 2); i < n; ++i)
        sk.invariants.push_back({"n" + std::to_string(i), guard(ss), effects(ss, 0.3)});
      for (std::size_t i = 0, n = uniform(0, 2); i < n; ++i)
        sk.successes.push_back({"ok" + std::to_string(i), effects(ss, 0.4)});
      for (std::size_t i = 0, n = uniform(0, 1); i < n; ++i)
        sk.failures.push_back({"ko" + std::to_string(i), effects(ss, 0.4)});
      if (coin(0.5)) sk.interrupts.push_back(effects(ss, 0.3));
      ss.skills.push_back(std::move(sk));
    }
    return ss;
  }

 private:
  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  Guard atom(const Skillset& ss) {
    const auto& r = ss.resources[uniform(0, ss.resources.size() - 1)];
    Guard g = Guard::atom(r.name, r.states[uniform(0, r.states.size() - 1)]);
    return coin(0.3) ? Guard::negate(std::move(g)) : g;
  }

  Guard guard(const Skillset& ss) {
    std::vector<Guard> atoms;
    for (std::size_t i = 0, n = uniform(1, limits_.max_atoms); i < n; ++i) atoms.push_back(atom(ss));
    return coin(0.6) ? Guard::all_of(std::move(atoms)) : Guard::any_of(std::move(atoms));
  }

  // Each resource independently gets an effect with probability p.
  EffectSet effects(const Skillset& ss, double p) {
    EffectSet out;
    for (const auto& r : ss.resources)
      if (coin(p)) out.push_back({r.name, r.states[uniform(0, r.states.size() - 1)]});
    return out;
  }

  EffectSet forced_effect(const Skillset& ss) {
    const auto& r = ss.resources[uniform(0, ss.resources.size() - 1)];
    return {{r.name, r.states[uniform(0, r.states.size() - 1)]}};
  }

  std::mt19937_64 rng_;
  RandomSkillsetLimits limits_;
};

inline Skillset random_skillset(std::uint64_t seed, RandomSkillsetLimits limits = {}) {
  return RandomSkillsetGenerator(seed, limits).generate("random_" + std::to_string(seed));
}

}  // namespace skinet
