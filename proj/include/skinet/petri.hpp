#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace skinet {

// Fixed-width bit vector over place ids. A 1-safe net never needs more than
// one bit per place.
class Marking {
 public:
  Marking() = default;
  explicit Marking(std::size_t places) : size_(places), words_((places + 63) / 64, 0) {}

  std::size_t size() const { return size_; }

  bool test(std::size_t p) const { return (words_[p / 64] >> (p % 64)) & 1U; }

  void set(std::size_t p, bool value = true) {
    const std::uint64_t bit = std::uint64_t{1} << (p % 64);
    if (value)
      words_[p / 64] |= bit;
    else
      words_[p / 64] &= ~bit;
  }

  void resize(std::size_t places) {
    size_ = places;
    words_.resize((places + 63) / 64, 0);
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  // Every place marked in `mask` is marked here.
  bool contains(const Marking& mask) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & mask.words_[i]) != mask.words_[i]) return false;
    return true;
  }

  bool intersects(const Marking& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & other.words_[i]) return true;
    return false;
  }

  std::vector<std::size_t> marked() const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < size_; ++p)
      if (test(p)) out.push_back(p);
    return out;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  friend bool operator==(const Marking&, const Marking&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct MarkingHash {
  std::size_t operator()(const Marking& m) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ m.size();
    for (auto w : m.words()) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }
};

// Two classes are enough: invariant failures preempt everything else.
enum class PriorityClass { Normal, InvariantFailure };

// What a place stands for in the skillset.
struct PlaceRole {
  enum class Kind { None, ResourceState, SkillEntry, SkillRunning, SkillExit };

  Kind kind = Kind::None;
  std::size_t owner = 0;  // resource or skill index
  std::size_t state = 0;  // resource state index
  std::string mode;       // termination mode id for SkillExit

  static PlaceRole resource_state(std::size_t resource, std::size_t state) {
    return {Kind::ResourceState, resource, state, {}};
  }
  static PlaceRole skill_entry(std::size_t skill) { return {Kind::SkillEntry, skill, 0, {}}; }
  static PlaceRole skill_running(std::size_t skill) { return {Kind::SkillRunning, skill, 0, {}}; }
  static PlaceRole skill_exit(std::size_t skill, std::string mode) {
    return {Kind::SkillExit, skill, 0, std::move(mode)};
  }

  bool is_skill() const {
    return kind == Kind::SkillEntry || kind == Kind::SkillRunning || kind == Kind::SkillExit;
  }

  friend bool operator==(const PlaceRole&, const PlaceRole&) = default;
};

struct Place {
  std::string name;
  PlaceRole role;
};

struct Transition {
  std::string name;
  std::vector<std::size_t> inputs;   // arc order as built
  std::vector<std::size_t> outputs;  // arc order as built
  PriorityClass priority = PriorityClass::Normal;
  Marking input_mask;
  Marking output_mask;
};

struct NotFireable : std::runtime_error {
  explicit NotFireable(const std::string& transition)
      : std::runtime_error("transition '" + transition + "' is not fireable"), transition(transition) {}
  std::string transition;
};

struct SafetyViolation : std::runtime_error {
  SafetyViolation(const std::string& transition, std::vector<std::size_t> places)
      : std::runtime_error("firing '" + transition + "' puts a second token on a marked place"),
        transition(transition),
        places(std::move(places)) {}
  std::string transition;
  std::vector<std::size_t> places;
};

// Ordinary 1-safe Petri net with unit arcs and a two-level priority relation.
class PetriNet {
 public:
  explicit PetriNet(std::string name = {}) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }

  std::size_t add_place(std::string name, PlaceRole role = {}, bool marked = false) {
    if (place_ids_.count(name)) throw std::invalid_argument("duplicate place name '" + name + "'");
    place_ids_.emplace(name, places_.size());
    places_.push_back({std::move(name), std::move(role)});
    initial_.resize(places_.size());
    initial_.set(places_.size() - 1, marked);
    for (auto& t : transitions_) {
      t.input_mask.resize(places_.size());
      t.output_mask.resize(places_.size());
    }
    return places_.size() - 1;
  }

  std::size_t add_transition(std::string name, std::vector<std::size_t> inputs,
                             std::vector<std::size_t> outputs,
                             PriorityClass priority = PriorityClass::Normal) {
    if (transition_ids_.count(name))
      throw std::invalid_argument("duplicate transition name '" + name + "'");
    Transition t{std::move(name), {}, {}, priority, Marking(places_.size()), Marking(places_.size())};
    for (auto p : inputs) add_arc(t.inputs, t.input_mask, p);
    for (auto p : outputs) add_arc(t.outputs, t.output_mask, p);
    transition_ids_.emplace(t.name, transitions_.size());
    transitions_.push_back(std::move(t));
    return transitions_.size() - 1;
  }

  // Mostly for building mutants in tests.
  void add_output_arc(std::size_t t, std::size_t p) {
    add_arc(transitions_.at(t).outputs, transitions_.at(t).output_mask, p);
  }

  PetriNet without_transition(std::size_t removed) const {
    PetriNet out(name_);
    for (std::size_t p = 0; p < places_.size(); ++p) out.add_place(places_[p].name, places_[p].role, initial_.test(p));
    for (std::size_t t = 0; t < transitions_.size(); ++t) {
      if (t == removed) continue;
      const auto& tr = transitions_[t];
      out.add_transition(tr.name, tr.inputs, tr.outputs, tr.priority);
    }
    return out;
  }

  void set_initial(std::size_t p, bool marked) { initial_.set(p, marked); }

  std::size_t place_count() const { return places_.size(); }
  std::size_t transition_count() const { return transitions_.size(); }
  const std::vector<Place>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const Place& place(std::size_t p) const { return places_.at(p); }
  const Transition& transition(std::size_t t) const { return transitions_.at(t); }
  const Marking& initial_marking() const { return initial_; }

  std::optional<std::size_t> place_id(const std::string& name) const {
    auto it = place_ids_.find(name);
    if (it == place_ids_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> transition_id(const std::string& name) const {
    auto it = transition_ids_.find(name);
    if (it == transition_ids_.end()) return std::nullopt;
    return it->second;
  }

 private:
  void add_arc(std::vector<std::size_t>& arcs, Marking& mask, std::size_t p) const {
    if (p >= places_.size()) throw std::out_of_range("arc to unknown place");
    if (mask.test(p)) throw std::invalid_argument("duplicate arc: only unit arcs are supported");
    arcs.push_back(p);
    mask.set(p);
  }

  std::string name_;
  std::vector<Place> places_;
  std::vector<Transition> transitions_;
  std::unordered_map<std::string, std::size_t> place_ids_;
  std::unordered_map<std::string, std::size_t> transition_ids_;
  Marking initial_;
};

inline bool is_enabled(const PetriNet& net, const Marking& m, std::size_t t) {
  return m.contains(net.transition(t).input_mask);
}

inline std::vector<std::size_t> enabled(const PetriNet& net, const Marking& m) {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < net.transition_count(); ++t)
    if (is_enabled(net, m, t)) out.push_back(t);
  return out;
}

// Enabled transitions after priority filtering: when any invariant-failure
// transition is enabled, only those may fire.
inline std::vector<std::size_t> fireable(const PetriNet& net, const Marking& m) {
  std::vector<std::size_t> normal, urgent;
  for (std::size_t t = 0; t < net.transition_count(); ++t) {
    if (!is_enabled(net, m, t)) continue;
    (net.transition(t).priority == PriorityClass::InvariantFailure ? urgent : normal).push_back(t);
  }
  return urgent.empty() ? normal : urgent;
}

// Fires without re-checking priority; callers pick t from fireable().
inline Marking fire_unchecked(const PetriNet& net, const Marking& m, std::size_t t) {
  const Transition& tr = net.transition(t);
  Marking next = m;
  auto& w = next.words();
  const auto& in = tr.input_mask.words();
  const auto& out = tr.output_mask.words();
  bool unsafe = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] &= ~in[i];
    if (w[i] & out[i]) unsafe = true;
    w[i] |= out[i];
  }
  if (unsafe) {
    std::vector<std::size_t> places;
    Marking rest = m;
    for (auto p : tr.inputs) rest.set(p, false);
    for (auto p : tr.outputs)
      if (rest.test(p)) places.push_back(p);
    throw SafetyViolation(tr.name, std::move(places));
  }
  return next;
}

inline Marking fire(const PetriNet& net, const Marking& m, std::size_t t) {
  const auto f = fireable(net, m);
  if (std::find(f.begin(), f.end(), t) == f.end()) throw NotFireable(net.transition(t).name);
  return fire_unchecked(net, m, t);
}

}  // namespace skinet
