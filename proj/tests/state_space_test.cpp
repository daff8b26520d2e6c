#include <gtest/gtest.h>

#include "support.hpp"

namespace skinet {
namespace {

const Skillset& toggle_events() {
  static const Skillset ss = parse_skillset(R"(
    skillset lamp {
      resource { lamp { initial Off  Off -> On  On -> Off } }
      event {
        on { guard lamp == Off  lamp -> On }
        off { guard lamp == On  lamp -> Off }
      }
    })");
  return ss;
}

TEST(Explore, ToggleHasTwoStatesTwoEdges) {
  const auto sn = build_net(toggle_events());
  const auto g = explore(sn.net);
  EXPECT_EQ(g.state_count(), 2u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_FALSE(g.is_deadlock(0));
  EXPECT_FALSE(g.is_deadlock(1));
}

TEST(Explore, NoTransitionsIsOneDeadlock) {
  PetriNet net("still");
  net.add_place("p", {}, true);
  const auto g = explore(net);
  EXPECT_EQ(g.state_count(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_TRUE(g.is_deadlock(0));
}

TEST(Explore, SpotHasNoDeadlock) {
  const auto sn = build_net(testing::spot());
  const auto g = explore(sn.net);
  EXPECT_GT(g.state_count(), 1u);
  for (std::size_t s = 0; s < g.state_count(); ++s) ASSERT_FALSE(g.is_deadlock(s)) << s;
}

TEST(Explore, StateLimit) {
  const auto sn = build_net(testing::spot());
  EXPECT_THROW(explore(sn.net, 10), StateLimitExceeded);
  EXPECT_NO_THROW(explore(sn.net, explore(sn.net).state_count()));
}

TEST(Explore, Reproducible) {
  const auto sn = build_net(testing::spot());
  const auto a = explore(sn.net);
  const auto b = explore(sn.net);
  ASSERT_EQ(a.state_count(), b.state_count());
  EXPECT_EQ(a.markings(), b.markings());
  ASSERT_EQ(a.edge_count(), b.edge_count());
  for (std::size_t i = 0; i < a.edge_count(); ++i) {
    EXPECT_EQ(a.edges()[i].source, b.edges()[i].source);
    EXPECT_EQ(a.edges()[i].transition, b.edges()[i].transition);
    EXPECT_EQ(a.edges()[i].target, b.edges()[i].target);
  }
}

TEST(Explore, EdgesRespectPriorityAndFireability) {
  const auto sn = build_net(testing::spot());
  const auto g = explore(sn.net);
  for (std::size_t s = 0; s < g.state_count(); ++s) {
    const auto f = fireable(sn.net, g.marking(s));
    const auto out = g.out_edges(s);
    ASSERT_EQ(out.size(), f.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      ASSERT_EQ(out[i].transition, f[i]);
      ASSERT_EQ(g.marking(out[i].target), fire(sn.net, g.marking(s), f[i]));
    }
  }
}

TEST(Explore, UnsafeFiringsCanBeRecorded) {
  PetriNet net("n");
  const auto a = net.add_place("a", {}, true);
  const auto b = net.add_place("b", {}, true);
  net.add_transition("t", {a}, {b});
  EXPECT_THROW(explore(net), SafetyViolation);
  const auto g = explore(net, ExploreOptions{100, UnsafePolicy::Record});
  ASSERT_EQ(g.unsafe_firings().size(), 1u);
  EXPECT_EQ(g.unsafe_firings()[0].places, std::vector<std::size_t>{b});
  EXPECT_FALSE(g.is_deadlock(0));
}

TEST(BackwardReachable, SpotRunningGoToIsAStrictSubset) {
  const auto sn = build_net(testing::spot());
  const auto g = explore(sn.net);
  const auto p = testing::place(sn.net, "i_go_to");
  const auto in = backward_reachable(g, [&](std::size_t s) { return g.marking(s).test(p); });
  const auto count = static_cast<std::size_t>(std::count(in.begin(), in.end(), true));
  EXPECT_GT(count, 0u);
  EXPECT_LT(count, g.state_count());
  EXPECT_TRUE(in[0]);
}

TEST(BackwardReachable, TrivialGoals) {
  const auto g = explore(build_net(toggle_events()).net);
  const auto all = backward_reachable(g, [](std::size_t s) { return s == 0; });
  EXPECT_TRUE(all[0]);
  const auto none = backward_reachable(g, [](std::size_t) { return false; });
  EXPECT_EQ(std::count(none.begin(), none.end(), true), 0);
}

TEST(PathTo, Cases) {
  const auto sn = build_net(testing::spot());
  const auto g = explore(sn.net);
  EXPECT_FALSE(path_to(g, [&](std::size_t s) { return g.is_deadlock(s); }));
  const auto empty = path_to(g, [](std::size_t s) { return s == 0; });
  ASSERT_TRUE(empty);
  EXPECT_EQ(empty->length(), 0u);
  EXPECT_EQ(empty->states, std::vector<std::size_t>{0});

  const auto x = testing::place(sn.net, "x_go_to_inv_fail_is_auto");
  const auto path = path_to(g, [&](std::size_t s) { return g.marking(s).test(x); });
  ASSERT_TRUE(path);
  std::vector<std::string> names;
  for (auto t : path->transitions) names.push_back(sn.net.transition(t).name);
  // Shortest route: power on, start go_to, switch to manual, invariant failure.
  EXPECT_EQ(names, (std::vector<std::string>{"t_event_power_switchon", "t_start_go_to", "t_event_tomanual_fromauto",
                                             "t_go_to_inv_fail_is_auto"}));
  for (std::size_t i = 0; i < path->length(); ++i) {
    bool edge = false;
    for (const auto& e : g.out_edges(path->states[i]))
      edge = edge || (e.transition == path->transitions[i] && e.target == path->states[i + 1]);
    EXPECT_TRUE(edge) << i;
  }
}

TEST(BottomComponents, Toggle) {
  const auto g = explore(build_net(toggle_events()).net);
  const auto bottom = bottom_components(g);
  EXPECT_TRUE(bottom[0]);
  EXPECT_TRUE(bottom[1]);
}

TEST(BottomComponents, ChainEndsInBottom) {
  PetriNet net("chain");
  const auto a = net.add_place("a", {}, true);
  const auto b = net.add_place("b");
  const auto c = net.add_place("c");
  net.add_transition("ab", {a}, {b});
  net.add_transition("bc", {b}, {c});
  net.add_transition("cb", {c}, {b});
  const auto g = explore(net);
  const auto bottom = bottom_components(g);
  EXPECT_EQ(bottom, (std::vector<bool>{false, true, true}));
}

TEST(Dot, ListsStatesAndEdges) {
  const auto sn = build_net(toggle_events());
  const auto dot = to_dot(sn.net, explore(sn.net));
  EXPECT_NE(dot.find("s0 [label=\"0: lamp_Off\"]"), std::string::npos) << dot;
  EXPECT_NE(dot.find("s0 -> s1 [label=\"t_event_on\"]"), std::string::npos) << dot;
}

}  // namespace
}  // namespace skinet
