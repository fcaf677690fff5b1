#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "graphrl/environment.hpp"
#include "graphrl/families.hpp"
#include "graphrl/graph.hpp"
#include "graphrl/invariants.hpp"
#include "support/oracles.hpp"

using namespace graphrl;

namespace {

Invariant registry_invariant(const char* name) {
  return InvariantRegistry::instance().lookup(name);
}

std::vector<std::uint8_t> graph_colors(const EdgeColoredGraph& g) {
  return g.colors();
}

// The paper's Linear Build walkthrough: k=4, order 3, loops, clockwise.
std::unique_ptr<GraphEnvironment> example2_environment(CommunicationSetting setting = {}) {
  LinearOptions options;
  options.graph_invariant = registry_invariant("zero_color_count_squared");
  options.graph_order = 3;
  options.edge_colors = 4;
  options.kind = GraphKind{false, true};
  options.ordering = EdgeOrdering::Clockwise;
  options.setting = std::move(setting);
  return linear_build_environment(std::move(options));
}

CommunicationSetting sparse_setting() {
  CommunicationSetting setting;
  setting.sparse = true;
  return setting;
}

CommunicationSetting delta_setting(Invariant inv) {
  CommunicationSetting setting;
  setting.delta = [inv](const EdgeColoredGraph& prev, const EdgeColoredGraph& cur) {
    ScoreVector p = inv.f(prev);
    ScoreVector c = inv.f(cur);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= p[i];
    return c;
  };
  return setting;
}

}  // namespace

TEST_CASE("constructor validation") {
  LinearOptions linear;
  linear.graph_order = 4;
  CHECK_THROWS_WITH(linear_build_environment(linear), doctest::Contains("must be set"));
  linear.graph_invariant = registry_invariant("degree_square_sum");
  linear.graph_order = 1;
  CHECK_THROWS_WITH(linear_build_environment(linear), doctest::Contains("at least 2"));
  linear.graph_order = 4;
  linear.edge_colors = 1;
  CHECK_THROWS_WITH(linear_build_environment(linear), doctest::Contains("2..254"));
  linear.edge_colors = 3;
  CHECK_THROWS_WITH(linear_flip_environment(linear), doctest::Contains("two edge colors"));
  linear.edge_colors = 2;
  linear.generator = fixed_graph_generator(complete_graph(4));
  CHECK_THROWS_WITH(linear_build_environment(linear), doctest::Contains("no generator"));
  CHECK(linear_set_environment(linear) != nullptr);

  GlobalOptions global;
  global.graph_invariant = registry_invariant("degree_square_sum");
  global.graph_order = 4;
  global.episode_length = 0;
  CHECK_THROWS_WITH(global_set_environment(global), doctest::Contains("episode length"));
  global.episode_length = 3;
  global.flip_only = true;
  CHECK_THROWS_WITH(global_set_environment(global), doctest::Contains("flip_only"));
  CHECK(global_flip_environment(global) != nullptr);
  global.edge_colors = 3;
  CHECK_THROWS_WITH(global_flip_environment(global), doctest::Contains("two edge colors"));

  LocalOptions local;
  local.graph_invariant = registry_invariant("degree_square_sum");
  local.graph_order = 4;
  local.episode_length = 5;
  local.starting_vertex = 4;
  CHECK_THROWS_WITH(local_set_environment(local), doctest::Contains("starting vertex"));
  local.starting_vertex = -1;
  CHECK_THROWS_WITH(local_set_environment(local), doctest::Contains("starting vertex"));
  local.starting_vertex = 3;
  CHECK(local_set_environment(local) != nullptr);
  local.flip_only = true;
  CHECK_THROWS_WITH(local_set_environment(local), doctest::Contains("flip_only"));
  CHECK(local_flip_environment(local) != nullptr);
}

TEST_CASE("environment shape properties") {
  LinearOptions spectral;
  spectral.graph_invariant = registry_invariant("conjecture1");
  spectral.graph_order = 16;
  auto build = linear_build_environment(spectral);
  CHECK(build->state_length() == 240);
  CHECK(build->action_number() == 2);
  CHECK(build->episode_length() == 120);
  CHECK_FALSE(build->is_continuing());

  auto e2 = example2_environment();
  CHECK(e2->state_length() == 24);
  CHECK(e2->action_number() == 4);
  CHECK(e2->episode_length() == 6);

  GlobalOptions global;
  global.graph_invariant = registry_invariant("degree_square_sum");
  global.graph_order = 5;
  global.edge_colors = 3;
  global.episode_length = 7;
  auto gset = global_set_environment(global);
  CHECK(gset->state_length() == 20);  // (k-1) * l = 2 * 10
  CHECK(gset->action_number() == 30);
  CHECK(gset->episode_length() == 7);
  CHECK(gset->is_continuing());

  global.edge_colors = 2;
  auto gflip = global_flip_environment(global);
  CHECK(gflip->action_number() == 20);
  global.flip_only = true;
  auto gfliponly = global_flip_environment(global);
  CHECK(gfliponly->action_number() == 10);

  LocalOptions local;
  local.graph_invariant = registry_invariant("mono_triangles");
  local.graph_order = 4;
  local.edge_colors = 3;
  local.kind = GraphKind{true, false};
  local.episode_length = 6;
  auto lset = local_set_environment(local);
  CHECK(lset->state_length() == 2 * 12 + 4);
  CHECK(lset->action_number() == 12);
  CHECK(lset->is_continuing());

  local.edge_colors = 2;
  auto lflip = local_flip_environment(local);
  CHECK(lflip->action_number() == 8);
  local.flip_only = true;
  auto lfliponly = local_flip_environment(local);
  CHECK(lfliponly->action_number() == 4);
}

TEST_CASE("linear build walkthrough: four parallel episodes, clockwise") {
  auto env = example2_environment();
  auto reset = env->reset_batch(4);
  REQUIRE(reset.states.shape == std::vector<std::size_t>({4, 24}));
  REQUIRE(reset.scores.has_value());
  CHECK(*reset.scores == ScoreVector({0.0f, 0.0f, 0.0f, 0.0f}));
  CHECK(reset.status == BatchStatus::InProgress);
  for (std::size_t b = 0; b < 4; ++b)
    for (std::size_t i = 0; i < 24; ++i)
      CHECK(reset.states.data[b * 24 + i] == (i == 18 ? 1 : 0));

  std::vector<std::vector<std::int32_t>> actions{{0, 0, 0, 1}, {3, 2, 1, 3}, {0, 3, 0, 1},
                                                 {1, 0, 2, 2}, {1, 2, 3, 0}, {2, 0, 0, 1}};
  std::vector<ScoreVector> expected_scores{{1, 1, 1, 0}, {1, 1, 1, 0}, {4, 1, 4, 0},
                                           {4, 4, 4, 0}, {4, 4, 4, 1}, {4, 9, 9, 1}};
  StepResult step;
  for (std::size_t t = 0; t < actions.size(); ++t) {
    step = env->step_batch(actions[t]);
    REQUIRE(step.scores.has_value());
    CHECK(*step.scores == expected_scores[t]);
    CHECK(step.status ==
          (t + 1 == actions.size() ? BatchStatus::Terminated : BatchStatus::InProgress));
    // Position one-hot: bit t+1 of the final block, all-zero when done.
    for (std::size_t i = 18; i < 24; ++i)
      CHECK(step.states.data[i] == (i == 18 + t + 1 ? 1 : 0));

    if (t == 3) {
      auto partial = env->state_batch_to_graph_batch(step.states);
      CHECK(partial.color_at(0, 0, 0) == 0);
      CHECK(partial.color_at(0, 0, 1) == 3);
      CHECK(partial.color_at(0, 1, 1) == 0);
      CHECK(partial.color_at(0, 0, 2) == 1);
      CHECK(partial.color_at(0, 1, 2) == 4);  // uncolored
      CHECK(partial.color_at(0, 2, 2) == 4);
      CHECK_FALSE(partial.is_fully_colored());
    }
  }

  auto final_graphs = env->state_batch_to_graph_batch(step.states);
  CHECK(final_graphs.is_fully_colored());
  U8Array expected({4, 3, 3}, std::vector<std::uint8_t>{0, 3, 1, 3, 0, 1, 1, 1, 2,  //
                                                        0, 2, 0, 2, 3, 2, 0, 2, 0,  //
                                                        0, 1, 2, 1, 0, 3, 2, 3, 0,  //
                                                        1, 3, 2, 3, 1, 0, 2, 0, 1});
  CHECK(final_graphs.adjacency_colors() == expected);
  CHECK_THROWS_AS(env->step_batch({0, 0, 0, 0}), std::logic_error);
}

TEST_CASE("global flip walkthrough: sparse scores arrive only at truncation") {
  GlobalOptions options;
  options.graph_invariant = registry_invariant("degree_square_sum");
  options.graph_order = 5;
  options.episode_length = 4;
  options.flip_only = true;
  options.setting = sparse_setting();
  options.generator = fixed_graph_generator(monochromatic_graph(5, 1));
  auto env = global_flip_environment(options);

  auto reset = env->reset_batch(2);
  CHECK_FALSE(reset.scores.has_value());
  CHECK(reset.status == BatchStatus::InProgress);

  auto s1 = env->step_batch({0, 2});
  CHECK_FALSE(s1.scores.has_value());
  auto s2 = env->step_batch({1, 7});
  CHECK_FALSE(s2.scores.has_value());
  auto s3 = env->step_batch({5, 1});
  CHECK_FALSE(s3.scores.has_value());
  auto s4 = env->step_batch({9, 7});
  CHECK(s4.status == BatchStatus::Truncated);
  REQUIRE(s4.scores.has_value());
  CHECK(*s4.scores == ScoreVector({30.0f, 54.0f}));

  auto graphs = env->state_batch_to_graph_batch(s4.states);
  U8Array expected({2, 5, 5}, std::vector<std::uint8_t>{
                                  0, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0,
                                  1, 0, 0, 1, 1, 1, 0, 0,  //
                                  0, 1, 0, 0, 1, 1, 0, 1, 1, 1, 0, 1, 0, 1, 1, 0, 1,
                                  1, 0, 1, 1, 1, 1, 1, 0});
  CHECK(graphs.adjacency_colors() == expected);
}

TEST_CASE("local set walkthrough: dense triangle counts along a walk") {
  LocalOptions options;
  options.graph_invariant = registry_invariant("mono_triangles");
  options.graph_order = 4;
  options.edge_colors = 3;
  options.kind = GraphKind{true, false};
  options.episode_length = 6;
  options.starting_vertex = 0;
  auto env = local_set_environment(options);

  auto reset = env->reset_batch(1);
  REQUIRE(reset.scores.has_value());
  CHECK(*reset.scores == ScoreVector({0.0f}));
  // Vertex one-hot sits after the two color blocks (2 * 12 bits).
  CHECK(reset.states.data[24] == 1);
  CHECK(reset.states.data[25] == 0);

  auto mask = env->action_mask();
  REQUIRE(mask.shape == std::vector<std::size_t>({1, 12}));
  for (int a = 0; a < 12; ++a) CHECK(mask.data[a] == (a % 4 == 0 ? 0 : 1));

  std::vector<std::int32_t> walk{6, 7, 4, 5, 7, 8};
  ScoreVector expected{0.0f, 0.0f, 1.0f, 1.0f, 2.0f, 0.0f};
  StepResult step;
  for (std::size_t t = 0; t < walk.size(); ++t) {
    step = env->step_batch({walk[t]});
    REQUIRE(step.scores.has_value());
    CHECK((*step.scores)[0] == expected[t]);
  }
  CHECK(step.status == BatchStatus::Truncated);

  auto graphs = env->state_batch_to_graph_batch(step.states);
  CHECK(graphs.color_at(0, 0, 2) == 1);
  CHECK(graphs.color_at(0, 2, 3) == 1);
  CHECK(graphs.color_at(0, 3, 0) == 2);
  CHECK(graphs.color_at(0, 0, 1) == 1);
  CHECK(graphs.color_at(0, 1, 3) == 1);
  CHECK(graphs.color_at(0, 2, 0) == 0);
  CHECK(graphs.color_at(0, 1, 0) == 0);
}

TEST_CASE("linear position advances one slot per step") {
  for (bool flip : {false, true}) {
    LinearOptions options;
    options.graph_invariant = registry_invariant("degree_square_sum");
    options.graph_order = 5;
    options.generator = flip ? fixed_graph_generator(monochromatic_graph(5, 1)) : nullptr;
    auto env = flip ? linear_flip_environment(options) : linear_build_environment(options);
    std::size_t l = 10;
    std::mt19937_64 rng(7);
    auto result = env->reset_batch(3);
    std::size_t base = l;  // k=2: one color block, then the position block
    for (std::size_t t = 0; t < l; ++t) {
      for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t i = 0; i < l; ++i)
          CHECK(result.states.data[b * env->state_length() + base + i] == (i == t ? 1 : 0));
      std::vector<std::int32_t> actions;
      for (int b = 0; b < 3; ++b)
        actions.push_back(static_cast<std::int32_t>(rng() % 2));
      result = env->step_batch(actions);
    }
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t i = 0; i < l; ++i)
        CHECK(result.states.data[b * env->state_length() + l + i] == 0);
    CHECK(result.status == BatchStatus::Terminated);
  }
}

TEST_CASE("linear set can replay any target coloring") {
  std::mt19937_64 rng(100);
  for (int rep = 0; rep < 30; ++rep) {
    GraphKind kind{rep % 2 == 1, rep % 4 >= 2};
    int k = 2 + rep % 3;
    int n = 3 + rep % 4;
    EdgeOrdering ordering = rep % 2 ? EdgeOrdering::Clockwise : EdgeOrdering::RowMajor;
    auto target = oracles::random_graph(rng, k, kind, n, false);

    LinearOptions options;
    options.graph_invariant = registry_invariant("degree_square_sum");
    options.graph_order = n;
    options.edge_colors = k;
    options.kind = kind;
    options.ordering = ordering;
    auto env = linear_set_environment(options);
    env->reset_batch(1);
    StepResult last;
    for (auto [u, v] : edge_slot_order(n, kind, ordering))
      last = env->step_batch({target.color_at(0, u, v)});
    CHECK(last.status == BatchStatus::Terminated);
    auto decoded = env->state_batch_to_graph_batch(last.states);
    CHECK(decoded.select(0) == target);
  }
}

TEST_CASE("linear flip: all-keep preserves, all-flip inverts") {
  LinearOptions options;
  options.graph_invariant = registry_invariant("degree_square_sum");
  options.graph_order = 4;
  options.generator = fixed_graph_generator(monochromatic_graph(4, 0));
  auto env = linear_flip_environment(options);

  env->reset_batch(1);
  StepResult last;
  for (std::size_t t = 0; t < env->episode_length(); ++t) last = env->step_batch({0});
  CHECK(env->state_batch_to_graph_batch(last.states).select(0) == monochromatic_graph(4, 0));

  env->reset_batch(1);
  for (std::size_t t = 0; t < env->episode_length(); ++t) last = env->step_batch({1});
  CHECK(env->state_batch_to_graph_batch(last.states).select(0) == monochromatic_graph(4, 1));
}

TEST_CASE("global set encoding targets any slot and color") {
  GlobalOptions options;
  options.graph_invariant = registry_invariant("degree_square_sum");
  options.graph_order = 4;
  options.edge_colors = 3;
  options.episode_length = 100;
  auto env = global_set_environment(options);
  env->reset_batch(1);
  std::size_t l = 6;
  auto order = edge_slot_order(4, GraphKind{}, EdgeOrdering::RowMajor);
  for (std::size_t i = 0; i < l; ++i)
    for (int c = 0; c < 3; ++c) {
      auto result = env->step_batch({static_cast<std::int32_t>(c * l + i)});
      auto g = env->state_batch_to_graph_batch(result.states);
      auto [u, v] = order[i];
      CHECK(g.color_at(0, u, v) == c);
    }
}

TEST_CASE("flip involution restores the decoded graph") {
  std::mt19937_64 rng(4242);
  int cases = 0;
  // Global flip, both variants.
  for (bool flip_only : {true, false}) {
    GlobalOptions options;
    options.graph_invariant = registry_invariant("degree_square_sum");
    options.graph_order = 6;
    options.episode_length = 1000;
    options.flip_only = flip_only;
    options.generator = bernoulli_graph_generator(GraphKind{}, 6, 0.5, rng());
    auto env = global_flip_environment(options);
    auto result = env->reset_batch(2);
    std::size_t l = 15;
    for (int rep = 0; rep < 200; ++rep) {
      auto before = graph_colors(env->state_batch_to_graph_batch(result.states));
      std::int32_t slot = static_cast<std::int32_t>(rng() % l);
      std::int32_t action = flip_only ? slot : static_cast<std::int32_t>(l) + slot;
      env->step_batch({action, action});
      result = env->step_batch({action, action});
      auto after = graph_colors(env->state_batch_to_graph_batch(result.states));
      REQUIRE(before == after);
      cases += 2;
    }
  }
  // Local flip: traverse an edge and come straight back.
  for (bool flip_only : {true, false}) {
    LocalOptions options;
    options.graph_invariant = registry_invariant("degree_square_sum");
    options.graph_order = 6;
    options.episode_length = 1000;
    options.flip_only = flip_only;
    options.starting_vertex = 2;
    options.generator = bernoulli_graph_generator(GraphKind{}, 6, 0.5, rng());
    auto env = local_flip_environment(options);
    auto result = env->reset_batch(1);
    int current = 2;
    for (int rep = 0; rep < 200; ++rep) {
      auto before = graph_colors(env->state_batch_to_graph_batch(result.states));
      int dest = static_cast<int>(rng() % 6);
      if (dest == current) dest = (dest + 1) % 6;
      std::int32_t offset = flip_only ? 0 : 6;
      env->step_batch({offset + dest});
      result = env->step_batch({offset + current});
      auto after = graph_colors(env->state_batch_to_graph_batch(result.states));
      REQUIRE(before == after);
      ++cases;
    }
  }
  CHECK(cases >= 1000);
}

TEST_CASE("dense delta scores match plain dense scores") {
  auto inv = registry_invariant("degree_square_sum");
  std::mt19937_64 rng(77);
  int cases = 0;
  for (int rep = 0; rep < 12; ++rep) {
    GlobalOptions options;
    options.graph_invariant = inv;
    options.graph_order = 5;
    options.episode_length = 20;
    options.generator = uniform_random_generator(2, GraphKind{}, 5, 1000 + rep);
    auto plain = global_set_environment(options);
    options.generator = uniform_random_generator(2, GraphKind{}, 5, 1000 + rep);
    options.setting = delta_setting(inv);
    auto incremental = global_set_environment(options);

    auto r1 = plain->reset_batch(3);
    auto r2 = incremental->reset_batch(3);
    REQUIRE(*r1.scores == *r2.scores);
    for (int t = 0; t < 20; ++t) {
      std::vector<std::int32_t> actions;
      for (int b = 0; b < 3; ++b)
        actions.push_back(static_cast<std::int32_t>(rng() % 20));
      auto s1 = plain->step_batch(actions);
      auto s2 = incremental->step_batch(actions);
      REQUIRE(s1.states == s2.states);
      for (std::size_t b = 0; b < 3; ++b) {
        REQUIRE(std::abs((*s1.scores)[b] - (*s2.scores)[b]) <= 1e-6f);
        ++cases;
      }
    }
  }
  CHECK(cases >= 500);
}

TEST_CASE("dense scores telescope") {
  auto inv = registry_invariant("degree_square_sum");
  std::mt19937_64 rng(78);
  int cases = 0;
  for (int rep = 0; rep < 20; ++rep) {
    GlobalOptions options;
    options.graph_invariant = inv;
    options.graph_order = 6;
    options.episode_length = 15;
    options.generator = bernoulli_graph_generator(GraphKind{}, 6, 0.4, 50 + rep);
    auto env = global_set_environment(options);
    auto result = env->reset_batch(4);
    ScoreVector first = *result.scores;
    std::vector<ScoreVector> all{first};
    for (int t = 0; t < 15; ++t) {
      std::vector<std::int32_t> actions;
      for (int b = 0; b < 4; ++b)
        actions.push_back(static_cast<std::int32_t>(rng() % 30));
      result = env->step_batch(actions);
      all.push_back(*result.scores);
    }
    for (std::size_t b = 0; b < 4; ++b) {
      double sum = 0.0;
      for (std::size_t t = 1; t < all.size(); ++t) sum += all[t][b] - all[t - 1][b];
      REQUIRE(std::abs(sum - (all.back()[b] - all.front()[b])) <= 1e-5);
      ++cases;
    }
    cases += 15;  // per-step scores checked above via *result.scores presence
  }
  CHECK(cases >= 300);
}

TEST_CASE("identical seeds and actions reproduce runs exactly") {
  auto run = [](std::uint64_t seed) {
    LocalOptions options;
    options.graph_invariant = registry_invariant("degree_square_sum");
    options.graph_order = 5;
    options.episode_length = 12;
    options.generator = uniform_random_generator(2, GraphKind{}, 5, seed);
    auto env = local_set_environment(options);
    std::mt19937_64 rng(seed + 1);
    std::vector<StepResult> results;
    results.push_back(env->reset_batch(3));
    for (int t = 0; t < 12; ++t) {
      std::vector<std::int32_t> actions;
      auto mask = env->action_mask();
      for (int b = 0; b < 3; ++b) {
        std::int32_t a;
        do {
          a = static_cast<std::int32_t>(rng() % 10);
        } while (!mask.data[static_cast<std::size_t>(b) * 10 + a]);
        actions.push_back(a);
      }
      results.push_back(env->step_batch(actions));
    }
    return results;
  };
  auto a = run(555);
  auto b = run(555);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].states == b[i].states);
    CHECK(a[i].status == b[i].status);
    REQUIRE(a[i].scores.has_value() == b[i].scores.has_value());
    if (a[i].scores)
      CHECK(std::memcmp(a[i].scores->data(), b[i].scores->data(),
                        a[i].scores->size() * sizeof(float)) == 0);
  }
  auto c = run(556);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.size() && !any_difference; ++i)
    any_difference = !(a[i].states == c[i].states);
  CHECK(any_difference);
}

TEST_CASE("masks are sound: unmasked actions step, masked actions throw") {
  std::mt19937_64 rng(31337);
  int cases = 0;
  for (int rep = 0; rep < 40; ++rep) {
    LocalOptions options;
    options.graph_invariant = registry_invariant("degree_square_sum");
    options.graph_order = 4 + rep % 3;
    options.edge_colors = 2 + rep % 2;
    options.episode_length = 9;
    options.starting_vertex = rep % options.graph_order;
    options.generator =
        uniform_random_generator(options.edge_colors, GraphKind{}, options.graph_order, rep);
    int n = options.graph_order;
    int k = options.edge_colors;
    auto env = local_set_environment(options);
    env->reset_batch(2);
    std::vector<int> current(2, options.starting_vertex);
    for (int t = 0; t < 9; ++t) {
      auto mask = env->action_mask();
      for (std::size_t b = 0; b < 2; ++b)
        for (int a = 0; a < k * n; ++a) {
          bool expected = a % n != current[b];
          REQUIRE(mask.data[b * static_cast<std::size_t>(k) * n + a] == (expected ? 1 : 0));
          ++cases;
        }
      // A masked action (self-move) throws and leaves the batch usable.
      CHECK_THROWS_WITH(
          env->step_batch({current[0], static_cast<std::int32_t>(current[1])}),
          doctest::Contains("masked"));
      std::vector<std::int32_t> actions;
      for (std::size_t b = 0; b < 2; ++b) {
        int dest = static_cast<int>(rng() % n);
        if (dest == current[b]) dest = (dest + 1) % n;
        int color = static_cast<int>(rng() % k);
        actions.push_back(static_cast<std::int32_t>(color * n + dest));
        current[b] = dest;
      }
      env->step_batch(actions);
    }
  }
  CHECK(cases >= 1000);

  // Loops allowed: nothing is masked, self-moves work.
  LocalOptions loops;
  loops.graph_invariant = registry_invariant("degree_square_sum");
  loops.graph_order = 4;
  loops.kind = GraphKind{false, true};
  loops.episode_length = 3;
  auto env = local_set_environment(loops);
  env->reset_batch(1);
  auto mask = env->action_mask();
  for (std::size_t i = 0; i < mask.data.size(); ++i) CHECK(mask.data[i] == 1);
  auto result = env->step_batch({0});  // recolor the loop at vertex 0 with color 0
  CHECK(result.status == BatchStatus::InProgress);
}

TEST_CASE("phi is pure: probing mid-episode does not perturb the run") {
  auto run = [](bool probe) {
    auto env = example2_environment();
    std::vector<std::vector<std::int32_t>> actions{{0, 0, 0, 1}, {3, 2, 1, 3}, {0, 3, 0, 1},
                                                   {1, 0, 2, 2}, {1, 2, 3, 0}, {2, 0, 0, 1}};
    StepResult last = env->reset_batch(4);
    for (const auto& batch : actions) {
      if (probe) {
        env->state_batch_to_graph_batch(last.states);
        env->action_mask();
        env->status();
      }
      last = env->step_batch(batch);
    }
    return last;
  };
  auto with_probe = run(true);
  auto without = run(false);
  CHECK(with_probe.states == without.states);
  CHECK(*with_probe.scores == *without.scores);
}

TEST_CASE("phi rejects malformed states") {
  auto env = example2_environment();
  auto result = env->reset_batch(1);

  CHECK_THROWS_WITH(env->state_batch_to_graph_batch(U8Array({1, 5}, 0)),
                    doctest::Contains("shape"));

  U8Array two_colors = result.states;
  two_colors.data[0] = 1;  // slot 0 color 1
  two_colors.data[6] = 1;  // slot 0 color 2 as well
  CHECK_THROWS_WITH(env->state_batch_to_graph_batch(two_colors),
                    doctest::Contains("multiple color bits"));

  U8Array two_positions = result.states;
  two_positions.data[19] = 1;  // bits 18 and 19 both set
  CHECK_THROWS_WITH(env->state_batch_to_graph_batch(two_positions),
                    doctest::Contains("one-hot"));

  U8Array beyond = result.states;
  beyond.data[3] = 1;  // slot 3 colored but position still 0
  CHECK_THROWS_WITH(env->state_batch_to_graph_batch(beyond), doctest::Contains("position"));

  U8Array bad_entry = result.states;
  bad_entry.data[0] = 2;
  CHECK_THROWS_WITH(env->state_batch_to_graph_batch(bad_entry),
                    doctest::Contains("0 or 1"));

  // All-zero color bits in a Global Set state decode to monochromatic 0.
  GlobalOptions options;
  options.graph_invariant = registry_invariant("degree_square_sum");
  options.graph_order = 4;
  options.edge_colors = 3;
  options.episode_length = 1;
  auto gset = global_set_environment(options);
  auto zeros = gset->state_batch_to_graph_batch(U8Array({1, 12}, 0));
  CHECK(zeros.select(0) == monochromatic_graph(4, 0, 3));
}

TEST_CASE("misuse errors: unreset, finished, and malformed steps") {
  auto env = example2_environment();
  CHECK_THROWS_AS(env->step_batch({0}), std::logic_error);
  CHECK_THROWS_AS(env->status(), std::logic_error);
  CHECK_THROWS_AS(env->action_mask(), std::logic_error);

  env->reset_batch(2);
  CHECK(env->status() == BatchStatus::InProgress);
  CHECK_THROWS_WITH(env->step_batch({0}), doctest::Contains("expected 2 actions"));
  CHECK_THROWS_WITH(env->step_batch({0, 4}), doctest::Contains("out of range"));
  CHECK_THROWS_WITH(env->step_batch({-1, 0}), doctest::Contains("out of range"));

  CHECK_THROWS_WITH(env->reset_batch(0), doctest::Contains("positive"));
}

TEST_CASE("reset discards the running batch") {
  auto env = example2_environment();
  env->reset_batch(2);
  env->step_batch({1, 2});
  env->step_batch({1, 2});
  auto fresh = env->reset_batch(3);
  CHECK(fresh.status == BatchStatus::InProgress);
  CHECK(env->batch_size() == 3);
  for (std::size_t b = 0; b < 3; ++b)
    for (std::size_t i = 0; i < 24; ++i)
      CHECK(fresh.states.data[b * 24 + i] == (i == 18 ? 1 : 0));
}

TEST_CASE("setting can change between steps") {
  auto inv = registry_invariant("degree_square_sum");
  GlobalOptions options;
  options.graph_invariant = inv;
  options.graph_order = 4;
  options.episode_length = 6;
  auto env = global_set_environment(options);
  env->reset_batch(1);

  auto dense = env->step_batch({3});
  CHECK(dense.scores.has_value());

  env->set_setting(sparse_setting());
  auto sparse = env->step_batch({3});
  CHECK_FALSE(sparse.scores.has_value());

  env->set_setting(CommunicationSetting{});
  auto back = env->step_batch({4});
  CHECK(back.scores.has_value());

  // Switching onto a difference function forces one full re-anchor first:
  // a delta that always reports zero only freezes scores after that.
  CommunicationSetting zero_delta;
  zero_delta.delta = [](const EdgeColoredGraph& prev, const EdgeColoredGraph&) {
    return ScoreVector(prev.batch_size().value_or(1), 0.0f);
  };
  env->set_setting(zero_delta);
  auto anchored = env->step_batch({9});  // full evaluation (slot 1 -> color 1)
  auto frozen = env->step_batch({10});   // delta path, score unchanged
  REQUIRE(anchored.scores.has_value());
  REQUIRE(frozen.scores.has_value());
  ScoreVector honest = inv.f(env->state_batch_to_graph_batch(anchored.states));
  CHECK(*anchored.scores == honest);
  CHECK(*frozen.scores == *anchored.scores);
}

TEST_CASE("sparse linear episodes score exactly once, at termination") {
  LinearOptions options;
  options.graph_invariant = registry_invariant("degree_square_sum");
  options.graph_order = 3;
  options.setting = sparse_setting();
  auto env = linear_build_environment(options);
  auto result = env->reset_batch(2);
  CHECK_FALSE(result.scores.has_value());
  for (std::size_t t = 0; t < env->episode_length(); ++t) {
    result = env->step_batch({1, 0});
    if (t + 1 < env->episode_length())
      CHECK_FALSE(result.scores.has_value());
  }
  CHECK(result.status == BatchStatus::Terminated);
  REQUIRE(result.scores.has_value());
  CHECK(*result.scores == ScoreVector({12.0f, 0.0f}));  // K3 vs empty
}

TEST_CASE("graph generators") {
  SUBCASE("fixed replicates one graph") {
    auto gen = fixed_graph_generator(cycle_graph(5));
    auto batch = gen(3);
    CHECK(batch.batch_size() == std::optional<std::size_t>(3));
    for (std::size_t b = 0; b < 3; ++b) CHECK(batch.select(b) == cycle_graph(5));
    CHECK_THROWS_WITH(fixed_graph_generator(batch), doctest::Contains("single graph"));
    U8Array partial({2, 2}, std::vector<std::uint8_t>{0, 2, 2, 0});
    auto g = make_graph(GraphFormat::AdjacencyColors, partial, 2, GraphKind{});
    CHECK_THROWS_WITH(fixed_graph_generator(g), doctest::Contains("fully colored"));
  }

  SUBCASE("uniform_random is seed-reproducible and respects shape") {
    auto a = uniform_random_generator(3, GraphKind{true, false}, 5, 99);
    auto b = uniform_random_generator(3, GraphKind{true, false}, 5, 99);
    auto c = uniform_random_generator(3, GraphKind{true, false}, 5, 98);
    auto batch_a = a(4);
    auto batch_b = b(4);
    CHECK(batch_a == batch_b);
    CHECK(batch_a.is_fully_colored());
    CHECK(batch_a.kind().is_directed);
    CHECK_FALSE(c(4) == batch_a);
  }

  SUBCASE("bernoulli extremes") {
    auto empty = bernoulli_graph_generator(GraphKind{}, 6, 0.0, 1)(2);
    auto full = bernoulli_graph_generator(GraphKind{}, 6, 1.0, 1)(2);
    for (std::size_t b = 0; b < 2; ++b) {
      CHECK(empty.select(b) == empty_graph(6));
      CHECK(full.select(b) == complete_graph(6));
    }
    CHECK_THROWS_WITH(bernoulli_graph_generator(GraphKind{}, 6, 1.5, 1),
                      doctest::Contains("[0, 1]"));
  }

  SUBCASE("callback validation") {
    auto good = callback_graph_generator(
        [](std::size_t b) {
          return EdgeColoredGraph::stack(
              std::vector<EdgeColoredGraph>(b, complete_graph(4)));
        },
        2, GraphKind{}, 4);
    CHECK(good(2).batch_size() == std::optional<std::size_t>(2));

    auto wrong_shape = callback_graph_generator(
        [](std::size_t b) {
          return EdgeColoredGraph::stack(
              std::vector<EdgeColoredGraph>(b, complete_graph(5)));
        },
        2, GraphKind{}, 4);
    CHECK_THROWS_WITH(wrong_shape(2), doctest::Contains("different shape"));

    auto wrong_batch = callback_graph_generator(
        [](std::size_t) {
          return EdgeColoredGraph::stack(
              std::vector<EdgeColoredGraph>(3, complete_graph(4)));
        },
        2, GraphKind{}, 4);
    CHECK_THROWS_WITH(wrong_batch(2), doctest::Contains("batch size"));
  }

  SUBCASE("environment rejects mismatched generator output") {
    LinearOptions options;
    options.graph_invariant = registry_invariant("degree_square_sum");
    options.graph_order = 5;
    options.generator = fixed_graph_generator(complete_graph(4));  // wrong order
    auto env = linear_set_environment(options);
    CHECK_THROWS_WITH(env->reset_batch(2), doctest::Contains("does not match"));
  }
}

TEST_CASE("non-finite invariant scores are rejected") {
  Invariant bad;
  bad.name = "nan_everywhere";
  bad.f = [](const EdgeColoredGraph& batch) {
    return ScoreVector(batch.batch_size().value_or(1),
                       std::numeric_limits<float>::quiet_NaN());
  };
  LinearOptions options;
  options.graph_invariant = bad;
  options.graph_order = 3;
  auto env = linear_build_environment(options);
  CHECK_THROWS_AS(env->reset_batch(1), std::runtime_error);
}
