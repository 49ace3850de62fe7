#include <cmath>

#include "doctest.h"
#include "test_util.hpp"
#include "vendirl/env2d.hpp"
#include "vendirl/policy.hpp"

using namespace vendirl;

namespace {

PolicySkillSet make_policy(std::uint64_t seed = 7, int n = 4) {
  Rng rng(seed);
  return PolicySkillSet(n, 2, 2, PolicyConfig{}, rng);
}

}  // namespace

TEST_SUITE("env2d") {

TEST_CASE("reset") {
  EnvConfig cfg;
  EnvState s = env_reset(cfg);
  CHECK(s.position.x == 0.5);
  CHECK(s.position.y == 0.5);
  CHECK(s.step_index == 0);

  cfg.start = {0.1, 0.1};
  EnvState t = env_reset(cfg);
  CHECK(t.position.x == 0.1);
  CHECK(t.position.y == 0.1);

  EnvState u = env_reset(cfg);
  CHECK(u.position.x == t.position.x);
  CHECK(u.position.y == t.position.y);
}

TEST_CASE("config validation") {
  EnvConfig bad;
  bad.start = {2.0, 0.5};
  CHECK_THROWS_AS(bad.validate(), Error);
  EnvConfig bad2;
  bad2.max_action_norm = 0.0;
  CHECK_THROWS_AS(bad2.validate(), Error);
  EnvConfig bad3;
  bad3.episode_len = 0;
  CHECK_THROWS_AS(bad3.validate(), Error);
}

TEST_CASE("step: identity action, clamping, clipping") {
  EnvConfig cfg;
  Rng rng(1);

  EnvState s = env_reset(cfg);
  EnvState s1 = env_step(s, {0.0, 0.0}, cfg, rng);
  CHECK(s1.position.x == 0.5);
  CHECK(s1.position.y == 0.5);
  CHECK(s1.step_index == 1);

  EnvState near_wall{{0.99, 0.5}, 0};
  EnvState clamped = env_step(near_wall, {0.05, 0.0}, cfg, rng);
  CHECK(clamped.position.x == 1.0);
  CHECK(clamped.position.y == 0.5);

  EnvState mid{{0.5, 0.5}, 0};
  EnvState clipped = env_step(mid, {0.2, 0.0}, cfg, rng);
  double dx = clipped.position.x - 0.5, dy = clipped.position.y - 0.5;
  CHECK(std::sqrt(dx * dx + dy * dy) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("stepping a finished episode fails") {
  EnvConfig cfg;
  cfg.episode_len = 2;
  Rng rng(2);
  EnvState s = env_reset(cfg);
  s = env_step(s, {0.01, 0.0}, cfg, rng);
  s = env_step(s, {0.01, 0.0}, cfg, rng);
  CHECK_THROWS_AS(env_step(s, {0.01, 0.0}, cfg, rng), Error);
}

TEST_CASE("rollout length and determinism") {
  EnvConfig cfg;
  cfg.episode_len = 1;
  PolicySkillSet policy = make_policy();
  Rng rng(3);
  Trajectory t = rollout(policy, 0, cfg, rng);
  CHECK(t.length() == 2);

  cfg.episode_len = 16;
  Rng r1(42), r2(42);
  Trajectory a = rollout(policy, 2, cfg, r1);
  Trajectory b = rollout(policy, 2, cfg, r2);
  CHECK(a.data == b.data);
}

TEST_CASE("rollouts stay inside bounds with bounded steps") {
  EnvConfig cfg;
  cfg.action_noise_std = 0.01;
  Rng rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    PolicySkillSet policy = make_policy(100 + rep);
    Trajectory t = rollout(policy, rep % policy.n_skills(), cfg, rng);
    for (int s = 0; s < t.length(); ++s) {
      auto obs = t.observation(s);
      CHECK(obs[0] >= cfg.min_x);
      CHECK(obs[0] <= cfg.max_x);
      CHECK(obs[1] >= cfg.min_y);
      CHECK(obs[1] <= cfg.max_y);
    }
    double cap = cfg.max_action_norm + 3.0 * cfg.action_noise_std;
    for (int s = 1; s < t.length(); ++s) {
      auto prev = t.observation(s - 1);
      auto cur = t.observation(s);
      double dx = cur[0] - prev[0], dy = cur[1] - prev[1];
      // noise is truncated at 3 sigma per component, so the cap is exact
      CHECK(std::sqrt(dx * dx + dy * dy) <= cap * (1.0 + 1e-12) + 1e-15);
    }
  }
}

TEST_CASE("zero-mean policy stays near the start on average") {
  EnvConfig cfg;
  PolicySkillSet policy = make_policy(5);
  for (double& p : policy.net().params()) p = 0.0;  // mean 0, log-std 0 everywhere

  Rng rng(6);
  double total = 0.0;
  const int reps = 100;
  for (int rep = 0; rep < reps; ++rep) {
    Trajectory t = rollout(policy, rep % policy.n_skills(), cfg, rng);
    auto last = t.observation(t.length() - 1);
    double dx = last[0] - 0.5, dy = last[1] - 0.5;
    total += std::sqrt(dx * dx + dy * dy);
  }
  // random walk of T steps of length <= L has E[dist] <= sqrt(T) * L
  double bound = std::sqrt(static_cast<double>(cfg.episode_len)) * cfg.max_action_norm;
  CHECK(total / reps < bound);
}

}  // TEST_SUITE
