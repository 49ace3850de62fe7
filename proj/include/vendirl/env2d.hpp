#pragma once

#include "vendirl/numerics.hpp"
#include "vendirl/rng.hpp"

namespace vendirl {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Bounded 2D point world. Observations are raw positions (D = 2).
struct EnvConfig {
  double min_x = 0.0, min_y = 0.0, max_x = 1.0, max_y = 1.0;
  Vec2 start{0.5, 0.5};
  double max_action_norm = 0.05;
  int episode_len = 64;
  double action_noise_std = 0.0;

  void validate() const;
};

struct EnvState {
  Vec2 position;
  int step_index = 0;
};

class PolicySkillSet;

EnvState env_reset(const EnvConfig& cfg);

/// Clips the action to max_action_norm, adds optional truncated (+-3 sigma)
/// Gaussian noise, clamps the result into bounds.
EnvState env_step(const EnvState& state, Vec2 action, const EnvConfig& cfg, Rng& rng);

/// One goal-conditioned episode; returns T+1 observations including the
/// start state.
Trajectory rollout(const PolicySkillSet& policy, int goal, const EnvConfig& cfg, Rng& rng);

}  // namespace vendirl
