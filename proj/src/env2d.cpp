#include "vendirl/env2d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vendirl/policy.hpp"

namespace vendirl {

void EnvConfig::validate() const {
  if (!(min_x < max_x) || !(min_y < max_y))
    fail(ErrorCode::config_error, "env: bounds must satisfy min < max");
  if (start.x < min_x || start.x > max_x || start.y < min_y || start.y > max_y)
    fail(ErrorCode::config_error, "env: start state outside bounds");
  if (!(max_action_norm > 0.0))
    fail(ErrorCode::config_error, "env: max_action_norm must be positive");
  if (episode_len < 1) fail(ErrorCode::config_error, "env: episode_len must be >= 1");
  if (action_noise_std < 0.0)
    fail(ErrorCode::config_error, "env: action_noise_std must be nonnegative");
}

EnvState env_reset(const EnvConfig& cfg) { return EnvState{cfg.start, 0}; }

EnvState env_step(const EnvState& state, Vec2 action, const EnvConfig& cfg, Rng& rng) {
  if (state.step_index >= cfg.episode_len)
    fail(ErrorCode::episode_over,
         "env_step: episode already finished at step " + std::to_string(state.step_index));

  double norm = std::sqrt(action.x * action.x + action.y * action.y);
  if (norm > cfg.max_action_norm) {
    double scale = cfg.max_action_norm / norm;
    action.x *= scale;
    action.y *= scale;
  }
  if (cfg.action_noise_std > 0.0) {
    // truncated at +-3 sigma so per-step displacement is hard-bounded
    action.x += std::clamp(rng.normal(), -3.0, 3.0) * cfg.action_noise_std;
    action.y += std::clamp(rng.normal(), -3.0, 3.0) * cfg.action_noise_std;
  }

  EnvState next;
  next.position.x = std::clamp(state.position.x + action.x, cfg.min_x, cfg.max_x);
  next.position.y = std::clamp(state.position.y + action.y, cfg.min_y, cfg.max_y);
  next.step_index = state.step_index + 1;
  return next;
}

Trajectory rollout(const PolicySkillSet& policy, int goal, const EnvConfig& cfg, Rng& rng) {
  cfg.validate();
  if (policy.action_dim() != 2 || policy.obs_dim() != 2)
    fail(ErrorCode::shape_mismatch, "rollout: env2d requires a 2D-observation, 2D-action policy");

  EnvState state = env_reset(cfg);
  Trajectory traj(2);
  double obs[2] = {state.position.x, state.position.y};
  traj.append(obs);
  for (int t = 0; t < cfg.episode_len; ++t) {
    ActionSample a = policy.act(obs, goal, rng);
    state = env_step(state, Vec2{a.action[0], a.action[1]}, cfg, rng);
    obs[0] = state.position.x;
    obs[1] = state.position.y;
    traj.append(obs);
  }
  return traj;
}

}  // namespace vendirl
