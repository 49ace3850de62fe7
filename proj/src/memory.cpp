#include "vendirl/memory.hpp"

#include <algorithm>
#include <string>

#include "vendirl/policy.hpp"

namespace vendirl {

SkillMemory::SkillMemory(int n_skills, int episode_len, int obs_dim)
    : n_(n_skills), cap_(episode_len + 1), dim_(obs_dim) {
  if (n_skills < 1 || episode_len < 1 || obs_dim < 1)
    fail(ErrorCode::bad_parameter, "SkillMemory: invalid dimensions");
  data_.assign(static_cast<std::size_t>(n_) * cap_ * dim_, 0.0);
  filled_.assign(static_cast<std::size_t>(n_) * cap_, 0);
}

void SkillMemory::store(int skill, int t, std::span<const double> obs) {
  if (skill < 0 || skill >= n_)
    fail(ErrorCode::index_out_of_range, "SkillMemory::store: skill " + std::to_string(skill));
  if (t < 0 || t >= cap_)
    fail(ErrorCode::index_out_of_range, "SkillMemory::store: time index " + std::to_string(t));
  if (static_cast<int>(obs.size()) != dim_)
    fail(ErrorCode::shape_mismatch, "SkillMemory::store: observation dimension mismatch");
  std::copy(obs.begin(), obs.end(), slot(skill) + static_cast<std::size_t>(t) * dim_);
  filled_[static_cast<std::size_t>(skill) * cap_ + t] = 1;
}

bool SkillMemory::complete(int skill) const {
  for (int t = 0; t < cap_; ++t)
    if (!filled_[static_cast<std::size_t>(skill) * cap_ + t]) return false;
  return true;
}

SkillSample SkillMemory::snapshot_sample(int skill) const {
  if (skill < 0 || skill >= n_)
    fail(ErrorCode::index_out_of_range, "SkillMemory: skill " + std::to_string(skill));
  if (!complete(skill))
    fail(ErrorCode::unfilled_memory,
         "SkillMemory: slot " + std::to_string(skill) + " has unfilled entries");
  Trajectory t(dim_);
  const double* begin = slot(skill);
  t.data.assign(begin, begin + static_cast<std::size_t>(cap_) * dim_);
  SkillSample sample;
  sample.trajectories.push_back(std::move(t));
  return sample;
}

std::vector<SkillSample> SkillMemory::snapshot_samples() const {
  std::vector<SkillSample> samples;
  samples.reserve(n_);
  for (int s = 0; s < n_; ++s) samples.push_back(snapshot_sample(s));
  return samples;
}

void SkillMemory::refill(const PolicySkillSet& policy, const EnvConfig& cfg, Rng& rng) {
  if (cfg.episode_len + 1 != cap_)
    fail(ErrorCode::shape_mismatch, "SkillMemory::refill: episode length does not match capacity");
  for (int skill = 0; skill < n_; ++skill) {
    Trajectory traj = rollout(policy, skill, cfg, rng);
    for (int t = 0; t < cap_; ++t) store(skill, t, traj.observation(t));
  }
}

}  // namespace vendirl
