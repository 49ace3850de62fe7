#pragma once

#include <cstdint>
#include <vector>

#include "vendirl/env2d.hpp"
#include "vendirl/kernels.hpp"

namespace vendirl {

/// Per-scene skill memory: one most-recent trajectory per skill, held in a
/// fixed-capacity time-indexed buffer (capacity = one episode, T+1
/// observations). Writing at time t overwrites the previous episode's entry
/// at t, so a mid-episode buffer mixes the current-episode prefix with the
/// previous episode's suffix.
class SkillMemory {
 public:
  SkillMemory(int n_skills, int episode_len, int obs_dim);

  int n_skills() const { return n_; }
  int capacity() const { return cap_; }
  int obs_dim() const { return dim_; }

  void store(int skill, int t, std::span<const double> obs);
  bool complete(int skill) const;

  /// Value-semantics copy of one slot as an N=1 sample.
  SkillSample snapshot_sample(int skill) const;

  /// All slots as N=1 samples, in skill order.
  std::vector<SkillSample> snapshot_samples() const;

  /// Replaces every slot with a fresh rollout of its skill.
  void refill(const PolicySkillSet& policy, const EnvConfig& cfg, Rng& rng);

 private:
  double* slot(int skill) { return data_.data() + static_cast<std::size_t>(skill) * cap_ * dim_; }
  const double* slot(int skill) const {
    return data_.data() + static_cast<std::size_t>(skill) * cap_ * dim_;
  }

  int n_ = 0;
  int cap_ = 0;  // episode_len + 1
  int dim_ = 0;
  std::vector<double> data_;
  std::vector<std::uint8_t> filled_;
};

}  // namespace vendirl
