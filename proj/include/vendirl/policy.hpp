#pragma once

#include <span>
#include <string>
#include <vector>

#include "vendirl/mlp.hpp"
#include "vendirl/rng.hpp"

namespace vendirl {

struct PolicyConfig {
  std::vector<int> hidden{64, 64};
  double log_std_min = -5.0;
  double log_std_max = 1.0;
};

struct ActionSample {
  std::vector<double> action;
  double logprob = 0.0;
};

/// Goal-conditioned diagonal-Gaussian policy over n skills. One shared
/// network takes state (+) one-hot goal and outputs per-dimension action
/// mean and log-std.
class PolicySkillSet {
 public:
  PolicySkillSet() = default;
  PolicySkillSet(int n_skills, int obs_dim, int action_dim, const PolicyConfig& cfg, Rng& rng);

  int n_skills() const { return n_; }
  int obs_dim() const { return obs_dim_; }
  int action_dim() const { return action_dim_; }
  const PolicyConfig& config() const { return cfg_; }

  /// Samples an action; logprob is the pre-clip Gaussian log-density.
  ActionSample act(std::span<const double> obs, int goal, Rng& rng) const;

  /// Mean and clamped log-std heads for (obs, goal).
  void heads(std::span<const double> obs, int goal, std::span<double> mean,
             std::span<double> log_std) const;

  void save(const std::string& path) const;
  static PolicySkillSet load(const std::string& path);

  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }

 private:
  friend double logprob_objective(const PolicySkillSet&, const struct EpisodeBatch&,
                                  std::span<const double>, std::span<double>);
  std::vector<double> build_input(std::span<const double> obs, int goal) const;

  int n_ = 0;
  int obs_dim_ = 0;
  int action_dim_ = 0;
  PolicyConfig cfg_;
  Mlp net_;
};

struct StepRecord {
  std::vector<double> obs;
  int goal = 0;
  std::vector<double> action;  // raw sampled action, before env clipping
  double reward = 0.0;
  double logprob = 0.0;
};

struct EpisodeRecord {
  std::vector<StepRecord> steps;
};

/// One epoch of experience across all scenes.
struct EpisodeBatch {
  std::vector<EpisodeRecord> episodes;
};

/// Credit baseline subtracted from discounted returns before the optional
/// batch whitening. episode_mean removes per-episode reward offsets (scene
/// kernels differ in level), leaving only within-episode structure.
enum class ReturnBaseline { none, episode_mean };

struct ReinforceHyper {
  double learning_rate = 3e-4;
  double discount = 0.99;
  double grad_clip_norm = 5.0;
  bool whiten_returns = true;
  ReturnBaseline baseline = ReturnBaseline::none;
};

/// Surrogate objective sum_t w_t log pi(a_t | s_t, g_t) and (optionally) its
/// parameter gradient; the independent route used by finite-difference
/// checks. `weights` is flat over all steps in episode order.
double logprob_objective(const PolicySkillSet& policy, const EpisodeBatch& batch,
                         std::span<const double> weights, std::span<double> grad_out);

/// One REINFORCE ascent step on discounted, per-batch-whitened returns with
/// global-norm gradient clipping. Returns the updated policy; the input is
/// untouched (and returned unchanged if the gradient is non-finite).
PolicySkillSet reinforce_update(const PolicySkillSet& policy, const EpisodeBatch& batch,
                                const ReinforceHyper& hyper);

/// Discounted returns for every step of the batch, with the configured
/// baseline subtracted and whitened per batch when requested (exposed for
/// tests and the trainer).
std::vector<double> batch_returns(const EpisodeBatch& batch, double discount, bool whiten,
                                  ReturnBaseline baseline = ReturnBaseline::none);

}  // namespace vendirl
