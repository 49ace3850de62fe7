#pragma once

#include <span>
#include <vector>

#include "vendirl/mlp.hpp"
#include "vendirl/trainer.hpp"

namespace vendirl {

/// Observation -> skill-logit classifier for the variational MISL baseline.
class Discriminator {
 public:
  Discriminator() = default;
  Discriminator(int obs_dim, int n_skills, const std::vector<int>& hidden, Rng& rng);

  int obs_dim() const { return obs_dim_; }
  int n_skills() const { return n_; }

  std::vector<double> logits(std::span<const double> obs) const;
  std::vector<double> log_softmax(std::span<const double> obs) const;

  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }

 private:
  friend double cross_entropy_loss(const Discriminator&, std::span<const struct DiscExample>,
                                   std::span<double>);
  int obs_dim_ = 0;
  int n_ = 0;
  Mlp net_;
};

struct DiscExample {
  std::vector<double> obs;
  int goal = 0;
};

/// log q(g | s') - log(1/n) with a uniform goal prior; the log-probability is
/// floored (default -20) so confident mistakes cannot produce unbounded
/// penalties.
double misl_reward(const Discriminator& disc, std::span<const double> obs, int goal, int n,
                   double logprob_floor = -20.0);

/// Mean cross-entropy of the batch; accumulates d(loss)/d(params) into
/// grad_out when non-empty (the analytic route checked against finite
/// differences).
double cross_entropy_loss(const Discriminator& disc, std::span<const DiscExample> batch,
                          std::span<double> grad_out);

/// One gradient-descent step on the batch cross-entropy. Input untouched;
/// throws (numerical_failure) on non-finite gradients.
Discriminator discriminator_update(const Discriminator& disc,
                                   std::span<const DiscExample> batch,
                                   const DiscriminatorHyper& hyper);

/// Fraction of fresh rollouts whose final observation is classified as the
/// skill that produced it.
double discriminator_accuracy(const Discriminator& disc, const PolicySkillSet& policy,
                              const EnvConfig& env, int rollouts_per_skill, Rng& rng);

struct MislResult {
  PolicySkillSet policy;
  Discriminator discriminator;
  MetricLog log;
};

/// Same loop shape as trainer.train with the discriminator log-likelihood as
/// the per-step reward and one discriminator update per epoch.
MislResult train_misl(const TrainConfig& cfg, const TrainCallbacks& callbacks = {});

}  // namespace vendirl
