#include "vendirl/misl.hpp"

#include <algorithm>
#include <cmath>

#include "engine.hpp"

namespace vendirl {

Discriminator::Discriminator(int obs_dim, int n_skills, const std::vector<int>& hidden,
                             Rng& rng)
    : obs_dim_(obs_dim), n_(n_skills) {
  if (obs_dim < 1 || n_skills < 2)
    fail(ErrorCode::bad_parameter, "Discriminator: need obs_dim >= 1 and n_skills >= 2");
  std::vector<int> sizes;
  sizes.push_back(obs_dim);
  for (int h : hidden) sizes.push_back(h);
  sizes.push_back(n_skills);
  net_ = Mlp(std::move(sizes), rng);
}

std::vector<double> Discriminator::logits(std::span<const double> obs) const {
  if (static_cast<int>(obs.size()) != obs_dim_)
    fail(ErrorCode::shape_mismatch, "Discriminator: observation dimension mismatch");
  std::vector<double> out = net_.forward(obs);
  for (double v : out)
    if (!std::isfinite(v)) fail(ErrorCode::numerical_failure, "Discriminator: non-finite logits");
  return out;
}

std::vector<double> Discriminator::log_softmax(std::span<const double> obs) const {
  std::vector<double> z = logits(obs);
  double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - zmax);
  double log_z = zmax + std::log(sum);
  for (double& v : z) v -= log_z;
  return z;
}

double misl_reward(const Discriminator& disc, std::span<const double> obs, int goal, int n,
                   double logprob_floor) {
  if (goal < 0 || goal >= n)
    fail(ErrorCode::index_out_of_range, "misl_reward: goal out of range");
  if (n != disc.n_skills())
    fail(ErrorCode::shape_mismatch, "misl_reward: skill count does not match discriminator");
  double lp = disc.log_softmax(obs)[goal];
  lp = std::max(lp, logprob_floor);
  return lp + std::log(static_cast<double>(n));  // - log p(g) with uniform p(g)
}

double cross_entropy_loss(const Discriminator& disc, std::span<const DiscExample> batch,
                          std::span<double> grad_out) {
  if (batch.empty()) fail(ErrorCode::empty_input, "cross_entropy_loss: empty batch");
  const int n = disc.n_skills();
  double loss = 0.0;
  Mlp::Cache cache;
  std::vector<double> d_logits(n);
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  for (const DiscExample& example : batch) {
    if (example.goal < 0 || example.goal >= n)
      fail(ErrorCode::index_out_of_range, "cross_entropy_loss: goal out of range");
    std::vector<double> z = disc.net_.forward(example.obs, cache);
    double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - zmax);
    double log_z = zmax + std::log(sum);
    loss -= (z[example.goal] - log_z) * inv_batch;
    if (!grad_out.empty()) {
      for (int k = 0; k < n; ++k) {
        double softmax = std::exp(z[k] - log_z);
        d_logits[k] = (softmax - (k == example.goal ? 1.0 : 0.0)) * inv_batch;
      }
      disc.net_.backward(cache, d_logits, grad_out);
    }
  }
  return loss;
}

Discriminator discriminator_update(const Discriminator& disc,
                                   std::span<const DiscExample> batch,
                                   const DiscriminatorHyper& hyper) {
  std::vector<double> grad(disc.net().param_count(), 0.0);
  cross_entropy_loss(disc, batch, grad);
  for (double g : grad)
    if (!std::isfinite(g))
      fail(ErrorCode::numerical_failure,
           "discriminator_update: non-finite gradient, parameters unchanged");
  Discriminator updated = disc;
  auto params = updated.net().params();
  for (int i = 0; i < updated.net().param_count(); ++i)
    params[i] -= hyper.learning_rate * grad[i];
  return updated;
}

double discriminator_accuracy(const Discriminator& disc, const PolicySkillSet& policy,
                              const EnvConfig& env, int rollouts_per_skill, Rng& rng) {
  if (rollouts_per_skill < 1)
    fail(ErrorCode::bad_parameter, "discriminator_accuracy: rollouts_per_skill must be >= 1");
  int correct = 0, total = 0;
  for (int skill = 0; skill < policy.n_skills(); ++skill) {
    for (int r = 0; r < rollouts_per_skill; ++r) {
      Trajectory t = rollout(policy, skill, env, rng);
      std::vector<double> z = disc.logits(t.observation(t.length() - 1));
      int predicted = static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
      correct += predicted == skill ? 1 : 0;
      ++total;
    }
  }
  return static_cast<double>(correct) / total;
}

MislResult train_misl(const TrainConfig& cfg, const TrainCallbacks& callbacks) {
  detail::EngineResult r = detail::run_training(cfg, Method::misl, callbacks);
  return MislResult{std::move(r.policy), std::move(r.discriminator), std::move(r.log)};
}

}  // namespace vendirl
