#include "vendirl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vendirl {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)
constexpr const char* kCheckpointHeader = "vendirl-checkpoint v1";

std::vector<int> policy_layer_sizes(int n, int obs_dim, int action_dim,
                                    const PolicyConfig& cfg) {
  std::vector<int> sizes;
  sizes.push_back(obs_dim + n);
  for (int h : cfg.hidden) sizes.push_back(h);
  sizes.push_back(2 * action_dim);
  return sizes;
}

}  // namespace

PolicySkillSet::PolicySkillSet(int n_skills, int obs_dim, int action_dim,
                               const PolicyConfig& cfg, Rng& rng)
    : n_(n_skills), obs_dim_(obs_dim), action_dim_(action_dim), cfg_(cfg) {
  if (n_skills < 1 || obs_dim < 1 || action_dim < 1)
    fail(ErrorCode::bad_parameter, "PolicySkillSet: dimensions must be positive");
  if (!(cfg.log_std_min < cfg.log_std_max))
    fail(ErrorCode::bad_parameter, "PolicySkillSet: log_std bounds are inverted");
  net_ = Mlp(policy_layer_sizes(n_skills, obs_dim, action_dim, cfg), rng);
}

std::vector<double> PolicySkillSet::build_input(std::span<const double> obs, int goal) const {
  if (static_cast<int>(obs.size()) != obs_dim_)
    fail(ErrorCode::shape_mismatch, "policy: observation dimension mismatch");
  if (goal < 0 || goal >= n_)
    fail(ErrorCode::index_out_of_range, "policy: goal " + std::to_string(goal) +
                                            " out of range for " + std::to_string(n_) + " skills");
  std::vector<double> input(obs_dim_ + n_, 0.0);
  std::copy(obs.begin(), obs.end(), input.begin());
  input[obs_dim_ + goal] = 1.0;
  return input;
}

void PolicySkillSet::heads(std::span<const double> obs, int goal, std::span<double> mean,
                           std::span<double> log_std) const {
  std::vector<double> out = net_.forward(build_input(obs, goal));
  for (int d = 0; d < action_dim_; ++d) {
    mean[d] = out[d];
    log_std[d] = std::clamp(out[action_dim_ + d], cfg_.log_std_min, cfg_.log_std_max);
    if (!std::isfinite(mean[d]) || !std::isfinite(log_std[d]))
      fail(ErrorCode::numerical_failure, "policy: non-finite network output");
  }
}

ActionSample PolicySkillSet::act(std::span<const double> obs, int goal, Rng& rng) const {
  std::vector<double> mean(action_dim_), log_std(action_dim_);
  heads(obs, goal, mean, log_std);

  ActionSample sample;
  sample.action.resize(action_dim_);
  for (int d = 0; d < action_dim_; ++d) {
    double sigma = std::exp(log_std[d]);
    sample.action[d] = mean[d] + sigma * rng.normal();
    double z = (sample.action[d] - mean[d]) / sigma;
    sample.logprob += -0.5 * kLog2Pi - log_std[d] - 0.5 * z * z;
  }
  if (!std::isfinite(sample.logprob))
    fail(ErrorCode::numerical_failure, "policy: non-finite log-probability");
  return sample;
}

double logprob_objective(const PolicySkillSet& policy, const EpisodeBatch& batch,
                         std::span<const double> weights, std::span<double> grad_out) {
  const int action_dim = policy.action_dim();
  double objective = 0.0;
  std::size_t flat = 0;
  Mlp::Cache cache;
  std::vector<double> d_out(2 * action_dim);
  for (const auto& episode : batch.episodes) {
    for (const auto& step : episode.steps) {
      if (flat >= weights.size())
        fail(ErrorCode::shape_mismatch, "logprob_objective: weight count mismatch");
      double w = weights[flat++];
      std::vector<double> input = policy.build_input(step.obs, step.goal);
      std::vector<double> out = policy.net_.forward(input, cache);
      if (static_cast<int>(step.action.size()) != action_dim)
        fail(ErrorCode::shape_mismatch, "logprob_objective: action dimension mismatch");

      std::fill(d_out.begin(), d_out.end(), 0.0);
      for (int d = 0; d < action_dim; ++d) {
        double raw = out[action_dim + d];
        double ls = std::clamp(raw, policy.cfg_.log_std_min, policy.cfg_.log_std_max);
        double sigma = std::exp(ls);
        double z = (step.action[d] - out[d]) / sigma;
        objective += w * (-0.5 * kLog2Pi - ls - 0.5 * z * z);
        if (!grad_out.empty()) {
          d_out[d] = w * z / sigma;
          bool inside = raw > policy.cfg_.log_std_min && raw < policy.cfg_.log_std_max;
          d_out[action_dim + d] = inside ? w * (z * z - 1.0) : 0.0;
        }
      }
      if (!grad_out.empty()) policy.net_.backward(cache, d_out, grad_out);
    }
  }
  if (flat != weights.size())
    fail(ErrorCode::shape_mismatch, "logprob_objective: weight count mismatch");
  return objective;
}

std::vector<double> batch_returns(const EpisodeBatch& batch, double discount, bool whiten,
                                  ReturnBaseline baseline) {
  std::vector<double> returns;
  for (const auto& episode : batch.episodes) {
    std::size_t start = returns.size();
    returns.resize(start + episode.steps.size());
    double g = 0.0;
    for (int t = static_cast<int>(episode.steps.size()) - 1; t >= 0; --t) {
      double r = episode.steps[t].reward;
      if (!std::isfinite(r))
        fail(ErrorCode::invalid_input, "batch_returns: non-finite reward");
      g = r + discount * g;
      returns[start + t] = g;
    }
    if (baseline == ReturnBaseline::episode_mean && !episode.steps.empty()) {
      double mean = 0.0;
      for (std::size_t t = start; t < returns.size(); ++t) mean += returns[t];
      mean /= static_cast<double>(returns.size() - start);
      for (std::size_t t = start; t < returns.size(); ++t) returns[t] -= mean;
    }
  }
  if (whiten && !returns.empty()) {
    double mean = 0.0;
    for (double g : returns) mean += g;
    mean /= returns.size();
    double var = 0.0;
    for (double g : returns) var += (g - mean) * (g - mean);
    double std = std::sqrt(var / returns.size());
    for (double& g : returns) g = (g - mean) / (std + 1e-8);
  }
  return returns;
}

PolicySkillSet reinforce_update(const PolicySkillSet& policy, const EpisodeBatch& batch,
                                const ReinforceHyper& hyper) {
  std::size_t steps = 0;
  for (const auto& ep : batch.episodes) steps += ep.steps.size();
  if (steps == 0) fail(ErrorCode::empty_input, "reinforce_update: empty batch");

  std::vector<double> weights =
      batch_returns(batch, hyper.discount, hyper.whiten_returns, hyper.baseline);
  std::vector<double> grad(policy.net().param_count(), 0.0);
  logprob_objective(policy, batch, weights, grad);

  double norm_sq = 0.0;
  for (double g : grad) {
    if (!std::isfinite(g))
      fail(ErrorCode::numerical_failure,
           "reinforce_update: non-finite gradient, parameters unchanged");
    norm_sq += g * g;
  }
  double norm = std::sqrt(norm_sq);
  double scale = hyper.learning_rate;
  if (hyper.grad_clip_norm > 0.0 && norm > hyper.grad_clip_norm)
    scale *= hyper.grad_clip_norm / norm;

  PolicySkillSet updated = policy;
  auto params = updated.net().params();
  for (int i = 0; i < updated.net().param_count(); ++i) params[i] += scale * grad[i];
  return updated;
}

void PolicySkillSet::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "checkpoint: cannot open " + path + " for writing");
  out << kCheckpointHeader << "\n";
  out << "n " << n_ << " obs_dim " << obs_dim_ << " action_dim " << action_dim_ << "\n";
  out << "hidden";
  for (int h : cfg_.hidden) out << ' ' << h;
  out << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "log_std_bounds %.17g %.17g\n", cfg_.log_std_min,
                cfg_.log_std_max);
  out << buf;
  out << "params " << net_.param_count() << "\n";
  for (double p : net_.params()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", p);
    out << buf;
  }
  if (!out) fail(ErrorCode::io_error, "checkpoint: write failed for " + path);
}

PolicySkillSet PolicySkillSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "checkpoint: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kCheckpointHeader)
    fail(ErrorCode::io_error, "checkpoint: bad header in " + path);

  std::string key;
  int n = 0, obs_dim = 0, action_dim = 0;
  in >> key >> n >> key >> obs_dim >> key >> action_dim;
  PolicyConfig cfg;
  cfg.hidden.clear();
  std::getline(in, line);  // rest of dims line
  if (!std::getline(in, line) || line.rfind("hidden", 0) != 0)
    fail(ErrorCode::io_error, "checkpoint: missing hidden sizes in " + path);
  {
    std::istringstream hs(line.substr(6));
    int h;
    while (hs >> h) cfg.hidden.push_back(h);
  }
  in >> key >> cfg.log_std_min >> cfg.log_std_max;
  int count = 0;
  in >> key >> count;
  if (!in || key != "params" || n < 1 || obs_dim < 1 || action_dim < 1)
    fail(ErrorCode::io_error, "checkpoint: malformed metadata in " + path);

  Rng dummy(0);
  PolicySkillSet policy(n, obs_dim, action_dim, cfg, dummy);
  if (policy.net().param_count() != count)
    fail(ErrorCode::shape_mismatch, "checkpoint: parameter count mismatch in " + path);
  auto params = policy.net().params();
  for (int i = 0; i < count; ++i) {
    if (!(in >> params[i]))
      fail(ErrorCode::io_error, "checkpoint: truncated parameter block in " + path);
  }
  return policy;
}

}  // namespace vendirl
