#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vendirl/env2d.hpp"
#include "vendirl/kernels.hpp"
#include "vendirl/memory.hpp"
#include "vendirl/policy.hpp"
#include "vendirl/vendi.hpp"

namespace vendirl {

enum class Method { vendirl, misl, random };

struct DiscriminatorHyper {
  std::vector<int> hidden{64, 64};
  double learning_rate = 1e-2;
};

struct TrainConfig {
  int n_skills = 8;
  int epochs = 300;
  int steps_per_epoch = 0;  // 0 -> env.episode_len
  int scenes = 8;
  RewardTransform transform = RewardTransform::log_fraction;
  SimilaritySpec train_spec;  // default: mmd_linear, one memory trajectory per skill
  SimilaritySpec eval_spec = default_eval_spec();
  int eval_every = 25;
  std::uint64_t seed = 0;
  ReinforceHyper hyper;
  PolicyConfig policy;
  EnvConfig env;
  int threads = 0;  // 0 -> hardware concurrency; VENDIRL_THREADS caps further
  DiscriminatorHyper disc;
  double misl_logprob_floor = -20.0;

  static SimilaritySpec default_eval_spec();
  int resolved_steps() const { return steps_per_epoch > 0 ? steps_per_epoch : env.episode_len; }
  void validate() const;
};

/// One independent environment scene: own env state, memory, kernel matrix,
/// goal and random stream. Skills (the policy) are shared across scenes.
struct SceneState {
  EnvState env;
  SkillMemory memory;
  KernelMatrix kernel;
  int goal = 0;
  double cached_vs = 1.0;
  Rng rng;
};

struct MetricRow {
  int epoch = 0;
  int scene = 0;
  int goal = 0;
  double train_vs_mean = 0.0;
  std::optional<double> eval_vs;
  double reward_min = 0.0;
  double reward_max = 0.0;
  double wall_time = 0.0;  // seconds since run start; excluded from the CSV by default
};

struct MetricLog {
  std::vector<MetricRow> rows;
};

struct TrainCallbacks {
  /// Invoked at each evaluation point with the current policy.
  std::function<void(int epoch, const PolicySkillSet& policy, double eval_vs)> on_eval;
};

struct TrainResult {
  PolicySkillSet policy;
  MetricLog log;
};

/// Full VendiRL training loop: per epoch and scene, refill memory, rebuild
/// the kernel, sample a goal, then step the episode updating the active
/// skill's kernel row and paying the transformed Vendi-score reward; one
/// policy update per epoch on the concatenated scene batches.
TrainResult train(const TrainConfig& cfg, const TrainCallbacks& callbacks = {});

/// Recomputes row/column `skill` of the scene's kernel from the memory
/// snapshot; diagonal and all other rows untouched.
void update_kernel_row(SceneState& scene, int skill, const SimilaritySpec& spec,
                       const SkillMemory& mem);

/// Epoch-boundary synchronization: refill every scene's memory from the
/// shared policy (scene-specific streams), rebuild kernels, refresh cached
/// scores.
void sync_scenes(std::vector<SceneState>& scenes, const PolicySkillSet& policy,
                 const TrainConfig& cfg);

/// N rollouts per skill from a fixed policy, in skill order.
std::vector<SkillSample> sample_skills(const PolicySkillSet& policy, const EnvConfig& env,
                                       int rollouts_per_skill, Rng& rng);

double evaluate_policy_vs(const PolicySkillSet& policy, const EnvConfig& env,
                          const SimilaritySpec& spec, Rng& rng);

/// metrics.csv schema: method,epoch,scene,train_vs_mean,eval_vs,wall_time.
/// eval_vs is empty on non-eval epochs; wall_time is empty unless requested
/// (keeps default runs byte-identical across reruns).
std::string render_metrics_csv(const MetricLog& log, Method method, bool include_wall_time);

const char* method_name(Method m);

/// Scene-worker cap: explicit config value, else hardware concurrency, both
/// capped by the VENDIRL_THREADS environment variable and the scene count.
int resolve_thread_count(int configured, int scenes);

}  // namespace vendirl
