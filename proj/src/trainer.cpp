#include "vendirl/trainer.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include "engine.hpp"

namespace vendirl {

SimilaritySpec TrainConfig::default_eval_spec() {
  SimilaritySpec spec;
  spec.terms = {{KernelKind::knn_f1_overlap, 1.0}};
  spec.knn_k = 3;
  spec.rollouts_per_skill = 5;
  spec.psd_clamp = true;  // F1 overlap is not provably PSD
  return spec;
}

void TrainConfig::validate() const {
  if (n_skills < 2) fail(ErrorCode::config_error, "train: n_skills must be >= 2");
  if (epochs < 0) fail(ErrorCode::config_error, "train: epochs must be >= 0");
  if (scenes < 1) fail(ErrorCode::config_error, "train: scenes must be >= 1");
  if (eval_every < 1) fail(ErrorCode::config_error, "train: eval_every must be >= 1");
  if (threads < 0) fail(ErrorCode::config_error, "train: threads must be >= 0");
  env.validate();
  if (steps_per_epoch != 0 && (steps_per_epoch < 1 || steps_per_epoch > env.episode_len))
    fail(ErrorCode::config_error,
         "train: steps_per_epoch must be in [1, env.episode_len] (epoch = one episode)");
  train_spec.validate();
  eval_spec.validate();
  if (train_spec.rollouts_per_skill != 1)
    fail(ErrorCode::config_error,
         "train: the skill memory holds one trajectory per skill; "
         "train_spec.rollouts_per_skill must be 1");
  if (train_spec.has_term(KernelKind::knn_f1_overlap) && !train_spec.psd_clamp)
    fail(ErrorCode::config_error,
         "train: the knn_f1 kernel is not PSD; using it as a reward kernel requires "
         "psd_clamp (clamp-and-renormalize)");
  if (train_spec.has_term(KernelKind::knn_f1_overlap) && train_spec.knn_k > env.episode_len)
    fail(ErrorCode::config_error, "train: knn_k exceeds observations per episode");
  if (eval_spec.has_term(KernelKind::knn_f1_overlap) &&
      eval_spec.knn_k >= eval_spec.rollouts_per_skill * (env.episode_len + 1))
    fail(ErrorCode::config_error, "eval: knn_k exceeds pooled observations per skill");
}

const char* method_name(Method m) {
  switch (m) {
    case Method::vendirl: return "vendirl";
    case Method::misl: return "misl";
    case Method::random: return "random";
  }
  return "?";
}

int resolve_thread_count(int configured, int scenes) {
  int threads = configured > 0 ? configured
                               : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (const char* cap = std::getenv("VENDIRL_THREADS")) {
    int limit = std::atoi(cap);
    if (limit > 0) threads = std::min(threads, limit);
  }
  return std::max(1, std::min(threads, scenes));
}

std::vector<SkillSample> sample_skills(const PolicySkillSet& policy, const EnvConfig& env,
                                       int rollouts_per_skill, Rng& rng) {
  std::vector<SkillSample> samples(policy.n_skills());
  for (int skill = 0; skill < policy.n_skills(); ++skill)
    for (int r = 0; r < rollouts_per_skill; ++r)
      samples[skill].trajectories.push_back(rollout(policy, skill, env, rng));
  return samples;
}

double evaluate_policy_vs(const PolicySkillSet& policy, const EnvConfig& env,
                          const SimilaritySpec& spec, Rng& rng) {
  return effective_unique_skills(sample_skills(policy, env, spec.rollouts_per_skill, rng), spec);
}

void update_kernel_row(SceneState& scene, int skill, const SimilaritySpec& spec,
                       const SkillMemory& mem) {
  if (skill < 0 || skill >= scene.kernel.n())
    fail(ErrorCode::index_out_of_range, "update_kernel_row: skill out of range");
  SkillSample active = mem.snapshot_sample(skill);
  for (int j = 0; j < scene.kernel.n(); ++j) {
    if (j == skill) continue;  // diagonal stays 1
    double v = combined_similarity(spec, active, mem.snapshot_sample(j));
    scene.kernel.sim.at(skill, j) = v;
    scene.kernel.sim.at(j, skill) = v;
  }
}

namespace {

void sync_scene(SceneState& scene, const PolicySkillSet& policy, const TrainConfig& cfg) {
  scene.memory.refill(policy, cfg.env, scene.rng);
  scene.kernel = build_kernel_matrix(scene.memory.snapshot_samples(), cfg.train_spec);
  scene.cached_vs = vendi_score(scene.kernel, cfg.train_spec.psd_policy());
}

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index owns
// its slot of any result vector, so scheduling order cannot change results.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(threads, count); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);  // first scene in index order
}

struct SceneEpochResult {
  EpisodeRecord episode;
  std::vector<DiscExample> disc_examples;
  int goal = 0;
  double train_vs_mean = 0.0;
  double reward_min = 0.0;
  double reward_max = 0.0;
};

[[noreturn]] void rethrow_with_context(const Error& e, int epoch, int scene, int step) {
  std::ostringstream msg;
  msg << "epoch " << epoch << " scene " << scene;
  if (step >= 0) msg << " step " << step;
  msg << ": " << e.what();
  throw Error(e.code(), msg.str());
}

SceneEpochResult scene_epoch(SceneState& scene, const PolicySkillSet& policy,
                             const Discriminator& disc, const TrainConfig& cfg,
                             Method method, int epoch, int scene_index) {
  int step = -1;
  try {
    sync_scene(scene, policy, cfg);
    scene.goal = scene.rng.uniform_int(cfg.n_skills);
    scene.env = env_reset(cfg.env);

    SceneEpochResult result;
    result.goal = scene.goal;

    std::vector<double> obs{scene.env.position.x, scene.env.position.y};
    scene.memory.store(scene.goal, 0, obs);

    const int steps = cfg.resolved_steps();
    const PsdPolicy psd = cfg.train_spec.psd_policy();
    double vs_sum = 0.0;
    for (step = 0; step < steps; ++step) {
      StepRecord record;
      record.obs = obs;
      record.goal = scene.goal;

      ActionSample a = policy.act(obs, scene.goal, scene.rng);
      scene.env = env_step(scene.env, Vec2{a.action[0], a.action[1]}, cfg.env, scene.rng);
      obs[0] = scene.env.position.x;
      obs[1] = scene.env.position.y;

      scene.memory.store(scene.goal, step + 1, obs);
      update_kernel_row(scene, scene.goal, cfg.train_spec, scene.memory);

      double vs_after = vendi_score(scene.kernel, psd);
      double reward = 0.0;
      switch (method) {
        case Method::vendirl:
          reward = vendirl_reward(scene.kernel, scene.cached_vs, cfg.transform,
                                  cfg.n_skills, psd);
          break;
        case Method::misl:
          reward = misl_reward(disc, obs, scene.goal, cfg.n_skills, cfg.misl_logprob_floor);
          break;
        case Method::random:
          break;
      }
      scene.cached_vs = vs_after;
      vs_sum += vs_after;

      record.action = std::move(a.action);
      record.logprob = a.logprob;
      record.reward = reward;
      if (step == 0) {
        result.reward_min = reward;
        result.reward_max = reward;
      } else {
        result.reward_min = std::min(result.reward_min, reward);
        result.reward_max = std::max(result.reward_max, reward);
      }
      result.episode.steps.push_back(std::move(record));
      if (method == Method::misl) result.disc_examples.push_back({obs, scene.goal});
    }
    result.train_vs_mean = vs_sum / steps;
    return result;
  } catch (const Error& e) {
    rethrow_with_context(e, epoch, scene_index, step);
  }
}

}  // namespace

void sync_scenes(std::vector<SceneState>& scenes, const PolicySkillSet& policy,
                 const TrainConfig& cfg) {
  for (auto& scene : scenes) sync_scene(scene, policy, cfg);
}

namespace detail {

EngineResult run_training(const TrainConfig& cfg, Method method,
                          const TrainCallbacks& callbacks) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();

  Rng policy_rng = Rng::derive(cfg.seed, {kPolicyInitStream});
  EngineResult result;
  result.policy = PolicySkillSet(cfg.n_skills, 2, 2, cfg.policy, policy_rng);
  if (method == Method::misl) {
    Rng disc_rng = Rng::derive(cfg.seed, {kDiscInitStream});
    result.discriminator = Discriminator(2, cfg.n_skills, cfg.disc.hidden, disc_rng);
  }

  std::vector<SceneState> scenes;
  scenes.reserve(cfg.scenes);
  for (int i = 0; i < cfg.scenes; ++i)
    scenes.push_back(SceneState{
        env_reset(cfg.env),
        SkillMemory(cfg.n_skills, cfg.env.episode_len, 2),
        KernelMatrix::identity(cfg.n_skills),
        0,
        static_cast<double>(cfg.n_skills),
        Rng::derive(cfg.seed, {kSceneStream, static_cast<std::uint64_t>(i)}),
    });

  const int threads = resolve_thread_count(cfg.threads, cfg.scenes);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<SceneEpochResult> per_scene(cfg.scenes);
    parallel_for(cfg.scenes, threads, [&](int i) {
      per_scene[i] = scene_epoch(scenes[i], result.policy, result.discriminator, cfg,
                                 method, epoch, i);
    });

    if (method != Method::random) {
      EpisodeBatch batch;
      batch.episodes.reserve(cfg.scenes);
      for (auto& r : per_scene) batch.episodes.push_back(std::move(r.episode));
      try {
        result.policy = reinforce_update(result.policy, batch, cfg.hyper);
        if (method == Method::misl) {
          std::vector<DiscExample> examples;
          for (auto& r : per_scene)
            examples.insert(examples.end(), r.disc_examples.begin(), r.disc_examples.end());
          result.discriminator =
              discriminator_update(result.discriminator, examples, cfg.disc);
        }
      } catch (const Error& e) {
        rethrow_with_context(e, epoch, -1, -1);
      }
    }

    bool eval_epoch = (epoch + 1) % cfg.eval_every == 0;
    std::optional<double> eval_vs;
    if (eval_epoch) {
      // Self-check: the stepwise kernel must equal a fresh rebuild from the
      // memory snapshot (per-step reward == vendi score of the live kernel).
      for (int i = 0; i < cfg.scenes; ++i) {
        KernelMatrix rebuilt =
            build_kernel_matrix(scenes[i].memory.snapshot_samples(), cfg.train_spec);
        double vs = vendi_score(rebuilt, cfg.train_spec.psd_policy());
        if (std::abs(vs - scenes[i].cached_vs) > 1e-9)
          fail(ErrorCode::numerical_failure,
               "epoch " + std::to_string(epoch) + " scene " + std::to_string(i) +
                   ": stepwise kernel diverged from full rebuild");
      }
      Rng eval_rng = Rng::derive(cfg.seed, {kEvalStream, static_cast<std::uint64_t>(epoch)});
      eval_vs = evaluate_policy_vs(result.policy, cfg.env, cfg.eval_spec, eval_rng);
      if (callbacks.on_eval) callbacks.on_eval(epoch, result.policy, *eval_vs);
    }

    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    for (int i = 0; i < cfg.scenes; ++i) {
      MetricRow row;
      row.epoch = epoch;
      row.scene = i;
      row.goal = per_scene[i].goal;
      row.train_vs_mean = per_scene[i].train_vs_mean;
      row.eval_vs = eval_vs;
      row.reward_min = per_scene[i].reward_min;
      row.reward_max = per_scene[i].reward_max;
      row.wall_time = elapsed;
      result.log.rows.push_back(row);
    }
  }
  return result;
}

}  // namespace detail

TrainResult train(const TrainConfig& cfg, const TrainCallbacks& callbacks) {
  detail::EngineResult r = detail::run_training(cfg, Method::vendirl, callbacks);
  return TrainResult{std::move(r.policy), std::move(r.log)};
}

std::string render_metrics_csv(const MetricLog& log, Method method, bool include_wall_time) {
  std::string out = "method,epoch,scene,train_vs_mean,eval_vs,wall_time\n";
  char buf[128];
  for (const MetricRow& row : log.rows) {
    out += method_name(method);
    std::snprintf(buf, sizeof buf, ",%d,%d,%.17g,", row.epoch, row.scene, row.train_vs_mean);
    out += buf;
    if (row.eval_vs) {
      std::snprintf(buf, sizeof buf, "%.17g", *row.eval_vs);
      out += buf;
    }
    out += ',';
    if (include_wall_time) {
      std::snprintf(buf, sizeof buf, "%.3f", row.wall_time);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace vendirl
