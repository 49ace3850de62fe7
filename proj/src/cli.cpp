#include "vendirl/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "engine.hpp"
#include "vendirl/config.hpp"
#include "vendirl/plot.hpp"

namespace vendirl {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
  out << content;
  if (!out) fail(ErrorCode::io_error, "write failed for " + path.string());
}

struct Overrides {
  std::string config_path;
  std::string out_dir;
  std::string method;
  long long seed = -1;
  bool seed_set = false;
};

ExperimentConfig load_with_overrides(const Overrides& o) {
  ExperimentConfig cfg = load_experiment_config(o.config_path);
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (!o.method.empty()) cfg.method = parse_method(o.method);
  if (o.seed_set) cfg.train.seed = static_cast<std::uint64_t>(o.seed);
  return cfg;
}

std::string checkpoint_name(int epoch) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "checkpoint_epoch_%06d.txt", epoch);
  return buf;
}

int cmd_train(const Overrides& o) {
  ExperimentConfig cfg = load_with_overrides(o);
  fs::create_directories(cfg.out_dir);
  write_file(fs::path(cfg.out_dir) / "config_resolved.ini", render_resolved_config(cfg));

  TrainCallbacks callbacks;
  callbacks.on_eval = [&](int epoch, const PolicySkillSet& policy, double eval_vs) {
    policy.save((fs::path(cfg.out_dir) / checkpoint_name(epoch)).string());
    std::printf("epoch %d eval_vs %.6f\n", epoch, eval_vs);
  };

  detail::EngineResult result = detail::run_training(cfg.train, cfg.method, callbacks);
  result.policy.save((fs::path(cfg.out_dir) / "checkpoint_final.txt").string());
  write_file(fs::path(cfg.out_dir) / "metrics.csv",
             render_metrics_csv(result.log, cfg.method, cfg.log_wall_time));
  std::printf("wrote %s\n", (fs::path(cfg.out_dir) / "metrics.csv").c_str());
  return 0;
}

int cmd_eval(const std::string& checkpoint, const Overrides& o) {
  ExperimentConfig cfg = load_with_overrides(o);
  PolicySkillSet policy = PolicySkillSet::load(checkpoint);
  if (policy.n_skills() != cfg.train.n_skills || policy.obs_dim() != 2 ||
      policy.action_dim() != 2)
    fail(ErrorCode::shape_mismatch,
         "checkpoint/config mismatch: checkpoint has n=" + std::to_string(policy.n_skills()) +
             " obs_dim=" + std::to_string(policy.obs_dim()) +
             ", config expects n=" + std::to_string(cfg.train.n_skills) + " obs_dim=2");

  Rng rng = Rng::derive(cfg.train.seed, {kEvalStream});
  const SimilaritySpec& spec = cfg.train.eval_spec;
  std::vector<SkillSample> samples =
      sample_skills(policy, cfg.train.env, spec.rollouts_per_skill, rng);
  double vs = effective_unique_skills(samples, spec);
  std::printf("eval_vs %.17g\n", vs);

  TrajectoryData data;
  data.vs = vs;
  data.bounds = {cfg.train.env.min_x, cfg.train.env.min_y, cfg.train.env.max_x,
                 cfg.train.env.max_y};
  for (int skill = 0; skill < static_cast<int>(samples.size()); ++skill)
    for (int r = 0; r < static_cast<int>(samples[skill].trajectories.size()); ++r) {
      const Trajectory& traj = samples[skill].trajectories[r];
      for (int t = 0; t < traj.length(); ++t)
        data.points.push_back(
            {skill, r, t, traj.observation(t)[0], traj.observation(t)[1]});
    }
  fs::create_directories(cfg.out_dir);
  fs::path csv = fs::path(cfg.out_dir) / "trajectories.csv";
  write_file(csv, render_trajectories_csv(data));
  std::printf("wrote %s\n", csv.c_str());
  return 0;
}

int cmd_plot(const std::string& input, const std::string& output) {
  TrajectoryData data = read_trajectories_csv(input);
  write_file(output, render_trajectory_svg(data));
  return 0;
}

int cmd_score(const std::string& input, const std::string& config_path) {
  SimilaritySpec spec = TrainConfig::default_eval_spec();
  if (!config_path.empty()) spec = load_experiment_config(config_path).train.eval_spec;
  TrajectoryData data = read_trajectories_csv(input);
  double vs = effective_unique_skills(trajectories_to_samples(data), spec);
  std::printf("score_vs %.17g\n", vs);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"VendiRL: diversity-rewarded skill discovery in a bounded 2D world"};
  app.require_subcommand(1);

  Overrides o;
  std::string checkpoint, plot_in, plot_out, score_in, score_config;

  CLI::App* train = app.add_subcommand("train", "run a training experiment from a config file");
  train->add_option("--config", o.config_path, "experiment config file")->required();
  train->add_option("--seed", o.seed, "override run seed")->each([&](const std::string&) {
    o.seed_set = true;
  });
  train->add_option("--out", o.out_dir, "override output directory");
  train->add_option("--method", o.method, "override method (vendirl|misl|random)");

  CLI::App* eval = app.add_subcommand("eval", "score a checkpoint and export trajectories");
  eval->add_option("checkpoint", checkpoint, "policy checkpoint file")->required();
  eval->add_option("--config", o.config_path, "experiment config file")->required();
  eval->add_option("--seed", o.seed, "override run seed")->each([&](const std::string&) {
    o.seed_set = true;
  });
  eval->add_option("--out", o.out_dir, "override output directory");

  CLI::App* plot = app.add_subcommand("plot", "render a trajectories.csv as SVG");
  plot->add_option("input", plot_in, "trajectories.csv")->required();
  plot->add_option("output", plot_out, "output SVG path")->required();

  CLI::App* score = app.add_subcommand("score", "score an external trajectories.csv");
  score->add_option("input", score_in, "trajectories.csv")->required();
  score->add_option("--config", score_config, "experiment config file (for eval_kernel)");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train->parsed()) return cmd_train(o);
    if (eval->parsed()) return cmd_eval(checkpoint, o);
    if (plot->parsed()) return cmd_plot(plot_in, plot_out);
    if (score->parsed()) return cmd_score(score_in, score_config);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == ErrorCode::config_error ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}

}  // namespace vendirl
