#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "vendirl/cli.hpp"
#include "vendirl/config.hpp"
#include "vendirl/plot.hpp"
#include "vendirl/policy.hpp"

using namespace vendirl;
namespace fs = std::filesystem;

namespace {

int cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"vendirl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path temp_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("vendirl_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tiny_config_text(const std::string& out_dir, int epochs = 2) {
  std::ostringstream cfg;
  cfg << "[run]\nmethod = vendirl\nout_dir = " << out_dir << "\nseed = 5\n";
  cfg << "[train]\nn_skills = 4\nepochs = " << epochs
      << "\nscenes = 2\neval_every = 2\nthreads = 1\n";
  cfg << "[env]\nepisode_len = 8\n";
  cfg << "[policy]\nhidden = 16\n";
  cfg << "[eval_kernel]\nrollouts_per_skill = 2\n";
  return cfg.str();
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

// Linear policy steering each skill along its own compass direction.
PolicySkillSet directional_policy(int n) {
  PolicyConfig cfg;
  cfg.hidden = {};
  Rng rng(0);
  PolicySkillSet policy(n, 2, 2, cfg, rng);
  auto params = policy.net().params();
  std::fill(params.begin(), params.end(), 0.0);
  const int in = 2 + n;
  for (int g = 0; g < n; ++g) {
    double angle = 2.0 * 3.14159265358979323846 * g / n;
    params[0 * in + 2 + g] = std::cos(angle);  // mean_x row
    params[1 * in + 2 + g] = std::sin(angle);  // mean_y row
  }
  params[4 * in + 2] = -30.0;  // raw log-std biases, clamped to log_std_min
  params[4 * in + 3] = -30.0;
  return policy;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("missing and malformed configs exit with code 2") {
  CHECK(cli({"train", "--config", "/nonexistent/vendirl.ini"}) == 2);

  fs::path dir = temp_dir("badcfg");
  write_text(dir / "bad.ini", "[train]\nn_skills = 4\nnot_a_field = 1\n");
  CHECK(cli({"train", "--config", (dir / "bad.ini").string()}) == 2);

  write_text(dir / "bad2.ini", "[train]\nepochs = banana\n");
  CHECK(cli({"train", "--config", (dir / "bad2.ini").string()}) == 2);

  CHECK(cli({"train"}) == 2);  // missing required --config
  fs::remove_all(dir);
}

TEST_CASE("train writes metrics, checkpoints and a resolved config") {
  fs::path dir = temp_dir("train");
  fs::path out = dir / "out";
  write_text(dir / "cfg.ini", tiny_config_text(out.string()));
  REQUIRE(cli({"train", "--config", (dir / "cfg.ini").string()}) == 0);

  std::string metrics = read_text(out / "metrics.csv");
  CHECK(count_occurrences(metrics, "\n") == 1 + 2 * 2);  // header + epochs*scenes
  CHECK(metrics.rfind("method,epoch,scene,train_vs_mean,eval_vs,wall_time\n", 0) == 0);
  CHECK(fs::exists(out / "checkpoint_final.txt"));
  CHECK(fs::exists(out / "checkpoint_epoch_000001.txt"));

  // resolved config reparses to an equivalent run
  std::string resolved = read_text(out / "config_resolved.ini");
  ExperimentConfig cfg = parse_experiment_config(resolved, "resolved");
  CHECK(cfg.train.n_skills == 4);
  CHECK(cfg.train.seed == 5);
  CHECK(render_resolved_config(cfg) == resolved);
  fs::remove_all(dir);
}

TEST_CASE("epochs=0 produces a header-only metrics file") {
  fs::path dir = temp_dir("empty");
  fs::path out = dir / "out";
  write_text(dir / "cfg.ini", tiny_config_text(out.string(), 0));
  REQUIRE(cli({"train", "--config", (dir / "cfg.ini").string()}) == 0);
  CHECK(read_text(out / "metrics.csv") == "method,epoch,scene,train_vs_mean,eval_vs,wall_time\n");
  fs::remove_all(dir);
}

TEST_CASE("identical runs produce byte-identical metrics") {
  fs::path dir = temp_dir("determinism");
  write_text(dir / "cfg.ini", tiny_config_text((dir / "a").string()));
  REQUIRE(cli({"train", "--config", (dir / "cfg.ini").string()}) == 0);
  REQUIRE(cli({"train", "--config", (dir / "cfg.ini").string(), "--out",
               (dir / "b").string()}) == 0);
  CHECK(read_text(dir / "a" / "metrics.csv") == read_text(dir / "b" / "metrics.csv"));
  fs::remove_all(dir);
}

TEST_CASE("eval exports trajectories and respects the seed") {
  fs::path dir = temp_dir("eval");
  fs::path out = dir / "out";
  write_text(dir / "cfg.ini", tiny_config_text(out.string()));
  REQUIRE(cli({"train", "--config", (dir / "cfg.ini").string()}) == 0);
  std::string ckpt = (out / "checkpoint_final.txt").string();

  REQUIRE(cli({"eval", ckpt, "--config", (dir / "cfg.ini").string(), "--out",
               (dir / "e1").string()}) == 0);
  REQUIRE(cli({"eval", ckpt, "--config", (dir / "cfg.ini").string(), "--out",
               (dir / "e2").string()}) == 0);
  CHECK(read_text(dir / "e1" / "trajectories.csv") ==
        read_text(dir / "e2" / "trajectories.csv"));

  TrajectoryData data = read_trajectories_csv((dir / "e1" / "trajectories.csv").string());
  REQUIRE(data.vs.has_value());
  CHECK(*data.vs >= 1.0);
  CHECK(*data.vs <= 4.0);
  // 4 skills x 2 rollouts x 9 observations
  CHECK(data.points.size() == 4u * 2u * 9u);
  fs::remove_all(dir);
}

TEST_CASE("eval rejects checkpoint/config shape mismatches") {
  fs::path dir = temp_dir("shape");
  fs::path out = dir / "out";
  write_text(dir / "cfg.ini", tiny_config_text(out.string()));
  REQUIRE(cli({"train", "--config", (dir / "cfg.ini").string()}) == 0);

  std::string other = tiny_config_text(out.string());
  other.replace(other.find("n_skills = 4"), 12, "n_skills = 6");
  write_text(dir / "cfg6.ini", other);
  CHECK(cli({"eval", (out / "checkpoint_final.txt").string(), "--config",
             (dir / "cfg6.ini").string()}) == 1);
  fs::remove_all(dir);
}

TEST_CASE("a hand-built 8-direction policy scores nearly 8 effective skills") {
  fs::path dir = temp_dir("corners");
  PolicySkillSet policy = directional_policy(8);
  policy.save((dir / "ckpt.txt").string());

  std::ostringstream cfg;
  cfg << "[run]\nout_dir = " << (dir / "out").string() << "\nseed = 9\n"
      << "[train]\nn_skills = 8\nthreads = 1\n";
  write_text(dir / "cfg.ini", cfg.str());
  REQUIRE(cli({"eval", (dir / "ckpt.txt").string(), "--config",
               (dir / "cfg.ini").string()}) == 0);
  TrajectoryData data = read_trajectories_csv((dir / "out" / "trajectories.csv").string());
  REQUIRE(data.vs.has_value());
  CHECK(*data.vs >= 7.5);
  fs::remove_all(dir);
}

TEST_CASE("plot renders deterministic SVG with one polyline per rollout") {
  fs::path dir = temp_dir("plot");
  fs::path out = dir / "out";
  write_text(dir / "cfg.ini", tiny_config_text(out.string()));
  REQUIRE(cli({"train", "--config", (dir / "cfg.ini").string()}) == 0);
  REQUIRE(cli({"eval", (out / "checkpoint_final.txt").string(), "--config",
               (dir / "cfg.ini").string()}) == 0);

  std::string csv = (out / "trajectories.csv").string();
  REQUIRE(cli({"plot", csv, (dir / "a.svg").string()}) == 0);
  REQUIRE(cli({"plot", csv, (dir / "b.svg").string()}) == 0);
  std::string svg = read_text(dir / "a.svg");
  CHECK(svg == read_text(dir / "b.svg"));
  CHECK(count_occurrences(svg, "<polyline") == 4 * 2);
  int distinct_colors = 0;
  for (const char* color : {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"})
    distinct_colors += count_occurrences(svg, color) > 0 ? 1 : 0;
  CHECK(distinct_colors == 4);
  CHECK(svg.find("effective skills:") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("plot handles empty and malformed input") {
  fs::path dir = temp_dir("plotedge");
  write_text(dir / "empty.csv", "skill,rollout,t,x,y\n");
  REQUIRE(cli({"plot", (dir / "empty.csv").string(), (dir / "empty.svg").string()}) == 0);
  std::string svg = read_text(dir / "empty.svg");
  CHECK(count_occurrences(svg, "<polyline") == 0);
  CHECK(count_occurrences(svg, "<rect") == 1);

  write_text(dir / "bad.csv", "skill,rollout,t,x,y\n1,2,oops\n");
  CHECK(cli({"plot", (dir / "bad.csv").string(), (dir / "bad.svg").string()}) == 1);
  fs::remove_all(dir);
}

TEST_CASE("score reproduces eval on the exported trajectories") {
  fs::path dir = temp_dir("score");
  fs::path out = dir / "out";
  write_text(dir / "cfg.ini", tiny_config_text(out.string()));
  REQUIRE(cli({"train", "--config", (dir / "cfg.ini").string()}) == 0);
  REQUIRE(cli({"eval", (out / "checkpoint_final.txt").string(), "--config",
               (dir / "cfg.ini").string()}) == 0);

  fs::path csv = out / "trajectories.csv";
  REQUIRE(cli({"score", csv.string(), "--config", (dir / "cfg.ini").string()}) == 0);

  // independent check through the library: scoring the file reproduces the
  // score stored in it (coordinates round-trip at full precision)
  TrajectoryData data = read_trajectories_csv(csv.string());
  ExperimentConfig cfg = load_experiment_config((dir / "cfg.ini").string());
  double rescored = effective_unique_skills(trajectories_to_samples(data),
                                            cfg.train.eval_spec);
  CHECK(rescored == doctest::Approx(*data.vs).epsilon(1e-12));
  fs::remove_all(dir);
}

}  // TEST_SUITE
