#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "vendirl/kernels.hpp"

namespace vendirl {

struct TrajectoryPoint {
  int skill = 0;
  int rollout = 0;
  int t = 0;
  double x = 0.0;
  double y = 0.0;
};

/// Contents of a trajectories.csv file: rows (skill, rollout, t, x, y) plus
/// optional `# vs <value>` and `# bounds <minx> <miny> <maxx> <maxy>` comment
/// headers.
struct TrajectoryData {
  std::vector<TrajectoryPoint> points;
  std::optional<double> vs;
  std::optional<std::array<double, 4>> bounds;
};

TrajectoryData read_trajectories_csv(const std::string& path);
std::string render_trajectories_csv(const TrajectoryData& data);

/// Standalone SVG: one polyline per rollout, one color per skill, bounds
/// rectangle, title annotated with the score when present. Byte-deterministic
/// (no timestamps).
std::string render_trajectory_svg(const TrajectoryData& data);

/// Groups rows into per-skill samples (rollouts in file order) for scoring.
std::vector<SkillSample> trajectories_to_samples(const TrajectoryData& data);

}  // namespace vendirl
