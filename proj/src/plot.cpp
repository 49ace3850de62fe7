#include "vendirl/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace vendirl {

namespace {

// tab10-style palette; cycles for more than 10 skills
constexpr const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};
constexpr int kPaletteSize = 10;

constexpr double kCanvas = 640.0;
constexpr double kMargin = 40.0;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

TrajectoryData read_trajectories_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path);
  TrajectoryData data;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream meta(line.substr(1));
      std::string tag;
      meta >> tag;
      if (tag == "vs") {
        double v;
        if (meta >> v) data.vs = v;
      } else if (tag == "bounds") {
        std::array<double, 4> b{};
        if (meta >> b[0] >> b[1] >> b[2] >> b[3]) data.bounds = b;
      }
      continue;
    }
    if (!header_seen) {
      if (line != "skill,rollout,t,x,y")
        fail(ErrorCode::io_error,
             path + ":" + std::to_string(lineno) + ": expected header skill,rollout,t,x,y");
      header_seen = true;
      continue;
    }
    TrajectoryPoint p;
    char comma[4];
    std::istringstream row(line);
    if (!(row >> p.skill >> comma[0] >> p.rollout >> comma[1] >> p.t >> comma[2] >> p.x >>
          comma[3] >> p.y) ||
        comma[0] != ',' || comma[1] != ',' || comma[2] != ',' || comma[3] != ',')
      fail(ErrorCode::io_error, path + ":" + std::to_string(lineno) + ": malformed row");
    data.points.push_back(p);
  }
  if (!header_seen)
    fail(ErrorCode::io_error, path + ": missing header skill,rollout,t,x,y");
  return data;
}

std::string render_trajectories_csv(const TrajectoryData& data) {
  std::string out;
  if (data.vs) out += "# vs " + fmt("%.17g", *data.vs) + "\n";
  if (data.bounds)
    out += "# bounds " + fmt("%.17g", (*data.bounds)[0]) + " " +
           fmt("%.17g", (*data.bounds)[1]) + " " + fmt("%.17g", (*data.bounds)[2]) + " " +
           fmt("%.17g", (*data.bounds)[3]) + "\n";
  out += "skill,rollout,t,x,y\n";
  char buf[128];
  for (const TrajectoryPoint& p : data.points) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g\n", p.skill, p.rollout, p.t, p.x,
                  p.y);
    out += buf;
  }
  return out;
}

std::string render_trajectory_svg(const TrajectoryData& data) {
  std::array<double, 4> bounds = data.bounds.value_or(std::array<double, 4>{0, 0, 1, 1});
  if (!data.bounds && !data.points.empty()) {
    bounds = {data.points[0].x, data.points[0].y, data.points[0].x, data.points[0].y};
    for (const auto& p : data.points) {
      bounds[0] = std::min(bounds[0], p.x);
      bounds[1] = std::min(bounds[1], p.y);
      bounds[2] = std::max(bounds[2], p.x);
      bounds[3] = std::max(bounds[3], p.y);
    }
  }
  double span_x = std::max(bounds[2] - bounds[0], 1e-12);
  double span_y = std::max(bounds[3] - bounds[1], 1e-12);
  auto px = [&](double x) { return kMargin + (x - bounds[0]) / span_x * kCanvas; };
  // SVG y grows downward
  auto py = [&](double y) { return kMargin + (bounds[3] - y) / span_y * kCanvas; };

  std::ostringstream svg;
  double total = kCanvas + 2 * kMargin;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total << "\" height=\""
      << total << "\" viewBox=\"0 0 " << total << " " << total << "\">\n";
  svg << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kCanvas
      << "\" height=\"" << kCanvas << "\" fill=\"white\" stroke=\"black\"/>\n";
  if (data.vs)
    svg << "<text x=\"" << kMargin << "\" y=\"" << kMargin - 12.0
        << "\" font-family=\"sans-serif\" font-size=\"16\">effective skills: "
        << fmt("%.3f", *data.vs) << "</text>\n";

  // group points into (skill, rollout) polylines, preserving file order
  std::map<std::pair<int, int>, std::vector<const TrajectoryPoint*>> lines;
  for (const auto& p : data.points) lines[{p.skill, p.rollout}].push_back(&p);
  for (const auto& [key, pts] : lines) {
    svg << "<polyline fill=\"none\" stroke=\""
        << kPalette[((key.first % kPaletteSize) + kPaletteSize) % kPaletteSize]
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) svg << ' ';
      svg << fmt("%.2f", px(pts[i]->x)) << ',' << fmt("%.2f", py(pts[i]->y));
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<SkillSample> trajectories_to_samples(const TrajectoryData& data) {
  if (data.points.empty()) fail(ErrorCode::empty_input, "no trajectory rows to score");
  std::map<int, std::map<int, Trajectory>> by_skill;
  for (const auto& p : data.points) {
    auto& traj = by_skill[p.skill].try_emplace(p.rollout, Trajectory(2)).first->second;
    traj.append(std::vector<double>{p.x, p.y});
  }
  std::vector<SkillSample> samples;
  samples.reserve(by_skill.size());
  for (auto& [skill, rollouts] : by_skill) {
    SkillSample s;
    for (auto& [r, traj] : rollouts) s.trajectories.push_back(std::move(traj));
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace vendirl
