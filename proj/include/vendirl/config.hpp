#pragma once

#include <string>

#include "vendirl/trainer.hpp"

namespace vendirl {

struct PlotOptions {
  int rollouts_per_skill = 5;
};

/// Everything a run needs: method, output location, training configuration
/// and plotting options. Serialized as a flat key-value file with one
/// section per module.
struct ExperimentConfig {
  Method method = Method::vendirl;
  std::string out_dir = "runs/out";
  bool log_wall_time = false;
  TrainConfig train;
  PlotOptions plot;
};

/// Parses a config file; errors carry file/line/field diagnostics.
ExperimentConfig load_experiment_config(const std::string& path);

/// Parses config text (source_name used in diagnostics).
ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::string& source_name);

/// Renders every field (defaults materialized); parsing the result
/// reproduces the run.
std::string render_resolved_config(const ExperimentConfig& cfg);

Method parse_method(const std::string& name);
RewardTransform parse_transform(const std::string& name);
const char* transform_name(RewardTransform t);
MeanReference parse_mean_reference(const std::string& name);
ReturnBaseline parse_baseline(const std::string& name);
const char* baseline_name(ReturnBaseline b);
const char* mean_reference_name(MeanReference m);
KernelKind parse_kernel_kind(const std::string& name);

/// Term list syntax: "kind:weight,kind:weight" (weight optional for a single
/// term).
std::vector<std::pair<KernelKind, double>> parse_kernel_terms(const std::string& text);
std::string render_kernel_terms(const std::vector<std::pair<KernelKind, double>>& terms);

}  // namespace vendirl
