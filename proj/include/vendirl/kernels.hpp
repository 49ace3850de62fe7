#pragma once

#include <utility>
#include <vector>

#include "vendirl/numerics.hpp"
#include "vendirl/vendi.hpp"

namespace vendirl {

enum class KernelKind { cosine_of_means, mmd_linear, covariance_structure, knn_f1_overlap };

/// Reference point for trajectory means: raw coordinates, or each trajectory
/// shifted by its own first observation (radial patterns around the start
/// state instead of around the world origin).
enum class MeanReference { raw, relative_to_start };

/// Declarative description of a similarity kernel: weighted base kinds plus
/// the statistics configuration they share.
struct SimilaritySpec {
  std::vector<std::pair<KernelKind, double>> terms{{KernelKind::mmd_linear, 1.0}};
  int knn_k = 3;
  int rollouts_per_skill = 1;  // N: trajectories drawn per skill when sampling
  MeanReference mean_reference = MeanReference::relative_to_start;
  bool cosine_rescale = true;  // map cosine terms from [-1,1] to [0,1] in kernel matrices
  bool psd_clamp = false;      // clamp-and-renormalize eigenvalues in vendi_score

  void validate() const;
  bool has_term(KernelKind kind) const;
  PsdPolicy psd_policy() const {
    return psd_clamp ? PsdPolicy::clamp_renormalize : PsdPolicy::strict;
  }
};

/// N i.i.d. trajectories drawn from one skill.
struct SkillSample {
  std::vector<Trajectory> trajectories;

  int dim() const { return trajectories.empty() ? 0 : trajectories.front().dim; }

  /// Concatenation of all trajectories (statistics are pooled, matching the
  /// sample-concatenation convention of the kNN overlap estimator).
  Trajectory pooled() const;

  /// Pooled, with each trajectory shifted by its own first observation.
  Trajectory pooled_relative_to_start() const;
};

double cosine_similarity(const SkillSample& a, const SkillSample& b,
                         MeanReference ref = MeanReference::raw);
double mmd_linear_similarity(const SkillSample& a, const SkillSample& b,
                             MeanReference ref = MeanReference::raw);
double covariance_similarity(const SkillSample& a, const SkillSample& b);
double knn_f1_similarity(const SkillSample& a, const SkillSample& b, int knn_k);

/// Convex combination of the spec's terms (cosine terms affinely rescaled to
/// [0,1] when spec.cosine_rescale is set).
double combined_similarity(const SimilaritySpec& spec, const SkillSample& a,
                           const SkillSample& b);

/// Full n x n kernel matrix; diagonal set to 1 exactly without evaluating
/// self-similarities, off-diagonals evaluated once per unordered pair.
KernelMatrix build_kernel_matrix(const std::vector<SkillSample>& samples,
                                 const SimilaritySpec& spec);

const char* kernel_kind_name(KernelKind kind);

}  // namespace vendirl
