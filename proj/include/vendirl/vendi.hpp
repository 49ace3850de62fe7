#pragma once

#include <vector>

#include "vendirl/numerics.hpp"

namespace vendirl {

struct SimilaritySpec;  // kernels.hpp
struct SkillSample;     // kernels.hpp

/// n x n symmetric skill-similarity matrix with unit diagonal.
struct KernelMatrix {
  SymMatrix sim;

  int n() const { return sim.dim; }

  static KernelMatrix identity(int n) { return KernelMatrix{SymMatrix::identity(n)}; }

  /// Validates unit diagonal (exact) and symmetry.
  static KernelMatrix from_sym(SymMatrix m);
};

enum class RewardTransform { raw, time_derivative, penalty, log_fraction };

/// How negative eigenvalues of sim/n are treated. strict raises beyond the
/// -1e-9 clamping tolerance; clamp_renormalize zeroes them and rescales the
/// spectrum to sum 1 (required for the knn_f1 kernel, which is not PSD).
enum class PsdPolicy { strict, clamp_renormalize };

/// exp(Shannon entropy of the eigenvalues of sim/n), clamped into [1, n].
double vendi_score(const KernelMatrix& km, PsdPolicy policy = PsdPolicy::strict);

/// Evaluation entry point: builds the kernel matrix from per-skill samples
/// under `spec` and returns its Vendi score.
double effective_unique_skills(const std::vector<SkillSample>& per_skill,
                               const SimilaritySpec& spec);

/// Stepwise VendiRL transition reward under the configured transform.
double vendirl_reward(const KernelMatrix& km_after_step, double vs_before_step,
                      RewardTransform transform, int n,
                      PsdPolicy policy = PsdPolicy::strict);

}  // namespace vendirl
