#include "vendirl/vendi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vendirl/kernels.hpp"

namespace vendirl {

namespace {

constexpr double kEigenClampTol = 1e-9;

void check_kernel_invariants(const SymMatrix& sim) {
  if (sim.dim < 1) fail(ErrorCode::invalid_input, "kernel matrix: dim must be >= 1");
  for (double v : sim.entries)
    if (!std::isfinite(v)) fail(ErrorCode::invalid_input, "kernel matrix: non-finite entry");
  for (int i = 0; i < sim.dim; ++i) {
    if (sim.at(i, i) != 1.0)
      fail(ErrorCode::invalid_input,
           "kernel matrix: diagonal entry " + std::to_string(i) + " is not exactly 1");
    for (int j = i + 1; j < sim.dim; ++j)
      if (std::abs(sim.at(i, j) - sim.at(j, i)) > kSymmetryTol)
        fail(ErrorCode::symmetry_violation, "kernel matrix: not symmetric");
  }
}

}  // namespace

KernelMatrix KernelMatrix::from_sym(SymMatrix m) {
  check_kernel_invariants(m);
  return KernelMatrix{std::move(m)};
}

double vendi_score(const KernelMatrix& km, PsdPolicy policy) {
  check_kernel_invariants(km.sim);
  int n = km.n();

  SymMatrix scaled(n);
  for (std::size_t i = 0; i < km.sim.entries.size(); ++i)
    scaled.entries[i] = km.sim.entries[i] / n;

  EigenResult eig = sym_eigenvalues(scaled);
  std::vector<double>& lam = eig.eigenvalues;
  if (policy == PsdPolicy::strict) {
    for (double v : lam)
      if (v < -kEigenClampTol)
        fail(ErrorCode::psd_violation,
             "vendi_score: kernel matrix is not PSD (eigenvalue " + std::to_string(v) +
                 "); enable clamp-and-renormalize for non-PSD kernels such as knn_f1");
  }
  double sum = 0.0;
  for (double& v : lam) {
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (!(sum > 0.0))
    fail(ErrorCode::numerical_failure, "vendi_score: eigenvalue mass vanished");
  // Trace is preserved under the strict policy (sum == 1 within fp error);
  // under clamping the removed negative mass must be renormalized away.
  for (double& v : lam) v /= sum;

  double vs = std::exp(shannon_entropy(lam));
  return std::clamp(vs, 1.0, static_cast<double>(n));
}

double effective_unique_skills(const std::vector<SkillSample>& per_skill,
                               const SimilaritySpec& spec) {
  if (per_skill.empty())
    fail(ErrorCode::empty_input, "effective_unique_skills: no skills given");
  for (std::size_t i = 0; i < per_skill.size(); ++i)
    if (per_skill[i].trajectories.empty())
      fail(ErrorCode::empty_input,
           "effective_unique_skills: skill " + std::to_string(i) + " has no trajectories");
  KernelMatrix km = build_kernel_matrix(per_skill, spec);
  return vendi_score(km, spec.psd_policy());
}

double vendirl_reward(const KernelMatrix& km_after_step, double vs_before_step,
                      RewardTransform transform, int n, PsdPolicy policy) {
  double vs = vendi_score(km_after_step, policy);
  switch (transform) {
    case RewardTransform::raw:
      return vs;
    case RewardTransform::time_derivative:
      return vs - vs_before_step;
    case RewardTransform::penalty:
      return vs - static_cast<double>(n);
    case RewardTransform::log_fraction:
      return std::log(vs / static_cast<double>(n));
  }
  fail(ErrorCode::bad_parameter, "vendirl_reward: unknown transform");
}

}  // namespace vendirl
