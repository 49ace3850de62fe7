#include "vendirl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vendirl {

namespace {

constexpr double kWeightSumTol = 1e-9;
constexpr double kDegenerateMeanTol = 1e-12;

double dist_sq(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) s += (x[d] - y[d]) * (x[d] - y[d]);
  return s;
}

std::vector<double> sample_mean(const SkillSample& s, MeanReference ref) {
  Trajectory pooled =
      ref == MeanReference::relative_to_start ? s.pooled_relative_to_start() : s.pooled();
  return trajectory_mean(pooled);
}

// Squared distance from each point to its knn_k-th nearest neighbour within
// the same set (self excluded by index).
std::vector<double> knn_radii_sq(const Trajectory& pts, int knn_k) {
  int count = pts.length();
  std::vector<double> radii(count);
  std::vector<double> others;
  others.reserve(count - 1);
  for (int i = 0; i < count; ++i) {
    others.clear();
    auto xi = pts.observation(i);
    for (int j = 0; j < count; ++j) {
      if (j == i) continue;
      others.push_back(dist_sq(xi, pts.observation(j)));
    }
    std::nth_element(others.begin(), others.begin() + (knn_k - 1), others.end());
    radii[i] = others[knn_k - 1];
  }
  return radii;
}

// Fraction of `queries` that fall inside the hypersphere manifold of `set`.
double manifold_fraction(const Trajectory& queries, const Trajectory& set,
                         const std::vector<double>& radii_sq) {
  int hits = 0;
  for (int i = 0; i < queries.length(); ++i) {
    auto x = queries.observation(i);
    for (int j = 0; j < set.length(); ++j) {
      if (dist_sq(x, set.observation(j)) <= radii_sq[j]) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / queries.length();
}

double eval_term(KernelKind kind, const SimilaritySpec& spec, const SkillSample& a,
                 const SkillSample& b) {
  switch (kind) {
    case KernelKind::cosine_of_means: {
      double c = cosine_similarity(a, b, spec.mean_reference);
      return spec.cosine_rescale ? 0.5 * (1.0 + c) : c;
    }
    case KernelKind::mmd_linear:
      return mmd_linear_similarity(a, b, spec.mean_reference);
    case KernelKind::covariance_structure:
      return covariance_similarity(a, b);
    case KernelKind::knn_f1_overlap:
      return knn_f1_similarity(a, b, spec.knn_k);
  }
  fail(ErrorCode::bad_parameter, "unknown kernel kind");
}

double eval_terms(const SimilaritySpec& spec, const SkillSample& a, const SkillSample& b) {
  double value = 0.0;
  for (const auto& [kind, weight] : spec.terms) value += weight * eval_term(kind, spec, a, b);
  return value;
}

}  // namespace

const char* kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::cosine_of_means: return "cosine_of_means";
    case KernelKind::mmd_linear: return "mmd_linear";
    case KernelKind::covariance_structure: return "covariance_structure";
    case KernelKind::knn_f1_overlap: return "knn_f1_overlap";
  }
  return "?";
}

void SimilaritySpec::validate() const {
  if (terms.empty()) fail(ErrorCode::bad_parameter, "similarity spec: no kernel terms");
  double sum = 0.0;
  for (const auto& [kind, weight] : terms) {
    (void)kind;
    if (weight < 0.0)
      fail(ErrorCode::bad_parameter, "similarity spec: negative kernel weight");
    sum += weight;
  }
  if (std::abs(sum - 1.0) > kWeightSumTol)
    fail(ErrorCode::bad_parameter,
         "similarity spec: kernel weights sum to " + std::to_string(sum) + ", expected 1");
  if (knn_k < 1) fail(ErrorCode::bad_parameter, "similarity spec: knn_k must be >= 1");
  if (rollouts_per_skill < 1)
    fail(ErrorCode::bad_parameter, "similarity spec: rollouts_per_skill must be >= 1");
}

bool SimilaritySpec::has_term(KernelKind kind) const {
  for (const auto& [k, w] : terms)
    if (k == kind && w > 0.0) return true;
  return false;
}

Trajectory SkillSample::pooled() const {
  if (trajectories.empty()) fail(ErrorCode::empty_input, "skill sample: no trajectories");
  Trajectory out(trajectories.front().dim);
  for (const auto& t : trajectories) {
    if (t.dim != out.dim)
      fail(ErrorCode::shape_mismatch, "skill sample: trajectory dimensions differ");
    out.data.insert(out.data.end(), t.data.begin(), t.data.end());
  }
  return out;
}

Trajectory SkillSample::pooled_relative_to_start() const {
  if (trajectories.empty()) fail(ErrorCode::empty_input, "skill sample: no trajectories");
  Trajectory out(trajectories.front().dim);
  for (const auto& t : trajectories) {
    if (t.dim != out.dim)
      fail(ErrorCode::shape_mismatch, "skill sample: trajectory dimensions differ");
    if (t.length() < 1) continue;
    auto start = t.observation(0);
    for (int s = 0; s < t.length(); ++s) {
      auto obs = t.observation(s);
      for (int d = 0; d < t.dim; ++d) out.data.push_back(obs[d] - start[d]);
    }
  }
  return out;
}

double cosine_similarity(const SkillSample& a, const SkillSample& b, MeanReference ref) {
  std::vector<double> ma = sample_mean(a, ref);
  std::vector<double> mb = sample_mean(b, ref);
  if (ma.size() != mb.size())
    fail(ErrorCode::shape_mismatch, "cosine_similarity: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t d = 0; d < ma.size(); ++d) {
    dot += ma[d] * mb[d];
    na += ma[d] * ma[d];
    nb += mb[d] * mb[d];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na < kDegenerateMeanTol || nb < kDegenerateMeanTol)
    fail(ErrorCode::degenerate_mean, "cosine_similarity: zero-norm trajectory mean");
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

double mmd_linear_similarity(const SkillSample& a, const SkillSample& b, MeanReference ref) {
  std::vector<double> ma = sample_mean(a, ref);
  std::vector<double> mb = sample_mean(b, ref);
  if (ma.size() != mb.size())
    fail(ErrorCode::shape_mismatch, "mmd_linear_similarity: dimension mismatch");
  double d2 = 0.0;
  for (std::size_t d = 0; d < ma.size(); ++d) d2 += (ma[d] - mb[d]) * (ma[d] - mb[d]);
  return std::exp(-std::sqrt(d2));
}

double covariance_similarity(const SkillSample& a, const SkillSample& b) {
  double det_a = std::exp(cholesky_logdet(trajectory_covariance(a.pooled())));
  double det_b = std::exp(cholesky_logdet(trajectory_covariance(b.pooled())));
  return std::exp(-std::abs(det_a - det_b));
}

double knn_f1_similarity(const SkillSample& a, const SkillSample& b, int knn_k) {
  if (knn_k < 1) fail(ErrorCode::bad_parameter, "knn_f1_similarity: knn_k must be >= 1");
  Trajectory pa = a.pooled();
  Trajectory pb = b.pooled();
  if (pa.dim != pb.dim)
    fail(ErrorCode::shape_mismatch, "knn_f1_similarity: dimension mismatch");
  if (pa.length() <= knn_k || pb.length() <= knn_k)
    fail(ErrorCode::bad_parameter,
         "knn_f1_similarity: need at least knn_k+1 pooled observations per skill (knn_k=" +
             std::to_string(knn_k) + ")");

  std::vector<double> ra = knn_radii_sq(pa, knn_k);
  std::vector<double> rb = knn_radii_sq(pb, knn_k);
  double precision = manifold_fraction(pb, pa, ra);
  double recall = manifold_fraction(pa, pb, rb);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double combined_similarity(const SimilaritySpec& spec, const SkillSample& a,
                           const SkillSample& b) {
  spec.validate();
  return eval_terms(spec, a, b);
}

KernelMatrix build_kernel_matrix(const std::vector<SkillSample>& samples,
                                 const SimilaritySpec& spec) {
  if (samples.empty()) fail(ErrorCode::empty_input, "build_kernel_matrix: no skills");
  spec.validate();
  int n = static_cast<int>(samples.size());
  SymMatrix k(n);
  for (int i = 0; i < n; ++i) {
    k.at(i, i) = 1.0;  // by definition, never evaluated
    for (int j = i + 1; j < n; ++j) {
      double v = eval_terms(spec, samples[i], samples[j]);
      k.at(i, j) = v;
      k.at(j, i) = v;
    }
  }
  return KernelMatrix{std::move(k)};
}

}  // namespace vendirl
