#include "vendirl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vendirl {

namespace {

constexpr double kJacobiOffTol = 1e-12;
constexpr int kJacobiMaxSweeps = 100;

void check_symmetric_finite(const SymMatrix& m, const char* op) {
  if (m.dim < 1) fail(ErrorCode::invalid_input, std::string(op) + ": dim must be >= 1");
  if (m.entries.size() != static_cast<std::size_t>(m.dim) * m.dim)
    fail(ErrorCode::invalid_input, std::string(op) + ": entry count does not match dim");
  for (double v : m.entries)
    if (!std::isfinite(v)) fail(ErrorCode::invalid_input, std::string(op) + ": non-finite entry");
  for (int i = 0; i < m.dim; ++i)
    for (int j = i + 1; j < m.dim; ++j)
      if (std::abs(m.at(i, j) - m.at(j, i)) > kSymmetryTol)
        fail(ErrorCode::symmetry_violation, std::string(op) + ": matrix is not symmetric");
}

double off_diagonal_norm(const SymMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i)
    for (int j = i + 1; j < a.dim; ++j) s += 2.0 * a.at(i, j) * a.at(i, j);
  return std::sqrt(s);
}

// One Cholesky attempt; returns log det on success.
bool try_cholesky_logdet(const SymMatrix& m, double jitter, double& logdet_out) {
  int n = m.dim;
  std::vector<double> l(static_cast<std::size_t>(n) * n, 0.0);
  double logdet = 0.0;
  for (int j = 0; j < n; ++j) {
    double d = m.at(j, j) + jitter;
    for (int k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    double ljj = std::sqrt(d);
    l[j * n + j] = ljj;
    logdet += std::log(ljj);
    for (int i = j + 1; i < n; ++i) {
      double s = m.at(i, j);
      for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / ljj;
    }
  }
  logdet_out = 2.0 * logdet;
  return true;
}

}  // namespace

EigenResult sym_eigenvalues(const SymMatrix& m, bool want_vectors) {
  check_symmetric_finite(m, "sym_eigenvalues");
  int n = m.dim;

  // Work on an exactly symmetric copy.
  SymMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a.at(i, j) = 0.5 * (m.at(i, j) + m.at(j, i));

  std::vector<double> v;
  if (want_vectors) {
    v.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;
  }

  for (int sweep = 0; sweep < kJacobiMaxSweeps && n > 1; ++sweep) {
    if (off_diagonal_norm(a) <= kJacobiOffTol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a.at(p, q);
        if (apq == 0.0) continue;
        double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;

        double app = a.at(p, p), aqq = a.at(q, q);
        a.at(p, p) = app - t * apq;
        a.at(q, q) = aqq + t * apq;
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          double aip = a.at(i, p), aiq = a.at(i, q);
          a.at(i, p) = c * aip - s * aiq;
          a.at(p, i) = a.at(i, p);
          a.at(i, q) = s * aip + c * aiq;
          a.at(q, i) = a.at(i, q);
        }
        if (want_vectors) {
          for (int i = 0; i < n; ++i) {
            double vip = v[i * n + p], viq = v[i * n + q];
            v[i * n + p] = c * vip - s * viq;
            v[i * n + q] = s * vip + c * viq;
          }
        }
      }
    }
  }

  // Sort descending, carrying eigenvector columns along.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a.at(i, i) > a.at(j, j); });

  EigenResult result;
  result.eigenvalues.resize(n);
  for (int k = 0; k < n; ++k) result.eigenvalues[k] = a.at(order[k], order[k]);
  if (want_vectors) {
    std::vector<double> sorted(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) sorted[i * n + k] = v[i * n + order[k]];
    result.eigenvectors = std::move(sorted);
  }
  return result;
}

double shannon_entropy(std::span<const double> p) {
  if (p.empty()) fail(ErrorCode::empty_input, "shannon_entropy: empty vector");
  double sum = 0.0;
  std::vector<double> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    double x = p[i];
    if (!std::isfinite(x)) fail(ErrorCode::invalid_input, "shannon_entropy: non-finite entry");
    if (x < -1e-9) fail(ErrorCode::invalid_input, "shannon_entropy: negative probability");
    q[i] = std::max(x, 0.0);
    sum += q[i];
  }
  if (std::abs(sum - 1.0) > 1e-6)
    fail(ErrorCode::normalization, "shannon_entropy: probabilities sum to " + std::to_string(sum));
  double h = 0.0;
  for (double x : q) {
    if (x <= 0.0) continue;  // 0 log 0 = 0
    double px = x / sum;
    h -= px * std::log(px);
  }
  return h;
}

double cholesky_logdet(const SymMatrix& m) {
  check_symmetric_finite(m, "cholesky_logdet");
  double logdet = 0.0;
  if (try_cholesky_logdet(m, 0.0, logdet)) return logdet;
  for (double jitter = 1e-12; jitter <= 1.0000001e-6; jitter *= 10.0)
    if (try_cholesky_logdet(m, jitter, logdet)) return logdet;
  fail(ErrorCode::not_positive_definite,
       "cholesky_logdet: matrix is not positive definite (jitter up to 1e-6 exhausted)");
}

std::vector<double> trajectory_mean(const Trajectory& t) {
  int len = t.length();
  if (len < 1) fail(ErrorCode::empty_input, "trajectory_mean: empty trajectory");
  std::vector<double> mean(t.dim, 0.0);
  for (int s = 0; s < len; ++s) {
    auto obs = t.observation(s);
    for (int d = 0; d < t.dim; ++d) mean[d] += obs[d];
  }
  for (double& v : mean) v /= len;
  return mean;
}

SymMatrix trajectory_covariance(const Trajectory& t) {
  int len = t.length();
  if (len < 2)
    fail(ErrorCode::insufficient_samples, "trajectory_covariance: need at least 2 observations");
  std::vector<double> mean = trajectory_mean(t);
  SymMatrix cov(t.dim);
  for (int s = 0; s < len; ++s) {
    auto obs = t.observation(s);
    for (int i = 0; i < t.dim; ++i)
      for (int j = i; j < t.dim; ++j)
        cov.at(i, j) += (obs[i] - mean[i]) * (obs[j] - mean[j]);
  }
  double divisor = static_cast<double>(len - kCovarianceDdof);
  for (int i = 0; i < t.dim; ++i)
    for (int j = i; j < t.dim; ++j) {
      cov.at(i, j) /= divisor;
      cov.at(j, i) = cov.at(i, j);
    }
  return cov;
}

}  // namespace vendirl
