#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vendirl/error.hpp"

namespace vendirl {

/// Ordered observations from one episode, row-major T x D.
struct Trajectory {
  int dim = 0;
  std::vector<double> data;

  Trajectory() = default;
  explicit Trajectory(int d) : dim(d) {}

  int length() const { return dim > 0 ? static_cast<int>(data.size()) / dim : 0; }

  std::span<const double> observation(int t) const {
    return {data.data() + static_cast<std::size_t>(t) * dim, static_cast<std::size_t>(dim)};
  }

  void append(std::span<const double> obs) {
    if (static_cast<int>(obs.size()) != dim)
      fail(ErrorCode::shape_mismatch, "Trajectory::append: observation dimension mismatch");
    data.insert(data.end(), obs.begin(), obs.end());
  }
};

/// Dense symmetric matrix, row-major storage.
struct SymMatrix {
  int dim = 0;
  std::vector<double> entries;

  SymMatrix() = default;
  explicit SymMatrix(int d) : dim(d), entries(static_cast<std::size_t>(d) * d, 0.0) {}

  static SymMatrix identity(int d) {
    SymMatrix m(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
  }

  double& at(int i, int j) { return entries[static_cast<std::size_t>(i) * dim + j]; }
  double at(int i, int j) const { return entries[static_cast<std::size_t>(i) * dim + j]; }
};

/// Eigenvalues in descending order; eigenvectors (when requested) stored
/// row-major dim x dim with column j holding the eigenvector of eigenvalue j.
struct EigenResult {
  std::vector<double> eigenvalues;
  std::optional<std::vector<double>> eigenvectors;
};

inline constexpr double kSymmetryTol = 1e-12;

/// Sample covariance divisor is (T - kCovarianceDdof); the paper leaves the
/// divisor unstated, the unbiased T-1 convention is used throughout.
inline constexpr int kCovarianceDdof = 1;

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
EigenResult sym_eigenvalues(const SymMatrix& m, bool want_vectors = false);

/// -sum p_i log p_i (natural log, 0 log 0 = 0). Entries in [-1e-9, 0) are
/// clamped to zero and the vector is renormalized; the pre-normalization sum
/// must be within 1e-6 of 1.
double shannon_entropy(std::span<const double> p);

/// log det(m) = 2 sum_i log(l_ii) with m = L L^T. Escalating jitter eps*I
/// (1e-12 .. 1e-6) is applied if the factorization fails on the raw matrix.
double cholesky_logdet(const SymMatrix& m);

/// Componentwise arithmetic mean over time steps.
std::vector<double> trajectory_mean(const Trajectory& t);

/// Unbiased sample covariance (divisor T - 1), D x D.
SymMatrix trajectory_covariance(const Trajectory& t);

}  // namespace vendirl
