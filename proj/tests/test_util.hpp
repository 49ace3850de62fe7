#pragma once

#include <cmath>
#include <vector>

#include "vendirl/numerics.hpp"
#include "vendirl/rng.hpp"

namespace testutil {

using vendirl::Rng;
using vendirl::SymMatrix;
using vendirl::Trajectory;

inline SymMatrix random_symmetric(int dim, Rng& rng) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double v = rng.uniform(-1.0, 1.0);
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  return m;
}

// Gram matrix G^T G of a random dim x dim matrix; PSD by construction.
inline SymMatrix random_gram(int dim, Rng& rng) {
  std::vector<double> g(static_cast<std::size_t>(dim) * dim);
  for (auto& v : g) v = rng.uniform(-1.0, 1.0);
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) s += g[k * dim + i] * g[k * dim + j];
      m.at(i, j) = s;
      m.at(j, i) = s;
    }
  return m;
}

// Strictly positive definite: Gram plus a positive diagonal shift.
inline SymMatrix random_spd(int dim, Rng& rng, double shift = 0.5) {
  SymMatrix m = random_gram(dim, rng);
  for (int i = 0; i < dim; ++i) m.at(i, i) += shift;
  return m;
}

// Cofactor-expansion determinant, dims 1..4. Independent of the Cholesky path.
inline double brute_force_det(const SymMatrix& m) {
  int n = m.dim;
  if (n == 1) return m.at(0, 0);
  if (n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
  double det = 0.0;
  int sign = 1;
  for (int col = 0; col < n; ++col) {
    SymMatrix minor(n - 1);
    for (int i = 1; i < n; ++i) {
      int jj = 0;
      for (int j = 0; j < n; ++j) {
        if (j == col) continue;
        minor.at(i - 1, jj++) = m.at(i, j);
      }
    }
    det += sign * m.at(0, col) * brute_force_det(minor);
    sign = -sign;
  }
  return det;
}

inline Trajectory make_trajectory(const std::vector<std::vector<double>>& rows) {
  Trajectory t(rows.empty() ? 0 : static_cast<int>(rows.front().size()));
  for (const auto& r : rows) t.append(r);
  return t;
}

inline Trajectory random_trajectory(int steps, int dim, Rng& rng, double scale = 1.0) {
  Trajectory t(dim);
  std::vector<double> obs(dim);
  for (int s = 0; s < steps; ++s) {
    for (auto& v : obs) v = rng.uniform(-scale, scale);
    t.append(obs);
  }
  return t;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testutil
