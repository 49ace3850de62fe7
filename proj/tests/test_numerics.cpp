#include <cmath>

#include "doctest.h"
#include "test_util.hpp"
#include "vendirl/numerics.hpp"

using namespace vendirl;
using testutil::brute_force_det;
using testutil::make_trajectory;
using testutil::random_gram;
using testutil::random_spd;
using testutil::random_symmetric;

namespace {

double trace(const SymMatrix& m) {
  double t = 0.0;
  for (int i = 0; i < m.dim; ++i) t += m.at(i, i);
  return t;
}

// max-norm reconstruction error of Q diag(lambda) Q^T against the input.
double reconstruction_error(const SymMatrix& m, const EigenResult& r) {
  int n = m.dim;
  const auto& q = *r.eigenvectors;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += q[i * n + k] * r.eigenvalues[k] * q[j * n + k];
      worst = std::max(worst, std::abs(s - m.at(i, j)));
    }
  return worst;
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("eigenvalues of the identity") {
  EigenResult r = sym_eigenvalues(SymMatrix::identity(3));
  REQUIRE(r.eigenvalues.size() == 3);
  for (double v : r.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("2x2 analytic eigenvalues") {
  // [[2,1],[1,2]]: characteristic polynomial (2-l)^2 - 1, roots 3 and 1.
  SymMatrix m(2);
  m.at(0, 0) = 2; m.at(0, 1) = 1; m.at(1, 0) = 1; m.at(1, 1) = 2;
  EigenResult r = sym_eigenvalues(m);
  CHECK(r.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rank-1 all-ones matrix") {
  SymMatrix m(4);
  for (auto& v : m.entries) v = 1.0;
  EigenResult r = sym_eigenvalues(m);
  CHECK(r.eigenvalues[0] == doctest::Approx(4.0).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) CHECK(std::abs(r.eigenvalues[i]) < 1e-10);
}

TEST_CASE("eigenvalue sum equals trace, dims 1..16") {
  Rng rng(101);
  for (int dim = 1; dim <= 16; ++dim) {
    for (int rep = 0; rep < 8; ++rep) {
      SymMatrix m = random_symmetric(dim, rng);
      EigenResult r = sym_eigenvalues(m);
      double sum = 0.0;
      for (double v : r.eigenvalues) sum += v;
      CHECK(std::abs(sum - trace(m)) <= 1e-9 * dim);
      // descending order
      for (std::size_t i = 1; i < r.eigenvalues.size(); ++i)
        CHECK(r.eigenvalues[i - 1] >= r.eigenvalues[i]);
    }
  }
}

TEST_CASE("Gram matrices have nonnegative spectrum") {
  Rng rng(202);
  for (int rep = 0; rep < 30; ++rep) {
    int dim = 1 + rng.uniform_int(12);
    EigenResult r = sym_eigenvalues(random_gram(dim, rng));
    for (double v : r.eigenvalues) CHECK(v >= -1e-9);
  }
}

TEST_CASE("eigenvector reconstruction") {
  Rng rng(303);
  for (int rep = 0; rep < 10; ++rep) {
    int dim = 2 + rng.uniform_int(8);
    SymMatrix m = random_symmetric(dim, rng);
    EigenResult r = sym_eigenvalues(m, true);
    REQUIRE(r.eigenvectors.has_value());
    CHECK(reconstruction_error(m, r) <= 1e-8);
  }
}

TEST_CASE("rejects asymmetric and non-finite input") {
  SymMatrix m(2);
  m.at(0, 0) = 1; m.at(0, 1) = 0.5; m.at(1, 0) = 0.4; m.at(1, 1) = 1;
  CHECK_THROWS_AS(sym_eigenvalues(m), Error);
  SymMatrix bad(2);
  bad.at(0, 1) = bad.at(1, 0) = std::nan("");
  CHECK_THROWS_AS(sym_eigenvalues(bad), Error);
}

TEST_CASE("shannon entropy closed forms") {
  CHECK(shannon_entropy(std::vector<double>{1.0, 0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(shannon_entropy(std::vector<double>{0.5, 0.5}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(shannon_entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("shannon entropy bounds and clamping") {
  Rng rng(404);
  for (int rep = 0; rep < 50; ++rep) {
    int n = 1 + rng.uniform_int(12);
    std::vector<double> p(n);
    double sum = 0.0;
    for (auto& v : p) { v = rng.uniform(); sum += v; }
    for (auto& v : p) v /= sum;
    double h = shannon_entropy(p);
    CHECK(h >= 0.0);
    CHECK(h <= std::log(static_cast<double>(n)) + 1e-12);
  }
  // uniform hits the bound
  std::vector<double> u(6, 1.0 / 6.0);
  CHECK(std::abs(shannon_entropy(u) - std::log(6.0)) < 1e-9);
  // tiny negatives are clamped
  CHECK(shannon_entropy(std::vector<double>{1.0 + 5e-10, -5e-10}) ==
        doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("shannon entropy rejects bad distributions") {
  CHECK_THROWS_AS(shannon_entropy(std::vector<double>{0.6, 0.6}), Error);
  CHECK_THROWS_AS(shannon_entropy(std::vector<double>{0.9, -0.1}), Error);
}

TEST_CASE("cholesky logdet closed forms") {
  CHECK(cholesky_logdet(SymMatrix::identity(5)) == doctest::Approx(0.0).epsilon(1e-15));
  SymMatrix d(2);
  d.at(0, 0) = 4; d.at(1, 1) = 9;
  CHECK(cholesky_logdet(d) == doctest::Approx(std::log(36.0)).epsilon(1e-12));
}

TEST_CASE("cholesky logdet matches brute-force determinant") {
  Rng rng(505);
  for (int rep = 0; rep < 500; ++rep) {
    int dim = 1 + rng.uniform_int(4);
    SymMatrix m = random_spd(dim, rng);
    double expected = std::log(brute_force_det(m));
    double got = cholesky_logdet(m);
    CHECK(std::abs(got - expected) <= 1e-8 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("cholesky jitter handles singular PSD input") {
  SymMatrix ones(2);
  for (auto& v : ones.entries) v = 1.0;
  double ld = cholesky_logdet(ones);  // det ~ 2e-12 after the first jitter rung
  CHECK(ld < std::log(1e-10));
}

TEST_CASE("cholesky rejects indefinite input") {
  SymMatrix m(2);
  m.at(0, 0) = 1; m.at(0, 1) = 2; m.at(1, 0) = 2; m.at(1, 1) = 1;  // eigenvalues 3, -1
  CHECK_THROWS_AS(cholesky_logdet(m), Error);
}

TEST_CASE("trajectory mean") {
  CHECK(trajectory_mean(make_trajectory({{0, 0}, {1, 1}})) == std::vector<double>{0.5, 0.5});
  CHECK(trajectory_mean(make_trajectory({{3.5}})) == std::vector<double>{3.5});
  auto m = trajectory_mean(make_trajectory({{0, 0}, {0, 2}, {3, 1}}));
  CHECK(m[0] == doctest::Approx(1.0));
  CHECK(m[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(trajectory_mean(Trajectory(2)), Error);
}

TEST_CASE("trajectory covariance") {
  // constant trajectory: zero matrix
  auto z = trajectory_covariance(make_trajectory({{1, 2}, {1, 2}, {1, 2}}));
  for (double v : z.entries) CHECK(v == 0.0);

  // divisor T-1: [(0,0),(2,0)] -> [[2,0],[0,0]]
  auto c = trajectory_covariance(make_trajectory({{0, 0}, {2, 0}}));
  CHECK(c.at(0, 0) == doctest::Approx(2.0));
  CHECK(c.at(0, 1) == 0.0);
  CHECK(c.at(1, 1) == 0.0);

  CHECK_THROWS_AS(trajectory_covariance(make_trajectory({{1, 1}})), Error);
}

TEST_CASE("trajectory covariance is symmetric PSD") {
  Rng rng(606);
  for (int rep = 0; rep < 20; ++rep) {
    int dim = 1 + rng.uniform_int(4);
    int steps = 2 + rng.uniform_int(30);
    Trajectory t = testutil::random_trajectory(steps, dim, rng);
    SymMatrix c = trajectory_covariance(t);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) CHECK(c.at(i, j) == c.at(j, i));
    EigenResult r = sym_eigenvalues(c);
    for (double v : r.eigenvalues) CHECK(v >= -1e-10);
  }
}

}  // TEST_SUITE
