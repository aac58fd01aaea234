#include <doctest.h>

#include <random>

#include "regalg/rankrev.hpp"

using namespace regalg;

namespace {

MatrixXcd random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  MatrixXcd a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = cplx(unit(rng), unit(rng));
  return a;
}

// largest principal angle between equal-dimension subspaces spanned by the columns
double subspace_angle(const MatrixXcd& a, const MatrixXcd& b) {
  Eigen::HouseholderQR<MatrixXcd> qa(a), qb(b);
  MatrixXcd ua = qa.householderQ() * MatrixXcd::Identity(a.rows(), a.cols());
  MatrixXcd ub = qb.householderQ() * MatrixXcd::Identity(b.rows(), b.cols());
  Eigen::VectorXd s = Eigen::JacobiSVD<MatrixXcd>(ua.adjoint() * ub).singularValues();
  double c = std::min(1.0, s[s.size() - 1]);
  return std::acos(c);
}

}  // namespace

TEST_CASE("numerical_kernel: diagonal with one zero") {
  MatrixXcd a = MatrixXcd::Zero(3, 3);
  a(0, 0) = cplx(1.0);
  a(1, 1) = cplx(1.0);
  KernelResult res = numerical_kernel(a, 1e-6);
  CHECK(res.rank == 2);
  REQUIRE(res.kernel_basis.cols() == 1);
  CHECK(std::abs(res.kernel_basis(2, 0)) == doctest::Approx(1.0));
  CHECK(res.codimension == 1);
}

TEST_CASE("numerical_kernel: zero matrix and full rank") {
  KernelResult zero = numerical_kernel(MatrixXcd::Zero(3, 3), 1e-6);
  CHECK(zero.rank == 0);
  CHECK(zero.kernel_basis.cols() == 3);
  CHECK((zero.normalizer.adjoint() * zero.kernel_basis - MatrixXcd::Identity(3, 3)).norm() <=
        1e-10);

  std::mt19937_64 rng(113);
  MatrixXcd full = random_matrix(5, 4, rng) + 2.0 * MatrixXcd::Identity(5, 4);
  KernelResult fr = numerical_kernel(full, 1e-8);
  CHECK(fr.rank == 4);
  CHECK(fr.kernel_basis.cols() == 0);
  CHECK(fr.backward_error == 0.0);
}

TEST_CASE("numerical_kernel recovers a noisy rank-4 kernel") {
  std::mt19937_64 rng(127);
  for (unsigned seed = 0; seed < 50; ++seed) {
    MatrixXcd left = random_matrix(8, 4, rng);
    MatrixXcd right = random_matrix(4, 6, rng);
    MatrixXcd exact = left * right;
    MatrixXcd noisy = exact + 1e-8 * random_matrix(8, 6, rng);
    KernelResult res = numerical_kernel(noisy, 1e-6);
    REQUIRE(res.rank == 4);
    // oracle kernel: right singular vectors of the exact matrix
    Eigen::JacobiSVD<MatrixXcd> dec(exact, Eigen::ComputeFullV);
    MatrixXcd truth = dec.matrixV().rightCols(2);
    CHECK(subspace_angle(res.kernel_basis, truth) <= 1e-7);
  }
}

TEST_CASE("exact-data idempotence and the normalization certificate") {
  std::mt19937_64 rng(131);
  MatrixXcd a = random_matrix(6, 3, rng) * random_matrix(3, 5, rng);
  KernelResult res = numerical_kernel(a, 1e-10);
  REQUIRE(res.rank == 3);
  CHECK((a * res.kernel_basis).norm() <= 1e-12 * a.norm());
  CHECK((res.normalizer.adjoint() * res.kernel_basis -
         MatrixXcd::Identity(res.kernel_basis.cols(), res.kernel_basis.cols()))
            .norm() <= 1e-10);
  CHECK(res.codimension == (6 - 3) * (5 - 3));
}

TEST_CASE("backward error equals the singular-value tail") {
  std::mt19937_64 rng(137);
  MatrixXcd a = random_matrix(5, 5, rng);
  // force a clear gap: two tiny singular values
  Eigen::JacobiSVD<MatrixXcd> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd sigma(5);
  sigma << 3.0, 2.0, 1.0, 1e-9, 5e-10;
  MatrixXcd shaped = dec.matrixU() * sigma.asDiagonal() * dec.matrixV().adjoint();
  KernelResult res = numerical_kernel(shaped, 1e-6);
  REQUIRE(res.rank == 3);
  double expected = std::sqrt(1e-18 + 25e-20) / shaped.norm();
  CHECK(res.backward_error == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("kernel model codimension bookkeeping") {
  std::mt19937_64 rng(139);
  MatrixXcd a = random_matrix(4, 2, rng) * random_matrix(2, 4, rng);
  KernelResult res = numerical_kernel(a, 1e-8);
  REQUIRE(res.rank == 2);
  // (m - r)(n - r) = dim(W) - dim(V) for the model
  int m = 4, n = 4, r = 2;
  int dim_w = (n - r) * (n - r) + m * (n - r);
  int dim_v = n * (n - r);
  CHECK(res.codimension == dim_w - dim_v);
  CHECK(res.codimension == (m - r) * (n - r));
}
