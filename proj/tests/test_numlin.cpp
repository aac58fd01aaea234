#include <doctest.h>

#include <random>

#include "regalg/numlin.hpp"
#include "regalg/poly.hpp"
#include "test_data.hpp"

using namespace regalg;

namespace {

MatrixXcd random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  MatrixXcd a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = cplx(unit(rng), unit(rng));
  return a;
}

MatrixXcd pseudo_inverse(const MatrixXcd& a) {
  Eigen::JacobiSVD<MatrixXcd> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd sigma = dec.singularValues();
  Eigen::VectorXd inv = sigma;
  for (Eigen::Index j = 0; j < sigma.size(); ++j)
    inv[j] = sigma[j] > 1e-13 * sigma[0] ? 1.0 / sigma[j] : 0.0;
  return dec.matrixV() * inv.asDiagonal() * dec.matrixU().adjoint();
}

}  // namespace

TEST_CASE("svd: identity, zero, padded diagonal") {
  SvdResult id = svd(MatrixXcd::Identity(3, 3));
  for (int j = 0; j < 3; ++j) CHECK(id.singular_values[j] == doctest::Approx(1.0));

  SvdResult zero = svd(MatrixXcd::Zero(2, 3));
  for (Eigen::Index j = 0; j < zero.singular_values.size(); ++j)
    CHECK(zero.singular_values[j] == 0.0);

  MatrixXcd d = MatrixXcd::Zero(3, 2);
  d(0, 0) = cplx(3.0);
  d(1, 1) = cplx(4.0);
  SvdResult ds = svd(d);
  CHECK(ds.singular_values[0] == doctest::Approx(4.0));
  CHECK(ds.singular_values[1] == doctest::Approx(3.0));
}

TEST_CASE("svd: reconstruction and determinism") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 10; ++t) {
    MatrixXcd a = random_matrix(6, 4, rng);
    SvdResult s = svd(a);
    MatrixXcd rebuilt =
        s.left_vectors * s.singular_values.asDiagonal().toDenseMatrix().cast<cplx>() *
        s.right_vectors.adjoint();
    CHECK((a - rebuilt).norm() <= 1e-12 * a.norm());
    SvdResult again = svd(a);
    CHECK((s.right_vectors - again.right_vectors).norm() <= 1e-13);
  }
}

TEST_CASE("numerical_rank: gaps, zero, monotonicity") {
  MatrixXcd d = MatrixXcd::Zero(2, 2);
  d(0, 0) = cplx(1.0);
  d(1, 1) = cplx(1e-12);
  CHECK(numerical_rank(d, 1e-6) == 1);
  CHECK(numerical_rank(MatrixXcd::Zero(3, 3), 1e-6) == 0);

  std::mt19937_64 rng(29);
  MatrixXcd a = random_matrix(5, 5, rng);
  int prev = 5;
  for (double tol : {1e-12, 1e-6, 1e-2, 0.5, 1.0}) {
    int r = numerical_rank(a, tol);
    CHECK(r <= prev);
    prev = r;
  }
}

TEST_CASE("numerical nullity of the degree-13/11 Sylvester matrix is 10") {
  Eigen::MatrixXcd s = sylvester_matrix(parse(testdata::kGcdP), parse(testdata::kGcdQ), 1);
  CHECK(numerical_nullity(s, 1e-3) == 10);
}

TEST_CASE("lsq_min_norm: identity, average, normal equations") {
  VectorXcd b(2);
  b << cplx(1.0), cplx(3.0);
  CHECK((lsq_min_norm(MatrixXcd::Identity(2, 2), b) - b).norm() <= 1e-14);

  MatrixXcd ones(2, 1);
  ones << cplx(1.0), cplx(1.0);
  CHECK(std::abs(lsq_min_norm(ones, b)[0] - cplx(2.0)) <= 1e-14);

  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    MatrixXcd a = random_matrix(20, 7, rng);
    VectorXcd rhs = random_matrix(20, 1, rng);
    VectorXcd x = lsq_min_norm(a, rhs);
    CHECK((a.adjoint() * (a * x - rhs)).norm() <= 1e-10 * a.norm() * rhs.norm());
  }
}

TEST_CASE("lsq_min_norm returns the minimum-norm solution on rank deficiency") {
  std::mt19937_64 rng(37);
  MatrixXcd a = random_matrix(6, 2, rng) * random_matrix(2, 5, rng);  // rank 2
  VectorXcd b = random_matrix(6, 1, rng);
  VectorXcd x = lsq_min_norm(a, b);
  CHECK((x - pseudo_inverse(a) * b).norm() <= 1e-10 * x.norm());
}

TEST_CASE("smallest_singular_pair and spectral_norm") {
  MatrixXcd d = MatrixXcd::Zero(2, 2);
  d(0, 0) = cplx(5.0);
  d(1, 1) = cplx(2.0);
  auto [smin, vec] = smallest_singular_pair(d);
  CHECK(smin == doctest::Approx(2.0));
  CHECK(std::abs(vec[1]) == doctest::Approx(1.0));
  CHECK(spectral_norm(d) == doctest::Approx(5.0));

  std::mt19937_64 rng(41);
  for (int t = 0; t < 10; ++t) {
    MatrixXcd a = random_matrix(5, 4, rng);
    CHECK(smallest_singular_pair(a).first * spectral_norm(pseudo_inverse(a)) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("pseudo-inverse identity A A+ A = A") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 10; ++t) {
    MatrixXcd a = random_matrix(4, 2, rng) * random_matrix(2, 6, rng);
    MatrixXcd ap = pseudo_inverse(a);
    CHECK((a * ap * a - a).norm() <= 1e-10 * a.norm());
  }
}

TEST_CASE("rank_gap_ratio") {
  VectorXd sigma(3);
  sigma << 10.0, 1.0, 1e-8;
  CHECK(rank_gap_ratio(sigma, 2) == doctest::Approx(1e8));
  CHECK(std::isinf(rank_gap_ratio(sigma, 3)));
}

TEST_CASE("matrix text format round-trips") {
  MatrixXcd g = parse_matrix(testdata::kGodunov);
  REQUIRE(g.rows() == 7);
  REQUIRE(g.cols() == 7);
  CHECK(g(0, 1) == cplx(2064.0));
  CHECK(g(6, 0) == cplx(-2176.0));
  MatrixXcd back = parse_matrix(format_matrix(g));
  CHECK((back - g).norm() <= 1e-12 * g.norm());

  MatrixXcd c = parse_matrix("1+2i -3i\n0.5-1e-3i 4\n");
  CHECK(c(0, 0) == cplx(1.0, 2.0));
  CHECK(c(0, 1) == cplx(0.0, -3.0));
  CHECK(c(1, 0) == cplx(0.5, -1e-3));
  CHECK(c(1, 1) == cplx(4.0));
}
