#ifndef REGALG_NUMLIN_HPP
#define REGALG_NUMLIN_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace regalg {

using cplx = std::complex<double>;

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct SvdResult {
  VectorXd singular_values;  // descending
  MatrixXcd left_vectors;    // thin U
  MatrixXcd right_vectors;   // thin V
};

enum class RankMode { absolute, relative };

// Thin SVD with a deterministic sign convention: the largest-magnitude
// entry of each right singular vector is made real positive.
SvdResult svd(const MatrixXcd& a);

// Count of singular values above tol (absolute) or tol*sigma_1 (relative).
int numerical_rank(const MatrixXcd& a, double tol, RankMode mode = RankMode::relative);
int numerical_nullity(const MatrixXcd& a, double tol, RankMode mode = RankMode::relative);

// sigma_r / sigma_{r+1} at the rank decision; +inf when nothing was cut.
double rank_gap_ratio(const VectorXd& sigma, int rank);

// Minimum-norm least squares solution of ||Ax - b||; QR on full column rank,
// SVD otherwise.
VectorXcd lsq_min_norm(const MatrixXcd& a, const VectorXcd& b);

std::pair<double, VectorXcd> smallest_singular_pair(const MatrixXcd& a);
double spectral_norm(const MatrixXcd& a);

// Orthonormal basis of the numerical kernel: right singular vectors for the
// singular values at or below the rank cut.
MatrixXcd kernel_basis(const MatrixXcd& a, double tol, RankMode mode = RankMode::relative);

// Matrix text format used by the CLI: one row per line, whitespace-separated
// entries, complex entries as a+bi / a-bi.
MatrixXcd parse_matrix(const std::string& text);
std::string format_matrix(const MatrixXcd& a);

}  // namespace regalg

#endif
