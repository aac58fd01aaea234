#ifndef REGALG_RANKREV_HPP
#define REGALG_RANKREV_HPP

#include "regalg/gn.hpp"

namespace regalg {

struct KernelResult {
  int rank = 0;
  MatrixXcd kernel_basis;   // X, n x (n-r), C^H X = I
  MatrixXcd normalizer;     // C, n x (n-r)
  double backward_error = 0.0;  // Frobenius distance to the rank-r stratum / ||A||_F
  int codimension = 0;          // (m-r)(n-r)
  double gap_ratio = 0.0;
  bool marginal = false;
  GnResult trace;
  double lipschitz_bound = 0.0;
  double condition = 0.0;
};

// Residual (C^H X - I, A X) over X in C^{n x (n-r)}, flattened column-major.
LeastSquaresModel kernel_model(const MatrixXcd& a, const MatrixXcd& c, int r);

// Stage I rank decision by SVD, Stage II refinement of the kernel basis.
KernelResult numerical_kernel(const MatrixXcd& a, double tol,
                              const GnConfig& cfg = GnConfig{});

}  // namespace regalg

#endif
