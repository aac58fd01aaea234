#ifndef REGALG_GN_HPP
#define REGALG_GN_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "regalg/numlin.hpp"

namespace regalg {

// A holomorphic residual map with analytic Jacobian, the object the
// Gauss-Newton engine consumes. The data point is captured inside the
// closures; data_jacobian (f_u) is optional and only needed for sensitivity.
struct LeastSquaresModel {
  int dim_unknowns = 0;
  int dim_residual = 0;
  std::function<VectorXcd(const VectorXcd&)> residual;
  std::function<MatrixXcd(const VectorXcd&)> jacobian;
  std::function<MatrixXcd(const VectorXcd&)> data_jacobian;  // may be empty
};

struct GnConfig {
  int max_iterations = 50;
  double step_tolerance = 1e-12;
  double residual_stagnation = 1e-3;
  double injectivity_floor = 1e-10;  // relative to sigma_1 of the Jacobian
};

struct GnStep {
  int iteration;
  double residual_norm;
  double step_norm;
  double sigma_min;
  bool retreated;
};

struct GnResult {
  VectorXcd solution;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<GnStep> history;
  double jacobian_sigma_min = 0.0;
};

struct GnError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when the Jacobian is not numerically injective at the current
// iterate; callers may retry with fresh normalization data.
struct GnRankDeficient : GnError {
  using GnError::GnError;
};

GnResult gauss_newton(const LeastSquaresModel& model, const VectorXcd& v0,
                      const GnConfig& cfg = GnConfig{});

// True iff ||J(v)^H r(v)|| <= tol * (1 + ||J(v)|| * ||r(v)||).
bool check_critical_point(const LeastSquaresModel& model, const VectorXcd& v, double tol);

// Worst relative column discrepancy between the analytic Jacobian and
// central differences of the residual.
double jacobian_fd_check(const LeastSquaresModel& model, const VectorXcd& v,
                         double step = 1e-7);

struct Sensitivity {
  double lipschitz_bound;      // ||f_v^dagger||_2 * ||f_u||_2
  double sigma_min_jacobian;
};

Sensitivity sensitivity(const LeastSquaresModel& model, const VectorXcd& v_star);

}  // namespace regalg

#endif
