#include "regalg/gn.hpp"

#include <cmath>
#include <limits>

namespace regalg {

GnResult gauss_newton(const LeastSquaresModel& model, const VectorXcd& v0,
                      const GnConfig& cfg) {
  if (v0.size() != model.dim_unknowns)
    throw std::invalid_argument("gauss_newton: initial iterate has wrong dimension");

  GnResult result;
  VectorXcd v = v0;
  VectorXcd r = model.residual(v);
  double rnorm = r.norm();
  int growth_streak = 0;
  double sigma_min = 0.0;

  for (int it = 0; it < cfg.max_iterations; ++it) {
    MatrixXcd jac = model.jacobian(v);
    SvdResult js = svd(jac);
    sigma_min = js.singular_values[js.singular_values.size() - 1];
    double sigma_max = js.singular_values[0];
    if (sigma_max == 0.0 || sigma_min < cfg.injectivity_floor * sigma_max)
      throw GnRankDeficient("gauss_newton: Jacobian numerically rank-deficient");

    // minimum-norm step from the factorization already at hand; directions
    // with near-vanishing singular values are distrusted when they would
    // dominate the step, since the linearization is invalid at that range
    double cut = std::max(jac.rows(), jac.cols()) *
                 std::numeric_limits<double>::epsilon() * sigma_max;
    double suspect = 1e-8 * sigma_max;
    VectorXcd step = VectorXcd::Zero(jac.cols());
    for (Eigen::Index j = 0; j < js.singular_values.size(); ++j) {
      if (js.singular_values[j] <= cut) break;
      cplx coef = js.left_vectors.col(j).dot(r) / js.singular_values[j];
      if (js.singular_values[j] < suspect && std::abs(coef) > 1.0) continue;
      step += coef * js.right_vectors.col(j);
    }
    double step_norm = step.norm();

    if (step_norm <= cfg.step_tolerance * (1.0 + v.norm())) {
      v -= step;
      r = model.residual(v);
      rnorm = r.norm();
      result.history.push_back({it, rnorm, step_norm, sigma_min, false});
      result.converged = check_critical_point(model, v, 1e-8);
      break;
    }

    // retreat heuristic: halve the step while the residual increases
    VectorXcd v_next = v - step;
    VectorXcd r_next = model.residual(v_next);
    bool retreated = false;
    for (int h = 0; h < 30 && r_next.norm() > rnorm; ++h) {
      step *= 0.5;
      v_next = v - step;
      r_next = model.residual(v_next);
      retreated = true;
    }
    double rnorm_next = r_next.norm();
    growth_streak = (rnorm_next > rnorm) ? growth_streak + 1 : 0;
    if (growth_streak >= 5) throw GnError("gauss_newton: residual diverging");

    v = v_next;
    r = r_next;
    rnorm = rnorm_next;
    result.iterations = it + 1;
    result.history.push_back({it, rnorm, step.norm(), sigma_min, retreated});
  }

  result.solution = v;
  result.residual_norm = rnorm;
  result.jacobian_sigma_min = sigma_min;
  if (!result.converged && !result.history.empty()) {
    // max_iterations exhausted path: report the critical-point status anyway
    const GnStep& last = result.history.back();
    if (last.step_norm <= cfg.step_tolerance * (1.0 + v.norm()))
      result.converged = check_critical_point(model, v, 1e-8);
  }
  return result;
}

bool check_critical_point(const LeastSquaresModel& model, const VectorXcd& v, double tol) {
  VectorXcd r = model.residual(v);
  MatrixXcd jac = model.jacobian(v);
  double grad = (jac.adjoint() * r).norm();
  return grad <= tol * (1.0 + spectral_norm(jac) * r.norm());
}

double jacobian_fd_check(const LeastSquaresModel& model, const VectorXcd& v, double step) {
  if (step <= 0.0) throw std::invalid_argument("jacobian_fd_check: step must be positive");
  MatrixXcd jac = model.jacobian(v);
  double scale = jac.norm();
  if (scale == 0.0) scale = 1.0;
  double worst = 0.0;
  for (int j = 0; j < model.dim_unknowns; ++j) {
    VectorXcd vp = v, vm = v;
    vp[j] += step;
    vm[j] -= step;
    VectorXcd col = (model.residual(vp) - model.residual(vm)) / (2.0 * step);
    worst = std::max(worst, (col - jac.col(j)).norm() / scale);
  }
  return worst;
}

Sensitivity sensitivity(const LeastSquaresModel& model, const VectorXcd& v_star) {
  if (!model.data_jacobian)
    throw std::invalid_argument("sensitivity: model has no data_jacobian");
  MatrixXcd jv = model.jacobian(v_star);
  MatrixXcd ju = model.data_jacobian(v_star);
  auto [sigma_min, vec] = smallest_singular_pair(jv);
  (void)vec;
  if (sigma_min == 0.0) throw GnError("sensitivity: Jacobian singular at solution");
  return {spectral_norm(ju) / sigma_min, sigma_min};
}

}  // namespace regalg
