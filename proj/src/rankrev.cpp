#include "regalg/rankrev.hpp"

#include <cmath>

namespace regalg {

LeastSquaresModel kernel_model(const MatrixXcd& a, const MatrixXcd& c, int r) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  const int d = n - r;

  LeastSquaresModel model;
  model.dim_unknowns = n * d;
  model.dim_residual = d * d + m * d;
  auto unflatten = [n, d](const VectorXcd& x) {
    return MatrixXcd(Eigen::Map<const MatrixXcd>(x.data(), n, d));
  };
  model.residual = [=](const VectorXcd& xv) {
    MatrixXcd x = unflatten(xv);
    MatrixXcd top = c.adjoint() * x - MatrixXcd::Identity(d, d);
    MatrixXcd bottom = a * x;
    VectorXcd res(d * d + m * d);
    res << Eigen::Map<VectorXcd>(top.data(), d * d), Eigen::Map<VectorXcd>(bottom.data(), m * d);
    return res;
  };
  // the model is linear in X: the Jacobian is the fixed map X -> (C^H X, A X)
  model.jacobian = [=](const VectorXcd&) {
    MatrixXcd jac = MatrixXcd::Zero(d * d + m * d, n * d);
    for (int col = 0; col < d; ++col) {
      jac.block(col * d, col * n, d, n) = c.adjoint();
      jac.block(d * d + col * m, col * n, m, n) = a;
    }
    return jac;
  };
  // data is G = A entering only through G X
  model.data_jacobian = [=](const VectorXcd& xv) {
    MatrixXcd x = unflatten(xv);
    MatrixXcd ju = MatrixXcd::Zero(d * d + m * d, m * n);
    // d(GX)_{il} / dG_{ik} = X_{kl}
    for (int col = 0; col < d; ++col)
      for (int k = 0; k < n; ++k)
        ju.block(d * d + col * m, k * m, m, m) = x(k, col) * MatrixXcd::Identity(m, m);
    return ju;
  };
  return model;
}

KernelResult numerical_kernel(const MatrixXcd& a, double tol, const GnConfig& cfg) {
  if (tol <= 0.0) throw std::invalid_argument("numerical_kernel: tol must be positive");
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());

  Eigen::JacobiSVD<MatrixXcd> dec(a, Eigen::ComputeFullV);
  VectorXd sigma = dec.singularValues();
  double theta = (sigma.size() ? sigma[0] : 0.0) * tol;
  int r = 0;
  for (Eigen::Index j = 0; j < sigma.size(); ++j)
    if (sigma[j] > theta) ++r;

  KernelResult out;
  out.rank = r;
  out.codimension = (m - r) * (n - r);
  out.gap_ratio = rank_gap_ratio(sigma, r);
  out.marginal = out.gap_ratio < 100.0;
  double tail = 0.0;
  for (Eigen::Index j = r; j < sigma.size(); ++j) tail += sigma[j] * sigma[j];
  double anorm = a.norm();
  out.backward_error = (anorm > 0.0) ? std::sqrt(tail) / anorm : 0.0;

  if (r == n) return out;  // empty kernel

  const int d = n - r;
  MatrixXcd n0 = dec.matrixV().rightCols(d);
  MatrixXcd c = n0;
  LeastSquaresModel model = kernel_model(a, c, r);
  VectorXcd x0 = Eigen::Map<VectorXcd>(n0.data(), n * d);
  GnResult gn = gauss_newton(model, x0, cfg);
  out.kernel_basis = Eigen::Map<MatrixXcd>(gn.solution.data(), n, d);
  out.normalizer = c;
  out.trace = gn;
  Sensitivity sens = sensitivity(model, gn.solution);
  out.lipschitz_bound = sens.lipschitz_bound;
  out.condition = sens.lipschitz_bound;
  return out;
}

}  // namespace regalg
