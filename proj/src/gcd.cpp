#include "regalg/gcd.hpp"

#include <cmath>
#include <random>

namespace regalg {

namespace {

// unknown vector layout: [u (k+1) | v (m-k+1) | w (n-k+1)]
Polynomial slice(const VectorXcd& x, int offset, int count) {
  return Polynomial::from_vector(x.segment(offset, count));
}

Polynomial random_unit_poly(int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cplx> c(degree + 1);
  for (cplx& x : c) x = cplx(gauss(rng), gauss(rng));
  Polynomial r(std::move(c));
  return scale(r, cplx(1.0 / r.norm()));
}

double gcd_backward_error(const Polynomial& p, const Polynomial& q, const Polynomial& u,
                          const Polynomial& v, const Polynomial& w) {
  double rp = subtract(multiply(u, v), p).norm();
  double rq = subtract(multiply(u, w), q).norm();
  double data = std::sqrt(p.norm() * p.norm() + q.norm() * q.norm());
  return std::sqrt(rp * rp + rq * rq) / data;
}

}  // namespace

Polynomial normalize_largest_coeff(const Polynomial& u) {
  int imax = 0;
  double best = -1.0;
  for (int j = 0; j <= u.nominal_degree(); ++j) {
    if (std::abs(u.coeff(j)) > best) {
      best = std::abs(u.coeff(j));
      imax = j;
    }
  }
  if (best == 0.0) return u;
  return scale(u, cplx(1.0) / u.coeff(imax));
}

GcdStructure gcd_structure(const Polynomial& p, const Polynomial& q, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("gcd_structure: tol must be positive");
  if (p.is_zero() || q.is_zero())
    throw std::invalid_argument("gcd_structure: zero polynomial input");
  int m = p.exact_degree();
  int n = q.exact_degree();
  if (m < 1 || n < 1) throw std::invalid_argument("gcd_structure: inputs must have degree >= 1");

  // data errors of size tol enter the Sylvester matrix in <= m+n copies
  double rank_tol = tol * std::sqrt(double(m + n));
  MatrixXcd s = sylvester_matrix(p, q, 1);
  SvdResult dec = svd(s);
  int rank = 0;
  double theta = rank_tol * dec.singular_values[0];
  for (Eigen::Index j = 0; j < dec.singular_values.size(); ++j)
    if (dec.singular_values[j] > theta) ++rank;

  GcdStructure st;
  st.m = m;
  st.n = n;
  st.k = static_cast<int>(s.cols()) - rank;
  st.codimension = st.k;
  st.gap_ratio = rank_gap_ratio(dec.singular_values, rank);
  st.marginal = st.gap_ratio < 100.0;
  return st;
}

std::tuple<Polynomial, Polynomial, Polynomial> gcd_initial(const Polynomial& p,
                                                           const Polynomial& q, int k) {
  int m = p.exact_degree();
  int n = q.exact_degree();
  if (k < 1 || k > std::min(m, n)) throw std::invalid_argument("gcd_initial: k out of range");

  MatrixXcd s = sylvester_matrix(p, q, k);
  auto [sigma_min, null_vec] = smallest_singular_pair(s);
  (void)sigma_min;
  // S * (v; w) = q*v + p*w = 0 gives v ~ cofactor of p and w ~ -(cofactor of q)
  Polynomial v0 = Polynomial::from_vector(null_vec.segment(0, m - k + 1));
  Polynomial w0 = Polynomial::from_vector(-null_vec.segment(m - k + 1, n - k + 1));

  // least-squares division: stack conv(v0), conv(w0) against [p; q]
  MatrixXcd cv = convolution_matrix(v0, k);
  MatrixXcd cw = convolution_matrix(w0, k);
  MatrixXcd stacked(cv.rows() + cw.rows(), k + 1);
  stacked << cv, cw;
  VectorXcd rhs(m + 1 + n + 1);
  rhs << p.with_nominal_degree(m).as_vector(), q.with_nominal_degree(n).as_vector();
  VectorXcd u0 = lsq_min_norm(stacked, rhs);
  return {Polynomial::from_vector(u0), v0, w0};
}

LeastSquaresModel gcd_model(const Polynomial& p, const Polynomial& q, int k,
                            const Polynomial& r, cplx beta) {
  int m = p.exact_degree();
  int n = q.exact_degree();
  int nu = k + 1, nv = m - k + 1, nw = n - k + 1;
  VectorXcd pc = p.with_nominal_degree(m).as_vector();
  VectorXcd qc = q.with_nominal_degree(n).as_vector();
  VectorXcd rc = r.with_nominal_degree(k).as_vector();

  LeastSquaresModel model;
  model.dim_unknowns = nu + nv + nw;
  model.dim_residual = 1 + (m + 1) + (n + 1);
  model.residual = [=](const VectorXcd& x) {
    Polynomial u = slice(x, 0, nu), v = slice(x, nu, nv), w = slice(x, nu + nv, nw);
    VectorXcd res(1 + m + 1 + n + 1);
    res[0] = dot(r, u) - beta;
    res.segment(1, m + 1) = multiply(u, v).as_vector() - pc;
    res.segment(m + 2, n + 1) = multiply(u, w).as_vector() - qc;
    return res;
  };
  model.jacobian = [=](const VectorXcd& x) {
    Polynomial u = slice(x, 0, nu), v = slice(x, nu, nv), w = slice(x, nu + nv, nw);
    MatrixXcd jac = MatrixXcd::Zero(1 + m + 1 + n + 1, nu + nv + nw);
    jac.block(0, 0, 1, nu) = rc.transpose();
    jac.block(1, 0, m + 1, nu) = convolution_matrix(v, k);
    jac.block(1, nu, m + 1, nv) = convolution_matrix(u, m - k);
    jac.block(m + 2, 0, n + 1, nu) = convolution_matrix(w, k);
    jac.block(m + 2, nu + nv, n + 1, nw) = convolution_matrix(u, n - k);
    return jac;
  };
  // data is (p, q); the residual depends on it through -p, -q
  model.data_jacobian = [=](const VectorXcd&) {
    MatrixXcd ju = MatrixXcd::Zero(1 + m + 1 + n + 1, m + 1 + n + 1);
    ju.block(1, 0, m + 1, m + 1) = -MatrixXcd::Identity(m + 1, m + 1);
    ju.block(m + 2, m + 1, n + 1, n + 1) = -MatrixXcd::Identity(n + 1, n + 1);
    return ju;
  };
  return model;
}

GcdResult gcd_refine(const Polynomial& p, const Polynomial& q, const Polynomial& u0,
                     const Polynomial& v0, const Polynomial& w0, unsigned seed,
                     const GnConfig& cfg) {
  int m = p.exact_degree();
  int n = q.exact_degree();
  int k = u0.nominal_degree();

  GcdResult out;
  out.structure.m = m;
  out.structure.n = n;
  out.structure.k = k;
  out.structure.codimension = k;

  if (k == 0) {
    out.u = Polynomial::one();
    out.v = p;
    out.w = q;
    out.backward_error = 0.0;
    return out;
  }

  std::mt19937_64 rng(seed);
  Polynomial r = random_unit_poly(k, rng);
  cplx beta = dot(r, u0);
  for (int redraw = 0; redraw < 8 && std::abs(beta) < 1e-12 * u0.norm(); ++redraw) {
    r = random_unit_poly(k, rng);
    beta = dot(r, u0);
  }

  LeastSquaresModel model = gcd_model(p, q, k, r, beta);
  VectorXcd x0(model.dim_unknowns);
  x0 << u0.with_nominal_degree(k).as_vector(), v0.with_nominal_degree(m - k).as_vector(),
      w0.with_nominal_degree(n - k).as_vector();

  GnResult gn = gauss_newton(model, x0, cfg);
  out.u = Polynomial::from_vector(gn.solution.segment(0, k + 1));
  out.v = Polynomial::from_vector(gn.solution.segment(k + 1, m - k + 1));
  out.w = Polynomial::from_vector(gn.solution.segment(m + 2, n - k + 1));
  out.backward_error = gcd_backward_error(p, q, out.u, out.v, out.w);
  out.r = r;
  out.beta = beta;
  out.trace = gn;
  Sensitivity sens = sensitivity(model, gn.solution);
  out.lipschitz_bound = sens.lipschitz_bound;
  out.condition = sens.lipschitz_bound;
  return out;
}

GcdResult pgcd(const Polynomial& p, const Polynomial& q, double tol, unsigned seed,
               const GnConfig& cfg) {
  GcdStructure st = gcd_structure(p, q, tol);
  int k = st.k;
  while (k > 0) {
    try {
      auto [u0, v0, w0] = gcd_initial(p, q, k);
      GcdResult res = gcd_refine(p, q, u0, v0, w0, seed, cfg);
      if (res.backward_error <= tol) {
        res.structure.gap_ratio = st.gap_ratio;
        res.structure.marginal = st.marginal;
        return res;
      }
    } catch (const GnError&) {
      // wrong manifold; fall through to a lower-codimension stratum
    }
    --k;
  }
  GcdResult res;
  res.u = Polynomial::one();
  res.v = p;
  res.w = q;
  res.structure = GcdStructure{0, p.exact_degree(), q.exact_degree(), 0, st.gap_ratio, st.marginal};
  res.backward_error = 0.0;
  return res;
}

}  // namespace regalg
