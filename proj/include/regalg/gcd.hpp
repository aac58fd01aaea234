#ifndef REGALG_GCD_HPP
#define REGALG_GCD_HPP

#include <tuple>

#include "regalg/gn.hpp"
#include "regalg/poly.hpp"

namespace regalg {

struct GcdStructure {
  int k = 0;          // GCD degree = manifold codimension
  int m = 0;
  int n = 0;
  int codimension = 0;
  double gap_ratio = 0.0;   // sigma gap at the rank decision
  bool marginal = false;    // gap_ratio < 100
};

struct GcdResult {
  Polynomial u, v, w;
  double backward_error = 0.0;
  GcdStructure structure;
  Polynomial r;             // auxiliary normalization polynomial
  cplx beta = cplx(0.0);
  GnResult trace;
  double lipschitz_bound = 0.0;
  double condition = 0.0;
};

// Stage I: GCD degree from the numerical nullity of the classical Sylvester
// matrix with relative tolerance tol*sqrt(m+n).
GcdStructure gcd_structure(const Polynomial& p, const Polynomial& q, double tol);

// Initial triple from the sigma_min right singular vector of the k-th
// subresultant (split into cofactor blocks) plus a stacked least-squares
// division for u0.
std::tuple<Polynomial, Polynomial, Polynomial> gcd_initial(const Polynomial& p,
                                                           const Polynomial& q, int k);

// Stage II: Gauss-Newton on (r dot u - beta, u*v - p, u*w - q).
GcdResult gcd_refine(const Polynomial& p, const Polynomial& q, const Polynomial& u0,
                     const Polynomial& v0, const Polynomial& w0, unsigned seed = 0,
                     const GnConfig& cfg = GnConfig{});

// Two-stage pipeline with escalation: on backward error > tol, decrement k.
GcdResult pgcd(const Polynomial& p, const Polynomial& q, double tol, unsigned seed = 0,
               const GnConfig& cfg = GnConfig{});

// u rescaled so its largest-magnitude coefficient equals 1.
Polynomial normalize_largest_coeff(const Polynomial& u);

LeastSquaresModel gcd_model(const Polynomial& p, const Polynomial& q, int k,
                            const Polynomial& r, cplx beta);

}  // namespace regalg

#endif
