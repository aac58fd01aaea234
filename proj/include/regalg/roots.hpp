#ifndef REGALG_ROOTS_HPP
#define REGALG_ROOTS_HPP

#include <vector>

#include "regalg/gn.hpp"
#include "regalg/poly.hpp"

namespace regalg {

struct RootStructure {
  std::vector<int> multiplicities;  // descending, sum = exact degree
  int codimension = 0;              // n - k
  bool chain_fallback = false;      // true when the GCD chain was inconsistent
};

struct RootEstimates {
  cplx leading;
  std::vector<cplx> roots;           // distinct estimates, sorted by (re, im)
  std::vector<int> multiplicities;   // paired with roots
};

struct Factorization {
  cplx leading = cplx(0.0);
  std::vector<cplx> roots;
  std::vector<int> multiplicities;
  double backward_error = 0.0;
  double min_pairwise_distance = 0.0;
  GnResult trace;
  double lipschitz_bound = 0.0;
  double condition = 0.0;
};

// All simple roots of p from the eigenvalues of its companion matrix;
// the unstructured baseline the regularized pipeline is measured against.
std::vector<cplx> companion_roots(const Polynomial& p);

// Stage I: square-free (GCD chain) inference of the multiplicity vector.
RootStructure multiplicity_structure(const Polynomial& p, double tol);

RootEstimates roots_initial(const Polynomial& p, const RootStructure& structure, double tol);

// Expanded product z0 * prod (x - z_j)^{l_j} in P_n.
Polynomial expand_factorization(cplx leading, const std::vector<cplx>& roots,
                                const std::vector<int>& mults);

LeastSquaresModel viete_model(const Polynomial& p, const std::vector<int>& mults);

// Stage II: Gauss-Newton on the modified Viete equation.
Factorization roots_refine(const Polynomial& p, const std::vector<int>& mults,
                           cplx leading, const std::vector<cplx>& z_init,
                           const GnConfig& cfg = GnConfig{});

// Two-stage pipeline with escalation: split the largest multiplicity on failure.
Factorization proots(const Polynomial& p, double tol, const GnConfig& cfg = GnConfig{});

}  // namespace regalg

#endif
