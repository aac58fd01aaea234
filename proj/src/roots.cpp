#include "regalg/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "regalg/gcd.hpp"

namespace regalg {

namespace {

bool complex_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

void sort_by_root(std::vector<cplx>& roots, std::vector<int>& mults) {
  std::vector<std::size_t> idx(roots.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return complex_less(roots[a], roots[b]); });
  std::vector<cplx> r2(roots.size());
  std::vector<int> m2(roots.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    r2[j] = roots[idx[j]];
    m2[j] = mults[idx[j]];
  }
  roots.swap(r2);
  mults.swap(m2);
}

double min_pairwise(const std::vector<cplx>& z) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      best = std::min(best, std::abs(z[i] - z[j]));
  return best;
}

// square-free parts down the chain: level j holds the distinct roots of
// multiplicity >= j
struct GcdChain {
  std::vector<Polynomial> square_free;  // cofactor v at each level
  std::vector<int> degrees;             // deg(g_0), deg(g_1), ...
  bool consistent = true;
};

GcdChain run_chain(const Polynomial& p, double tol) {
  GcdChain chain;
  Polynomial g = p.trimmed();
  chain.degrees.push_back(g.exact_degree());
  while (g.exact_degree() >= 1) {
    if (g.exact_degree() == 1) {
      chain.square_free.push_back(g);
      chain.degrees.push_back(0);
      break;
    }
    Polynomial gs = scale(g, cplx(1.0 / g.norm()));
    GcdResult res = pgcd(gs, derivative(gs), tol);
    chain.square_free.push_back(res.v.trimmed());
    Polynomial next = res.u.trimmed();
    if (next.exact_degree() >= g.exact_degree()) {
      chain.consistent = false;
      break;
    }
    chain.degrees.push_back(next.exact_degree());
    g = next;
  }
  return chain;
}

std::vector<int> multiplicities_from_degrees(const std::vector<int>& degrees) {
  // d_j = deg(g_{j-1}) - deg(g_j) = number of roots with multiplicity >= j
  std::vector<int> drops;
  for (std::size_t j = 1; j < degrees.size(); ++j)
    drops.push_back(degrees[j - 1] - degrees[j]);
  std::vector<int> mults;
  for (std::size_t j = 0; j < drops.size(); ++j) {
    int exactly = drops[j] - (j + 1 < drops.size() ? drops[j + 1] : 0);
    for (int t = 0; t < exactly; ++t) mults.push_back(static_cast<int>(j) + 1);
  }
  std::sort(mults.rbegin(), mults.rend());
  return mults;
}

}  // namespace

std::vector<cplx> companion_roots(const Polynomial& p) {
  Polynomial q = p.trimmed();
  int n = q.exact_degree();
  if (n < 1) return {};
  cplx lead = q.leading_coeff();
  MatrixXcd comp = MatrixXcd::Zero(n, n);
  for (int j = 1; j < n; ++j) comp(j, j - 1) = cplx(1.0);
  for (int j = 0; j < n; ++j) comp(j, n - 1) = -q.coeff(j) / lead;
  Eigen::ComplexEigenSolver<MatrixXcd> eig(comp, false);
  if (eig.info() != Eigen::Success) throw std::runtime_error("companion eigensolver failed");
  std::vector<cplx> roots(n);
  for (int j = 0; j < n; ++j) roots[j] = eig.eigenvalues()[j];
  std::sort(roots.begin(), roots.end(), complex_less);
  return roots;
}

RootStructure multiplicity_structure(const Polynomial& p, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("multiplicity_structure: tol must be positive");
  Polynomial q = p.trimmed();
  int n = q.exact_degree();
  if (n < 1) throw std::invalid_argument("multiplicity_structure: degree must be >= 1");

  GcdChain chain = run_chain(q, tol);
  RootStructure st;
  if (chain.consistent) {
    st.multiplicities = multiplicities_from_degrees(chain.degrees);
    int total = std::accumulate(st.multiplicities.begin(), st.multiplicities.end(), 0);
    if (total != n) chain.consistent = false;
  }
  if (!chain.consistent) {
    st.multiplicities.assign(n, 1);
    st.chain_fallback = true;
  }
  st.codimension = n - static_cast<int>(st.multiplicities.size());
  return st;
}

RootEstimates roots_initial(const Polynomial& p, const RootStructure& structure, double tol) {
  Polynomial q = p.trimmed();
  int n = q.exact_degree();
  int k = static_cast<int>(structure.multiplicities.size());
  if (std::accumulate(structure.multiplicities.begin(), structure.multiplicities.end(), 0) != n)
    throw std::invalid_argument("roots_initial: structure inconsistent with degree");

  RootEstimates est;
  est.leading = q.leading_coeff();

  if (k == n) {
    est.roots = companion_roots(q);
    est.multiplicities.assign(n, 1);
    return est;
  }

  GcdChain chain = run_chain(q, tol);
  std::vector<cplx> distinct = companion_roots(chain.square_free.empty() ? q : chain.square_free[0]);
  std::vector<int> mults(distinct.size(), 1);
  for (std::size_t level = 1; level < chain.square_free.size(); ++level) {
    for (const cplx& z : companion_roots(chain.square_free[level])) {
      std::size_t nearest = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < distinct.size(); ++j) {
        double d = std::abs(distinct[j] - z);
        if (d < best) {
          best = d;
          nearest = j;
        }
      }
      ++mults[nearest];
    }
  }

  // coerce to the requested multiplicity multiset if the chain disagrees
  std::vector<int> want = structure.multiplicities;  // descending
  std::vector<int> have = mults;
  std::sort(have.rbegin(), have.rend());
  if (have != want || distinct.size() != static_cast<std::size_t>(k)) {
    std::vector<std::size_t> idx(distinct.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return mults[a] > mults[b]; });
    std::vector<cplx> roots2;
    std::vector<int> mults2;
    for (int j = 0; j < k && j < static_cast<int>(idx.size()); ++j) {
      roots2.push_back(distinct[idx[j]]);
      mults2.push_back(want[j]);
    }
    // structure demands more distinct roots than the chain produced: split off
    // perturbed copies of the most multiple estimate
    for (int j = static_cast<int>(roots2.size()); j < k; ++j) {
      cplx base = roots2.empty() ? cplx(0.0) : roots2[j % roots2.size()];
      roots2.push_back(base + cplx(0.01 * (1.0 + std::abs(base)), 0.005 * j));
      mults2.push_back(want[j]);
    }
    distinct = roots2;
    mults = mults2;
  }
  sort_by_root(distinct, mults);
  est.roots = distinct;
  est.multiplicities = mults;
  return est;
}

Polynomial expand_factorization(cplx leading, const std::vector<cplx>& roots,
                                const std::vector<int>& mults) {
  Polynomial prod({leading});
  for (std::size_t j = 0; j < roots.size(); ++j)
    for (int t = 0; t < mults[j]; ++t) prod = multiply(prod, Polynomial({-roots[j], cplx(1.0)}));
  return prod;
}

LeastSquaresModel viete_model(const Polynomial& p, const std::vector<int>& mults) {
  Polynomial q = p.trimmed();
  int n = q.exact_degree();
  int k = static_cast<int>(mults.size());
  VectorXcd pc = q.with_nominal_degree(n).as_vector();

  LeastSquaresModel model;
  model.dim_unknowns = k + 1;
  model.dim_residual = n + 1;
  model.residual = [=](const VectorXcd& z) {
    std::vector<cplx> roots(z.data() + 1, z.data() + 1 + k);
    Polynomial f = expand_factorization(z[0], roots, mults);
    return VectorXcd(f.with_nominal_degree(n).as_vector() - pc);
  };
  model.jacobian = [=](const VectorXcd& z) {
    std::vector<cplx> roots(z.data() + 1, z.data() + 1 + k);
    if (k > 1 && min_pairwise(roots) < 1e-12)
      throw GnError("viete model: root collision (wrong multiplicity structure?)");
    MatrixXcd jac = MatrixXcd::Zero(n + 1, k + 1);
    Polynomial base = expand_factorization(cplx(1.0), roots, mults);
    jac.col(0) = base.with_nominal_degree(n).as_vector();
    for (int j = 0; j < k; ++j) {
      Polynomial partial({-double(mults[j]) * z[0]});
      for (int i = 0; i < k; ++i) {
        int power = (i == j) ? mults[i] - 1 : mults[i];
        for (int t = 0; t < power; ++t)
          partial = multiply(partial, Polynomial({-roots[i], cplx(1.0)}));
      }
      jac.col(j + 1) = partial.with_nominal_degree(n).as_vector();
    }
    return jac;
  };
  model.data_jacobian = [n](const VectorXcd&) {
    return MatrixXcd(-MatrixXcd::Identity(n + 1, n + 1));
  };
  return model;
}

Factorization roots_refine(const Polynomial& p, const std::vector<int>& mults,
                           cplx leading, const std::vector<cplx>& z_init,
                           const GnConfig& cfg) {
  Polynomial q = p.trimmed();
  int k = static_cast<int>(mults.size());
  if (static_cast<int>(z_init.size()) != k)
    throw std::invalid_argument("roots_refine: estimate count mismatch");
  if (k > 1 && min_pairwise(z_init) < 1e-12)
    throw GnError("roots_refine: initial roots collide");

  LeastSquaresModel model = viete_model(q, mults);
  VectorXcd z0(k + 1);
  z0[0] = leading;
  for (int j = 0; j < k; ++j) z0[j + 1] = z_init[j];

  GnResult gn = gauss_newton(model, z0, cfg);
  Factorization fac;
  fac.leading = gn.solution[0];
  fac.roots.assign(gn.solution.data() + 1, gn.solution.data() + 1 + k);
  fac.multiplicities = mults;
  if (k > 1 && min_pairwise(fac.roots) < 1e-12)
    throw GnError("roots_refine: roots collided during iteration");
  sort_by_root(fac.roots, fac.multiplicities);
  fac.min_pairwise_distance = (k > 1) ? min_pairwise(fac.roots) : 0.0;
  fac.backward_error =
      subtract(expand_factorization(fac.leading, fac.roots, fac.multiplicities), q).norm() /
      q.norm();
  fac.trace = gn;
  Sensitivity sens = sensitivity(model, gn.solution);
  fac.lipschitz_bound = sens.lipschitz_bound;
  fac.condition = sens.lipschitz_bound;
  return fac;
}

Factorization proots(const Polynomial& p, double tol, const GnConfig& cfg) {
  if (tol <= 0.0) throw std::invalid_argument("proots: tol must be positive");
  Polynomial q = p.trimmed();
  int n = q.exact_degree();
  if (n < 1) throw std::invalid_argument("proots: degree must be >= 1");

  RootStructure st = multiplicity_structure(q, tol);
  RootEstimates est = roots_initial(q, st, tol);
  std::vector<cplx> roots = est.roots;
  std::vector<int> mults = est.multiplicities;
  cplx leading = est.leading;

  while (true) {
    bool all_simple = static_cast<int>(mults.size()) == n;
    try {
      Factorization fac = roots_refine(q, mults, leading, roots, cfg);
      if (fac.backward_error <= tol || all_simple) return fac;
      roots = fac.roots;
      mults = fac.multiplicities;
      leading = fac.leading;
    } catch (const GnError&) {
      if (all_simple) throw;
    }
    // escalate: split the largest multiplicity into (l-1, 1)
    std::size_t imax = 0;
    for (std::size_t j = 1; j < mults.size(); ++j)
      if (mults[j] > mults[imax]) imax = j;
    if (mults[imax] <= 1) {
      // nothing left to split; fall back to the all-simple estimates
      roots = companion_roots(q);
      mults.assign(n, 1);
      continue;
    }
    cplx base = roots[imax];
    double offset = 0.02 * (1.0 + std::abs(base));
    mults[imax] -= 1;
    mults.push_back(1);
    roots.push_back(base + cplx(offset, 0.5 * offset));
  }
}

}  // namespace regalg
