#ifndef REGALG_JCF_HPP
#define REGALG_JCF_HPP

#include <vector>

#include "regalg/gn.hpp"

namespace regalg {

struct EigenCluster {
  cplx mean;
  std::vector<cplx> members;
};

struct SegreGroup {
  cplx eigenvalue;             // current estimate for the group
  std::vector<int> blocks;     // descending Jordan block sizes
};

struct SegreStructure {
  std::vector<SegreGroup> groups;
  int codimension = 0;  // sum over groups of (sum_j (2j-1) s_j) minus group count
};

struct JcfResult {
  SegreStructure structure;
  std::vector<cplx> eigenvalues;       // one per group
  MatrixXcd transform;                 // X with A ~ X J X^{-1}
  MatrixXcd jordan;                    // J, unit superdiagonals
  double backward_error = 0.0;         // ||A - X J X^{-1}||_F / ||A||_F
  double sigma_min_transform = 0.0;
  GnResult trace;
  double lipschitz_bound = 0.0;
  double condition = 0.0;
};

int segre_codimension(const SegreStructure& s);

// Single-linkage clusters of the eigenvalues of A at a threshold; the
// pipeline walks the full dendrogram, this entry point reports the clusters
// used as the most singular plausible candidate.
std::vector<EigenCluster> eigen_cluster(const MatrixXcd& a, double tol);

// Weyr staircase at the cluster mean, conjugated to Segre block sizes.
std::vector<int> segre_structure(const MatrixXcd& a, const EigenCluster& cluster, double tol);

// Bundle model: unknowns (lambda_1..lambda_s, vec X); residual is the stacked
// chain normalization rows and A X - X J(lambda).
LeastSquaresModel bundle_model(const MatrixXcd& a, const SegreStructure& structure,
                               unsigned seed);

MatrixXcd assemble_jordan(const SegreStructure& structure, const std::vector<cplx>& eigenvalues);

// Two-stage regularized JCF with monotone structure escalation.
JcfResult regularized_jcf(const MatrixXcd& a, double tol, unsigned seed = 0,
                          const GnConfig& cfg = GnConfig{});

}  // namespace regalg

#endif
