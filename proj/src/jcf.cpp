#include "regalg/jcf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

namespace regalg {

namespace {

bool complex_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::vector<cplx> eigenvalues_of(const MatrixXcd& a) {
  Eigen::ComplexEigenSolver<MatrixXcd> eig(a, false);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  std::vector<cplx> vals(a.rows());
  for (Eigen::Index j = 0; j < a.rows(); ++j) vals[j] = eig.eigenvalues()[j];
  std::sort(vals.begin(), vals.end(), complex_less);
  return vals;
}

// single-linkage dendrogram: partitions[c] holds the partition into c+1 clusters
std::vector<std::vector<std::vector<cplx>>> dendrogram(const std::vector<cplx>& pts) {
  std::vector<std::vector<cplx>> clusters;
  for (const cplx& z : pts) clusters.push_back({z});
  std::vector<std::vector<std::vector<cplx>>> levels(pts.size());
  levels[pts.size() - 1] = clusters;
  while (clusters.size() > 1) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < clusters.size(); ++i)
      for (std::size_t j = i + 1; j < clusters.size(); ++j)
        for (const cplx& a : clusters[i])
          for (const cplx& b : clusters[j])
            if (std::abs(a - b) < best) {
              best = std::abs(a - b);
              bi = i;
              bj = j;
            }
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    clusters.erase(clusters.begin() + bj);
    levels[clusters.size() - 1] = clusters;
  }
  return levels;
}

cplx cluster_mean(const std::vector<cplx>& members) {
  cplx s(0.0);
  for (const cplx& z : members) s += z;
  return s / double(members.size());
}

std::vector<int> weyr_to_segre(const std::vector<int>& weyr) {
  std::vector<int> segre;
  if (weyr.empty()) return segre;
  for (int i = 1; i <= weyr[0]; ++i) {
    int count = 0;
    for (int w : weyr)
      if (w >= i) ++count;
    segre.push_back(count);
  }
  return segre;  // descending by construction
}

int kernel_dim_abs(const MatrixXcd& m, double theta) {
  VectorXd sigma = svd(m).singular_values;
  int rank = 0;
  for (Eigen::Index j = 0; j < sigma.size(); ++j)
    if (sigma[j] > theta) ++rank;
  return static_cast<int>(m.cols()) - rank;
}

MatrixXcd smallest_right_vectors(const MatrixXcd& m, int count) {
  Eigen::BDCSVD<MatrixXcd> dec(m, Eigen::ComputeFullV);
  return dec.matrixV().rightCols(count);
}

VectorXcd random_unit_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXcd c(n);
  for (int j = 0; j < n; ++j) c[j] = cplx(gauss(rng), gauss(rng));
  return c / c.norm();
}

struct ChainLayout {
  // column index of position l (1-based) of chain `chain` in group `group`
  std::vector<std::vector<int>> chain_start;  // per group, per chain
};

ChainLayout make_layout(const SegreStructure& st) {
  ChainLayout layout;
  int col = 0;
  for (const SegreGroup& g : st.groups) {
    std::vector<int> starts;
    for (int s : g.blocks) {
      starts.push_back(col);
      col += s;
    }
    layout.chain_start.push_back(starts);
  }
  return layout;
}

}  // namespace

int segre_codimension(const SegreStructure& s) {
  int codim = 0;
  for (const SegreGroup& g : s.groups) {
    std::vector<int> blocks = g.blocks;  // descending
    for (std::size_t j = 0; j < blocks.size(); ++j)
      codim += (2 * static_cast<int>(j) + 1) * blocks[j];
    codim -= 1;
  }
  return codim;
}

std::vector<EigenCluster> eigen_cluster(const MatrixXcd& a, double tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigen_cluster: matrix must be square");
  if (tol <= 0.0) throw std::invalid_argument("eigen_cluster: tol must be positive");
  std::vector<cplx> vals = eigenvalues_of(a);
  auto levels = dendrogram(vals);
  double scale = tol * a.norm();

  // coarsest partition in which every cluster of size w stays within radius
  // 2 * (tol*||A||_F)^{1/w}: a multiplicity-w perturbation of size eps splits
  // eigenvalues by O(eps^{1/w})
  for (const auto& partition : levels) {
    bool plausible = true;
    for (const auto& members : partition) {
      if (members.size() <= 1) continue;
      cplx mean = cluster_mean(members);
      double radius = 0.0;
      for (const cplx& z : members) radius = std::max(radius, std::abs(z - mean));
      double tau = std::pow(scale, 1.0 / double(members.size()));
      if (radius > 2.0 * tau) {
        plausible = false;
        break;
      }
    }
    if (plausible) {
      std::vector<EigenCluster> out;
      for (const auto& members : partition) out.push_back({cluster_mean(members), members});
      std::sort(out.begin(), out.end(),
                [](const EigenCluster& x, const EigenCluster& y) { return complex_less(x.mean, y.mean); });
      return out;
    }
  }
  std::vector<EigenCluster> out;  // unreachable: singleton level is always plausible
  for (const cplx& z : vals) out.push_back({z, {z}});
  return out;
}

std::vector<int> segre_structure(const MatrixXcd& a, const EigenCluster& cluster, double tol) {
  const int n = static_cast<int>(a.rows());
  const int w = static_cast<int>(cluster.members.size());
  const double theta = tol * a.norm();
  MatrixXcd b = a - cluster.mean * MatrixXcd::Identity(n, n);

  std::vector<int> weyr;
  MatrixXcd m = b;
  MatrixXcd kernels;  // accumulated K_j basis
  int prev = 0;
  for (int iter = 0; iter < n; ++iter) {
    int nullity = kernel_dim_abs(m, theta);  // dim of ker B^{j+1} via the deflated map
    if (nullity <= prev) break;
    if (nullity > w) nullity = w;
    weyr.push_back(nullity - prev);
    kernels = smallest_right_vectors(m, nullity);
    prev = nullity;
    if (prev >= w) break;
    m = (MatrixXcd::Identity(n, n) - kernels * kernels.adjoint()) * b;
  }

  bool ok = !weyr.empty() && std::accumulate(weyr.begin(), weyr.end(), 0) == w;
  for (std::size_t j = 1; ok && j < weyr.size(); ++j)
    if (weyr[j] > weyr[j - 1]) ok = false;
  if (!ok) return std::vector<int>(w, 1);  // flagged fallback: all-1 blocks
  return weyr_to_segre(weyr);
}

MatrixXcd assemble_jordan(const SegreStructure& structure, const std::vector<cplx>& eigenvalues) {
  int n = 0;
  for (const SegreGroup& g : structure.groups)
    for (int s : g.blocks) n += s;
  MatrixXcd j = MatrixXcd::Zero(n, n);
  int col = 0;
  for (std::size_t gi = 0; gi < structure.groups.size(); ++gi) {
    for (int s : structure.groups[gi].blocks) {
      for (int l = 0; l < s; ++l) {
        j(col + l, col + l) = eigenvalues[gi];
        if (l + 1 < s) j(col + l, col + l + 1) = cplx(1.0);
      }
      col += s;
    }
  }
  return j;
}

LeastSquaresModel bundle_model(const MatrixXcd& a, const SegreStructure& structure,
                               unsigned seed) {
  const int n = static_cast<int>(a.rows());
  const int ngroups = static_cast<int>(structure.groups.size());
  ChainLayout layout = make_layout(structure);

  // one random unit normalization vector per chain
  std::mt19937_64 rng(seed);
  std::vector<std::vector<VectorXcd>> cvecs(ngroups);
  for (int g = 0; g < ngroups; ++g)
    for (std::size_t i = 0; i < structure.groups[g].blocks.size(); ++i)
      cvecs[g].push_back(random_unit_vector(n, rng));

  // normalization rows: for chains i, j of a group, pin the last min(s_i, s_j)
  // columns of chain j against c_i; the diagonal pair carries the unit entry
  struct NormRow {
    int group, ci, column;
    cplx rhs;
  };
  std::vector<NormRow> rows;
  for (int g = 0; g < ngroups; ++g) {
    const std::vector<int>& blocks = structure.groups[g].blocks;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      for (std::size_t j = 0; j < blocks.size(); ++j) {
        int mn = std::min(blocks[i], blocks[j]);
        for (int l = blocks[j] - mn + 1; l <= blocks[j]; ++l) {
          cplx rhs = (i == j && l == 1) ? cplx(1.0) : cplx(0.0);
          rows.push_back({g, static_cast<int>(i), layout.chain_start[g][j] + (l - 1), rhs});
        }
      }
    }
  }
  const int d = static_cast<int>(rows.size());
  if (d - ngroups != segre_codimension(structure))
    throw std::logic_error("bundle_model: codimension bookkeeping mismatch");

  LeastSquaresModel model;
  model.dim_unknowns = ngroups + n * n;
  model.dim_residual = d + n * n;

  auto unflatten = [n, ngroups](const VectorXcd& x) {
    return MatrixXcd(Eigen::Map<const MatrixXcd>(x.data() + ngroups, n, n));
  };
  auto jordan_of = [structure](const VectorXcd& x) {
    std::vector<cplx> lams(x.data(), x.data() + structure.groups.size());
    return assemble_jordan(structure, lams);
  };

  model.residual = [=](const VectorXcd& x) {
    MatrixXcd xm = unflatten(x);
    MatrixXcd r2 = a * xm - xm * jordan_of(x);
    VectorXcd res(d + n * n);
    for (int t = 0; t < d; ++t)
      res[t] = cvecs[rows[t].group][rows[t].ci].dot(xm.col(rows[t].column)) - rows[t].rhs;
    res.segment(d, n * n) = Eigen::Map<VectorXcd>(r2.data(), n * n);
    return res;
  };

  model.jacobian = [=](const VectorXcd& x) {
    MatrixXcd xm = unflatten(x);
    MatrixXcd j = jordan_of(x);
    MatrixXcd jac = MatrixXcd::Zero(d + n * n, ngroups + n * n);
    for (int t = 0; t < d; ++t)
      jac.block(t, ngroups + rows[t].column * n, 1, n) =
          cvecs[rows[t].group][rows[t].ci].adjoint();
    for (int c = 0; c < n; ++c) {
      jac.block(d + c * n, ngroups + c * n, n, n) += a;
      for (int c2 = 0; c2 < n; ++c2)
        if (j(c2, c) != cplx(0.0))
          jac.block(d + c * n, ngroups + c2 * n, n, n) -=
              j(c2, c) * MatrixXcd::Identity(n, n);
    }
    // d(AX - XJ)/dlambda_g = -X * dJ/dlambda_g
    int col = 0;
    for (int g = 0; g < ngroups; ++g) {
      int width = 0;
      for (int s : structure.groups[g].blocks) width += s;
      for (int c = col; c < col + width; ++c)
        jac.block(d + c * n, g, n, 1) = -xm.col(c);
      col += width;
    }
    return jac;
  };

  model.data_jacobian = [=](const VectorXcd& x) {
    MatrixXcd xm = unflatten(x);
    MatrixXcd ju = MatrixXcd::Zero(d + n * n, n * n);
    for (int c = 0; c < n; ++c)
      for (int k = 0; k < n; ++k)
        ju.block(d + c * n, k * n, n, n) = xm(k, c) * MatrixXcd::Identity(n, n);
    return ju;
  };
  return model;
}

namespace {

// Jordan chains from the forced-dimension Weyr staircase of A - lambda I;
// chain position 1 (the eigenvector) occupies the leading column.
MatrixXcd initial_transform(const MatrixXcd& a, const SegreStructure& st) {
  const int n = static_cast<int>(a.rows());
  ChainLayout layout = make_layout(st);
  MatrixXcd x = MatrixXcd::Zero(n, n);

  for (std::size_t gi = 0; gi < st.groups.size(); ++gi) {
    const std::vector<int>& blocks = st.groups[gi].blocks;
    MatrixXcd b = a - st.groups[gi].eigenvalue * MatrixXcd::Identity(n, n);
    int smax = blocks[0];

    // cumulative kernel targets: dim ker B^j = sum_i min(j, s_i)
    std::vector<int> target(smax + 1, 0);
    for (int j = 1; j <= smax; ++j)
      for (int s : blocks) target[j] += std::min(j, s);

    std::vector<MatrixXcd> kernels(smax + 1);
    MatrixXcd m = b;
    for (int j = 1; j <= smax; ++j) {
      kernels[j] = smallest_right_vectors(m, target[j]);
      if (j < smax)
        m = (MatrixXcd::Identity(n, n) - kernels[j] * kernels[j].adjoint()) * b;
    }

    // pick chain tops level by level, longest chains first
    std::vector<std::vector<VectorXcd>> chains(blocks.size());
    for (int level = smax; level >= 1; --level) {
      // vectors already occupying this level: descendants of longer chains
      std::vector<VectorXcd> occupied;
      if (level > 1)
        for (Eigen::Index c = 0; c < kernels[level - 1].cols(); ++c)
          occupied.push_back(kernels[level - 1].col(c));
      for (std::size_t ch = 0; ch < blocks.size(); ++ch)
        if (blocks[ch] > level && !chains[ch].empty()) {
          // chain stored top-first; element [blocks[ch]-level] sits at this level
          occupied.push_back(chains[ch][blocks[ch] - level]);
        }

      int needed = 0;
      for (int s : blocks)
        if (s == level) ++needed;
      if (needed == 0) continue;

      MatrixXcd candidates = kernels[level];
      if (!occupied.empty()) {
        MatrixXcd w(n, occupied.size());
        for (std::size_t c = 0; c < occupied.size(); ++c) w.col(c) = occupied[c];
        Eigen::HouseholderQR<MatrixXcd> qr(w);
        MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(n, static_cast<int>(occupied.size()));
        candidates -= q * (q.adjoint() * candidates);
      }
      SvdResult cs = svd(candidates);
      int taken = 0;
      for (std::size_t ch = 0; ch < blocks.size() && taken < needed; ++ch) {
        if (blocks[ch] != level || !chains[ch].empty()) continue;
        VectorXcd top = cs.left_vectors.col(taken++);
        chains[ch].push_back(top);
        for (int l = level; l > 1; --l) chains[ch].push_back(b * chains[ch].back());
      }
    }

    for (std::size_t ch = 0; ch < blocks.size(); ++ch) {
      int s = blocks[ch];
      // chains stored top-first: chains[ch][0] is position s, back() is position 1
      double scale = chains[ch].back().norm();
      if (scale == 0.0) scale = 1.0;
      for (int l = 1; l <= s; ++l)
        x.col(layout.chain_start[gi][ch] + (l - 1)) = chains[ch][s - l] / scale;
    }
  }
  return x;
}

struct Candidate {
  SegreStructure structure;
  int codimension;
};

// integer partitions of n into descending positive parts
std::vector<std::vector<int>> integer_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rest, int maxpart) {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(rest, maxpart); p >= 1; --p) {
      cur.push_back(p);
      rec(rest - p, p);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

std::vector<cplx> power_traces(const MatrixXcd& a, int kmax) {
  std::vector<cplx> traces;
  MatrixXcd p = a;
  for (int k = 1; k <= kmax; ++k) {
    traces.push_back(p.trace());
    if (k < kmax) p = p * a;
  }
  return traces;
}

// Solve sum_i m_i lambda_i^k = tr(A^k) for k = 1..s by Newton iteration.
// Similarity invariance of the traces pins the group eigenvalues of a nearby
// bundle far more accurately than clustering the computed spectrum, which can
// scatter widely around a defective eigenvalue.  Returns empty on failure.
std::vector<cplx> moment_eigenvalues(const std::vector<int>& mult, const std::vector<cplx>& init,
                                     const std::vector<cplx>& traces, double rho) {
  const int s = static_cast<int>(mult.size());
  VectorXcd mu(s);
  for (int i = 0; i < s; ++i) mu[i] = init[i] / rho;
  VectorXcd q(s);
  double rk = 1.0;
  for (int k = 0; k < s; ++k) {
    rk *= rho;
    q[k] = traces[k] / rk;
  }
  auto eval = [&](const VectorXcd& m, VectorXcd& f, MatrixXcd* jac) {
    for (int k = 1; k <= s; ++k) {
      cplx fk = -q[k - 1];
      for (int i = 0; i < s; ++i) {
        fk += double(mult[i]) * std::pow(m[i], k);
        if (jac) (*jac)(k - 1, i) = double(k) * double(mult[i]) * std::pow(m[i], k - 1);
      }
      f[k - 1] = fk;
    }
  };
  VectorXcd f(s);
  MatrixXcd jac(s, s);
  for (int iter = 0; iter < 100; ++iter) {
    eval(mu, f, &jac);
    VectorXcd step = lsq_min_norm(jac, f);
    mu -= step;
    if (!mu.allFinite()) return {};
    if (step.norm() <= 1e-14 * (1.0 + mu.norm())) break;
  }
  eval(mu, f, nullptr);
  double msum = 0.0;
  for (int m : mult) msum += m;
  if (f.norm() > 1e-8 * msum) return {};
  std::vector<cplx> out(s);
  for (int i = 0; i < s; ++i) out[i] = mu[i] * rho;
  return out;
}

std::string candidate_key(const SegreStructure& st, double rho) {
  std::string key;
  for (const SegreGroup& g : st.groups) {
    long re = std::lround(g.eigenvalue.real() / rho * 1e6);
    long im = std::lround(g.eigenvalue.imag() / rho * 1e6);
    key += std::to_string(re) + "," + std::to_string(im) + ":";
    for (int b : g.blocks) key += std::to_string(b) + ".";
    key += ";";
  }
  return key;
}

}  // namespace

JcfResult regularized_jcf(const MatrixXcd& a, double tol, unsigned seed, const GnConfig& cfg) {
  if (a.rows() != a.cols()) throw std::invalid_argument("regularized_jcf: matrix must be square");
  if (tol <= 0.0) throw std::invalid_argument("regularized_jcf: tol must be positive");
  const int n = static_cast<int>(a.rows());
  const double anorm = a.norm();

  // work on A/||A||_F: Jordan chains x_{l-1} = (A - lambda I) x_l span
  // ||A||^(s-1) in magnitude, which makes the bundle Jacobian numerically
  // rank-deficient for matrices of large norm; the unit-norm copy keeps the
  // chains balanced, and the solution is rescaled on output
  const double rho_a = anorm > 0.0 ? anorm : 1.0;
  const MatrixXcd as = a / rho_a;
  const bool dbg = std::getenv("REGALG_JCF_DEBUG") != nullptr;

  std::vector<cplx> vals = eigenvalues_of(as);
  auto levels = dendrogram(vals);
  double rho = 0.0;
  for (const cplx& z : vals) rho = std::max(rho, std::abs(z));
  if (rho <= 0.0) rho = 1.0;
  std::vector<cplx> traces = power_traces(as, n);

  // Candidate structures: for every multiplicity partition of n, recover the
  // group eigenvalues from the trace moments (Newton seeded by dendrogram
  // cluster means), then enumerate the block partitions inside each group.
  // The escalation loop below arbitrates by refined backward error, most
  // singular structure first.
  std::vector<Candidate> candidates;
  std::set<std::string> seen;
  auto push_candidate = [&](SegreStructure st) {
    std::sort(st.groups.begin(), st.groups.end(),
              [](const SegreGroup& x, const SegreGroup& y) {
                return complex_less(x.eigenvalue, y.eigenvalue);
              });
    st.codimension = segre_codimension(st);
    if (!seen.insert(candidate_key(st, rho)).second) return;
    candidates.push_back({st, st.codimension});
  };

  for (const std::vector<int>& mult : integer_partitions(n)) {
    const int s = static_cast<int>(mult.size());
    if (s == n) continue;  // the all-simple fallback is appended separately

    // seed eigenvalue sets from the s-cluster dendrogram partition
    std::vector<std::vector<cplx>> clusters = levels[s - 1];
    std::stable_sort(clusters.begin(), clusters.end(),
                     [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
                       return x.size() > y.size();
                     });
    std::vector<cplx> means;
    for (const auto& members : clusters) means.push_back(cluster_mean(members));

    std::vector<std::vector<cplx>> lambda_sets;
    std::vector<int> perm(s);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<cplx> init(s);
      for (int i = 0; i < s; ++i) init[i] = means[perm[i]];
      std::vector<cplx> lams = moment_eigenvalues(mult, init, traces, rho);
      if (lams.empty()) continue;
      bool distinct = true;
      for (int i = 0; i < s && distinct; ++i)
        for (int j = i + 1; j < s; ++j)
          if (std::abs(lams[i] - lams[j]) < 1e-8 * rho) distinct = false;
      if (distinct) lambda_sets.push_back(lams);
    } while (s <= 4 && std::next_permutation(perm.begin(), perm.end()));
    if (dbg) {
      std::fprintf(stderr, "[jcf] mult=");
      for (int m : mult) std::fprintf(stderr, "%d ", m);
      std::fprintf(stderr, "-> %zu lambda sets\n", lambda_sets.size());
      for (const auto& ls : lambda_sets) {
        std::fprintf(stderr, "[jcf]   ");
        for (const cplx& z : ls)
          std::fprintf(stderr, "(%.8g,%.8g) ", z.real() * rho_a, z.imag() * rho_a);
        std::fprintf(stderr, "\n");
      }
    }

    for (const std::vector<cplx>& lams : lambda_sets) {
      // block partitions inside each group; full enumeration at desk scale,
      // rank-based detection plus the two extremes otherwise
      std::vector<std::vector<std::vector<int>>> options(s);
      for (int g = 0; g < s; ++g) {
        if (n <= 8) {
          options[g] = integer_partitions(mult[g]);
        } else {
          EigenCluster synth{lams[g], std::vector<cplx>(mult[g], lams[g])};
          options[g].push_back(segre_structure(as, synth, tol));
          options[g].push_back({mult[g]});
          options[g].push_back(std::vector<int>(mult[g], 1));
        }
      }
      std::vector<int> choice(s, 0);
      while (true) {
        SegreStructure st;
        for (int g = 0; g < s; ++g) {
          SegreGroup group;
          group.eigenvalue = lams[g];
          group.blocks = options[g][choice[g]];
          st.groups.push_back(group);
        }
        push_candidate(st);
        int g = 0;
        while (g < s && ++choice[g] == static_cast<int>(options[g].size())) choice[g++] = 0;
        if (g == s) break;
      }
    }
  }

  {
    SegreStructure st;  // unstructured fallback: all eigenvalues simple
    for (const cplx& z : vals) st.groups.push_back({z, {1}});
    push_candidate(st);
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) {
                     return x.codimension > y.codimension;
                   });

  for (const Candidate& cand : candidates) {
    bool all_simple = cand.codimension == 0;

    // cheap rejection: a staircase-built transform for a structure the data is
    // anywhere near keeps the similarity residual small
    {
      int s = static_cast<int>(cand.structure.groups.size());
      std::vector<cplx> lams(s);
      for (int g = 0; g < s; ++g) lams[g] = cand.structure.groups[g].eigenvalue;
      MatrixXcd xinit = initial_transform(as, cand.structure);
      MatrixXcd j = assemble_jordan(cand.structure, lams);
      double r0 = (as * xinit - xinit * j).norm();  // ||as||_F == 1
      if (dbg)
        std::fprintf(stderr, "[jcf] cand codim=%d key=%s r0=%.3e\n", cand.codimension,
                     candidate_key(cand.structure, rho).c_str(), r0);
      // the staircase residual estimates the distance to the stratum; a
      // refinement cannot bridge more than a modest factor of it
      if (r0 > std::min(0.5, std::sqrt(tol)) && !all_simple) continue;
    }

    // the bundle Jacobian of an ill-conditioned eigenproblem is legitimately
    // near-singular (an O(1) eigenvalue shift may barely move the matrix), so
    // the refinement runs with a much lower injectivity floor than the generic
    // engine default; arbitration is by the refined backward error instead
    GnConfig gncfg = cfg;
    gncfg.injectivity_floor = std::min(cfg.injectivity_floor, 1e-15);

    for (unsigned redraw = 0; redraw < 3; ++redraw) {
      try {
        LeastSquaresModel model = bundle_model(as, cand.structure, seed + redraw);
        int s = static_cast<int>(cand.structure.groups.size());
        VectorXcd x0(s + n * n);
        for (int g = 0; g < s; ++g) x0[g] = cand.structure.groups[g].eigenvalue;
        MatrixXcd xinit = initial_transform(as, cand.structure);
        x0.segment(s, n * n) = Eigen::Map<VectorXcd>(xinit.data(), n * n);

        GnResult gn = gauss_newton(model, x0, gncfg);
        MatrixXcd xm = Eigen::Map<MatrixXcd>(gn.solution.data() + s, n, n);
        std::vector<cplx> lams(gn.solution.data(), gn.solution.data() + s);
        MatrixXcd j = assemble_jordan(cand.structure, lams);
        Eigen::PartialPivLU<MatrixXcd> lu(xm);
        MatrixXcd reconstructed = xm * j * lu.inverse();
        double backward = (as - reconstructed).norm();
        if (dbg)
          std::fprintf(stderr, "[jcf]   redraw=%u gn conv=%d iters=%d backward=%.3e\n", redraw,
                       int(gn.converged), gn.iterations, backward);
        if (backward > tol && !all_simple) break;  // wrong stratum; escalate

        // rescale back to A = rho_a * as: lambda -> rho_a*lambda, and chain
        // column at position l scaled by rho_a^(1-l) keeps unit superdiagonals
        JcfResult out;
        out.structure = cand.structure;
        for (int g = 0; g < s; ++g) {
          lams[g] *= rho_a;
          out.structure.groups[g].eigenvalue = lams[g];
        }
        out.eigenvalues = lams;
        int col = 0;
        for (const SegreGroup& grp : cand.structure.groups)
          for (int blk : grp.blocks)
            for (int l = 0; l < blk; ++l) xm.col(col++) *= std::pow(rho_a, -double(l));
        out.transform = xm;
        out.jordan = assemble_jordan(cand.structure, lams);
        out.backward_error = backward;
        out.sigma_min_transform = smallest_singular_pair(xm).first;
        out.trace = gn;
        // sensitivity in the original scale of the data; if the rescaled
        // Jacobian underflows to exact singularity, fall back to the scaled
        // model's estimate rather than rejecting a converged solution
        try {
          LeastSquaresModel sens_model = bundle_model(a, cand.structure, seed + redraw);
          VectorXcd vstar(s + n * n);
          for (int g = 0; g < s; ++g) vstar[g] = lams[g];
          vstar.segment(s, n * n) = Eigen::Map<VectorXcd>(xm.data(), n * n);
          Sensitivity sens = sensitivity(sens_model, vstar);
          out.lipschitz_bound = sens.lipschitz_bound;
          out.condition = sens.lipschitz_bound;
        } catch (const GnError&) {
          Sensitivity sens = sensitivity(model, gn.solution);
          out.lipschitz_bound = sens.lipschitz_bound;
          out.condition = sens.lipschitz_bound;
        }
        return out;
      } catch (const GnRankDeficient&) {
        if (dbg) std::fprintf(stderr, "[jcf]   redraw=%u rank-deficient\n", redraw);
        continue;  // re-draw the normalization vectors
      } catch (const GnError& e) {
        if (dbg) std::fprintf(stderr, "[jcf]   redraw=%u gn error: %s\n", redraw, e.what());
        break;  // divergence: wrong stratum, escalate
      }
    }
  }

  // terminal fallback: report the plain eigendecomposition (all blocks simple)
  Eigen::ComplexEigenSolver<MatrixXcd> eig(a, true);
  if (eig.info() != Eigen::Success) throw GnError("regularized_jcf: eigendecomposition failed");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return complex_less(eig.eigenvalues()[i], eig.eigenvalues()[j]);
  });
  JcfResult out;
  out.transform.resize(n, n);
  for (int g = 0; g < n; ++g) {
    cplx lam = eig.eigenvalues()[order[g]];
    out.structure.groups.push_back({lam, {1}});
    out.eigenvalues.push_back(lam);
    out.transform.col(g) = eig.eigenvectors().col(order[g]);
  }
  out.structure.codimension = 0;
  out.jordan = assemble_jordan(out.structure, out.eigenvalues);
  Eigen::PartialPivLU<MatrixXcd> lu(out.transform);
  out.backward_error =
      (a - out.transform * out.jordan * lu.inverse()).norm() / (anorm > 0.0 ? anorm : 1.0);
  out.sigma_min_transform = smallest_singular_pair(out.transform).first;
  out.trace.converged = true;
  out.trace.iterations = 0;
  out.lipschitz_bound = 0.0;
  out.condition = 0.0;
  return out;
}

}  // namespace regalg
