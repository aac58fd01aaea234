#include "regalg/numlin.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace regalg {

SvdResult svd(const MatrixXcd& a) {
  if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("svd: empty matrix");
  Eigen::BDCSVD<MatrixXcd> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult r;
  r.singular_values = dec.singularValues();
  r.left_vectors = dec.matrixU();
  r.right_vectors = dec.matrixV();
  for (Eigen::Index j = 0; j < r.right_vectors.cols(); ++j) {
    Eigen::Index imax = 0;
    r.right_vectors.col(j).cwiseAbs().maxCoeff(&imax);
    std::complex<double> pivot = r.right_vectors(imax, j);
    if (std::abs(pivot) > 0.0) {
      std::complex<double> phase = std::conj(pivot) / std::abs(pivot);
      r.right_vectors.col(j) *= phase;
      if (j < r.left_vectors.cols()) r.left_vectors.col(j) *= phase;
    }
  }
  return r;
}

static int rank_from_sigma(const VectorXd& sigma, double tol, RankMode mode) {
  if (tol <= 0.0) throw std::invalid_argument("numerical_rank: tol must be positive");
  if (sigma.size() == 0) return 0;
  double theta = (mode == RankMode::relative) ? tol * sigma[0] : tol;
  int rank = 0;
  for (Eigen::Index j = 0; j < sigma.size(); ++j)
    if (sigma[j] > theta) ++rank;
  return rank;
}

int numerical_rank(const MatrixXcd& a, double tol, RankMode mode) {
  return rank_from_sigma(svd(a).singular_values, tol, mode);
}

int numerical_nullity(const MatrixXcd& a, double tol, RankMode mode) {
  return static_cast<int>(a.cols()) - numerical_rank(a, tol, mode);
}

double rank_gap_ratio(const VectorXd& sigma, int rank) {
  if (rank <= 0 || rank >= sigma.size()) return std::numeric_limits<double>::infinity();
  if (sigma[rank] == 0.0) return std::numeric_limits<double>::infinity();
  return sigma[rank - 1] / sigma[rank];
}

VectorXcd lsq_min_norm(const MatrixXcd& a, const VectorXcd& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("lsq_min_norm: dimension mismatch");
  Eigen::ColPivHouseholderQR<MatrixXcd> qr(a);
  if (qr.rank() == a.cols()) return qr.solve(b);
  // rank-deficient: minimum-norm solution via SVD
  SvdResult s = svd(a);
  double cut = std::max(a.rows(), a.cols()) * std::numeric_limits<double>::epsilon() *
               (s.singular_values.size() ? s.singular_values[0] : 0.0);
  VectorXcd x = VectorXcd::Zero(a.cols());
  for (Eigen::Index j = 0; j < s.singular_values.size(); ++j) {
    if (s.singular_values[j] <= cut) break;
    x += (s.left_vectors.col(j).dot(b) / s.singular_values[j]) * s.right_vectors.col(j);
  }
  return x;
}

std::pair<double, VectorXcd> smallest_singular_pair(const MatrixXcd& a) {
  SvdResult s = svd(a);
  Eigen::Index last = s.singular_values.size() - 1;
  return {s.singular_values[last], s.right_vectors.col(last)};
}

double spectral_norm(const MatrixXcd& a) { return svd(a).singular_values[0]; }

MatrixXcd kernel_basis(const MatrixXcd& a, double tol, RankMode mode) {
  SvdResult s = svd(a);
  int rank = rank_from_sigma(s.singular_values, tol, mode);
  int n = static_cast<int>(a.cols());
  MatrixXcd basis(n, n - rank);
  // thin V covers min(m,n) columns; complete with a full-SVD V when needed
  if (s.right_vectors.cols() == n) {
    basis = s.right_vectors.rightCols(n - rank);
  } else {
    Eigen::BDCSVD<MatrixXcd> dec(a, Eigen::ComputeFullV);
    basis = dec.matrixV().rightCols(n - rank);
  }
  return basis;
}

static std::complex<double> parse_entry(const std::string& tok) {
  // forms: a, a+bi, a-bi, bi, i, -i
  std::string t = tok;
  if (t.empty()) throw std::invalid_argument("empty matrix entry");
  if (t.back() == 'i' || t.back() == 'I') {
    t.pop_back();
    if (t.empty() || t == "+") return {0.0, 1.0};
    if (t == "-") return {0.0, -1.0};
    // split at the last +/- that is not an exponent sign
    std::size_t split = std::string::npos;
    for (std::size_t j = t.size(); j-- > 1;) {
      if ((t[j] == '+' || t[j] == '-') && t[j - 1] != 'e' && t[j - 1] != 'E') {
        split = j;
        break;
      }
    }
    if (split == std::string::npos) return {0.0, std::stod(t)};
    double re = std::stod(t.substr(0, split));
    std::string ims = t.substr(split);
    double im = (ims == "+") ? 1.0 : (ims == "-") ? -1.0 : std::stod(ims);
    return {re, im};
  }
  return {std::stod(t), 0.0};
}

MatrixXcd parse_matrix(const std::string& text) {
  std::vector<std::vector<std::complex<double>>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream ls(line);
    std::vector<std::complex<double>> row;
    std::string tok;
    while (ls >> tok) row.push_back(parse_entry(tok));
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument("matrix rows have inconsistent lengths");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("empty matrix");
  MatrixXcd a(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) a(i, j) = rows[i][j];
  return a;
}

std::string format_matrix(const MatrixXcd& a) {
  std::ostringstream os;
  os.precision(15);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) os << ' ';
      std::complex<double> c = a(i, j);
      if (c.imag() == 0.0) {
        os << c.real();
      } else {
        os << c.real() << (c.imag() < 0 ? '-' : '+') << std::abs(c.imag()) << 'i';
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace regalg
