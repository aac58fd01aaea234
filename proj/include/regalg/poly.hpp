#ifndef REGALG_POLY_HPP
#define REGALG_POLY_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace regalg {

using cplx = std::complex<double>;

// Dense univariate polynomial over C, coefficients in ascending powers.
// The nominal degree fixes the ambient space P_n (length = nominal_degree+1);
// the exact degree is the largest index with a nonzero coefficient.
class Polynomial {
 public:
  Polynomial() : coeffs_(1, cplx(0.0)) {}
  explicit Polynomial(std::vector<cplx> coeffs);
  Polynomial(std::initializer_list<cplx> coeffs)
      : Polynomial(std::vector<cplx>(coeffs)) {}

  static Polynomial zero(int nominal_degree = 0);
  static Polynomial one() { return Polynomial({cplx(1.0)}); }
  static Polynomial monomial(int degree, cplx coeff = cplx(1.0));

  int nominal_degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  int exact_degree() const;
  bool is_zero() const { return exact_degree() < 0 || (exact_degree() == 0 && coeffs_[0] == cplx(0.0)); }

  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx coeff(int j) const { return j >= 0 && j < static_cast<int>(coeffs_.size()) ? coeffs_[j] : cplx(0.0); }
  cplx leading_coeff() const;

  // Euclidean norm of the coefficient vector (isometry with C^{n+1}).
  double norm() const;

  // Returns a copy embedded in P_n for n >= nominal_degree (zero padding).
  Polynomial with_nominal_degree(int n) const;
  // Drops trailing zero coefficients (exact test, never tolerance-based).
  Polynomial trimmed() const;

  Eigen::VectorXcd as_vector() const;
  static Polynomial from_vector(const Eigen::VectorXcd& v);

 private:
  std::vector<cplx> coeffs_;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

// Text grammar: term (('+'|'-') term)*, term := coef, coef '*' var,
// var, var '^' int; coef is a decimal or a "(a+bi)" literal.
Polynomial parse(const std::string& text, int nominal_degree = -1);
std::string format(const Polynomial& p, const std::string& var = "x");

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial subtract(const Polynomial& p, const Polynomial& q);
Polynomial scale(const Polynomial& p, cplx alpha);
Polynomial multiply(const Polynomial& p, const Polynomial& q);

// Bilinear coefficient dot-product (no conjugation); shorter vector zero-padded.
cplx dot(const Polynomial& p, const Polynomial& q);

// Matrix M with M * coeffs(q) = coeffs(p*q) for every q of nominal degree
// arg_degree; shape (deg(p)+arg_degree+1) x (arg_degree+1), Toeplitz-banded.
Eigen::MatrixXcd convolution_matrix(const Polynomial& p, int arg_degree);

// k-th Sylvester subresultant [conv(q, m-k) | conv(p, n-k)] with m = deg(p),
// n = deg(q); k = 1 gives the classical Sylvester arrangement.
Eigen::MatrixXcd sylvester_matrix(const Polynomial& p, const Polynomial& q, int k);

Polynomial derivative(const Polynomial& p);
cplx evaluate(const Polynomial& p, cplx x);

}  // namespace regalg

#endif
