#include "regalg/poly.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace regalg {

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(cplx(0.0));
}

Polynomial Polynomial::zero(int nominal_degree) {
  return Polynomial(std::vector<cplx>(nominal_degree + 1, cplx(0.0)));
}

Polynomial Polynomial::monomial(int degree, cplx coeff) {
  std::vector<cplx> c(degree + 1, cplx(0.0));
  c[degree] = coeff;
  return Polynomial(std::move(c));
}

int Polynomial::exact_degree() const {
  for (int j = static_cast<int>(coeffs_.size()) - 1; j >= 0; --j)
    if (coeffs_[j] != cplx(0.0)) return j;
  return 0;
}

cplx Polynomial::leading_coeff() const { return coeffs_[exact_degree()]; }

double Polynomial::norm() const {
  double s = 0.0;
  for (const cplx& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

Polynomial Polynomial::with_nominal_degree(int n) const {
  if (n < nominal_degree())
    throw std::invalid_argument("with_nominal_degree: cannot shrink below nominal degree");
  std::vector<cplx> c = coeffs_;
  c.resize(n + 1, cplx(0.0));
  return Polynomial(std::move(c));
}

Polynomial Polynomial::trimmed() const {
  std::vector<cplx> c(coeffs_.begin(), coeffs_.begin() + exact_degree() + 1);
  return Polynomial(std::move(c));
}

Eigen::VectorXcd Polynomial::as_vector() const {
  Eigen::VectorXcd v(coeffs_.size());
  for (std::size_t j = 0; j < coeffs_.size(); ++j) v[j] = coeffs_[j];
  return v;
}

Polynomial Polynomial::from_vector(const Eigen::VectorXcd& v) {
  std::vector<cplx> c(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) c[j] = v[j];
  return Polynomial(std::move(c));
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  // coefficient map: exponent -> value
  std::vector<cplx> run(std::string* var_out) {
    std::vector<cplx> coeffs(1, cplx(0.0));
    skip_ws();
    if (done()) throw ParseError("empty polynomial", 0);
    bool first = true;
    while (!done()) {
      double sign = 1.0;
      skip_ws();
      if (peek() == '+' || peek() == '-') {
        sign = (peek() == '-') ? -1.0 : 1.0;
        ++pos_;
      } else if (!first) {
        throw ParseError("expected '+' or '-'", pos_);
      }
      auto [coef, expo] = term();
      if (expo >= static_cast<int>(coeffs.size())) coeffs.resize(expo + 1, cplx(0.0));
      coeffs[expo] += sign * coef;
      first = false;
      skip_ws();
    }
    if (var_out) *var_out = var_.empty() ? "x" : var_;
    return coeffs;
  }

 private:
  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::pair<cplx, int> term() {
    skip_ws();
    cplx coef(1.0);
    bool have_coef = false;
    if (peek() == '(')
      coef = complex_literal(), have_coef = true;
    else if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')
      coef = cplx(number()), have_coef = true;

    skip_ws();
    if (peek() == '*') {
      ++pos_;
      skip_ws();
    }
    int expo = 0;
    if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
      std::string name = identifier();
      if (!var_.empty() && name != var_)
        throw ParseError("mixed variable names '" + var_ + "' and '" + name + "'", pos_);
      var_ = name;
      expo = 1;
      skip_ws();
      if (peek() == '^') {
        ++pos_;
        skip_ws();
        bool neg = false;
        if (peek() == '-') {
          neg = true;
          ++pos_;
        }
        if (!std::isdigit(static_cast<unsigned char>(peek())))
          throw ParseError("expected integer exponent", pos_);
        expo = 0;
        while (std::isdigit(static_cast<unsigned char>(peek())))
          expo = expo * 10 + (s_[pos_++] - '0');
        if (neg) throw ParseError("negative exponent", pos_);
      }
    } else if (!have_coef) {
      throw ParseError("expected coefficient or variable", pos_);
    }
    return {coef, expo};
  }

  double number() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') ++pos_;
    if (peek() == 'e' || peek() == 'E') {
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    try {
      std::size_t used = 0;
      double v = std::stod(s_.substr(start, pos_ - start), &used);
      if (used != pos_ - start) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
  }

  cplx complex_literal() {
    std::size_t start = pos_;
    ++pos_;  // '('
    skip_ws();
    double re_sign = 1.0;
    if (peek() == '-') re_sign = -1.0, ++pos_;
    else if (peek() == '+') ++pos_;
    skip_ws();
    double re = number();
    skip_ws();
    double im = 0.0;
    if (peek() == '+' || peek() == '-') {
      double im_sign = (peek() == '-') ? -1.0 : 1.0;
      ++pos_;
      skip_ws();
      im = im_sign * number();
      skip_ws();
      if (peek() != 'i') throw ParseError("expected 'i' in complex literal", pos_);
      ++pos_;
    } else if (peek() == 'i') {
      // "(bi)" pure imaginary
      im = re;
      re = 0.0;
      ++pos_;
    }
    skip_ws();
    if (peek() != ')') throw ParseError("unterminated complex literal", start);
    ++pos_;
    return cplx(re_sign * re, im);
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    return s_.substr(start, pos_ - start);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  std::string var_;
};

void append_number(std::ostream& os, double v) {
  std::ostringstream tmp;
  tmp.precision(15);
  tmp << v;
  os << tmp.str();
}

}  // namespace

Polynomial parse(const std::string& text, int nominal_degree) {
  Parser parser(text);
  std::vector<cplx> coeffs = parser.run(nullptr);
  Polynomial p(std::move(coeffs));
  if (nominal_degree >= 0) return p.with_nominal_degree(nominal_degree);
  return p;
}

std::string format(const Polynomial& p, const std::string& var) {
  std::ostringstream os;
  os.precision(15);
  bool first = true;
  for (int j = 0; j <= p.nominal_degree(); ++j) {
    cplx c = p.coeff(j);
    if (c == cplx(0.0)) continue;
    bool pure_real = c.imag() == 0.0;
    if (first) {
      if (pure_real && c.real() < 0) {
        os << '-';
        c = -c;
      }
    } else {
      if (pure_real && c.real() < 0) {
        os << " - ";
        c = -c;
      } else {
        os << " + ";
      }
    }
    if (pure_real) {
      if (c.real() != 1.0 || j == 0) {
        append_number(os, c.real());
        if (j > 0) os << '*';
      }
    } else {
      os << '(';
      append_number(os, c.real());
      os << (c.imag() < 0 ? '-' : '+');
      append_number(os, std::abs(c.imag()));
      os << "i)";
      if (j > 0) os << '*';
    }
    if (j > 0) {
      os << var;
      if (j > 1) os << '^' << j;
    }
    first = false;
  }
  if (first) os << '0';
  return os.str();
}

Polynomial add(const Polynomial& p, const Polynomial& q) {
  int n = std::max(p.nominal_degree(), q.nominal_degree());
  std::vector<cplx> c(n + 1);
  for (int j = 0; j <= n; ++j) c[j] = p.coeff(j) + q.coeff(j);
  return Polynomial(std::move(c));
}

Polynomial subtract(const Polynomial& p, const Polynomial& q) {
  return add(p, scale(q, cplx(-1.0)));
}

Polynomial scale(const Polynomial& p, cplx alpha) {
  std::vector<cplx> c = p.coeffs();
  for (cplx& x : c) x *= alpha;
  return Polynomial(std::move(c));
}

Polynomial multiply(const Polynomial& p, const Polynomial& q) {
  int n = p.nominal_degree() + q.nominal_degree();
  std::vector<cplx> c(n + 1, cplx(0.0));
  for (int i = 0; i <= p.nominal_degree(); ++i) {
    if (p.coeff(i) == cplx(0.0)) continue;
    for (int j = 0; j <= q.nominal_degree(); ++j) c[i + j] += p.coeff(i) * q.coeff(j);
  }
  return Polynomial(std::move(c));
}

cplx dot(const Polynomial& p, const Polynomial& q) {
  cplx s(0.0);
  int n = std::min(p.nominal_degree(), q.nominal_degree());
  for (int j = 0; j <= n; ++j) s += p.coeff(j) * q.coeff(j);
  return s;
}

Eigen::MatrixXcd convolution_matrix(const Polynomial& p, int arg_degree) {
  if (arg_degree < 0) throw std::invalid_argument("convolution_matrix: arg_degree < 0");
  int dp = p.nominal_degree();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dp + arg_degree + 1, arg_degree + 1);
  for (int col = 0; col <= arg_degree; ++col)
    for (int i = 0; i <= dp; ++i) m(i + col, col) = p.coeff(i);
  return m;
}

Eigen::MatrixXcd sylvester_matrix(const Polynomial& p, const Polynomial& q, int k) {
  if (p.is_zero() || q.is_zero())
    throw std::invalid_argument("sylvester_matrix: zero polynomial input");
  int m = p.exact_degree();
  int n = q.exact_degree();
  if (m < 1 || n < 1)
    throw std::invalid_argument("sylvester_matrix: inputs must have degree >= 1");
  if (k < 1 || k > std::min(m, n))
    throw std::invalid_argument("sylvester_matrix: k out of range");
  Polynomial pt = p.trimmed();
  Polynomial qt = q.trimmed();
  Eigen::MatrixXcd left = convolution_matrix(qt, m - k);    // cofactor-of-p arguments
  Eigen::MatrixXcd right = convolution_matrix(pt, n - k);   // cofactor-of-q arguments
  int rows = m + n - k + 1;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(rows, (m - k + 1) + (n - k + 1));
  s.block(0, 0, left.rows(), left.cols()) = left;
  s.block(0, m - k + 1, right.rows(), right.cols()) = right;
  return s;
}

Polynomial derivative(const Polynomial& p) {
  int n = p.nominal_degree();
  if (n == 0) return Polynomial::zero(0);
  std::vector<cplx> c(n);
  for (int j = 1; j <= n; ++j) c[j - 1] = cplx(double(j)) * p.coeff(j);
  return Polynomial(std::move(c));
}

cplx evaluate(const Polynomial& p, cplx x) {
  cplx acc(0.0);
  for (int j = p.nominal_degree(); j >= 0; --j) acc = acc * x + p.coeff(j);
  return acc;
}

}  // namespace regalg
