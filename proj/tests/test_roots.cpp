#include <doctest.h>

#include <algorithm>
#include <random>

#include "regalg/roots.hpp"

using namespace regalg;

namespace {

Polynomial from_roots(cplx leading, const std::vector<cplx>& roots,
                      const std::vector<int>& mults) {
  return expand_factorization(leading, roots, mults);
}

Polynomial add_noise(const Polynomial& p, double size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<cplx> c = p.coeffs();
  for (cplx& z : c) z += size * cplx(unit(rng), unit(rng));
  return Polynomial(c);
}

cplx nearest(const std::vector<cplx>& pool, cplx target) {
  cplx best = pool.front();
  for (const cplx& z : pool)
    if (std::abs(z - target) < std::abs(best - target)) best = z;
  return best;
}

}  // namespace

TEST_CASE("expand_factorization is the product of the factors") {
  Polynomial p = from_roots(cplx(2.0), {cplx(1.0), cplx(-2.0)}, {2, 1});
  // 2 (x-1)^2 (x+2) = 2x^3 - 6x + 4
  CHECK(subtract(p, parse("4-6*x+2*x^3")).norm() <= 1e-12);
}

TEST_CASE("companion_roots on a simple cubic") {
  std::vector<cplx> r = companion_roots(parse("-6+11*x-6*x^2+x^3"));  // roots 1,2,3
  REQUIRE(r.size() == 3);
  CHECK(std::abs(r[0] - cplx(1.0)) <= 1e-8);
  CHECK(std::abs(r[1] - cplx(2.0)) <= 1e-8);
  CHECK(std::abs(r[2] - cplx(3.0)) <= 1e-8);
}

TEST_CASE("multiplicity_structure: exact cases") {
  Polynomial p = from_roots(cplx(1.0), {cplx(1.0), cplx(-2.0)}, {2, 1});
  RootStructure s = multiplicity_structure(p, 1e-8);
  CHECK(s.multiplicities == std::vector<int>{2, 1});
  CHECK(s.codimension == 1);

  RootStructure cube = multiplicity_structure(parse("x^3"), 1e-8);
  CHECK(cube.multiplicities == std::vector<int>{3});
  CHECK(cube.codimension == 2);
}

TEST_CASE("multiplicity_structure survives rounded coefficients") {
  std::mt19937_64 rng(101);
  Polynomial p = from_roots(cplx(1.0), {cplx(1.0)}, {4});
  RootStructure s = multiplicity_structure(add_noise(p, 1e-6, rng), 1e-4);
  CHECK(s.multiplicities == std::vector<int>{4});
}

TEST_CASE("roots_initial lands near the truth") {
  Polynomial two = from_roots(cplx(1.0), {cplx(1.0), cplx(2.0)}, {1, 1});
  RootStructure s2 = multiplicity_structure(two, 1e-10);
  RootEstimates est = roots_initial(two, s2, 1e-10);
  REQUIRE(est.roots.size() == 2);
  CHECK(std::abs(nearest(est.roots, cplx(1.0)) - cplx(1.0)) <= 1e-7);
  CHECK(std::abs(nearest(est.roots, cplx(2.0)) - cplx(2.0)) <= 1e-7);

  Polynomial dbl = from_roots(cplx(1.0), {cplx(1.0)}, {2});
  RootStructure sd = multiplicity_structure(dbl, 1e-10);
  RootEstimates estd = roots_initial(dbl, sd, 1e-10);
  REQUIRE(estd.roots.size() == 1);
  CHECK(std::abs(estd.roots[0] - cplx(1.0)) <= 1e-6);
}

TEST_CASE("roots_refine: exact data converges to machine precision") {
  Polynomial p = from_roots(cplx(1.0), {cplx(1.0), cplx(-2.0)}, {2, 1});
  Factorization f = roots_refine(p, {2, 1}, cplx(1.0), {cplx(0.9), cplx(-2.1)});
  REQUIRE(f.roots.size() == 2);
  CHECK(std::abs(nearest(f.roots, cplx(1.0)) - cplx(1.0)) <= 1e-12);
  CHECK(std::abs(nearest(f.roots, cplx(-2.0)) + cplx(2.0)) <= 1e-12);
  CHECK(f.backward_error <= 1e-14);
}

TEST_CASE("constrained sensitivity: the multiple root stays accurate under noise") {
  std::mt19937_64 rng(103);
  Polynomial exact = from_roots(cplx(1.0), {cplx(1.0), cplx(-1.0)}, {3, 1});
  Polynomial noisy = add_noise(exact, 1e-8, rng);
  Factorization f = proots(noisy, 1e-6);
  std::vector<int> sorted_mults = f.multiplicities;
  std::sort(sorted_mults.begin(), sorted_mults.end());
  REQUIRE(sorted_mults == std::vector<int>{1, 3});
  CHECK(std::abs(nearest(f.roots, cplx(1.0)) - cplx(1.0)) <= 1e-7);
}

TEST_CASE("proots: exact double root and the all-simple fallback") {
  Factorization f = proots(from_roots(cplx(1.0), {cplx(1.0), cplx(-2.0)}, {2, 1}), 1e-10);
  std::vector<int> sorted_mults = f.multiplicities;
  std::sort(sorted_mults.begin(), sorted_mults.end());
  CHECK(sorted_mults == std::vector<int>{1, 2});

  // square-free coprime product: 13 simple roots
  Polynomial p = multiply(parse("1+x^10"), parse("1-0.333333333333333*x+0.666666666666667*x^3"));
  Factorization simple = proots(p, 1e-10);
  CHECK(simple.multiplicities.size() == 13);
  CHECK(*std::max_element(simple.multiplicities.begin(), simple.multiplicities.end()) == 1);
}

TEST_CASE("proots: quintuple root under 1e-6 noise") {
  std::mt19937_64 rng(107);
  Polynomial p = add_noise(from_roots(cplx(1.0), {cplx(0.5)}, {5}), 1e-6, rng);
  Factorization f = proots(p, 1e-4);
  REQUIRE(f.multiplicities == std::vector<int>{5});
  CHECK(std::abs(f.roots[0] - cplx(0.5)) <= 1e-5);
}

TEST_CASE("scaling equivariance") {
  Polynomial p = from_roots(cplx(1.0), {cplx(1.0), cplx(3.0)}, {2, 2});
  cplx alpha(2.5, 0.0);
  Factorization base = proots(p, 1e-10);
  Factorization scaled = proots(scale(p, alpha), 1e-10);
  REQUIRE(base.roots.size() == scaled.roots.size());
  CHECK(base.multiplicities == scaled.multiplicities);
  for (std::size_t i = 0; i < base.roots.size(); ++i)
    CHECK(std::abs(base.roots[i] - scaled.roots[i]) <= 1e-10);
  CHECK(std::abs(scaled.leading / base.leading - alpha) <= 1e-12 * std::abs(alpha));
}

TEST_CASE("determinism and canonical root order") {
  Polynomial p = from_roots(cplx(1.0), {cplx(2.0), cplx(-1.0), cplx(0.0, 1.0)}, {1, 2, 1});
  Factorization a = proots(p, 1e-8);
  Factorization b = proots(p, 1e-8);
  REQUIRE(a.roots.size() == b.roots.size());
  for (std::size_t i = 0; i < a.roots.size(); ++i) CHECK(a.roots[i] == b.roots[i]);
  for (std::size_t i = 1; i < a.roots.size(); ++i) {
    bool ordered = a.roots[i - 1].real() < a.roots[i].real() ||
                   (a.roots[i - 1].real() == a.roots[i].real() &&
                    a.roots[i - 1].imag() <= a.roots[i].imag());
    CHECK(ordered);
  }
}

TEST_CASE("structure sum always matches the degree") {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<cplx> roots;
    std::vector<int> mults;
    int degree = 0;
    while (degree < 4 + t % 4) {
      roots.push_back(cplx(unit(rng), unit(rng)) * 2.0);
      mults.push_back(1 + t % 3);
      degree += mults.back();
    }
    Polynomial p = from_roots(cplx(1.0), roots, mults);
    RootStructure s = multiplicity_structure(p, 1e-7);
    int sum = 0;
    for (int m : s.multiplicities) sum += m;
    CHECK(sum == p.exact_degree());
  }
}
