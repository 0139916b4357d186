#include "doctest.h"

#include <random>

#include "qtwist/ring.hpp"

using namespace qtwist;

namespace {

Scalar random_scalar(std::mt19937& rng, const ParamSpace& sp, int terms) {
  std::uniform_int_distribution<int> ex(-2, 2), co(-5, 5);
  Scalar s;
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    for (std::size_t v = 0; v < sp.num_params(); ++v) m.e[v] = ex(rng) * sp.exp_denom();
    s += Scalar::monomial(m, co(rng));
  }
  return s;
}

// Independent oracle: evaluate a Scalar at integer-power points by hand.
Rational eval_oracle(const Scalar& s, const ParamSpace& sp, const std::vector<Rational>& pt) {
  Rational total = 0;
  for (const auto& t : s.terms()) {
    Rational v = t.coeff;
    for (std::size_t i = 0; i < sp.num_params(); ++i) {
      int e = t.mono.e[i] / sp.exp_denom();
      for (int k = 0; k < std::abs(e); ++k) v = e > 0 ? Rational(v * pt[i]) : Rational(v / pt[i]);
    }
    total += v;
  }
  return total;
}

}  // namespace

TEST_CASE("inverse pair and self cancellation") {
  ParamSpace sp(2);
  Scalar q = sp.q(1, 2);
  CHECK((q * sp.q(2, 1)).is_one());
  Ratio x(sp.a() - Scalar(1), sp.a() - Scalar(1));
  CHECK(x.is_one());
  CHECK((Scalar(1) - sp.a() + (sp.a() - Scalar(1))).is_zero());
  CHECK_THROWS_AS(Ratio(Scalar(1), Scalar(0)), Error);
  CHECK_THROWS_AS(Ratio().inverse(), Error);
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937 rng(7);
  ParamSpace sp(2);
  for (int trial = 0; trial < 30; ++trial) {
    Scalar x = random_scalar(rng, sp, 3), y = random_scalar(rng, sp, 3), z = random_scalar(rng, sp, 2);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x * y == y * x);
    CHECK((x - x).is_zero());
    Ratio rx(x), ry(y), rz(z);
    if (!z.is_zero()) {
      Ratio f = rx / Ratio(z + Scalar(7));
      CHECK(f * Ratio(z + Scalar(7)) == rx);
      CHECK((f - f).is_zero());
      CHECK((f + ry) * rz == f * rz + ry * rz);
    }
  }
}

TEST_CASE("evaluation agrees with a hand oracle") {
  std::mt19937 rng(11);
  ParamSpace sp(3);
  std::vector<Rational> pt{Rational(2), Rational(-3, 2), Rational(5), Rational(7, 3)};
  Assignment as(sp);
  for (std::size_t i = 0; i < sp.num_params(); ++i) as[i] = ParamValue::of(pt[i]);
  for (int trial = 0; trial < 10; ++trial) {
    Scalar x = random_scalar(rng, sp, 4);
    Scalar v = substitute_values(x, sp, as);
    REQUIRE(v.is_constant());
    CHECK(v.constant_value() == eval_oracle(x, sp, pt));
  }
}

TEST_CASE("canonical form cancels univariate factors") {
  ParamSpace sp(2);
  Scalar a = sp.a();
  Scalar q = sp.q(1, 2);
  Ratio r(q_factorial(sp, 3) * q, q_int(sp, 2) * q_int(sp, 3));
  CHECK(r.is_polynomial());
  CHECK(r.num() == q);
  Ratio s(q * (Scalar(1) - a * a), Scalar(1) - a);
  CHECK(s.num() == q * (Scalar(1) + a));
  // monomial denominators are absorbed
  Ratio t(Scalar(3), a * q);
  CHECK(t.is_polynomial());
  CHECK(t.num() == Scalar::monomial((a * q).pow(-1).terms()[0].mono, 3));
}

TEST_CASE("q-integers") {
  ParamSpace sp(2);
  Scalar a = sp.a();
  CHECK(q_int(sp, 0).is_zero());
  CHECK(q_int(sp, 4) == Scalar(1) + a + a * a + a * a * a);
  Assignment as(sp);
  as[sp.a_index()] = ParamValue::of(2);
  CHECK(substitute_values(q_int(sp, 3), sp, as).constant_value() == 7);
  CHECK_THROWS_AS(q_int(sp, -1), Error);
  for (int m = 0; m <= 8; ++m)
    for (int n = 0; n <= 8; ++n) CHECK(q_int(sp, m + n) == q_int(sp, m) + a.pow(m) * q_int(sp, n));
}

TEST_CASE("q-factorials and q-exponential coefficients") {
  ParamSpace sp(2);
  Scalar a = sp.a();
  CHECK(q_factorial(sp, 0).is_one());
  CHECK(q_factorial(sp, 3) == (Scalar(1) + a) * (Scalar(1) + a + a * a));
  auto c = qexp_coeffs(sp, 2);
  REQUIRE(c.size() == 3);
  CHECK(c[0].is_one());
  CHECK(c[1].is_one());
  CHECK(c[2] == Ratio(Scalar(1), Scalar(1) + a));
  auto ci = qexp_coeffs(sp, 2, QFlavor::InverseA);
  CHECK(ci[2] * Ratio(Scalar(1) + a.pow(-1)) == Ratio(1));
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == std::vector<long>{-1, 1});
  CHECK(cyclotomic_polynomial(2) == std::vector<long>{1, 1});
  CHECK(cyclotomic_polynomial(3) == std::vector<long>{1, 1, 1});
  CHECK(cyclotomic_polynomial(4) == std::vector<long>{1, 0, 1});
  CHECK(cyclotomic_polynomial(6) == std::vector<long>{1, -1, 1});
  CHECK(euler_phi(5) == 4);
}

TEST_CASE("q-integers at roots of unity") {
  ParamSpace sp(2);
  for (int k = 2; k <= 6; ++k) {
    for (int n = 1; n < k; ++n) CHECK_FALSE(at_root_of_unity(q_int(sp, n), sp, k).is_zero());
    CHECK(at_root_of_unity(q_int(sp, k), sp, k).is_zero());
  }
}

TEST_CASE("cyclotomic inversion") {
  ParamSpace sp(2);
  Scalar a = sp.a();
  CycScalar x = at_root_of_unity(Ratio(Scalar(1), Scalar(1) - a), sp, 3);
  CycScalar one_minus = at_root_of_unity(Scalar(1) - a, sp, 3);
  CHECK(x * one_minus == CycScalar::constant(3, 1));
  // oracle: 1/(1-z) at z^2+z+1=0 equals (2+z)/3
  CHECK(x == CycScalar(3, {Ratio(Rational(2, 3)), Ratio(Rational(1, 3))}));
  CHECK_THROWS_AS(at_root_of_unity(Ratio(Scalar(1), q_int(sp, 3)), sp, 3), PoleError);
  // removable singularity: [2]/[2] is regular at -1
  Scalar q = sp.q(1, 2);
  Scalar two = q_int(sp, 2);
  CHECK(at_root_of_unity(Ratio(q * two), sp, 2) == CycScalar(2, {Ratio(0)}));
  CHECK(CycScalar::generator(4).pow(4) == CycScalar::constant(4, 1));
  CHECK(CycScalar::generator(4).pow(2) == CycScalar::constant(4, -1));
}

TEST_CASE("generalised exponential scheme") {
  ParamSpace sp(2);
  auto s2 = gexp_scheme(sp, 2, 3);
  CHECK(s2[3].m == 1);
  CHECK(s2[3].n == 1);
  CHECK(s2[3].coeff == CycScalar::constant(2, 1));
  CHECK(s2[0].coeff == CycScalar::constant(2, 1));
  auto s3 = gexp_scheme(sp, 3, 2);
  CHECK(s3[2].m == 0);
  CHECK(s3[2].n == 2);
  CHECK(s3[2].coeff * at_root_of_unity(q_factorial(sp, 2), sp, 3) == CycScalar::constant(3, 1));
  // below the root order the scheme is the ordinary q-exponential
  auto s5 = gexp_scheme(sp, 5, 4);
  auto qe = qexp_coeffs(sp, 4);
  for (int k = 0; k <= 4; ++k) {
    CHECK(s5[static_cast<std::size_t>(k)].m == 0);
    CHECK(s5[static_cast<std::size_t>(k)].coeff == at_root_of_unity(qe[static_cast<std::size_t>(k)], sp, 5));
  }
}

TEST_CASE("exponential recursions") {
  ParamSpace sp(2);
  CHECK(verify_qexp_recursion(sp, 8).ok);
  CHECK(verify_classical_recursion(12).ok);
  for (int k = 2; k <= 3; ++k) CHECK(verify_gexp_recursion(sp, k, 2 * k + 2).ok);
}

TEST_CASE("fractional exponents and substitution") {
  ParamSpace sp(2);
  Scalar half = sp.a_pow(Rational(1, 2));
  CHECK((half * half) == sp.a());
  Assignment as(sp);
  as[sp.a_index()] = ParamValue::of(Rational(9, 4));
  CHECK(substitute_values(half, sp, as).constant_value() == Rational(3, 2));
  as[sp.a_index()] = ParamValue::of(2);
  CHECK_THROWS_AS(substitute_values(half, sp, as), Error);
  as[sp.a_index()] = ParamValue::of(1);
  CHECK_THROWS_AS(substitute_values(Ratio(Scalar(1), Scalar(1) - sp.a()), sp, as), PoleError);
  Scalar q = sp.q(1, 2);
  CHECK(substitute_monomial(q * q, sp, sp.q_index(1, 2), sp.a()) == sp.a() * sp.a());
}

TEST_CASE("parameter names and value parsing") {
  ParamSpace sp(3);
  CHECK(sp.num_params() == 4);
  CHECK(sp.find("q.1.2") == sp.q_index(1, 2));
  CHECK(sp.find("q23") == sp.q_index(2, 3));
  CHECK(sp.find("a") == sp.a_index());
  CHECK_FALSE(sp.find("q.2.1").has_value());
  CHECK(Assignment::parse_value("sym").kind == ParamValue::Kind::Symbolic);
  CHECK(Assignment::parse_value("3/2").value == Rational(3, 2));
  CHECK(Assignment::parse_value("root:3").root_order == 3);
  CHECK_THROWS_AS(Assignment::parse_value("x"), Error);
  CHECK(Ratio(Scalar(1) - sp.a()).to_string(sp) == "(1-a)/(1)");
}
