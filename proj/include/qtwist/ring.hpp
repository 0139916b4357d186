#pragma once

// Exact scalar arithmetic over the parameter field Q(q^{ij}, a).
//
// Scalar is a Laurent polynomial with rational coefficients whose exponents
// live on the lattice (1/exp_denom)Z. Exponents are stored as integers already
// multiplied by exp_denom, so a^{3/2} with exp_denom = 4 is stored as 6.
// Ratio is a quotient of two Scalars; CycScalar is an element of
// Q(q)[a]/Phi_K(a), used when a is specialised to a primitive K-th root of 1.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace qtwist {

using Rational = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a substitution sends a denominator to zero.
class PoleError : public Error {
 public:
  PoleError() : Error("pole at assignment") {}
};

inline constexpr std::size_t kMaxParams = 12;

struct Monomial {
  std::array<int32_t, kMaxParams> e{};

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;

  Monomial operator+(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxParams; ++i) r.e[i] = e[i] + o.e[i];
    return r;
  }
  Monomial operator-(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxParams; ++i) r.e[i] = e[i] - o.e[i];
    return r;
  }
  Monomial operator-() const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxParams; ++i) r.e[i] = -e[i];
    return r;
  }
  Monomial scaled(int32_t k) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxParams; ++i) r.e[i] = e[i] * k;
    return r;
  }
  bool is_unit() const {
    for (auto x : e)
      if (x != 0) return false;
    return true;
  }
};

class ParamSpace;

/// Laurent polynomial over Q in the parameters.
class Scalar {
 public:
  struct Term {
    Monomial mono;
    Rational coeff;
  };

  Scalar() = default;
  Scalar(long c);  // NOLINT(google-explicit-constructor)
  explicit Scalar(const Rational& c);
  static Scalar monomial(const Monomial& m, const Rational& c = 1);
  static Scalar variable(std::size_t index, int32_t scaled_exp);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  /// Lexicographically greatest term; requires nonzero.
  const Term& leading() const { return terms_.back(); }
  Rational constant_value() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
  friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
  friend Scalar operator*(const Scalar& x, const Scalar& y);
  bool operator==(const Scalar& o) const;

  Scalar scaled(const Rational& c) const;
  Scalar shifted(const Monomial& m) const;
  /// Divides by a single term.
  Scalar div_term(const Term& t) const;
  /// Integer power; negative powers require a monomial.
  Scalar pow(int k) const;
  /// Power with a rational exponent; requires a monomial with lattice-compatible exponents.
  Scalar pow_rational(const Rational& k) const;
  /// Exact quotient if `d` divides this polynomial in the Laurent ring.
  std::optional<Scalar> exact_div(const Scalar& d) const;

  /// True iff all terms share the same exponents outside `var`.
  bool univariate_in(std::size_t var) const;
  std::optional<std::size_t> single_variable() const;

  std::string to_string(const ParamSpace& space) const;

 private:
  friend class ScalarBuilder;
  void normalize();
  std::vector<Term> terms_;  // ascending by mono, nonzero coefficients
};

/// Quotient of Laurent polynomials. Kept canonical: the denominator's
/// lexicographically greatest term is the unit monomial with coefficient 1,
/// monomial denominators are absorbed, and common factors are cancelled when
/// the denominator involves a single parameter.
class Ratio {
 public:
  Ratio() : num_(), den_(1) {}
  Ratio(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  Ratio(const Scalar& s) : num_(s), den_(1) {}  // NOLINT(google-explicit-constructor)
  explicit Ratio(const Rational& c) : num_(c), den_(1) {}
  Ratio(Scalar num, Scalar den);

  const Scalar& num() const { return num_; }
  const Scalar& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return den_.is_one() && num_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }

  Ratio operator-() const;
  Ratio& operator+=(const Ratio& o);
  Ratio& operator-=(const Ratio& o);
  Ratio& operator*=(const Ratio& o);
  Ratio& operator/=(const Ratio& o);
  friend Ratio operator+(Ratio x, const Ratio& y) { return x += y; }
  friend Ratio operator-(Ratio x, const Ratio& y) { return x -= y; }
  friend Ratio operator*(Ratio x, const Ratio& y) { return x *= y; }
  friend Ratio operator/(Ratio x, const Ratio& y) { return x /= y; }
  bool operator==(const Ratio& o) const;

  Ratio inverse() const;
  Ratio pow(int k) const;
  /// Number of terms in numerator plus denominator (residual size metric).
  std::size_t term_count() const { return num_.size() + (den_.is_one() ? 0 : den_.size()); }

  std::string to_string(const ParamSpace& space) const;

 private:
  void canonicalize();
  Scalar num_;
  Scalar den_;
};

/// Ordered parameter list {q_{ij} : i<j} followed by a.
class ParamSpace {
 public:
  explicit ParamSpace(int n, int exp_denom = 0);

  int n() const { return n_; }
  int exp_denom() const { return exp_denom_; }
  std::size_t num_params() const { return names_.size(); }
  std::size_t q_index(int i, int j) const;
  std::size_t a_index() const { return names_.size() - 1; }
  const std::string& name(std::size_t idx) const { return names_[idx]; }
  /// Accepts "a", "q12", "q.1.2".
  std::optional<std::size_t> find(std::string_view name) const;

  /// q^{ij}: 1 for i == j, q_{ij} for i < j, q_{ji}^{-1} for i > j.
  Scalar q(int i, int j) const;
  Scalar a() const;
  Scalar param_pow(std::size_t idx, const Rational& exponent) const;
  Scalar a_pow(const Rational& exponent) const { return param_pow(a_index(), exponent); }
  /// Scaled lattice exponent as a true rational exponent.
  Rational exponent(int32_t scaled) const {
    Rational r(scaled, exp_denom_);
    r.canonicalize();
    return r;
  }

 private:
  int n_;
  int exp_denom_;
  std::vector<std::string> names_;
};

/// Element of Q(q)[a]/Phi_K(a).
class CycScalar {
 public:
  CycScalar() = default;
  CycScalar(int order, std::vector<Ratio> coeffs);
  static CycScalar constant(int order, const Ratio& c);
  static CycScalar generator(int order);  // zeta itself

  int order() const { return order_; }
  const std::vector<Ratio>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  CycScalar operator-() const;
  CycScalar& operator+=(const CycScalar& o);
  CycScalar& operator-=(const CycScalar& o);
  CycScalar& operator*=(const CycScalar& o);
  friend CycScalar operator+(CycScalar x, const CycScalar& y) { return x += y; }
  friend CycScalar operator-(CycScalar x, const CycScalar& y) { return x -= y; }
  friend CycScalar operator*(CycScalar x, const CycScalar& y) { return x *= y; }
  bool operator==(const CycScalar& o) const;
  CycScalar inverse() const;
  CycScalar pow(long k) const;

  std::string to_string(const ParamSpace& space) const;

 private:
  void reduce();
  int order_ = 1;
  std::vector<Ratio> coeffs_;  // ascending powers of a, length phi(order)
};

/// Integer coefficients of the K-th cyclotomic polynomial, ascending.
std::vector<long> cyclotomic_polynomial(int k);
int euler_phi(int k);

// ---------------------------------------------------------------------------
// q-combinatorics

/// [n]_b = 1 + b + ... + b^{n-1} for a base Scalar b.
Scalar q_int(const Scalar& base, int n);
Scalar q_factorial(const Scalar& base, int n);

enum class QFlavor { A, InverseA };
Scalar q_int(const ParamSpace& space, int n, QFlavor flavor = QFlavor::A);
Scalar q_factorial(const ParamSpace& space, int n, QFlavor flavor = QFlavor::A);
/// [1/[n!]_f for n = 0..max_degree].
std::vector<Ratio> qexp_coeffs(const ParamSpace& space, int max_degree, QFlavor flavor = QFlavor::A);

/// k = m*K + n term of the generalised exponential at a primitive K-th root of unity.
struct GexpTerm {
  int k;
  int m;
  int n;
  CycScalar coeff;  // 1 / (m! [n!]_zeta)
};
std::vector<GexpTerm> gexp_scheme(const ParamSpace& space, int root_order, int max_degree);

struct RecursionReport {
  bool ok = true;
  std::vector<int> failing_k;
};
/// Checks F_k F_1 = [k+1] F_{k+1} with F_k = p^k/[k!]_a (symbolic a).
RecursionReport verify_qexp_recursion(const ParamSpace& space, int k_max);
/// Same recursion with a = 1: F_k = p^k / k!.
RecursionReport verify_classical_recursion(int k_max);
/// Recursion in Q(zeta)[p, p']/(p^K) with the generalised F_k.
RecursionReport verify_gexp_recursion(const ParamSpace& space, int root_order, int k_max);

// ---------------------------------------------------------------------------
// Substitution

struct ParamValue {
  enum class Kind { Symbolic, Value, Root };
  Kind kind = Kind::Symbolic;
  Rational value;
  int root_order = 0;

  static ParamValue symbolic() { return {}; }
  static ParamValue of(const Rational& v) { return {Kind::Value, v, 0}; }
  static ParamValue root(int k) { return {Kind::Root, 0, k}; }
};

class Assignment {
 public:
  explicit Assignment(const ParamSpace& space) : values_(space.num_params()) {}
  ParamValue& operator[](std::size_t idx) { return values_.at(idx); }
  const ParamValue& operator[](std::size_t idx) const { return values_.at(idx); }
  std::size_t size() const { return values_.size(); }
  bool all_symbolic() const;
  /// Parses "sym", "3/2", "root:3".
  static ParamValue parse_value(std::string_view text);

 private:
  std::vector<ParamValue> values_;
};

/// Replaces every parameter assigned a rational value; symbolic and root entries are kept.
Scalar substitute_values(const Scalar& x, const ParamSpace& space, const Assignment& assignment);
Ratio substitute_values(const Ratio& x, const ParamSpace& space, const Assignment& assignment);
/// Replaces parameter `idx` by a monomial (exponents multiply through).
Scalar substitute_monomial(const Scalar& x, const ParamSpace& space, std::size_t idx, const Scalar& value);
Ratio substitute_monomial(const Ratio& x, const ParamSpace& space, std::size_t idx, const Scalar& value);
/// Sends a to a primitive K-th root of unity. Throws PoleError on a vanishing denominator.
CycScalar at_root_of_unity(const Scalar& x, const ParamSpace& space, int order);
CycScalar at_root_of_unity(const Ratio& x, const ParamSpace& space, int order);

using Evaluated = std::variant<Ratio, CycScalar>;
/// Full substitution: rational values first, then the root of unity if a is assigned one.
Evaluated substitute(const Ratio& x, const ParamSpace& space, const Assignment& assignment);

}  // namespace qtwist
