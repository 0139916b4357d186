#pragma once

// Truncated dual of the factored pseudogroup algebra.
//
// A basis element of the factored algebra is X^a z^m Y^b (X-monomial in
// normal order, lattice exponent m, Y-monomial). A functional assigns to each
// (a, b) a function of m; the functions used here are finite sums of
// polynomial-times-character terms, which covers the lattice derivatives H_k
// and every parameter-to-the-H group-like. Truncation is by height: X_i^j has
// weight i-j and Y_i^j weight j-i. Normal form and coproduct both preserve
// weight, while word length is not preserved (composite generators appear).

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "qtwist/ncalg.hpp"

namespace qtwist {

using Exps = std::vector<int>;

struct BasisIdx {
  Exps x;  // exponent per X letter, in alphabet order
  Exps m;  // lattice exponent
  Exps y;  // exponent per Y letter, in alphabet order
  auto operator<=>(const BasisIdx&) const = default;
  bool operator==(const BasisIdx&) const = default;
};

struct SectorKey {
  Exps x;
  Exps y;
  auto operator<=>(const SectorKey&) const = default;
  bool operator==(const SectorKey&) const = default;
};

/// Polynomial in m_1..m_N, keyed by exponent vectors.
using LatticePoly = std::map<Exps, Ratio>;

class LatticeFn {
 public:
  struct Term {
    std::vector<Scalar> character;  // monomials c_k, value prod c_k^{m_k}
    LatticePoly poly;
  };

  LatticeFn() = default;
  static LatticeFn constant(int n, const Ratio& c);
  static LatticeFn character(const std::vector<Scalar>& c, const Ratio& coeff = Ratio(1));
  /// The coordinate function m_k (1-based k).
  static LatticeFn coordinate(int n, int k);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Ratio operator()(const Exps& m) const;
  /// m -> f(m + n).
  LatticeFn shifted(const Exps& n) const;

  LatticeFn& operator+=(const LatticeFn& o);
  LatticeFn& operator-=(const LatticeFn& o);
  friend LatticeFn operator+(LatticeFn x, const LatticeFn& y) { return x += y; }
  friend LatticeFn operator-(LatticeFn x, const LatticeFn& y) { return x -= y; }
  friend LatticeFn operator*(const LatticeFn& x, const LatticeFn& y);
  friend LatticeFn operator*(const Ratio& c, const LatticeFn& f);
  bool operator==(const LatticeFn& o) const { return (*this - o).is_zero(); }

 private:
  void add_term(const std::vector<Scalar>& c, const LatticePoly& p);
  std::vector<Term> terms_;
};

class Functional {
 public:
  /// Product evaluated on demand through the full coproduct.
  struct Deferred {
    Ratio coeff;
    std::shared_ptr<const Functional> left;
    std::shared_ptr<const Functional> right;
  };

  std::map<SectorKey, LatticeFn> sym;
  std::vector<Deferred> deferred;

  bool symbolic() const { return deferred.empty(); }
  bool is_zero() const { return sym.empty() && deferred.empty(); }
  /// Supported on Y-free keys (factors through A_-).
  bool minus_type() const;
  bool plus_type() const;

  Functional& operator+=(const Functional& o);
  Functional& operator-=(const Functional& o);
  friend Functional operator+(Functional x, const Functional& y) { return x += y; }
  friend Functional operator-(Functional x, const Functional& y) { return x -= y; }
  friend Functional operator*(const Ratio& c, const Functional& f);

 private:
  void add(const SectorKey& k, const LatticeFn& f);
};

class Duality {
 public:
  Duality(const ParamSpace& space, const QParams& params, int degree);

  int n() const { return params_.n(); }
  int degree() const { return degree_; }
  const ParamSpace& space() const { return space_; }
  const QParams& params() const { return params_; }
  const Presentation& full() const { return full_; }
  const Presentation& minus() const { return minus_; }
  const Presentation& plus() const { return plus_; }

  // --- basis -------------------------------------------------------------
  std::size_t num_x() const { return xsym_.size(); }
  std::size_t num_y() const { return ysym_.size(); }
  int weight(const SectorKey& k) const;
  int weight(const BasisIdx& b) const { return weight(SectorKey{b.x, b.y}); }
  /// Root e_i - e_j summed over letters.
  Exps root(const SectorKey& k) const;
  Exps root(const BasisIdx& b) const { return root(SectorKey{b.x, b.y}); }
  std::vector<SectorKey> keys(int max_weight, bool with_x, bool with_y) const;
  std::vector<BasisIdx> basis(int max_weight, const std::vector<Exps>& lattice, bool with_x = true,
                              bool with_y = true) const;
  static std::vector<Exps> lattice_box(int n, int radius);
  /// Lattice points 0 and +-e_k.
  static std::vector<Exps> lattice_star(int n);
  Word word_of(const BasisIdx& b) const;
  /// Reads a normal word of any factor or tensor factor (by symbol, ignoring copy).
  BasisIdx basis_of(const Alphabet& alpha, const Word& w) const;
  std::string name(const BasisIdx& b) const;

  // --- generators --------------------------------------------------------
  Functional P(int i, int j) const;  // dual of X_i^j, i > j
  Functional Q(int i, int j) const;  // dual of Y_i^j, i < j
  Functional H(int k) const;
  Functional K(const std::vector<Scalar>& c) const;
  Functional counit() const;
  /// Simple generators P_i = P_{i+1}^i and Q_i = Q_i^{i+1}.
  Functional P(int i) const { return P(i + 1, i); }
  Functional Q(int i) const { return Q(i, i + 1); }

  // --- structure ---------------------------------------------------------
  Ratio pair(const Functional& f, const BasisIdx& b) const;
  /// Linear extension to a polynomial in normal form in the full algebra.
  Ratio pair(const Functional& f, const NCPoly& p) const;
  Functional mul(const Functional& f, const Functional& g) const;
  Functional pow(const Functional& f, int k) const;
  Functional commutator(const Functional& f, const Functional& g, const Ratio& c = Ratio(1)) const;
  /// (Delta F)(l1, l2) = F(nf(l1 l2)).
  Ratio comul(const Functional& f, const BasisIdx& l1, const BasisIdx& l2) const;
  /// rho(F)_i^j = F(z_i^j).
  Mat rho(const Functional& f) const;
  int max_weight(const Functional& f) const;
  /// Roots of the keys a functional can be nonzero on.
  std::set<Exps> roots(const Functional& f) const;

  /// Weight-truncated image of every full-algebra letter in factor0 ⊗ factor1,
  /// from the Gauss decomposition of sum_k z_i^k ⊗ z_k^j.
  struct CoproductTable {
    Presentation target;
    std::vector<NCPoly> images;
    std::vector<std::size_t> offset;  // first letter of each factor
  };
  const CoproductTable& gauss_table(bool plus_minus) const;
  /// Delta of a basis element with per-factor weight caps.
  NCPoly coproduct(const BasisIdx& b, bool plus_minus, int cap0, int cap1) const;

 private:
  Ratio pair_deferred(const Functional::Deferred& d, const BasisIdx& b) const;
  Functional mul_borel(const Functional& f, const Functional& g, bool minus_side) const;
  NCPoly borel_coproduct(const Word& w, bool minus_side, int cap0, int cap1) const;
  NCPoly word_coproduct(const Word& w, bool plus_minus, int cap0, int cap1) const;
  int letter_weight(const Symbol& s) const;
  NCPoly truncate(const NCPoly& p, const Alphabet& alpha, int cap0, int cap1) const;
  CoproductTable build_gauss(bool plus_minus) const;

  ParamSpace space_;
  QParams params_;
  int degree_;
  Presentation full_, minus_, plus_;
  Presentation minus2_, plus2_;
  std::vector<NCPoly> minus_table_, plus_table_;
  std::vector<Symbol> xsym_, ysym_;
  std::map<std::pair<int, int>, std::size_t> xpos_, ypos_;

  mutable std::mutex mu_;
  mutable std::unique_ptr<CoproductTable> gauss_pm_, gauss_ff_;
  // coproducts of words, keyed by (word, side or route, cap0, cap1)
  mutable std::map<std::tuple<Word, bool, int, int>, NCPoly> borel_cache_;
  mutable std::map<std::tuple<Word, bool, int, int>, NCPoly> full_cache_;
};

// ---------------------------------------------------------------------------
// Checks

struct Residual {
  bool zero = true;
  std::size_t checked = 0;
  std::string witness;  // first basis element with a nonzero value
};

/// Zero test on basis elements of weight <= max_weight with lattice points
/// drawn from `lattice`; exact and lattice-independent when f is symbolic.
Residual annihilates(const Duality& d, const Functional& f, int max_weight, const std::vector<Exps>& lattice);
/// Symbolic zero test; requires f.symbolic().
bool symbolically_zero(const Functional& f);

/// [H_k, P_i^j] - (delta_ki - delta_kj) P_i^j, and the mirror for Q_i^j.
Functional cartan_action_residual(const Duality& d, int k, int i, int j, bool plus_side);

/// Characters of the simple-root relations, with entries indexed 1..N.
std::vector<Scalar> char_C(const Duality& d, int i);
/// A_i = C_i (q^{i+1,i})^{H_i+H_{i+1}} a^{-H_i}; B_i has a^{-H_{i+1}} instead.
std::vector<Scalar> char_A(const Duality& d, int i);
std::vector<Scalar> char_B(const Duality& d, int i);

/// Right side of the simple [P_i, Q_i] relation with the given scalar prefactor:
/// lambda (q^{i,i+1})^{1-H_i-H_{i+1}} (a^{-H_{i+1}} - a^{-H_i}) C_i.
Functional pq_rhs(const Duality& d, int i, const Ratio& lambda);
Ratio pq_literal_scalar(const Duality& d);  // a / (1 - a)

struct PQReport {
  Residual literal;                  // with a/(1-a)
  std::optional<Ratio> fitted;       // scalar making the residual vanish, if any
  Residual fitted_residual;
  Residual cross;                    // [P_i, Q_j] for i != j, all pairs
};
PQReport verify_pq(const Duality& d, int radius);

struct SerreSolution {
  std::string relation;
  Ratio k;            // q-commutator constant used in the inner bracket
  Ratio outer;        // solved r_i or s_i
  bool unique;        // nullspace of the three cubic words is one-dimensional
  bool consistent;    // the template with (k, outer) lies in the nullspace
  std::vector<Ratio> null_vector;
};
/// Solves the outer constant of each Serre relation for the simple pair
/// (i, i+1) given the inner constant k; plus_side selects the Q relations.
std::vector<SerreSolution> solve_serre(const Duality& d, int i, const Ratio& k, bool plus_side);
/// Constant c with [F, G]_c = 0 in the symbolic sector, if the two products are proportional.
std::optional<Ratio> quommute(const Duality& d, const Functional& f, const Functional& g);
Ratio k_ij(const QParams& p, int i, int j);
Ratio k_i(const QParams& p, int i);

/// Coproduct of a generator as a sum of tensor pairs.
using TensorFn = std::vector<std::pair<Functional, Functional>>;
TensorFn coproduct_H(const Duality& d, int k);
TensorFn coproduct_P(const Duality& d, int i);
TensorFn coproduct_Q(const Duality& d, int i);
TensorFn tensor_mul(const Duality& d, const TensorFn& x, const TensorFn& y);
/// Max over basis pairs (weight sum <= max_weight, lattice from `lattice`) of
/// F(nf(l1 l2)) - sum f1(l1) f2(l2).
Residual verify_comul(const Duality& d, const Functional& f, const TensorFn& expected, int max_weight,
                      const std::vector<Exps>& lattice);

/// rho of the image of each factored generator under the two homomorphisms
/// to the dual, against the Gauss factors of the explicit representations.
struct PhiReport {
  bool phi_ok = true;
  bool phi_prime_ok = true;
  std::vector<std::string> mismatches;
  // rho composed with each map, tested on every rewriting rule of the factored algebra
  std::vector<std::string> phi_rule_failures;
  std::vector<std::string> phi_prime_rule_failures;
};
Functional phi(const Duality& d, const Symbol& s);
/// With literal = false the Y coefficient is (1-1/a) q^{ji} instead of (a-1) q^{ji}.
Functional phi_prime(const Duality& d, const Symbol& s, bool literal = true);
PhiReport verify_phi(const Duality& d, bool literal_prime = true);
/// Rules lhs -> rhs of the factored algebra violated by the letter images.
std::vector<std::string> rule_failures(const Duality& d, const std::vector<Mat>& images);

struct UniversalR {
  Mat R;
  bool matches;             // equals build_R
  bool transposed_matches;  // flip R flip equals build_R
};
UniversalR universal_R_fundamental(const Duality& d);
/// Cartan part with exponents (delta_ik - 1/N)(delta_jl - 1/N), for the sl projection.
Mat universal_R_sl(const Duality& d);

/// N x N matrix of factored-algebra elements obtained by substituting the
/// fundamental representation into the ordered exponential product.
std::vector<std::vector<NCPoly>> evaluate_UT_fundamental(const Duality& d);
/// Delta of each output entry minus sum_k out_ik ⊗ out_kj, in the full⊗full table.
bool ut_coproduct_check(const Duality& d, const std::vector<std::vector<NCPoly>>& ut);

struct RootExtension {
  int order = 0;
  bool regular = true;          // P^K/[K]_a has no pole at zeta_K on the checked basis
  bool power_vanishes = true;   // P^K pairs to zero at zeta_K
  bool pp_commute = true;       // [P, P'] = 0
  bool cartan = true;           // [H_k, P'] = K (delta_ki - delta_kj) P'
  bool pq_literal = true;       // [P, Q'] with the stated prefactor (a-1)
  bool pq_shape = true;         // [P, Q'] with a fitted prefactor, exact at generic a
  std::string pq_prefactor;     // fitted prefactor at zeta_K
  std::vector<std::string> notes;
  bool ok() const { return regular && power_vanishes && pp_commute && cartan && pq_shape; }
};
/// gl(2) only. Checks on basis elements of weight <= degree over a lattice box.
/// Q' is Q^K / [K]_{1/a}, the mirror of the P prescription.
RootExtension root_extension(const Duality& d, int order, int radius);

}  // namespace qtwist
