#pragma once

// Noncommutative polynomials with a quadratic rewriting system, and the
// presentations built on top of it: quantum plane, exterior (theta) algebra,
// differential calculus, pseudogroup, and the factored X / lattice / Y form.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qtwist/rmatrix.hpp"

namespace qtwist {

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

enum class Kind { XCoord, Theta, Z, ZDiag, ZDiagInv, X, Y };

struct Symbol {
  Kind kind;
  int i = 0;
  int j = 0;
  int copy = 0;  // tensor factor in a tensor power of a presentation
};

using Letter = char16_t;
using Word = std::u16string;

/// Generators in normal-order position: the letter value is the position.
class Alphabet {
 public:
  Letter add(const Symbol& s);
  const Symbol& at(Letter l) const { return symbols_.at(l); }
  std::optional<Letter> find(Kind kind, int i, int j = 0, int copy = 0) const;
  Letter get(Kind kind, int i, int j = 0, int copy = 0) const;
  std::size_t size() const { return symbols_.size(); }
  std::string name(Letter l) const;
  std::string word_name(const Word& w) const;

 private:
  std::vector<Symbol> symbols_;
};

/// Total degree first, then lexicographic by letter position.
struct DegLex {
  bool operator()(const Word& x, const Word& y) const {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  }
};

class NCPoly {
 public:
  using Terms = std::map<Word, Ratio, DegLex>;

  NCPoly() = default;
  explicit NCPoly(const Ratio& c) { add(Word{}, c); }
  static NCPoly word(const Word& w, const Ratio& c = Ratio(1));
  static NCPoly letter(Letter l, const Ratio& c = Ratio(1)) { return word(Word(1, l), c); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  void add(const Word& w, const Ratio& c);
  Ratio coeff(const Word& w) const;
  /// Largest term in the monomial order.
  const Word& leading() const { return terms_.rbegin()->first; }

  NCPoly operator-() const;
  NCPoly& operator+=(const NCPoly& o);
  NCPoly& operator-=(const NCPoly& o);
  friend NCPoly operator+(NCPoly x, const NCPoly& y) { return x += y; }
  friend NCPoly operator-(NCPoly x, const NCPoly& y) { return x -= y; }
  friend NCPoly operator*(const NCPoly& x, const NCPoly& y);
  friend NCPoly operator*(const Ratio& c, const NCPoly& p);
  bool operator==(const NCPoly& o) const;

  std::string to_string(const Alphabet& alpha, const ParamSpace& space) const;

 private:
  Terms terms_;
};

/// [x, y]_c = xy - c yx.
NCPoly qcommutator(const NCPoly& x, const NCPoly& y, const Ratio& c);

/// Rules with length-two left sides, stored as a letter-pair table.
class RewriteSystem {
 public:
  explicit RewriteSystem(std::size_t alphabet_size = 0, std::size_t budget = 1000000);
  RewriteSystem(const RewriteSystem& o);
  RewriteSystem& operator=(const RewriteSystem& o);

  std::size_t alphabet_size() const { return n_; }
  void set_rule(Letter x, Letter y, NCPoly rhs);
  const NCPoly* rule(Letter x, Letter y) const;
  std::vector<std::pair<Word, NCPoly>> rules() const;
  std::size_t budget() const { return budget_; }

  NCPoly normal_form(const NCPoly& p) const;
  NCPoly normal_form_word(const Word& w) const;
  bool is_normal(const Word& w) const;

 private:
  NCPoly mul_normal(const Word& u, Letter x, std::size_t& used) const;
  NCPoly mul_normal_poly(const NCPoly& p, Letter x, std::size_t& used) const;

  std::size_t n_;
  std::size_t budget_;
  std::vector<std::optional<NCPoly>> table_;
  mutable std::map<std::pair<Word, Letter>, NCPoly> cache_;
  mutable std::unique_ptr<std::mutex> mu_;
};

/// Orients and interreduces a list of relations (Gaussian elimination by
/// leading word) and installs the resulting rules. Throws if a leading word is
/// not of length two or is already a left side.
void orient_relations(RewriteSystem& sys, const std::vector<NCPoly>& relations);

struct Presentation {
  std::string name;
  Alphabet alphabet;
  RewriteSystem system;
  std::vector<NCPoly> relations;  // defining relations as given
};

/// Overlap words xyz with xy, yz both left sides, whose two reductions differ.
std::vector<Word> local_confluence(const RewriteSystem& sys, int degree);
/// Number of normal words of the given length over `letters` (all letters if empty).
std::size_t graded_dim(const RewriteSystem& sys, int degree, const std::vector<Letter>& letters = {});
std::vector<std::string> dump_rules(const Presentation& p, const ParamSpace& space);

// ---------------------------------------------------------------------------
// Presets

Presentation preset_quantum_plane(const Mat& p);
Presentation preset_theta(const Mat& p, const Scalar& a);
Presentation preset_calculus(const Mat& p, const Scalar& a);
/// z_i^j only; the quadratic relation families, without diagonal inverses.
Presentation preset_pseudogroup(const QParams& params);

/// Commutation coefficient of the lattice generator z_k past X_i^j (j < i).
Ratio coeff_C(const QParams& p, int k, int i, int j);
/// Same for Y_i^j (i < j).
Ratio coeff_Cprime(const QParams& p, int k, int i, int j);

/// Relations among the X_i^j (i>j) obtained by restricting the pseudogroup
/// relations to lower-triangular z and removing the diagonal factors.
std::vector<NCPoly> derive_minus_relations(const QParams& params, const Alphabet& alpha);
std::vector<NCPoly> derive_plus_relations(const QParams& params, const Alphabet& alpha);

/// Alphabet: X_i^j ordered by (j, i), then z_1, z_1^-1, ..., z_N, z_N^-1,
/// then Y_m^n ordered by (-n, -m). Dropping the Y sector gives A_-, dropping
/// the X sector gives A_+.
Presentation preset_factored(const QParams& params, bool include_y = true, bool include_x = true);
/// Image of z_i^j under the factorization sum_k X_i^k z_k Y_k^j; terms whose
/// letters are absent from the presentation (a Borel quotient) are dropped.
NCPoly factorization_image(const Presentation& factored, int i, int j);
/// Residual of every pseudogroup relation after substitution, normal-formed.
std::vector<NCPoly> substitute_factorization(const QParams& params, const Presentation& factored);

// ---------------------------------------------------------------------------
// Tensor powers and coproducts

/// Commuting factors; letters of factor c carry copy = c and follow those of factor c-1.
Presentation tensor_product(const std::vector<const Presentation*>& factors);
/// k commuting copies of a presentation; letter of copy c is c*L + l.
Presentation tensor_power(const Presentation& p, int copies);
Letter copy_letter(const Presentation& base, Letter l, int copy);
/// Extends letter images multiplicatively and normal-forms in `target`.
NCPoly apply_hom(const NCPoly& p, const std::vector<NCPoly>& images, const RewriteSystem& target);

/// Generator coproduct tables into tensor_power(p, 2).
std::vector<NCPoly> coproduct_pseudogroup(const Presentation& p, const Presentation& doubled);
std::vector<NCPoly> coproduct_factored_minus(const Presentation& p, const Presentation& doubled);
std::vector<NCPoly> coproduct_factored_plus(const Presentation& p, const Presentation& doubled);
/// Normal forms of the images of all defining relations (all zero for a homomorphism).
std::vector<NCPoly> coproduct_relation_residuals(const Presentation& p, const Presentation& doubled,
                                                 const std::vector<NCPoly>& table);

struct BorelSwap {
  NCPoly ba;        // nf(B A)
  NCPoly ab;        // nf(A B)
  bool literal;     // BA == a BA, i.e. BA == 0 for a != 1
  bool commuted;    // BA == a AB
};
/// A = X_i^j ⊗ 1, B = (x_i/x_j) ⊗ X_i^j in the doubled A_-.
BorelSwap borel_swap(const QParams& params, int i, int j);
/// Coefficient of (X_i^j)^{n-1}(x_i/x_j) ⊗ X_i^j in Delta(X_i^j)^n.
Ratio coproduct_power_coefficient(const QParams& params, int i, int j, int n);

// ---------------------------------------------------------------------------
// Braid relation and the calculus

struct BraidEquivalence {
  bool braid_holds;
  bool hecke_holds;
  std::vector<Word> overlap_failures;
  bool consistent() const { return overlap_failures.empty(); }
};
BraidEquivalence verify_braid_equivalence(const Mat& p, const Scalar& a);
/// A Hecke-preserving perturbation of P on the (1,2) two-plane that breaks the braid relation.
Mat perturb_braid(const Mat& p, const Scalar& a);

/// Normal forms of [X_s, c]_r and [X_t, c]_s in the factored algebra, where
/// c = [X_t, X_s]_k and X_s = X_i^{i-1}, X_t = X_{i+1}^i are adjacent simple
/// generators. Zero when the supplied constants are right. serre_plus is the
/// mirror image with Y_{i-1}^i, Y_i^{i+1} and c = [Y_s, Y_t]_k.
struct SerreResidual {
  NCPoly composite;  // nf([X_t, X_s]_k), expected (1-1/a) X_{i+1}^{i-1}
  NCPoly first;
  NCPoly second;
};
SerreResidual serre_minus(const Presentation& factored, int i, const Ratio& k, const Ratio& r, const Ratio& s);
SerreResidual serre_plus(const Presentation& factored, int i, const Ratio& k, const Ratio& r, const Ratio& s);
/// Reads off c with nf(x y) = c * y x when such a scalar exists.
std::optional<Ratio> quommutation_constant(const RewriteSystem& sys, const NCPoly& x, const NCPoly& y);

}  // namespace qtwist
