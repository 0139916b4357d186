#pragma once

// The twisted gl(N) R-matrix family, its matrix identities, the pseudogroup
// quadratic relations, the two defining representations, the sl(N)
// reduction and the first-order gl(3) deformation.

#include <optional>
#include <string>
#include <vector>

#include "qtwist/tensor.hpp"

namespace qtwist {

/// Parameter values fed to the R-matrix formula. q[i][j] is q^{ij} (0-based),
/// with q[i][i] = 1 and q[j][i] = 1/q[i][j].
struct QParams {
  std::vector<std::vector<Scalar>> q;
  Scalar a;

  static QParams symbolic(const ParamSpace& space);
  /// Every parameter replaced by its inverse.
  QParams inverted() const;
  int n() const { return static_cast<int>(q.size()); }
};

/// R for the given parameters. `offdiag` overrides the (1-a) coefficient
/// (used to build perturbed inputs).
Mat build_R(const QParams& p, const std::optional<Scalar>& offdiag = std::nullopt);
Mat build_R(const ParamSpace& space);
/// P_{ij}^{kl} = R_{ji}^{kl}.
Mat build_P(const Mat& r);

struct RFamily {
  QParams params;
  Mat R;
  Mat P;
  Mat Rinv;
  Mat Pinv;
};
RFamily build_family(const ParamSpace& space);
RFamily build_family(const QParams& params);

Mat check_hecke(const Mat& p, const Scalar& a);
Mat check_braid(const Mat& p);
Mat check_ybe(const Mat& r);
Mat check_inverse(const Mat& r, const Mat& rinv);

/// Conjugation operator M -> P M P^{-1} on End(V⊗V), acting on row-major vec(M).
Mat build_calP(const Mat& p, const Mat& pinv);
Mat check_cubic(const Mat& calp, const Scalar& a);

struct SpanComparison {
  std::size_t rank_commutator = 0;
  std::size_t rank_other = 0;
  std::size_t rank_union = 0;
  bool coincide() const { return rank_commutator == rank_other && rank_other == rank_union; }
};
/// Compares, as spans of linear forms in the ordered words z_a^b z_c^d, the
/// components of [P, Z⊗Z] with the components of (Q - 1) vec(Z⊗Z) for an
/// operator Q on the N^4-dimensional space.
SpanComparison compare_with_commutator(const Mat& p, const Mat& q_op);
/// Left multiplication M -> P M, the alternative reading of the operator.
Mat build_left_mult(const Mat& p);

// ---------------------------------------------------------------------------
// Pseudogroup relations

struct ZIdx {
  int row;
  int col;
  auto operator<=>(const ZIdx&) const = default;
};

struct QuadTerm {
  Ratio coeff;
  ZIdx first;
  ZIdx second;
};

struct QuadRel {
  std::string family;
  std::vector<QuadTerm> terms;
};

/// The four families of quadratic relations among the z_i^j, written out over
/// all index values.
std::vector<QuadRel> pseudogroup_relations(const QParams& p);
/// Components of [P, Z⊗Z] = 0 as quadratic relations.
std::vector<QuadRel> commutator_relations(const Mat& p);
/// Linear forms over ordered words; word index = (row-1)N + col-1 pairs.
std::vector<RVec> relation_forms(const std::vector<QuadRel>& rels, int n);

/// rep[i-1][k-1] is the image of z_i^k.
using ZRep = std::vector<std::vector<Mat>>;
ZRep rep_pi(const RFamily& f);
ZRep rep_pi_prime(const RFamily& f);
/// One residual matrix per relation.
std::vector<Mat> verify_rep(const std::vector<QuadRel>& rels, const ZRep& rep);

// ---------------------------------------------------------------------------
// sl(N) reduction

struct SlReduction {
  std::vector<Scalar> kappa;
  std::vector<std::vector<Scalar>> q_hat;
  /// R_sl with diagonal entries q_hat^{ij} a^{(i<j)}.
  Mat R_sl;
};
/// Requires exponents on a lattice with denominator divisible by n.
SlReduction sl_reduce(const ParamSpace& space, const QParams& p);
/// prod_i q_hat^{ij} a^j - a^{(N+1)/2}, for each j.
std::vector<Scalar> sl_constraint_residual(const ParamSpace& space, const SlReduction& sl, const QParams& p);
/// A parametrised solution of prod_i q^{ij} a^j = a^{(N+1)/2}: q^{ij} = a^{(i-j)/N} times
/// cycle factors, the symbols q_{ij} with 2 <= i < j serving as free parameters.
QParams sl_constrained_params(const ParamSpace& space);
/// Conjugates leg 1 by diag(kappa), removing the kappa_i/kappa_j factors.
Mat sl_rescale(const SlReduction& sl);

// ---------------------------------------------------------------------------
// First-order deformations

struct EpsMat {
  Mat zeroth;
  Mat first;
};
EpsMat operator*(const EpsMat& x, const EpsMat& y);
EpsMat eps_embed(const EpsMat& r, int p, int q, int t);

/// The deformation parameters for gl(3). constrained: q^{12}=q^{23}=q, q^{13}=q^2.
/// Otherwise q^{12}=q^{23}=q with q^{13} left free.
QParams esoteric_params(const ParamSpace& space3, bool constrained);
/// delta R = q^{13} M_1^2⊗M_3^2 - M_3^2⊗M_1^2 (coefficient of epsilon).
Mat esoteric_delta(const QParams& p);
/// Yang-Baxter residual of R + eps*deltaR, both orders in eps.
EpsMat esoteric_gl3(const ParamSpace& space3, bool constrained);
EpsMat eps_ybe_residual(const Mat& r, const Mat& delta);

}  // namespace qtwist
