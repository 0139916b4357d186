#include "qtwist/rmatrix.hpp"

namespace qtwist {

QParams QParams::symbolic(const ParamSpace& space) {
  QParams p;
  const int n = space.n();
  p.q.assign(static_cast<std::size_t>(n), std::vector<Scalar>(static_cast<std::size_t>(n)));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) p.q[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = space.q(i, j);
  p.a = space.a();
  return p;
}

QParams QParams::inverted() const {
  QParams r = *this;
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r.q[i][j] = q[j][i];
  r.a = a.pow(-1);
  return r;
}

Mat build_R(const QParams& p, const std::optional<Scalar>& offdiag) {
  const int n = p.n();
  Mat r(n, 2);
  Scalar off = offdiag ? *offdiag : Scalar(1) - p.a;
  auto q = [&](int i, int j) -> const Scalar& {
    return p.q[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
  };
  for (int i = 1; i <= n; ++i) r.at({i, i}, {i, i}) = Ratio(1);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      r.at({j, i}, {j, i}) = Ratio(q(j, i));
      r.at({i, j}, {i, j}) = Ratio(p.a * q(i, j));
      r.at({j, i}, {i, j}) = Ratio(off);
    }
  return r;
}

Mat build_R(const ParamSpace& space) { return build_R(QParams::symbolic(space)); }

Mat build_P(const Mat& r) { return flip(r.n()) * r; }

RFamily build_family(const QParams& params) {
  RFamily f;
  f.params = params;
  f.R = build_R(params);
  f.P = build_P(f.R);
  f.Rinv = build_R(params.inverted());
  f.Pinv = f.Rinv * flip(params.n());
  return f;
}

RFamily build_family(const ParamSpace& space) { return build_family(QParams::symbolic(space)); }

Mat check_hecke(const Mat& p, const Scalar& a) { return mat_poly(p, {Ratio(1), -Ratio(a)}); }

Mat check_braid(const Mat& p) {
  Mat p12 = embed(p, 1, 2, 3), p23 = embed(p, 2, 3, 3);
  return p12 * p23 * p12 - p23 * p12 * p23;
}

Mat check_ybe(const Mat& r) {
  Mat r12 = embed(r, 1, 2, 3), r13 = embed(r, 1, 3, 3), r23 = embed(r, 2, 3, 3);
  return r12 * r13 * r23 - r23 * r13 * r12;
}

Mat check_inverse(const Mat& r, const Mat& rinv) { return r * rinv - Mat::identity(r.n(), r.legs()); }

Mat build_calP(const Mat& p, const Mat& pinv) { return kron(p, pinv.transpose()); }

Mat check_cubic(const Mat& calp, const Scalar& a) {
  return mat_poly(calp, {Ratio(1), -Ratio(a), -Ratio(a.pow(-1))});
}

Mat build_left_mult(const Mat& p) { return kron(p, Mat::identity(p.n(), 2)); }

namespace {

std::size_t zflat(int n, int row, int col) {
  return static_cast<std::size_t>((row - 1) * n + (col - 1));
}

// Word index of z_{m}^{k} z_{n}^{l} sitting at entry ((m,n),(k,l)) of Z⊗Z.
std::size_t entry_word(int n, int m, int nn, int k, int l) {
  return zflat(n, m, k) * static_cast<std::size_t>(n * n) + zflat(n, nn, l);
}

std::vector<RVec> commutator_forms(const Mat& p) {
  const int n = p.n();
  const std::size_t words = static_cast<std::size_t>(n * n * n * n);
  std::vector<RVec> forms;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l) {
          RVec f(words);
          for (int m = 1; m <= n; ++m)
            for (int nn = 1; nn <= n; ++nn) {
              const Ratio& left = p.at({i, j}, {m, nn});
              if (!left.is_zero()) f[entry_word(n, m, nn, k, l)] += left;
              const Ratio& right = p.at({m, nn}, {k, l});
              if (!right.is_zero()) f[entry_word(n, i, j, m, nn)] -= right;
            }
          forms.push_back(std::move(f));
        }
  return forms;
}

}  // namespace

SpanComparison compare_with_commutator(const Mat& p, const Mat& q_op) {
  const int n = p.n();
  const std::size_t words = static_cast<std::size_t>(n * n * n * n);
  std::vector<RVec> comm = commutator_forms(p);
  std::vector<RVec> other;
  Mat shifted = q_op - Mat::identity(n, 4);
  // vec index s = flat(m,n) * N^2 + flat(k,l) holds the word z_m^k z_n^l
  std::vector<std::size_t> word_of(words);
  for (std::size_t s = 0; s < words; ++s) {
    auto idx = q_op.unflatten(s);
    word_of[s] = entry_word(n, idx[0], idx[1], idx[2], idx[3]);
  }
  for (std::size_t s = 0; s < words; ++s) {
    RVec f(words);
    for (std::size_t t = 0; t < words; ++t)
      if (!shifted(s, t).is_zero()) f[word_of[t]] = shifted(s, t);
    other.push_back(std::move(f));
  }
  SpanComparison c;
  c.rank_commutator = rank(comm);
  c.rank_other = rank(other);
  std::vector<RVec> both = comm;
  both.insert(both.end(), other.begin(), other.end());
  c.rank_union = rank(std::move(both));
  return c;
}

std::vector<QuadRel> pseudogroup_relations(const QParams& p) {
  const int n = p.n();
  auto q = [&](int i, int j) -> Ratio {
    return Ratio(p.q[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]);
  };
  const Ratio a(p.a);
  std::vector<QuadRel> rels;
  for (int i = 1; i <= n; ++i)
    for (int c = 1; c <= n; ++c)
      for (int d = c + 1; d <= n; ++d)
        rels.push_back({"same-row", {{Ratio(1), {i, c}, {i, d}}, {-q(c, d), {i, d}, {i, c}}}});
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int c = 1; c <= n; ++c)
        rels.push_back({"same-column", {{Ratio(1), {i, c}, {j, c}}, {-(a * q(i, j)).inverse(), {j, c}, {i, c}}}});
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j < i; ++j)
      for (int c = 1; c <= n; ++c)
        for (int d = 1; d <= n; ++d) {
          if (c < d)
            rels.push_back({"cross-commuting", {{Ratio(1), {i, c}, {j, d}}, {-(a * q(c, d) / q(i, j)), {j, d}, {i, c}}}});
          else if (c > d)
            rels.push_back({"cross-exchange",
                            {{q(i, j), {i, c}, {j, d}}, {-q(c, d), {j, d}, {i, c}}, {-(a - Ratio(1)), {j, c}, {i, d}}}});
        }
  return rels;
}

std::vector<QuadRel> commutator_relations(const Mat& p) {
  const int n = p.n();
  std::vector<QuadRel> rels;
  const std::size_t nn = static_cast<std::size_t>(n * n);
  for (const auto& f : commutator_forms(p)) {
    QuadRel r{"commutator", {}};
    for (std::size_t w = 0; w < f.size(); ++w) {
      if (f[w].is_zero()) continue;
      std::size_t x = w / nn, y = w % nn;
      r.terms.push_back({f[w],
                         {static_cast<int>(x) / n + 1, static_cast<int>(x) % n + 1},
                         {static_cast<int>(y) / n + 1, static_cast<int>(y) % n + 1}});
    }
    if (!r.terms.empty()) rels.push_back(std::move(r));
  }
  return rels;
}

std::vector<RVec> relation_forms(const std::vector<QuadRel>& rels, int n) {
  const std::size_t nn = static_cast<std::size_t>(n * n);
  std::vector<RVec> out;
  for (const auto& r : rels) {
    RVec f(nn * nn);
    for (const auto& t : r.terms)
      f[zflat(n, t.first.row, t.first.col) * nn + zflat(n, t.second.row, t.second.col)] += t.coeff;
    out.push_back(std::move(f));
  }
  return out;
}

ZRep rep_pi(const RFamily& f) {
  const int n = f.params.n();
  ZRep rep(static_cast<std::size_t>(n), std::vector<Mat>(static_cast<std::size_t>(n)));
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k) {
      Mat m(n, 1);
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l) m(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(l - 1)) = f.R.at({i, j}, {k, l});
      rep[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] = std::move(m);
    }
  return rep;
}

ZRep rep_pi_prime(const RFamily& f) {
  const int n = f.params.n();
  ZRep rep(static_cast<std::size_t>(n), std::vector<Mat>(static_cast<std::size_t>(n)));
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k) {
      Mat m(n, 1);
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l)
          m(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(l - 1)) = f.Rinv.at({j, i}, {l, k});
      rep[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] = std::move(m);
    }
  return rep;
}

std::vector<Mat> verify_rep(const std::vector<QuadRel>& rels, const ZRep& rep) {
  std::vector<Mat> out;
  const int n = static_cast<int>(rep.size());
  auto img = [&](const ZIdx& z) -> const Mat& {
    return rep[static_cast<std::size_t>(z.row - 1)][static_cast<std::size_t>(z.col - 1)];
  };
  for (const auto& r : rels) {
    Mat acc(n, 1);
    for (const auto& t : r.terms) acc += t.coeff * (img(t.first) * img(t.second));
    out.push_back(std::move(acc));
  }
  return out;
}

// ---------------------------------------------------------------------------

SlReduction sl_reduce(const ParamSpace& space, const QParams& p) {
  const int n = p.n();
  if (space.exp_denom() % n != 0) throw Error("exponent lattice too coarse for N-th roots");
  SlReduction sl;
  for (int i = 1; i <= n; ++i) {
    Scalar prod = p.a.pow(i);
    for (int k = 1; k <= n; ++k) prod *= p.q[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i - 1)];
    sl.kappa.push_back(prod.pow_rational(Rational(1, n)));
  }
  sl.q_hat.assign(static_cast<std::size_t>(n), std::vector<Scalar>(static_cast<std::size_t>(n)));
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j)
      sl.q_hat[i][j] = sl.kappa[i] * sl.kappa[j].pow(-1) * p.q[i][j];
  Mat r(n, 2);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      Scalar d = sl.q_hat[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
      if (i < j) d *= p.a;
      r.at({i, j}, {i, j}) = Ratio(d);
      if (i < j)
        r.at({j, i}, {i, j}) = Ratio((Scalar(1) - p.a) * sl.kappa[static_cast<std::size_t>(i - 1)] *
                                     sl.kappa[static_cast<std::size_t>(j - 1)].pow(-1));
    }
  sl.R_sl = std::move(r);
  return sl;
}

std::vector<Scalar> sl_constraint_residual(const ParamSpace& space, const SlReduction& sl, const QParams& p) {
  const int n = p.n();
  std::vector<Scalar> out;
  Scalar target = space.a_pow(Rational(n + 1, 2));
  for (int j = 1; j <= n; ++j) {
    Scalar prod(1);
    for (int i = 1; i <= n; ++i) prod *= sl.q_hat[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
    out.push_back(prod * p.a.pow(j) - target);
  }
  return out;
}

QParams sl_constrained_params(const ParamSpace& space) {
  const int n = space.n();
  QParams p = QParams::symbolic(space);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      Scalar v = space.a_pow(Rational(i - j, n));
      if (i >= 2) {
        v *= space.q(i, j);
      } else {
        for (int k = j + 1; k <= n; ++k) v *= space.q(j, k);
        for (int k = 2; k < j; ++k) v *= space.q(k, j).pow(-1);
      }
      p.q[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = v;
      p.q[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)] = v.pow(-1);
    }
  return p;
}

Mat sl_rescale(const SlReduction& sl) {
  const int n = static_cast<int>(sl.kappa.size());
  std::vector<Ratio> d, dinv;
  for (const auto& k : sl.kappa) {
    d.emplace_back(k);
    dinv.emplace_back(k.pow(-1));
  }
  Mat left = kron(Mat::diagonal(d), Mat::identity(n)), right = kron(Mat::diagonal(dinv), Mat::identity(n));
  return left * sl.R_sl * right;
}

// ---------------------------------------------------------------------------

EpsMat operator*(const EpsMat& x, const EpsMat& y) {
  return {x.zeroth * y.zeroth, x.zeroth * y.first + x.first * y.zeroth};
}

EpsMat eps_embed(const EpsMat& r, int p, int q, int t) { return {embed(r.zeroth, p, q, t), embed(r.first, p, q, t)}; }

QParams esoteric_params(const ParamSpace& space3, bool constrained) {
  if (space3.n() != 3) throw Error("the deformation is defined for gl(3)");
  QParams p = QParams::symbolic(space3);
  Scalar q = space3.q(1, 2);
  Scalar q13 = constrained ? q * q : space3.q(1, 3);
  auto set = [&](int i, int j, const Scalar& v) {
    p.q[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = v;
    p.q[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)] = v.pow(-1);
  };
  set(1, 2, q);
  set(2, 3, q);
  set(1, 3, q13);
  return p;
}

Mat esoteric_delta(const QParams& p) {
  Mat d(3, 2);
  d.at({1, 3}, {2, 2}) = Ratio(p.q[0][2]);
  d.at({3, 1}, {2, 2}) = Ratio(-1);
  return d;
}

EpsMat eps_ybe_residual(const Mat& r, const Mat& delta) {
  EpsMat e{r, delta};
  EpsMat e12 = eps_embed(e, 1, 2, 3), e13 = eps_embed(e, 1, 3, 3), e23 = eps_embed(e, 2, 3, 3);
  EpsMat lhs = e12 * e13 * e23, rhs = e23 * e13 * e12;
  return {lhs.zeroth - rhs.zeroth, lhs.first - rhs.first};
}

EpsMat esoteric_gl3(const ParamSpace& space3, bool constrained) {
  QParams p = esoteric_params(space3, constrained);
  return eps_ybe_residual(build_R(p), esoteric_delta(p));
}

}  // namespace qtwist
