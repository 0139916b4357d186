#include <sstream>

#include "qtwist/duality.hpp"

namespace qtwist {

namespace {

Scalar qs(const Duality& d, int i, int j) {
  return d.params().q[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
}

std::vector<Scalar> ones(const Duality& d) { return std::vector<Scalar>(static_cast<std::size_t>(d.n()), Scalar(1)); }

std::string exps_str(const Exps& e) {
  std::string s;
  for (int v : e) s += std::to_string(v) + ",";
  return s;
}

// Coordinates of a symbolic functional: (key, character, monomial) -> coefficient.
std::map<std::string, Ratio> coordinates(const Functional& f) {
  if (!f.symbolic()) throw Error("coordinates of a deferred functional");
  std::map<std::string, Ratio> out;
  for (const auto& [k, v] : f.sym)
    for (const auto& t : v.terms()) {
      std::string ch;
      for (const auto& c : t.character) {
        const auto& term = c.terms().front();
        ch += term.coeff.get_str() + "@" + exps_str(std::vector<int>(term.mono.e.begin(), term.mono.e.end())) + ";";
      }
      for (const auto& [e, c] : t.poly) out[exps_str(k.x) + "|" + exps_str(k.y) + "|" + ch + "|" + exps_str(e)] = c;
    }
  return out;
}

// Nullspace of a list of symbolic functionals.
std::vector<RVec> relations_among(const std::vector<Functional>& fs) {
  std::vector<std::map<std::string, Ratio>> coords;
  std::set<std::string> all;
  for (const auto& f : fs) {
    coords.push_back(coordinates(f));
    for (const auto& [k, v] : coords.back()) all.insert(k);
  }
  std::vector<RVec> rows;
  for (const auto& key : all) {
    RVec r;
    for (const auto& c : coords) {
      auto it = c.find(key);
      r.push_back(it == c.end() ? Ratio() : it->second);
    }
    rows.push_back(r);
  }
  return nullspace(rows, fs.size());
}

}  // namespace

bool symbolically_zero(const Functional& f) {
  if (!f.symbolic()) throw Error("symbolic zero test on a deferred functional");
  return f.sym.empty();
}

Residual annihilates(const Duality& d, const Functional& f, int max_weight, const std::vector<Exps>& lattice) {
  Residual r;
  if (f.symbolic()) {
    for (const auto& [k, v] : f.sym) {
      ++r.checked;
      if (d.weight(k) <= max_weight) {
        r.zero = false;
        r.witness = d.name(BasisIdx{k.x, Exps(static_cast<std::size_t>(d.n()), 0), k.y}) + " (any lattice point)";
        return r;
      }
    }
    return r;
  }
  auto roots = d.roots(f);
  for (const auto& b : d.basis(max_weight, lattice)) {
    if (!roots.count(d.root(b))) continue;
    ++r.checked;
    if (!d.pair(f, b).is_zero()) {
      r.zero = false;
      r.witness = d.name(b);
      return r;
    }
  }
  return r;
}

Functional cartan_action_residual(const Duality& d, int k, int i, int j, bool plus_side) {
  Functional g = plus_side ? d.Q(i, j) : d.P(i, j);
  int c = (k == i ? 1 : 0) - (k == j ? 1 : 0);
  return d.commutator(d.H(k), g) - Ratio(c) * g;
}

std::vector<Scalar> char_C(const Duality& d, int i) {
  std::vector<Scalar> c = ones(d);
  for (int k = 1; k <= d.n(); ++k)
    if (k != i && k != i + 1) c[static_cast<std::size_t>(k - 1)] = qs(d, i + 1, k) * qs(d, k, i);
  return c;
}

namespace {

std::vector<Scalar> char_core(const Duality& d, int i, int a_slot) {
  std::vector<Scalar> c = char_C(d, i);
  c[static_cast<std::size_t>(i - 1)] = qs(d, i + 1, i);
  c[static_cast<std::size_t>(i)] = qs(d, i + 1, i);
  c[static_cast<std::size_t>(a_slot - 1)] *= d.params().a.pow(-1);
  return c;
}

}  // namespace

std::vector<Scalar> char_A(const Duality& d, int i) { return char_core(d, i, i); }
std::vector<Scalar> char_B(const Duality& d, int i) { return char_core(d, i, i + 1); }

Functional pq_rhs(const Duality& d, int i, const Ratio& lambda) {
  // (q^{i,i+1})^{1-H_i-H_{i+1}} a^{-H_{i+1}} C_i is q^{i,i+1} times the B character
  Ratio pre = lambda * Ratio(qs(d, i, i + 1));
  return pre * (d.K(char_B(d, i)) - d.K(char_A(d, i)));
}

Ratio pq_literal_scalar(const Duality& d) {
  Ratio a(d.params().a);
  return a / (Ratio(1) - a);
}

PQReport verify_pq(const Duality& d, int radius) {
  PQReport rep;
  auto lattice = Duality::lattice_box(d.n(), radius);
  for (int i = 1; i < d.n(); ++i) {
    Functional comm = d.commutator(d.P(i), d.Q(i));
    Residual lit = annihilates(d, comm - pq_rhs(d, i, pq_literal_scalar(d)), d.degree(), lattice);
    if (rep.literal.zero && !lit.zero) rep.literal = lit;
    rep.literal.checked += lit.checked;

    // fit the scalar on the pure lattice sector, then re-check everywhere
    Functional unit = pq_rhs(d, i, Ratio(1));
    std::optional<Ratio> lambda;
    for (const auto& m : lattice) {
      BasisIdx b{Exps(d.num_x(), 0), m, Exps(d.num_y(), 0)};
      Ratio u = d.pair(unit, b);
      if (!u.is_zero()) {
        lambda = d.pair(comm, b) / u;
        break;
      }
    }
    if (!lambda) {
      rep.fitted_residual.zero = false;
      continue;
    }
    if (i == 1) rep.fitted = lambda;
    else if (rep.fitted && !(*rep.fitted == *lambda)) rep.fitted.reset();
    Residual fit = annihilates(d, comm - pq_rhs(d, i, *lambda), d.degree(), lattice);
    if (rep.fitted_residual.zero && !fit.zero) rep.fitted_residual = fit;
    rep.fitted_residual.checked += fit.checked;
  }
  for (int i = 1; i < d.n(); ++i)
    for (int j = 1; j < d.n(); ++j) {
      if (i == j) continue;
      Residual c = annihilates(d, d.commutator(d.P(i), d.Q(j)), d.degree(), lattice);
      if (rep.cross.zero && !c.zero) rep.cross = c;
      rep.cross.checked += c.checked;
    }
  return rep;
}

Ratio k_ij(const QParams& p, int i, int j) {
  auto q = [&](int x, int y) { return Ratio(p.q[static_cast<std::size_t>(x - 1)][static_cast<std::size_t>(y - 1)]); };
  return q(i + 1, j) * q(j, i) / (q(i + 1, j + 1) * q(j + 1, i));
}

Ratio k_i(const QParams& p, int i) {
  auto q = [&](int x, int y) { return Ratio(p.q[static_cast<std::size_t>(x - 1)][static_cast<std::size_t>(y - 1)]); };
  return q(i + 1, i - 1) / (q(i + 1, i) * q(i, i - 1));
}

std::optional<Ratio> quommute(const Duality& d, const Functional& f, const Functional& g) {
  auto ns = relations_among({d.mul(f, g), d.mul(g, f)});
  if (ns.size() != 1 || ns[0][0].is_zero()) return std::nullopt;
  return -(ns[0][1] / ns[0][0]);
}

std::vector<SerreSolution> solve_serre(const Duality& d, int i, const Ratio& k, bool plus_side) {
  Functional A = plus_side ? d.Q(i) : d.P(i);
  Functional B = plus_side ? d.Q(i + 1) : d.P(i + 1);
  auto m3 = [&](const Functional& x, const Functional& y, const Functional& z) { return d.mul(d.mul(x, y), z); };
  Functional ABA = m3(A, B, A), BAA = m3(B, A, A), AAB = m3(A, A, B);
  Functional ABB = m3(A, B, B), BAB = m3(B, A, B), BBA = m3(B, B, A);

  // shape one: (1 + r k) W0 - k W1 - r W2; shape two: W0 - (k + s) W1 + s k W2
  auto shape_one = [&](const std::string& name, const Functional& w0, const Functional& w1, const Functional& w2) {
    SerreSolution s{name, k, Ratio(), false, false, {}};
    auto ns = relations_among({w0, w1, w2});
    s.unique = ns.size() == 1;
    if (!s.unique) return s;
    s.null_vector = ns[0];
    const Ratio &beta = ns[0][1], &gamma = ns[0][2];
    if (beta.is_zero()) return s;
    s.outer = gamma * k / beta;
    Functional t = (Ratio(1) + s.outer * k) * w0 - k * w1 - s.outer * w2;
    s.consistent = symbolically_zero(t);
    return s;
  };
  auto shape_two = [&](const std::string& name, const Functional& w0, const Functional& w1, const Functional& w2) {
    SerreSolution s{name, k, Ratio(), false, false, {}};
    auto ns = relations_among({w0, w1, w2});
    s.unique = ns.size() == 1;
    if (!s.unique) return s;
    s.null_vector = ns[0];
    const Ratio &alpha = ns[0][0], &beta = ns[0][1];
    if (alpha.is_zero()) return s;
    s.outer = -(beta / alpha) - k;
    Functional t = w0 - (k + s.outer) * w1 + s.outer * k * w2;
    s.consistent = symbolically_zero(t);
    return s;
  };
  std::vector<SerreSolution> out;
  if (!plus_side) {
    out.push_back(shape_one("[[P_i,P_i+1]_k,P_i]_r", ABA, BAA, AAB));
    out.push_back(shape_two("[[P_i,P_i+1]_k,P_i+1]_s", ABB, BAB, BBA));
  } else {
    out.push_back(shape_one("[Q_i,[Q_i+1,Q_i]_k]_r", ABA, AAB, BAA));
    out.push_back(shape_two("[Q_i+1,[Q_i+1,Q_i]_k]_s", BBA, BAB, ABB));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coproducts of generators

TensorFn coproduct_H(const Duality& d, int k) { return {{d.H(k), d.counit()}, {d.counit(), d.H(k)}}; }
TensorFn coproduct_P(const Duality& d, int i) { return {{d.P(i), d.counit()}, {d.K(char_A(d, i)), d.P(i)}}; }
TensorFn coproduct_Q(const Duality& d, int i) { return {{d.Q(i), d.K(char_B(d, i))}, {d.counit(), d.Q(i)}}; }

TensorFn tensor_mul(const Duality& d, const TensorFn& x, const TensorFn& y) {
  TensorFn out;
  for (const auto& [a, b] : x)
    for (const auto& [c, e] : y) out.emplace_back(d.mul(a, c), d.mul(b, e));
  return out;
}

Residual verify_comul(const Duality& d, const Functional& f, const TensorFn& expected, int max_weight,
                      const std::vector<Exps>& lattice) {
  Residual r;
  auto basis = d.basis(max_weight, lattice);
  auto froots = d.roots(f);
  std::vector<std::pair<std::set<Exps>, std::set<Exps>>> eroots;
  for (const auto& [a, b] : expected) eroots.emplace_back(d.roots(a), d.roots(b));
  for (const auto& l1 : basis)
    for (const auto& l2 : basis) {
      if (d.weight(l1) + d.weight(l2) > max_weight) continue;
      Exps r1 = d.root(l1), r2 = d.root(l2), r12 = r1;
      for (std::size_t k = 0; k < r12.size(); ++k) r12[k] += r2[k];
      bool lhs_live = froots.count(r12) > 0;
      Ratio rhs;
      bool rhs_live = false;
      for (std::size_t t = 0; t < expected.size(); ++t) {
        if (!eroots[t].first.count(r1) || !eroots[t].second.count(r2)) continue;
        rhs_live = true;
        Ratio x = d.pair(expected[t].first, l1);
        if (!x.is_zero()) rhs += x * d.pair(expected[t].second, l2);
      }
      if (!lhs_live && !rhs_live) continue;
      ++r.checked;
      Ratio lhs = lhs_live ? d.comul(f, l1, l2) : Ratio();
      if (!(lhs == rhs)) {
        r.zero = false;
        r.witness = "(" + d.name(l1) + ", " + d.name(l2) + ")";
        return r;
      }
    }
  return r;
}

// ---------------------------------------------------------------------------
// Homomorphisms into the dual and the fundamental representation

Functional phi(const Duality& d, const Symbol& s) {
  Scalar a = d.params().a;
  switch (s.kind) {
    case Kind::X:
      return (Ratio(a.pow(-1)) - Ratio(1)) * Ratio(qs(d, s.i, s.j)) * d.Q(s.j, s.i);
    case Kind::Y:
      return Functional();
    case Kind::ZDiag:
    case Kind::ZDiagInv: {
      std::vector<Scalar> c;
      for (int i = 1; i <= d.n(); ++i) {
        Scalar v = qs(d, s.i, i) * (i > s.i ? a : Scalar(1));
        c.push_back(s.kind == Kind::ZDiag ? v : v.pow(-1));
      }
      return d.K(c);
    }
    default:
      throw Error("phi is defined on the factored generators");
  }
}

Functional phi_prime(const Duality& d, const Symbol& s, bool literal) {
  Scalar a = d.params().a;
  switch (s.kind) {
    case Kind::Y: {
      Ratio c = literal ? Ratio(a) - Ratio(1) : Ratio(1) - Ratio(a.pow(-1));
      return c * Ratio(qs(d, s.j, s.i)) * d.P(s.j, s.i);
    }
    case Kind::X:
      return Functional();
    case Kind::ZDiag:
    case Kind::ZDiagInv: {
      std::vector<Scalar> c;
      for (int i = 1; i <= d.n(); ++i) {
        Scalar v = qs(d, s.i, i) * (i < s.i ? a.pow(-1) : Scalar(1));
        c.push_back(s.kind == Kind::ZDiag ? v : v.pow(-1));
      }
      return d.K(c);
    }
    default:
      throw Error("phi' is defined on the factored generators");
  }
}

std::vector<std::string> rule_failures(const Duality& d, const std::vector<Mat>& images) {
  std::vector<std::string> out;
  auto word_mat = [&](const Word& w) {
    Mat m = Mat::identity(d.n(), 1);
    for (Letter l : w) m = m * images[l];
    return m;
  };
  for (const auto& [lhs, rhs] : d.full().system.rules()) {
    Mat r(d.n(), 1);
    for (const auto& [w, c] : rhs.terms()) r += c * word_mat(w);
    if (!(word_mat(lhs) == r)) out.push_back(d.full().alphabet.word_name(lhs));
  }
  return out;
}

PhiReport verify_phi(const Duality& d, bool literal_prime) {
  PhiReport rep;
  RFamily fam = build_family(d.params());
  ZRep pi = rep_pi(fam), pip = rep_pi_prime(fam);
  auto z = [](const ZRep& r, int i, int j) -> const Mat& {
    return r[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
  };
  const Alphabet& alpha = d.full().alphabet;
  for (std::size_t l = 0; l < alpha.size(); ++l) {
    const Symbol& s = alpha.at(static_cast<Letter>(l));
    Mat want, want_p;
    switch (s.kind) {
      case Kind::ZDiag:
        want = z(pi, s.i, s.i);
        want_p = z(pip, s.i, s.i);
        break;
      case Kind::ZDiagInv:
        want = z(pi, s.i, s.i).inverse();
        want_p = z(pip, s.i, s.i).inverse();
        break;
      case Kind::X:  // z_i^j = X_i^j z_j under pi, and X is killed by pi'
        want = z(pi, s.i, s.j) * z(pi, s.j, s.j).inverse();
        want_p = Mat(d.n(), 1);
        break;
      case Kind::Y:  // z_i^j = z_i Y_i^j under pi'
        want = Mat(d.n(), 1);
        want_p = z(pip, s.i, s.i).inverse() * z(pip, s.i, s.j);
        break;
      default:
        continue;
    }
    if (!(d.rho(phi(d, s)) == want)) {
      rep.phi_ok = false;
      rep.mismatches.push_back("phi(" + alpha.name(static_cast<Letter>(l)) + ")");
    }
    if (!(d.rho(phi_prime(d, s, literal_prime)) == want_p)) {
      rep.phi_prime_ok = false;
      rep.mismatches.push_back("phi'(" + alpha.name(static_cast<Letter>(l)) + ")");
    }
  }
  std::vector<Mat> im, imp;
  for (std::size_t l = 0; l < alpha.size(); ++l) {
    const Symbol& s = alpha.at(static_cast<Letter>(l));
    im.push_back(d.rho(phi(d, s)));
    imp.push_back(d.rho(phi_prime(d, s, literal_prime)));
  }
  rep.phi_rule_failures = rule_failures(d, im);
  rep.phi_prime_rule_failures = rule_failures(d, imp);
  return rep;
}

namespace {

Mat exchange_part(const Duality& d) {
  const int n = d.n();
  Mat r = Mat::identity(n, 2);
  const Alphabet& alpha = d.full().alphabet;
  for (std::size_t l = 0; l < alpha.size(); ++l) {
    const Symbol& s = alpha.at(static_cast<Letter>(l));
    if (s.kind == Kind::X) r += kron(d.rho(d.P(s.i, s.j)), d.rho(phi(d, s)));
  }
  return r;
}

Scalar q_tilde(const Duality& d, int k, int l) {
  return qs(d, k, l) * (k < l ? d.params().a : Scalar(1));
}

}  // namespace

UniversalR universal_R_fundamental(const Duality& d) {
  const int n = d.n();
  Mat cartan(n, 2);
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l) cartan.at({k, l}, {k, l}) = Ratio(q_tilde(d, k, l));
  UniversalR u;
  u.R = exchange_part(d) * cartan;
  Mat target = build_R(d.params());
  u.matches = u.R == target;
  Mat f = flip(n);
  u.transposed_matches = f * u.R * f == target;
  return u;
}

Mat universal_R_sl(const Duality& d) {
  // exponent of each parameter in prod_{ij} (q~^{ij})^{(delta_ik - 1/N)(delta_jl - 1/N)}
  const int n = d.n();
  const ParamSpace& sp = d.space();
  Mat cartan(n, 2);
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l) {
      std::vector<Rational> ex(sp.num_params(), Rational(0));
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
          Rational e = (Rational(i == k ? 1 : 0) - Rational(1, n)) * (Rational(j == l ? 1 : 0) - Rational(1, n));
          if (i < j) {
            ex[sp.q_index(i, j)] += e;
            ex[sp.a_index()] += e;
          } else if (i > j) {
            ex[sp.q_index(j, i)] -= e;
          }
        }
      Scalar v(1);
      for (std::size_t p = 0; p < ex.size(); ++p) {
        ex[p].canonicalize();
        if (ex[p] != 0) v *= sp.param_pow(p, ex[p]);
      }
      cartan.at({k, l}, {k, l}) = Ratio(v);
    }
  return exchange_part(d) * cartan;
}

std::vector<std::vector<NCPoly>> evaluate_UT_fundamental(const Duality& d) {
  const int n = d.n();
  const auto N = static_cast<std::size_t>(n);
  const Presentation& f = d.full();
  using PolyMat = std::vector<std::vector<NCPoly>>;
  auto ident = [&] {
    PolyMat m(N, std::vector<NCPoly>(N));
    for (std::size_t i = 0; i < N; ++i) m[i][i] = NCPoly(Ratio(1));
    return m;
  };
  auto mul = [&](const PolyMat& x, const PolyMat& y) {
    PolyMat m(N, std::vector<NCPoly>(N));
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        NCPoly s;
        for (std::size_t k = 0; k < N; ++k) s += x[i][k] * y[k][j];
        m[i][j] = f.system.normal_form(s);
      }
    return m;
  };
  // e_a^{X P} reduces to 1 + X rho(P) since rho(P)^2 = 0; the order follows the alphabet
  PolyMat lower = ident(), diag = ident(), upper = ident();
  for (std::size_t l = 0; l < f.alphabet.size(); ++l) {
    const Symbol& s = f.alphabet.at(static_cast<Letter>(l));
    if (s.kind != Kind::X && s.kind != Kind::Y) continue;
    PolyMat step = ident();
    Mat r = d.rho(s.kind == Kind::X ? d.P(s.i, s.j) : d.Q(s.i, s.j));
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        if (!r(i, j).is_zero()) step[i][j] += r(i, j) * NCPoly::letter(static_cast<Letter>(l));
    if (s.kind == Kind::X) lower = mul(lower, step);
    else upper = mul(upper, step);
  }
  for (int k = 1; k <= n; ++k) diag[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(k - 1)] =
      NCPoly::letter(f.alphabet.get(Kind::ZDiag, k));
  return mul(mul(lower, diag), upper);
}

bool ut_coproduct_check(const Duality& d, const std::vector<std::vector<NCPoly>>& ut) {
  const auto& t = d.gauss_table(false);
  const Alphabet& ta = t.target.alphabet;
  const Alphabet& fa = d.full().alphabet;
  auto lift = [&](const NCPoly& p, int copy) {
    NCPoly out;
    for (const auto& [w, c] : p.terms()) {
      Word v;
      for (Letter l : w) {
        const Symbol& s = fa.at(l);
        v.push_back(ta.get(s.kind, s.i, s.j, copy));
      }
      out.add(v, c);
    }
    return out;
  };
  auto trunc = [&](const NCPoly& p) {
    NCPoly out;
    for (const auto& [w, c] : p.terms()) {
      int w0 = 0, w1 = 0;
      for (Letter l : w) {
        const Symbol& s = ta.at(l);
        int wt = s.kind == Kind::X ? s.i - s.j : (s.kind == Kind::Y ? s.j - s.i : 0);
        (s.copy == 0 ? w0 : w1) += wt;
      }
      if (w0 <= d.degree() && w1 <= d.degree()) out.add(w, c);
    }
    return out;
  };
  const std::size_t n = ut.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      NCPoly lhs = trunc(apply_hom(ut[i][j], t.images, t.target.system));
      NCPoly rhs;
      for (std::size_t k = 0; k < n; ++k) rhs += lift(ut[i][k], 0) * lift(ut[k][j], 1);
      rhs = trunc(t.target.system.normal_form(rhs));
      if (!(lhs == rhs)) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Root of unity extension, gl(2)

RootExtension root_extension(const Duality& d, int order, int radius) {
  if (d.n() != 2) throw Error("root extension is implemented for gl(2)");
  RootExtension rep;
  rep.order = order;
  const ParamSpace& sp = d.space();
  Functional P = d.P(2, 1), Q = d.Q(1, 2);
  Functional PK = d.pow(P, order);
  Ratio qk(q_int(sp, order));
  Ratio qk_inv(q_int(sp, order, QFlavor::InverseA));
  Functional Pp = qk.inverse() * PK;
  Functional QK = d.pow(Q, order);
  Functional Qp = qk_inv.inverse() * QK;
  auto basis = d.basis(d.degree(), Duality::lattice_box(2, radius));

  auto at_root = [&](const Ratio& v, bool& flag, const std::string& what, const BasisIdx& b) {
    try {
      CycScalar c = at_root_of_unity(v, sp, order);
      if (!c.is_zero()) {
        flag = false;
        rep.notes.push_back(what + " nonzero at " + d.name(b));
      }
    } catch (const PoleError&) {
      flag = false;
      rep.notes.push_back(what + " has a pole at " + d.name(b));
    }
  };
  for (const auto& b : basis) {
    try {
      at_root_of_unity(d.pair(Pp, b), sp, order);
    } catch (const PoleError&) {
      rep.regular = false;
      rep.notes.push_back("P' has a pole at " + d.name(b));
    }
    at_root(d.pair(PK, b), rep.power_vanishes, "P^K", b);
  }
  Functional ppc = d.commutator(P, Pp);
  std::vector<Functional> cart;
  for (int k = 1; k <= 2; ++k) {
    int c = (k == 2 ? 1 : 0) - (k == 1 ? 1 : 0);
    cart.push_back(d.commutator(d.H(k), Pp) - Ratio(order * c) * Pp);
  }
  // [P, Q'] = lambda (q^{12})^{1-H_1-H_2} (Q^{K-1} a^{-H_2} - a^{-H_1} Q^{K-1}), stated with lambda = a-1
  Scalar a = d.params().a;
  std::vector<Scalar> e = {qs(d, 2, 1), qs(d, 2, 1)};
  Functional QK1 = d.pow(Q, order - 1);
  Functional shape = Ratio(qs(d, 1, 2)) * (d.mul(d.mul(d.K(e), QK1), d.K({Scalar(1), a.pow(-1)})) -
                                           d.mul(d.K({e[0] * a.pow(-1), e[1]}), QK1));
  Functional comm = d.commutator(P, Qp);
  Functional literal = comm - (Ratio(a) - Ratio(1)) * shape;
  auto roots_pq = d.roots(literal);
  std::optional<Ratio> lambda;
  for (const auto& b : basis) {
    at_root(d.pair(ppc, b), rep.pp_commute, "[P,P']", b);
    for (const auto& c : cart) at_root(d.pair(c, b), rep.cartan, "[H,P']", b);
    if (!roots_pq.count(d.root(b))) continue;
    at_root(d.pair(literal, b), rep.pq_literal, "[P,Q'] (stated prefactor)", b);
    Ratio s = d.pair(shape, b), v = d.pair(comm, b);
    if (!lambda && !s.is_zero()) lambda = v / s;
    if (lambda && !(v == *lambda * s)) {
      rep.pq_shape = false;
      rep.notes.push_back("[P,Q'] not proportional to the stated shape at " + d.name(b));
    }
  }
  if (!lambda) {
    rep.pq_shape = false;
  } else {
    try {
      rep.pq_prefactor = at_root_of_unity(*lambda, sp, order).to_string(sp);
    } catch (const PoleError&) {
      rep.pq_shape = false;
      rep.notes.push_back("[P,Q'] prefactor has a pole");
    }
  }
  return rep;
}

}  // namespace qtwist
