#include "qtwist/duality.hpp"

#include <algorithm>

namespace qtwist {

namespace {

Rational ipow(long base, int e) {
  mpz_class r = 1;
  for (int t = 0; t < e; ++t) r *= base;
  return Rational(r);
}

mpz_class binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

void poly_add(LatticePoly& p, const Exps& e, const Ratio& c) {
  if (c.is_zero()) return;
  auto it = p.find(e);
  if (it == p.end()) {
    p.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) p.erase(it);
}

LatticePoly poly_shift(const LatticePoly& p, const Exps& n) {
  LatticePoly out;
  for (const auto& [e, c] : p) {
    std::vector<std::pair<Exps, Rational>> acc{{Exps(e.size(), 0), Rational(1)}};
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      std::vector<std::pair<Exps, Rational>> next;
      for (const auto& [ex, r] : acc)
        for (int t = 0; t <= e[k]; ++t) {
          Exps ex2 = ex;
          ex2[k] = t;
          Rational f = r * Rational(binomial(e[k], t)) * ipow(n[k], e[k] - t);
          if (f != 0) next.emplace_back(ex2, f);
        }
      acc = std::move(next);
    }
    for (const auto& [ex, r] : acc) poly_add(out, ex, c * Ratio(r));
  }
  return out;
}

std::vector<Scalar> char_mul(const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
  std::vector<Scalar> r(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) r[k] = x[k] * y[k];
  return r;
}

Scalar char_power(const std::vector<Scalar>& c, const Exps& m) {
  Scalar v(1);
  for (std::size_t k = 0; k < c.size(); ++k)
    if (m[k] != 0) v *= c[k].pow(m[k]);
  return v;
}

bool all_zero(const Exps& e) {
  return std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
}

Exps operator+(Exps x, const Exps& y) {
  for (std::size_t k = 0; k < x.size(); ++k) x[k] += y[k];
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// LatticeFn

LatticeFn LatticeFn::constant(int n, const Ratio& c) {
  LatticeFn f;
  if (!c.is_zero()) f.terms_.push_back({std::vector<Scalar>(static_cast<std::size_t>(n), Scalar(1)),
                                        LatticePoly{{Exps(static_cast<std::size_t>(n), 0), c}}});
  return f;
}

LatticeFn LatticeFn::character(const std::vector<Scalar>& c, const Ratio& coeff) {
  for (const auto& x : c)
    if (!x.is_monomial()) throw Error("character entries must be monomials");
  LatticeFn f;
  if (!coeff.is_zero()) f.terms_.push_back({c, LatticePoly{{Exps(c.size(), 0), coeff}}});
  return f;
}

LatticeFn LatticeFn::coordinate(int n, int k) {
  Exps e(static_cast<std::size_t>(n), 0);
  e.at(static_cast<std::size_t>(k - 1)) = 1;
  LatticeFn f;
  f.terms_.push_back({std::vector<Scalar>(static_cast<std::size_t>(n), Scalar(1)), LatticePoly{{e, Ratio(1)}}});
  return f;
}

void LatticeFn::add_term(const std::vector<Scalar>& c, const LatticePoly& p) {
  if (p.empty()) return;
  for (auto it = terms_.begin(); it != terms_.end(); ++it)
    if (it->character == c) {
      for (const auto& [e, r] : p) poly_add(it->poly, e, r);
      if (it->poly.empty()) terms_.erase(it);
      return;
    }
  terms_.push_back({c, p});
}

Ratio LatticeFn::operator()(const Exps& m) const {
  Ratio total;
  for (const auto& t : terms_) {
    Ratio pv;
    for (const auto& [e, c] : t.poly) {
      Rational mono(1);
      for (std::size_t k = 0; k < e.size(); ++k) mono *= ipow(m[k], e[k]);
      pv += c * Ratio(mono);
    }
    total += Ratio(char_power(t.character, m)) * pv;
  }
  return total;
}

LatticeFn LatticeFn::shifted(const Exps& n) const {
  LatticeFn f;
  for (const auto& t : terms_) {
    Ratio scale(char_power(t.character, n));
    LatticePoly p;
    for (const auto& [e, c] : poly_shift(t.poly, n)) p.emplace(e, scale * c);
    f.add_term(t.character, p);
  }
  return f;
}

LatticeFn& LatticeFn::operator+=(const LatticeFn& o) {
  for (const auto& t : o.terms_) add_term(t.character, t.poly);
  return *this;
}

LatticeFn& LatticeFn::operator-=(const LatticeFn& o) { return *this += Ratio(-1) * o; }

LatticeFn operator*(const LatticeFn& x, const LatticeFn& y) {
  LatticeFn f;
  for (const auto& s : x.terms_)
    for (const auto& t : y.terms_) {
      LatticePoly p;
      for (const auto& [e1, c1] : s.poly)
        for (const auto& [e2, c2] : t.poly) poly_add(p, e1 + e2, c1 * c2);
      f.add_term(char_mul(s.character, t.character), p);
    }
  return f;
}

LatticeFn operator*(const Ratio& c, const LatticeFn& f) {
  LatticeFn r;
  if (c.is_zero()) return r;
  for (const auto& t : f.terms_) {
    LatticePoly p;
    for (const auto& [e, v] : t.poly) p.emplace(e, c * v);
    r.terms_.push_back({t.character, p});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Functional

void Functional::add(const SectorKey& k, const LatticeFn& f) {
  if (f.is_zero()) return;
  auto it = sym.find(k);
  if (it == sym.end()) {
    sym.emplace(k, f);
    return;
  }
  it->second += f;
  if (it->second.is_zero()) sym.erase(it);
}

bool Functional::minus_type() const {
  if (!deferred.empty()) return false;
  return std::all_of(sym.begin(), sym.end(), [](const auto& kv) { return all_zero(kv.first.y); });
}

bool Functional::plus_type() const {
  if (!deferred.empty()) return false;
  return std::all_of(sym.begin(), sym.end(), [](const auto& kv) { return all_zero(kv.first.x); });
}

Functional& Functional::operator+=(const Functional& o) {
  for (const auto& [k, f] : o.sym) add(k, f);
  deferred.insert(deferred.end(), o.deferred.begin(), o.deferred.end());
  return *this;
}

Functional& Functional::operator-=(const Functional& o) { return *this += Ratio(-1) * o; }

Functional operator*(const Ratio& c, const Functional& f) {
  Functional r;
  if (c.is_zero()) return r;
  for (const auto& [k, v] : f.sym) r.sym.emplace(k, c * v);
  for (const auto& d : f.deferred) r.deferred.push_back({c * d.coeff, d.left, d.right});
  return r;
}

// ---------------------------------------------------------------------------
// Duality: basis bookkeeping

Duality::Duality(const ParamSpace& space, const QParams& params, int degree)
    : space_(space), params_(params), degree_(degree) {
  full_ = preset_factored(params, true, true);
  minus_ = preset_factored(params, false, true);
  plus_ = preset_factored(params, true, false);
  minus2_ = tensor_power(minus_, 2);
  plus2_ = tensor_power(plus_, 2);
  minus_table_ = coproduct_factored_minus(minus_, minus2_);
  plus_table_ = coproduct_factored_plus(plus_, plus2_);
  for (std::size_t l = 0; l < full_.alphabet.size(); ++l) {
    const Symbol& s = full_.alphabet.at(static_cast<Letter>(l));
    if (s.kind == Kind::X) {
      xpos_[{s.i, s.j}] = xsym_.size();
      xsym_.push_back(s);
    } else if (s.kind == Kind::Y) {
      ypos_[{s.i, s.j}] = ysym_.size();
      ysym_.push_back(s);
    }
  }
}

int Duality::letter_weight(const Symbol& s) const {
  if (s.kind == Kind::X) return s.i - s.j;
  if (s.kind == Kind::Y) return s.j - s.i;
  return 0;
}

int Duality::weight(const SectorKey& k) const {
  int w = 0;
  for (std::size_t e = 0; e < k.x.size(); ++e) w += k.x[e] * letter_weight(xsym_[e]);
  for (std::size_t e = 0; e < k.y.size(); ++e) w += k.y[e] * letter_weight(ysym_[e]);
  return w;
}

Exps Duality::root(const SectorKey& k) const {
  Exps r(static_cast<std::size_t>(n()), 0);
  auto add = [&](const Symbol& s, int e) {
    r[static_cast<std::size_t>(s.i - 1)] += e;
    r[static_cast<std::size_t>(s.j - 1)] -= e;
  };
  for (std::size_t e = 0; e < k.x.size(); ++e) add(xsym_[e], k.x[e]);
  for (std::size_t e = 0; e < k.y.size(); ++e) add(ysym_[e], k.y[e]);
  return r;
}

std::vector<SectorKey> Duality::keys(int max_weight, bool with_x, bool with_y) const {
  std::vector<Symbol> letters;
  if (with_x) letters.insert(letters.end(), xsym_.begin(), xsym_.end());
  if (with_y) letters.insert(letters.end(), ysym_.begin(), ysym_.end());
  std::vector<SectorKey> out;
  Exps cur(letters.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos == letters.size()) {
      SectorKey k{Exps(xsym_.size(), 0), Exps(ysym_.size(), 0)};
      std::size_t off = 0;
      if (with_x) {
        std::copy(cur.begin(), cur.begin() + static_cast<long>(xsym_.size()), k.x.begin());
        off = xsym_.size();
      }
      if (with_y) std::copy(cur.begin() + static_cast<long>(off), cur.end(), k.y.begin());
      out.push_back(std::move(k));
      return;
    }
    int w = letter_weight(letters[pos]);
    for (int e = 0; e * w <= left; ++e) {
      cur[pos] = e;
      rec(pos + 1, left - e * w);
    }
    cur[pos] = 0;
  };
  rec(0, max_weight);
  std::sort(out.begin(), out.end(), [&](const SectorKey& a, const SectorKey& b) {
    int wa = weight(a), wb = weight(b);
    return wa != wb ? wa < wb : a < b;
  });
  return out;
}

std::vector<BasisIdx> Duality::basis(int max_weight, const std::vector<Exps>& lattice, bool with_x,
                                     bool with_y) const {
  std::vector<BasisIdx> out;
  for (const auto& k : keys(max_weight, with_x, with_y))
    for (const auto& m : lattice) out.push_back({k.x, m, k.y});
  return out;
}

std::vector<Exps> Duality::lattice_box(int n, int radius) {
  std::vector<Exps> out{Exps{}};
  for (int k = 0; k < n; ++k) {
    std::vector<Exps> next;
    for (const auto& e : out)
      for (int v = -radius; v <= radius; ++v) {
        Exps e2 = e;
        e2.push_back(v);
        next.push_back(e2);
      }
    out = std::move(next);
  }
  return out;
}

std::vector<Exps> Duality::lattice_star(int n) {
  std::vector<Exps> out{Exps(static_cast<std::size_t>(n), 0)};
  for (int k = 0; k < n; ++k)
    for (int s : {1, -1}) {
      Exps e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(k)] = s;
      out.push_back(e);
    }
  return out;
}

namespace {

// Normal word of a basis element in a presentation that contains its letters.
Word word_in(const Alphabet& alpha, const std::vector<Symbol>& xs, const std::vector<Symbol>& ys,
             const BasisIdx& b, int copy = 0) {
  Word w;
  for (std::size_t e = 0; e < b.x.size(); ++e)
    for (int t = 0; t < b.x[e]; ++t) w.push_back(alpha.get(Kind::X, xs[e].i, xs[e].j, copy));
  for (std::size_t k = 0; k < b.m.size(); ++k) {
    int m = b.m[k];
    Kind kind = m >= 0 ? Kind::ZDiag : Kind::ZDiagInv;
    for (int t = 0; t < std::abs(m); ++t) w.push_back(alpha.get(kind, static_cast<int>(k) + 1, 0, copy));
  }
  for (std::size_t e = 0; e < b.y.size(); ++e)
    for (int t = 0; t < b.y[e]; ++t) w.push_back(alpha.get(Kind::Y, ys[e].i, ys[e].j, copy));
  return w;
}

}  // namespace

Word Duality::word_of(const BasisIdx& b) const { return word_in(full_.alphabet, xsym_, ysym_, b); }

BasisIdx Duality::basis_of(const Alphabet& alpha, const Word& w) const {
  BasisIdx b{Exps(xsym_.size(), 0), Exps(static_cast<std::size_t>(n()), 0), Exps(ysym_.size(), 0)};
  for (Letter l : w) {
    const Symbol& s = alpha.at(l);
    switch (s.kind) {
      case Kind::X: ++b.x[xpos_.at({s.i, s.j})]; break;
      case Kind::Y: ++b.y[ypos_.at({s.i, s.j})]; break;
      case Kind::ZDiag: ++b.m[static_cast<std::size_t>(s.i - 1)]; break;
      case Kind::ZDiagInv: --b.m[static_cast<std::size_t>(s.i - 1)]; break;
      default: throw Error("letter outside the factored alphabet");
    }
  }
  return b;
}

std::string Duality::name(const BasisIdx& b) const { return full_.alphabet.word_name(word_of(b)); }

// ---------------------------------------------------------------------------
// Generators

Functional Duality::P(int i, int j) const {
  Functional f;
  SectorKey k{Exps(xsym_.size(), 0), Exps(ysym_.size(), 0)};
  k.x.at(xpos_.at({i, j})) = 1;
  f.sym.emplace(k, LatticeFn::constant(n(), Ratio(1)));
  return f;
}

Functional Duality::Q(int i, int j) const {
  Functional f;
  SectorKey k{Exps(xsym_.size(), 0), Exps(ysym_.size(), 0)};
  k.y.at(ypos_.at({i, j})) = 1;
  f.sym.emplace(k, LatticeFn::constant(n(), Ratio(1)));
  return f;
}

Functional Duality::H(int k) const {
  Functional f;
  f.sym.emplace(SectorKey{Exps(xsym_.size(), 0), Exps(ysym_.size(), 0)}, LatticeFn::coordinate(n(), k));
  return f;
}

Functional Duality::K(const std::vector<Scalar>& c) const {
  if (c.size() != static_cast<std::size_t>(n())) throw Error("character has the wrong length");
  Functional f;
  f.sym.emplace(SectorKey{Exps(xsym_.size(), 0), Exps(ysym_.size(), 0)}, LatticeFn::character(c));
  return f;
}

Functional Duality::counit() const { return K(std::vector<Scalar>(static_cast<std::size_t>(n()), Scalar(1))); }

// ---------------------------------------------------------------------------
// Pairing

int Duality::max_weight(const Functional& f) const {
  int w = -1;
  for (const auto& [k, v] : f.sym) w = std::max(w, weight(k));
  for (const auto& d : f.deferred) {
    int l = max_weight(*d.left), r = max_weight(*d.right);
    if (l >= 0 && r >= 0) w = std::max(w, l + r);
  }
  return w;
}

std::set<Exps> Duality::roots(const Functional& f) const {
  std::set<Exps> out;
  for (const auto& [k, v] : f.sym) out.insert(root(k));
  for (const auto& d : f.deferred) {
    auto l = roots(*d.left), r = roots(*d.right);
    for (const auto& x : l)
      for (const auto& y : r) out.insert(x + y);
  }
  return out;
}

Ratio Duality::pair(const Functional& f, const BasisIdx& b) const {
  Ratio v;
  auto it = f.sym.find(SectorKey{b.x, b.y});
  if (it != f.sym.end()) v += it->second(b.m);
  for (const auto& d : f.deferred) v += pair_deferred(d, b);
  return v;
}

Ratio Duality::pair(const Functional& f, const NCPoly& p) const {
  Ratio v;
  for (const auto& [w, c] : p.terms()) v += c * pair(f, basis_of(full_.alphabet, w));
  return v;
}

Ratio Duality::pair_deferred(const Functional::Deferred& d, const BasisIdx& b) const {
  int wl = max_weight(*d.left), wr = max_weight(*d.right);
  if (wl < 0 || wr < 0 || weight(b) > wl + wr) return Ratio();
  Functional whole;
  whole.deferred.push_back(d);
  if (!roots(whole).count(root(b))) return Ratio();
  bool pm = d.left->plus_type() && d.right->minus_type();
  NCPoly delta = coproduct(b, pm, wl, wr);
  const Alphabet& alpha = gauss_table(pm).target.alphabet;
  Ratio v;
  for (const auto& [w, c] : delta.terms()) {
    Word w0, w1;
    for (Letter l : w) (alpha.at(l).copy == 0 ? w0 : w1).push_back(l);
    Ratio l = pair(*d.left, basis_of(alpha, w0));
    if (l.is_zero()) continue;
    v += c * l * pair(*d.right, basis_of(alpha, w1));
  }
  return d.coeff * v;
}

Ratio Duality::comul(const Functional& f, const BasisIdx& l1, const BasisIdx& l2) const {
  return pair(f, full_.system.normal_form_word(word_of(l1) + word_of(l2)));
}

Mat Duality::rho(const Functional& f) const {
  // z_i^j has terms of weight up to 2(N-1); a lower cap would drop them from products
  if (degree_ < 2 * (n() - 1)) throw Error("rho needs degree >= 2(N-1)");
  Mat m(n(), 1);
  for (int i = 1; i <= n(); ++i)
    for (int j = 1; j <= n(); ++j)
      m(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) =
          pair(f, factorization_image(full_, i, j));
  return m;
}

// ---------------------------------------------------------------------------
// Coproducts

NCPoly Duality::truncate(const NCPoly& p, const Alphabet& alpha, int cap0, int cap1) const {
  NCPoly out;
  for (const auto& [w, c] : p.terms()) {
    int w0 = 0, w1 = 0;
    for (Letter l : w) {
      const Symbol& s = alpha.at(l);
      (s.copy == 0 ? w0 : w1) += letter_weight(s);
    }
    if (w0 <= cap0 && w1 <= cap1) out.add(w, c);
  }
  return out;
}

NCPoly Duality::borel_coproduct(const Word& w, bool minus_side, int cap0, int cap1) const {
  if (w.empty()) return NCPoly(Ratio(1));
  auto key = std::make_tuple(w, minus_side, cap0, cap1);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = borel_cache_.find(key);
    if (it != borel_cache_.end()) return it->second;
  }
  const Presentation& dbl = minus_side ? minus2_ : plus2_;
  const auto& table = minus_side ? minus_table_ : plus_table_;
  NCPoly head = borel_coproduct(w.substr(0, w.size() - 1), minus_side, cap0, cap1);
  NCPoly r = truncate(dbl.system.normal_form(head * table[w.back()]), dbl.alphabet, cap0, cap1);
  std::lock_guard<std::mutex> lock(mu_);
  borel_cache_.emplace(key, r);
  return r;
}

Functional Duality::mul_borel(const Functional& f, const Functional& g, bool minus_side) const {
  Functional out;
  int wf = max_weight(f), wg = max_weight(g);
  if (wf < 0 || wg < 0) return out;
  const Presentation& single = minus_side ? minus_ : plus_;
  const Presentation& dbl = minus_side ? minus2_ : plus2_;
  for (const auto& key : keys(std::min(degree_, wf + wg), minus_side, !minus_side)) {
    BasisIdx b{key.x, Exps(static_cast<std::size_t>(n()), 0), key.y};
    NCPoly delta = borel_coproduct(word_in(single.alphabet, xsym_, ysym_, b), minus_side, wf, wg);
    LatticeFn acc;
    for (const auto& [w, c] : delta.terms()) {
      Word w0, w1;
      for (Letter l : w) (dbl.alphabet.at(l).copy == 0 ? w0 : w1).push_back(l);
      BasisIdx b0 = basis_of(dbl.alphabet, w0), b1 = basis_of(dbl.alphabet, w1);
      auto fi = f.sym.find(SectorKey{b0.x, b0.y});
      if (fi == f.sym.end()) continue;
      auto gi = g.sym.find(SectorKey{b1.x, b1.y});
      if (gi == g.sym.end()) continue;
      acc += c * (fi->second.shifted(b0.m) * gi->second.shifted(b1.m));
    }
    out += [&] {
      Functional t;
      if (!acc.is_zero()) t.sym.emplace(key, acc);
      return t;
    }();
  }
  return out;
}

namespace {

enum class Piece { Lattice, Minus, Plus, Mixed, Deferred };

std::vector<std::pair<Piece, Functional>> split(const Functional& f) {
  Functional parts[4];
  for (const auto& [k, v] : f.sym) {
    bool x0 = all_zero(k.x), y0 = all_zero(k.y);
    int idx = x0 && y0 ? 0 : (y0 ? 1 : (x0 ? 2 : 3));
    parts[idx].sym.emplace(k, v);
  }
  std::vector<std::pair<Piece, Functional>> out;
  const Piece kinds[4] = {Piece::Lattice, Piece::Minus, Piece::Plus, Piece::Mixed};
  for (int t = 0; t < 4; ++t)
    if (!parts[t].is_zero()) out.emplace_back(kinds[t], parts[t]);
  for (const auto& d : f.deferred) {
    Functional one;
    one.deferred.push_back(d);
    out.emplace_back(Piece::Deferred, one);
  }
  return out;
}

}  // namespace

Functional Duality::mul(const Functional& f, const Functional& g) const {
  Functional out;
  auto is_minus = [](Piece p) { return p == Piece::Lattice || p == Piece::Minus; };
  auto is_plus = [](Piece p) { return p == Piece::Lattice || p == Piece::Plus; };
  for (const auto& [pf, ff] : split(f))
    for (const auto& [pg, gg] : split(g)) {
      if (is_minus(pf) && is_minus(pg)) {
        out += mul_borel(ff, gg, true);
      } else if (is_plus(pf) && is_plus(pg)) {
        out += mul_borel(ff, gg, false);
      } else if (is_minus(pf) && is_plus(pg)) {
        // (pi_- ⊗ pi_+) Delta sends X^a z^m Y^b to X^a z^m ⊗ z^m Y^b
        for (const auto& [kf, vf] : ff.sym)
          for (const auto& [kg, vg] : gg.sym) {
            SectorKey k{kf.x, kg.y};
            if (weight(k) > degree_) continue;
            Functional t;
            LatticeFn prod = vf * vg;
            if (!prod.is_zero()) t.sym.emplace(k, prod);
            out += t;
          }
      } else {
        Functional t;
        t.deferred.push_back({Ratio(1), std::make_shared<const Functional>(ff), std::make_shared<const Functional>(gg)});
        out += t;
      }
    }
  return out;
}

Functional Duality::pow(const Functional& f, int k) const {
  Functional r = counit();
  for (int t = 0; t < k; ++t) r = mul(r, f);
  return r;
}

Functional Duality::commutator(const Functional& f, const Functional& g, const Ratio& c) const {
  return mul(f, g) - c * mul(g, f);
}

Duality::CoproductTable Duality::build_gauss(bool plus_minus) const {
  const Presentation& p0 = plus_minus ? plus_ : full_;
  const Presentation& p1 = plus_minus ? minus_ : full_;
  CoproductTable t;
  t.target = tensor_product({&p0, &p1});
  t.offset = {0, p0.alphabet.size()};
  const Alphabet& ta = t.target.alphabet;
  const RewriteSystem& sys = t.target.system;
  const int d = degree_;
  auto lift = [&](const NCPoly& p, const Presentation& src, int copy) {
    NCPoly out;
    for (const auto& [w, c] : p.terms()) {
      Word v;
      for (Letter l : w) {
        const Symbol& s = src.alphabet.at(l);
        v.push_back(ta.get(s.kind, s.i, s.j, copy));
      }
      out.add(v, c);
    }
    return out;
  };
  auto trunc = [&](const NCPoly& p) { return truncate(p, ta, d, d); };
  auto nf = [&](const NCPoly& p) { return trunc(sys.normal_form(p)); };

  const int n = this->n();
  std::vector<std::vector<NCPoly>> W(static_cast<std::size_t>(n), std::vector<NCPoly>(static_cast<std::size_t>(n)));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      NCPoly s;
      for (int k = 1; k <= n; ++k)
        s += lift(factorization_image(p0, i, k), p0, 0) * lift(factorization_image(p1, k, j), p1, 1);
      W[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = nf(s);
    }

  t.images.assign(full_.alphabet.size(), NCPoly());
  auto set_image = [&](Kind kind, int i, int j, const NCPoly& v) { t.images[full_.alphabet.get(kind, i, j)] = v; };
  for (int k = 1; k <= n; ++k) {
    auto K = static_cast<std::size_t>(k - 1);
    const NCPoly& dk = W[K][K];
    // weight-zero part: a single lattice monomial
    NCPoly lead;
    for (const auto& [w, c] : dk.terms()) {
      int wt = 0;
      for (Letter l : w) wt += letter_weight(ta.at(l));
      if (wt == 0) lead.add(w, c);
    }
    if (lead.size() != 1) throw Error("diagonal Gauss entry without a unique group-like part");
    const auto& [lw, lc] = *lead.terms().begin();
    Word inv;
    for (auto it = lw.rbegin(); it != lw.rend(); ++it) {
      const Symbol& s = ta.at(*it);
      if (s.kind != Kind::ZDiag && s.kind != Kind::ZDiagInv) throw Error("group-like part is not a lattice word");
      inv.push_back(ta.get(s.kind == Kind::ZDiag ? Kind::ZDiagInv : Kind::ZDiag, s.i, 0, s.copy));
    }
    NCPoly minv = sys.normal_form(NCPoly::word(inv, lc.inverse()));
    NCPoly s = nf(minv * (dk - lead));
    NCPoly dinv = minv, term = minv;
    for (int r = 1; r <= 2 * d; ++r) {
      term = nf(Ratio(-1) * (s * term));
      if (term.is_zero()) break;
      dinv += term;
    }
    set_image(Kind::ZDiag, k, 0, dk);
    set_image(Kind::ZDiagInv, k, 0, dinv);
    std::vector<NCPoly> xcol(static_cast<std::size_t>(n)), yrow(static_cast<std::size_t>(n));
    for (int i = k + 1; i <= n; ++i) {
      auto I = static_cast<std::size_t>(i - 1);
      xcol[I] = nf(W[I][K] * dinv);
      yrow[I] = nf(dinv * W[K][I]);
      set_image(Kind::X, i, k, xcol[I]);
      set_image(Kind::Y, k, i, yrow[I]);
    }
    for (int i = k + 1; i <= n; ++i)
      for (int j = k + 1; j <= n; ++j) {
        auto I = static_cast<std::size_t>(i - 1), J = static_cast<std::size_t>(j - 1);
        W[I][J] -= nf(nf(xcol[I] * dk) * yrow[J]);
      }
  }
  return t;
}

const Duality::CoproductTable& Duality::gauss_table(bool plus_minus) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = plus_minus ? gauss_pm_ : gauss_ff_;
  if (!slot) slot = std::make_unique<CoproductTable>(build_gauss(plus_minus));
  return *slot;
}

NCPoly Duality::word_coproduct(const Word& w, bool plus_minus, int cap0, int cap1) const {
  if (w.empty()) return NCPoly(Ratio(1));
  auto key = std::make_tuple(w, plus_minus, cap0, cap1);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = full_cache_.find(key);
    if (it != full_cache_.end()) return it->second;
  }
  const CoproductTable& t = gauss_table(plus_minus);
  NCPoly head = word_coproduct(w.substr(0, w.size() - 1), plus_minus, cap0, cap1);
  NCPoly r = truncate(t.target.system.normal_form(head * t.images[w.back()]), t.target.alphabet, cap0, cap1);
  std::lock_guard<std::mutex> lock(mu_);
  full_cache_.emplace(key, r);
  return r;
}

NCPoly Duality::coproduct(const BasisIdx& b, bool plus_minus, int cap0, int cap1) const {
  return word_coproduct(word_of(b), plus_minus, std::min(cap0, degree_), std::min(cap1, degree_));
}

}  // namespace qtwist
