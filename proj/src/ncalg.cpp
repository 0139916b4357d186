#include "qtwist/ncalg.hpp"

#include <algorithm>
#include <set>

namespace qtwist {

namespace {

Ratio qv(const QParams& p, int i, int j) {
  return Ratio(p.q[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]);
}

bool terms_below(const NCPoly& p, const Word& w) {
  DegLex lt;
  for (const auto& [u, c] : p.terms())
    if (!lt(u, w)) return false;
  return true;
}

NCPoly shift_letters(const NCPoly& p, const std::function<Letter(Letter)>& f) {
  NCPoly r;
  for (const auto& [w, c] : p.terms()) {
    Word u = w;
    for (auto& l : u) l = f(l);
    r.add(u, c);
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Alphabet

Letter Alphabet::add(const Symbol& s) {
  if (find(s.kind, s.i, s.j, s.copy)) throw Error("duplicate generator " + name(*find(s.kind, s.i, s.j, s.copy)));
  symbols_.push_back(s);
  return static_cast<Letter>(symbols_.size() - 1);
}

std::optional<Letter> Alphabet::find(Kind kind, int i, int j, int copy) const {
  for (std::size_t l = 0; l < symbols_.size(); ++l) {
    const Symbol& s = symbols_[l];
    if (s.kind == kind && s.i == i && s.j == j && s.copy == copy) return static_cast<Letter>(l);
  }
  return std::nullopt;
}

Letter Alphabet::get(Kind kind, int i, int j, int copy) const {
  auto l = find(kind, i, j, copy);
  if (!l) throw Error("undefined generator");
  return *l;
}

std::string Alphabet::name(Letter l) const {
  const Symbol& s = symbols_.at(l);
  std::string base;
  auto num = [](int v) { return std::to_string(v); };
  switch (s.kind) {
    case Kind::XCoord: base = "x" + num(s.i); break;
    case Kind::Theta: base = "th" + num(s.i); break;
    case Kind::Z: base = "z" + num(s.i) + "^" + num(s.j); break;
    case Kind::ZDiag: base = "z" + num(s.i); break;
    case Kind::ZDiagInv: base = "z" + num(s.i) + "^-1"; break;
    case Kind::X: base = "X" + num(s.i) + "^" + num(s.j); break;
    case Kind::Y: base = "Y" + num(s.i) + "^" + num(s.j); break;
  }
  return base + std::string(static_cast<std::size_t>(s.copy), '\'');
}

std::string Alphabet::word_name(const Word& w) const {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) out += ' ';
    out += name(w[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// NCPoly

NCPoly NCPoly::word(const Word& w, const Ratio& c) {
  NCPoly p;
  p.add(w, c);
  return p;
}

void NCPoly::add(const Word& w, const Ratio& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    terms_.emplace(w, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Ratio NCPoly::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Ratio(0) : it->second;
}

NCPoly NCPoly::operator-() const {
  NCPoly r = *this;
  for (auto& [w, c] : r.terms_) c = -c;
  return r;
}

NCPoly& NCPoly::operator+=(const NCPoly& o) {
  for (const auto& [w, c] : o.terms_) add(w, c);
  return *this;
}

NCPoly& NCPoly::operator-=(const NCPoly& o) {
  for (const auto& [w, c] : o.terms_) add(w, -c);
  return *this;
}

NCPoly operator*(const NCPoly& x, const NCPoly& y) {
  NCPoly r;
  for (const auto& [u, c] : x.terms_)
    for (const auto& [v, d] : y.terms_) r.add(u + v, c * d);
  return r;
}

NCPoly operator*(const Ratio& c, const NCPoly& p) {
  NCPoly r;
  if (c.is_zero()) return r;
  for (const auto& [w, d] : p.terms_) r.terms_.emplace(w, c * d);
  return r;
}

bool NCPoly::operator==(const NCPoly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  auto it = o.terms_.begin();
  for (const auto& [w, c] : terms_) {
    if (w != it->first || !(c == it->second)) return false;
    ++it;
  }
  return true;
}

std::string NCPoly::to_string(const Alphabet& alpha, const ParamSpace& space) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!out.empty()) out += " + ";
    out += it->second.to_string(space) + "*" + alpha.word_name(it->first);
  }
  return out;
}

NCPoly qcommutator(const NCPoly& x, const NCPoly& y, const Ratio& c) { return x * y - c * (y * x); }

// ---------------------------------------------------------------------------
// RewriteSystem

RewriteSystem::RewriteSystem(std::size_t alphabet_size, std::size_t budget)
    : n_(alphabet_size), budget_(budget), table_(alphabet_size * alphabet_size),
      mu_(std::make_unique<std::mutex>()) {}

RewriteSystem::RewriteSystem(const RewriteSystem& o)
    : n_(o.n_), budget_(o.budget_), table_(o.table_), mu_(std::make_unique<std::mutex>()) {}

RewriteSystem& RewriteSystem::operator=(const RewriteSystem& o) {
  if (this != &o) {
    n_ = o.n_;
    budget_ = o.budget_;
    table_ = o.table_;
    std::lock_guard<std::mutex> lock(*mu_);
    cache_.clear();
  }
  return *this;
}

void RewriteSystem::set_rule(Letter x, Letter y, NCPoly rhs) {
  if (x >= n_ || y >= n_) throw Error("rule letter outside the alphabet");
  Word lhs{x, y};
  if (!terms_below(rhs, lhs)) throw Error("rule right side is not smaller than its left side");
  table_[x * n_ + y] = std::move(rhs);
  std::lock_guard<std::mutex> lock(*mu_);
  cache_.clear();
}

const NCPoly* RewriteSystem::rule(Letter x, Letter y) const {
  const auto& r = table_[x * n_ + y];
  return r ? &*r : nullptr;
}

std::vector<std::pair<Word, NCPoly>> RewriteSystem::rules() const {
  std::vector<std::pair<Word, NCPoly>> out;
  for (std::size_t x = 0; x < n_; ++x)
    for (std::size_t y = 0; y < n_; ++y)
      if (table_[x * n_ + y]) out.emplace_back(Word{static_cast<Letter>(x), static_cast<Letter>(y)}, *table_[x * n_ + y]);
  return out;
}

bool RewriteSystem::is_normal(const Word& w) const {
  for (std::size_t k = 0; k + 1 < w.size(); ++k)
    if (rule(w[k], w[k + 1])) return false;
  return true;
}

// u is normal; returns nf(u x). Only the last letter of u can interact with x.
NCPoly RewriteSystem::mul_normal(const Word& u, Letter x, std::size_t& used) const {
  if (u.empty()) return NCPoly::letter(x);
  const NCPoly* r = rule(u.back(), x);
  if (!r) {
    Word w = u;
    w.push_back(x);
    return NCPoly::word(w);
  }
  auto key = std::make_pair(u, x);
  {
    std::lock_guard<std::mutex> lock(*mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  if (++used > budget_) throw BudgetExceeded("rewriting budget exceeded");
  Word prefix = u.substr(0, u.size() - 1);
  NCPoly result;
  for (const auto& [w, c] : r->terms()) {
    NCPoly acc = NCPoly::word(prefix);
    for (Letter l : w) acc = mul_normal_poly(acc, l, used);
    result += c * acc;
  }
  std::lock_guard<std::mutex> lock(*mu_);
  cache_.emplace(key, result);
  return result;
}

NCPoly RewriteSystem::mul_normal_poly(const NCPoly& p, Letter x, std::size_t& used) const {
  NCPoly r;
  for (const auto& [w, c] : p.terms()) r += c * mul_normal(w, x, used);
  return r;
}

NCPoly RewriteSystem::normal_form_word(const Word& w) const {
  std::size_t used = 0;
  NCPoly acc(Ratio(1));
  for (Letter l : w) acc = mul_normal_poly(acc, l, used);
  return acc;
}

NCPoly RewriteSystem::normal_form(const NCPoly& p) const {
  std::size_t used = 0;
  NCPoly out;
  for (const auto& [w, c] : p.terms()) {
    NCPoly acc(Ratio(1));
    for (Letter l : w) acc = mul_normal_poly(acc, l, used);
    out += c * acc;
  }
  return out;
}

void orient_relations(RewriteSystem& sys, const std::vector<NCPoly>& relations) {
  std::set<Word, DegLex> words;
  for (const auto& r : relations)
    for (const auto& [w, c] : r.terms()) words.insert(w);
  // columns in descending order so pivots land on leading words
  std::vector<Word> cols(words.rbegin(), words.rend());
  std::map<Word, std::size_t, DegLex> index;
  for (std::size_t k = 0; k < cols.size(); ++k) index[cols[k]] = k;
  std::vector<RVec> rows;
  for (const auto& r : relations) {
    if (r.is_zero()) continue;
    RVec v(cols.size());
    for (const auto& [w, c] : r.terms()) v[index[w]] = c;
    rows.push_back(std::move(v));
  }
  auto pivots = row_reduce(rows);
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    const Word& lead = cols[pivots[k]];
    if (lead.size() != 2) throw Error("relation with a leading word of length " + std::to_string(lead.size()));
    if (sys.rule(lead[0], lead[1])) throw Error("left side already has a rule");
    NCPoly rhs;
    for (std::size_t c = pivots[k] + 1; c < cols.size(); ++c)
      if (!rows[k][c].is_zero()) rhs.add(cols[c], -rows[k][c]);
    sys.set_rule(lead[0], lead[1], std::move(rhs));
  }
}

std::vector<Word> local_confluence(const RewriteSystem& sys, int degree) {
  std::vector<Word> failures;
  if (degree < 3) return failures;
  const std::size_t n = sys.alphabet_size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const NCPoly* r1 = sys.rule(static_cast<Letter>(x), static_cast<Letter>(y));
      if (!r1) continue;
      for (std::size_t z = 0; z < n; ++z) {
        const NCPoly* r2 = sys.rule(static_cast<Letter>(y), static_cast<Letter>(z));
        if (!r2) continue;
        NCPoly left = sys.normal_form(*r1 * NCPoly::letter(static_cast<Letter>(z)));
        NCPoly right = sys.normal_form(NCPoly::letter(static_cast<Letter>(x)) * *r2);
        if (!(left == right))
          failures.push_back(Word{static_cast<Letter>(x), static_cast<Letter>(y), static_cast<Letter>(z)});
      }
    }
  return failures;
}

std::size_t graded_dim(const RewriteSystem& sys, int degree, const std::vector<Letter>& letters) {
  std::vector<Letter> ls = letters;
  if (ls.empty())
    for (std::size_t l = 0; l < sys.alphabet_size(); ++l) ls.push_back(static_cast<Letter>(l));
  if (degree <= 0) return degree == 0 ? 1 : 0;
  std::vector<std::size_t> count(ls.size(), 1);
  for (int d = 1; d < degree; ++d) {
    std::vector<std::size_t> next(ls.size(), 0);
    for (std::size_t a = 0; a < ls.size(); ++a)
      for (std::size_t b = 0; b < ls.size(); ++b)
        if (!sys.rule(ls[a], ls[b])) next[b] += count[a];
    count = std::move(next);
  }
  std::size_t total = 0;
  for (auto c : count) total += c;
  return total;
}

std::vector<std::string> dump_rules(const Presentation& p, const ParamSpace& space) {
  std::vector<std::string> out;
  for (const auto& [lhs, rhs] : p.system.rules())
    out.push_back(p.alphabet.word_name(lhs) + " -> " + rhs.to_string(p.alphabet, space));
  return out;
}

// ---------------------------------------------------------------------------
// Presets

Presentation preset_quantum_plane(const Mat& p) {
  const int n = p.n();
  Presentation pr;
  pr.name = "quantum-plane";
  for (int i = 1; i <= n; ++i) pr.alphabet.add({Kind::XCoord, i});
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l) {
      NCPoly rel;
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
          rel.add(Word{static_cast<Letter>(i - 1), static_cast<Letter>(j - 1)}, p.at({i, j}, {k, l}));
      rel.add(Word{static_cast<Letter>(k - 1), static_cast<Letter>(l - 1)}, Ratio(-1));
      if (!rel.is_zero()) pr.relations.push_back(rel);
    }
  pr.system = RewriteSystem(pr.alphabet.size());
  orient_relations(pr.system, pr.relations);
  return pr;
}

namespace {

std::vector<NCPoly> theta_relations(const Mat& p, const Scalar& a, Letter base) {
  const int n = p.n();
  std::vector<NCPoly> rels;
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l) {
      NCPoly rel;
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
          rel.add(Word{static_cast<Letter>(base + i - 1), static_cast<Letter>(base + j - 1)}, p.at({i, j}, {k, l}));
      rel.add(Word{static_cast<Letter>(base + k - 1), static_cast<Letter>(base + l - 1)}, Ratio(a));
      if (!rel.is_zero()) rels.push_back(rel);
    }
  return rels;
}

}  // namespace

Presentation preset_theta(const Mat& p, const Scalar& a) {
  Presentation pr;
  pr.name = "theta";
  for (int i = 1; i <= p.n(); ++i) pr.alphabet.add({Kind::Theta, i});
  pr.relations = theta_relations(p, a, 0);
  pr.system = RewriteSystem(pr.alphabet.size());
  orient_relations(pr.system, pr.relations);
  return pr;
}

Presentation preset_calculus(const Mat& p, const Scalar& a) {
  const int n = p.n();
  Presentation pr;
  pr.name = "calculus";
  for (int i = 1; i <= n; ++i) pr.alphabet.add({Kind::XCoord, i});
  for (int i = 1; i <= n; ++i) pr.alphabet.add({Kind::Theta, i});
  const Letter th = static_cast<Letter>(n);
  Presentation plane = preset_quantum_plane(p);
  pr.relations = plane.relations;
  for (auto& r : theta_relations(p, a, th)) pr.relations.push_back(r);
  // a θ^i x^j = x^k θ^l P_{kl}^{ij}
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      NCPoly rel;
      rel.add(Word{static_cast<Letter>(th + i - 1), static_cast<Letter>(j - 1)}, Ratio(a));
      for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l)
          rel.add(Word{static_cast<Letter>(k - 1), static_cast<Letter>(th + l - 1)}, -p.at({k, l}, {i, j}));
      pr.relations.push_back(rel);
    }
  pr.system = RewriteSystem(pr.alphabet.size());
  orient_relations(pr.system, pr.relations);
  return pr;
}

Presentation preset_pseudogroup(const QParams& params) {
  const int n = params.n();
  Presentation pr;
  pr.name = "pseudogroup";
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) pr.alphabet.add({Kind::Z, i, j});
  auto z = [&](const ZIdx& idx) { return pr.alphabet.get(Kind::Z, idx.row, idx.col); };
  for (const auto& rel : pseudogroup_relations(params)) {
    NCPoly p;
    for (const auto& t : rel.terms) p.add(Word{z(t.first), z(t.second)}, t.coeff);
    if (!p.is_zero()) pr.relations.push_back(p);
  }
  pr.system = RewriteSystem(pr.alphabet.size());
  orient_relations(pr.system, pr.relations);
  return pr;
}

Ratio coeff_C(const QParams& p, int k, int i, int j) {
  Ratio c = qv(p, i, k) * qv(p, k, j);
  if (j <= k && k < i) c /= Ratio(p.a);
  return c;
}

Ratio coeff_Cprime(const QParams& p, int k, int i, int j) {
  Ratio c = qv(p, i, k) * qv(p, k, j);
  if (i < k && k <= j) c *= Ratio(p.a);
  return c;
}

namespace {

void check_sector(const std::vector<NCPoly>& rels) {
  for (const auto& r : rels) {
    bool quadratic = false;
    for (const auto& [w, c] : r.terms()) quadratic = quadratic || w.size() == 2;
    if (!quadratic) throw Error("restricted relations are inconsistent: a relation of degree below two survives");
  }
}

}  // namespace

std::vector<NCPoly> derive_minus_relations(const QParams& params, const Alphabet& alpha) {
  std::vector<NCPoly> out;
  for (const auto& rel : pseudogroup_relations(params)) {
    NCPoly p;
    for (const auto& t : rel.terms) {
      const ZIdx& f = t.first;
      const ZIdx& s = t.second;
      if (f.row < f.col || s.row < s.col) continue;
      Word w;
      if (f.row != f.col) w.push_back(alpha.get(Kind::X, f.row, f.col));
      Ratio c = t.coeff;
      // X_f x_{f.col} X_s x_{s.col}: move x_{f.col} to the right past X_s
      if (s.row != s.col) {
        w.push_back(alpha.get(Kind::X, s.row, s.col));
        c *= coeff_C(params, f.col, s.row, s.col);
      }
      p.add(w, c);
    }
    if (!p.is_zero()) out.push_back(p);
  }
  check_sector(out);
  return out;
}

std::vector<NCPoly> derive_plus_relations(const QParams& params, const Alphabet& alpha) {
  std::vector<NCPoly> out;
  for (const auto& rel : pseudogroup_relations(params)) {
    NCPoly p;
    for (const auto& t : rel.terms) {
      const ZIdx& f = t.first;
      const ZIdx& s = t.second;
      if (f.row > f.col || s.row > s.col) continue;
      Word w;
      Ratio c = t.coeff;
      // y_{f.row} Y_f y_{s.row} Y_s: move y_{s.row} to the left past Y_f
      if (f.row != f.col) {
        w.push_back(alpha.get(Kind::Y, f.row, f.col));
        c /= coeff_Cprime(params, s.row, f.row, f.col);
      }
      if (s.row != s.col) w.push_back(alpha.get(Kind::Y, s.row, s.col));
      p.add(w, c);
    }
    if (!p.is_zero()) out.push_back(p);
  }
  check_sector(out);
  return out;
}

Presentation preset_factored(const QParams& params, bool include_y, bool include_x) {
  const int n = params.n();
  Presentation pr;
  pr.name = include_y ? (include_x ? "factored" : "borel-plus") : "borel-minus";
  std::vector<Letter> xs, ys, zs, zinv;
  for (int j = 1; j <= n && include_x; ++j)
    for (int i = j + 1; i <= n; ++i) xs.push_back(pr.alphabet.add({Kind::X, i, j}));
  for (int k = 1; k <= n; ++k) {
    zs.push_back(pr.alphabet.add({Kind::ZDiag, k}));
    zinv.push_back(pr.alphabet.add({Kind::ZDiagInv, k}));
  }
  if (include_y)
    for (int col = n; col >= 1; --col)
      for (int row = col - 1; row >= 1; --row) ys.push_back(pr.alphabet.add({Kind::Y, row, col}));

  pr.system = RewriteSystem(pr.alphabet.size());
  if (include_x) orient_relations(pr.system, derive_minus_relations(params, pr.alphabet));
  if (include_y) orient_relations(pr.system, derive_plus_relations(params, pr.alphabet));

  auto& sys = pr.system;
  for (int k = 1; k <= n; ++k) {
    Letter zk = zs[k - 1], zki = zinv[k - 1];
    sys.set_rule(zk, zki, NCPoly(Ratio(1)));
    sys.set_rule(zki, zk, NCPoly(Ratio(1)));
    for (int l = 1; l < k; ++l)
      for (Letter big : {zk, zki})
        for (Letter small : {zs[l - 1], zinv[l - 1]}) sys.set_rule(big, small, NCPoly::word(Word{small, big}));
    for (Letter x : xs) {
      const Symbol& s = pr.alphabet.at(x);
      Ratio c = coeff_C(params, k, s.i, s.j);
      sys.set_rule(zk, x, NCPoly::word(Word{x, zk}, c));
      sys.set_rule(zki, x, NCPoly::word(Word{x, zki}, c.inverse()));
    }
    for (Letter y : ys) {
      const Symbol& s = pr.alphabet.at(y);
      Ratio c = coeff_Cprime(params, k, s.i, s.j);
      sys.set_rule(y, zk, NCPoly::word(Word{zk, y}, c.inverse()));
      sys.set_rule(y, zki, NCPoly::word(Word{zki, y}, c));
    }
  }
  for (Letter y : ys)
    for (Letter x : xs) sys.set_rule(y, x, NCPoly::word(Word{x, y}));
  for (const auto& [lhs, rhs] : sys.rules()) pr.relations.push_back(NCPoly::word(lhs) - rhs);
  return pr;
}

NCPoly factorization_image(const Presentation& f, int i, int j) {
  NCPoly out;
  for (int k = 1; k <= std::min(i, j); ++k) {
    Word w;
    if (k != i) {
      auto x = f.alphabet.find(Kind::X, i, k);
      if (!x) continue;
      w.push_back(*x);
    }
    w.push_back(f.alphabet.get(Kind::ZDiag, k));
    if (k != j) {
      auto y = f.alphabet.find(Kind::Y, k, j);
      if (!y) continue;
      w.push_back(*y);
    }
    out.add(w, Ratio(1));
  }
  return out;
}

std::vector<NCPoly> substitute_factorization(const QParams& params, const Presentation& factored) {
  std::vector<NCPoly> out;
  for (const auto& rel : pseudogroup_relations(params)) {
    NCPoly img;
    for (const auto& t : rel.terms)
      img += t.coeff * (factorization_image(factored, t.first.row, t.first.col) *
                        factorization_image(factored, t.second.row, t.second.col));
    out.push_back(factored.system.normal_form(img));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tensor powers and coproducts

Letter copy_letter(const Presentation& base, Letter l, int copy) {
  return static_cast<Letter>(static_cast<std::size_t>(copy) * base.alphabet.size() + l);
}

Presentation tensor_product(const std::vector<const Presentation*>& factors) {
  Presentation t;
  std::vector<std::size_t> offset;
  std::size_t budget = 0;
  for (std::size_t c = 0; c < factors.size(); ++c) {
    const Presentation& p = *factors[c];
    t.name += (c ? "*" : "") + p.name;
    offset.push_back(t.alphabet.size());
    budget = std::max(budget, p.system.budget());
    for (std::size_t l = 0; l < p.alphabet.size(); ++l) {
      Symbol s = p.alphabet.at(static_cast<Letter>(l));
      s.copy = static_cast<int>(c);
      t.alphabet.add(s);
    }
  }
  t.system = RewriteSystem(t.alphabet.size(), budget);
  for (std::size_t c = 0; c < factors.size(); ++c) {
    auto sh = [&](Letter l) { return static_cast<Letter>(offset[c] + l); };
    for (const auto& [lhs, rhs] : factors[c]->system.rules())
      t.system.set_rule(sh(lhs[0]), sh(lhs[1]), shift_letters(rhs, sh));
    for (const auto& r : factors[c]->relations) t.relations.push_back(shift_letters(r, sh));
  }
  for (std::size_t c2 = 1; c2 < factors.size(); ++c2)
    for (std::size_t c1 = 0; c1 < c2; ++c1)
      for (std::size_t x = 0; x < factors[c2]->alphabet.size(); ++x)
        for (std::size_t y = 0; y < factors[c1]->alphabet.size(); ++y) {
          Letter hi = static_cast<Letter>(offset[c2] + x), lo = static_cast<Letter>(offset[c1] + y);
          t.system.set_rule(hi, lo, NCPoly::word(Word{lo, hi}));
        }
  return t;
}

Presentation tensor_power(const Presentation& p, int copies) {
  std::vector<const Presentation*> f(static_cast<std::size_t>(copies), &p);
  Presentation t = tensor_product(f);
  t.name = p.name + "^" + std::to_string(copies);
  return t;
}

NCPoly apply_hom(const NCPoly& p, const std::vector<NCPoly>& images, const RewriteSystem& target) {
  NCPoly out;
  for (const auto& [w, c] : p.terms()) {
    NCPoly acc(Ratio(1));
    for (Letter l : w) {
      if (l >= images.size() || images[l].is_zero()) throw Error("undefined generator in coproduct table");
      acc = target.normal_form(acc * images[l]);
    }
    out += c * acc;
  }
  return out;
}

std::vector<NCPoly> coproduct_pseudogroup(const Presentation& p, const Presentation& doubled) {
  int n = 0;
  for (std::size_t l = 0; l < p.alphabet.size(); ++l) n = std::max(n, p.alphabet.at(static_cast<Letter>(l)).i);
  std::vector<NCPoly> table(p.alphabet.size());
  for (std::size_t l = 0; l < p.alphabet.size(); ++l) {
    const Symbol& s = p.alphabet.at(static_cast<Letter>(l));
    if (s.kind != Kind::Z) throw Error("undefined generator in coproduct table");
    NCPoly d;
    for (int k = 1; k <= n; ++k)
      d.add(Word{doubled.alphabet.get(Kind::Z, s.i, k, 0), doubled.alphabet.get(Kind::Z, k, s.j, 1)}, Ratio(1));
    table[l] = d;
  }
  return table;
}

std::vector<NCPoly> coproduct_factored_minus(const Presentation& p, const Presentation& doubled) {
  const Alphabet& da = doubled.alphabet;
  std::vector<NCPoly> table(p.alphabet.size());
  for (std::size_t l = 0; l < p.alphabet.size(); ++l) {
    const Symbol& s = p.alphabet.at(static_cast<Letter>(l));
    NCPoly d;
    switch (s.kind) {
      case Kind::ZDiag:
      case Kind::ZDiagInv:
        d.add(Word{da.get(s.kind, s.i, 0, 0), da.get(s.kind, s.i, 0, 1)}, Ratio(1));
        break;
      case Kind::X:
        // sum_k X_i^k (x_k / x_j) ⊗ X_k^j, with X_i^i = 1
        for (int k = s.j; k <= s.i; ++k) {
          Word w;
          if (k != s.i) w.push_back(da.get(Kind::X, s.i, k, 0));
          w.push_back(da.get(Kind::ZDiag, k, 0, 0));
          w.push_back(da.get(Kind::ZDiagInv, s.j, 0, 0));
          if (k != s.j) w.push_back(da.get(Kind::X, k, s.j, 1));
          d += doubled.system.normal_form_word(w);
        }
        break;
      default:
        throw Error("undefined generator in coproduct table");
    }
    table[l] = d;
  }
  return table;
}

std::vector<NCPoly> coproduct_factored_plus(const Presentation& p, const Presentation& doubled) {
  const Alphabet& da = doubled.alphabet;
  std::vector<NCPoly> table(p.alphabet.size());
  for (std::size_t l = 0; l < p.alphabet.size(); ++l) {
    const Symbol& s = p.alphabet.at(static_cast<Letter>(l));
    NCPoly d;
    switch (s.kind) {
      case Kind::ZDiag:
      case Kind::ZDiagInv:
        d.add(Word{da.get(s.kind, s.i, 0, 0), da.get(s.kind, s.i, 0, 1)}, Ratio(1));
        break;
      case Kind::Y:
        // sum_k Y_i^k ⊗ (y_k / y_i) Y_k^j, with Y_j^j = 1
        for (int k = s.i; k <= s.j; ++k) {
          Word w;
          if (k != s.i) w.push_back(da.get(Kind::Y, s.i, k, 0));
          w.push_back(da.get(Kind::ZDiagInv, s.i, 0, 1));
          w.push_back(da.get(Kind::ZDiag, k, 0, 1));
          if (k != s.j) w.push_back(da.get(Kind::Y, k, s.j, 1));
          d += doubled.system.normal_form_word(w);
        }
        break;
      default:
        throw Error("undefined generator in coproduct table");
    }
    table[l] = d;
  }
  return table;
}

std::vector<NCPoly> coproduct_relation_residuals(const Presentation& p, const Presentation& doubled,
                                                 const std::vector<NCPoly>& table) {
  std::vector<NCPoly> out;
  for (const auto& r : p.relations) out.push_back(apply_hom(r, table, doubled.system));
  return out;
}

BorelSwap borel_swap(const QParams& params, int i, int j) {
  Presentation minus = preset_factored(params, false);
  Presentation d = tensor_power(minus, 2);
  const Alphabet& da = d.alphabet;
  NCPoly A = NCPoly::letter(da.get(Kind::X, i, j, 0));
  NCPoly B = d.system.normal_form_word(
      Word{da.get(Kind::ZDiag, i, 0, 0), da.get(Kind::ZDiagInv, j, 0, 0), da.get(Kind::X, i, j, 1)});
  BorelSwap out;
  out.ba = d.system.normal_form(B * A);
  out.ab = d.system.normal_form(A * B);
  out.literal = out.ba.is_zero();
  out.commuted = out.ba == Ratio(params.a) * out.ab;
  return out;
}

Ratio coproduct_power_coefficient(const QParams& params, int i, int j, int n) {
  Presentation minus = preset_factored(params, false);
  Presentation d = tensor_power(minus, 2);
  const Alphabet& da = d.alphabet;
  auto table = coproduct_factored_minus(minus, d);
  Letter x = minus.alphabet.get(Kind::X, i, j);
  NCPoly power = apply_hom(NCPoly::word(Word(static_cast<std::size_t>(n), x)), table, d.system);
  Word w(static_cast<std::size_t>(n - 1), da.get(Kind::X, i, j, 0));
  w.push_back(da.get(Kind::ZDiag, i, 0, 0));
  w.push_back(da.get(Kind::ZDiagInv, j, 0, 0));
  w.push_back(da.get(Kind::X, i, j, 1));
  NCPoly target = d.system.normal_form_word(w);
  if (target.size() != 1) throw Error("unexpected normal form of the probe word");
  const auto& [word, c] = *target.terms().begin();
  return power.coeff(word) / c;
}

// ---------------------------------------------------------------------------
// Braid relation and Serre data

BraidEquivalence verify_braid_equivalence(const Mat& p, const Scalar& a) {
  BraidEquivalence out;
  out.braid_holds = check_braid(p).is_zero();
  out.hecke_holds = check_hecke(p, a).is_zero();
  out.overlap_failures = local_confluence(preset_calculus(p, a).system, 3);
  return out;
}

Mat perturb_braid(const Mat& p, const Scalar& a) {
  // keep trace 1-a and determinant -a on span{e1⊗e2, e2⊗e1}, so the
  // eigenvalues and therefore the quadratic relation survive
  Mat r = p;
  const Ratio u(1);
  const Ratio s = p.at({1, 2}, {2, 1});
  r.at({1, 2}, {1, 2}) = Ratio(Scalar(1) - a) + u;
  r.at({2, 1}, {2, 1}) = -u;
  r.at({2, 1}, {1, 2}) = (Ratio(a) - u * (Ratio(Scalar(1) - a) + u)) / s;
  return r;
}

std::optional<Ratio> quommutation_constant(const RewriteSystem& sys, const NCPoly& x, const NCPoly& y) {
  NCPoly xy = sys.normal_form(x * y), yx = sys.normal_form(y * x);
  if (yx.is_zero()) return xy.is_zero() ? std::optional<Ratio>(Ratio(0)) : std::nullopt;
  const Word& w = yx.leading();
  Ratio c = xy.coeff(w) / yx.coeff(w);
  if (!(xy == c * yx)) return std::nullopt;
  return c;
}

SerreResidual serre_minus(const Presentation& f, int i, const Ratio& k, const Ratio& r, const Ratio& s) {
  const Alphabet& al = f.alphabet;
  NCPoly xs = NCPoly::letter(al.get(Kind::X, i, i - 1));
  NCPoly xt = NCPoly::letter(al.get(Kind::X, i + 1, i));
  NCPoly comp = NCPoly::letter(al.get(Kind::X, i + 1, i - 1));
  NCPoly c = f.system.normal_form(qcommutator(xt, xs, k));
  SerreResidual out;
  out.composite = c;
  out.first = f.system.normal_form(qcommutator(xs, c, r));
  out.second = f.system.normal_form(qcommutator(xt, c, s));
  return out;
}

SerreResidual serre_plus(const Presentation& f, int i, const Ratio& k, const Ratio& r, const Ratio& s) {
  const Alphabet& al = f.alphabet;
  NCPoly ys = NCPoly::letter(al.get(Kind::Y, i - 1, i));
  NCPoly yt = NCPoly::letter(al.get(Kind::Y, i, i + 1));
  NCPoly c = f.system.normal_form(qcommutator(ys, yt, k));
  SerreResidual out;
  out.composite = c;
  out.first = f.system.normal_form(qcommutator(c, ys, r));
  out.second = f.system.normal_form(qcommutator(c, yt, s));
  return out;
}

}  // namespace qtwist
