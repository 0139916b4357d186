#include "qtwist/ring.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>

namespace qtwist {

namespace {

Rational rational_pow(const Rational& base, long k) {
  if (k == 0) return 1;
  if (base == 0) {
    if (k < 0) throw PoleError();
    return 0;
  }
  mpz_class n = base.get_num(), d = base.get_den();
  mpz_class rn, rd;
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  mpz_pow_ui(rn.get_mpz_t(), n.get_mpz_t(), e);
  mpz_pow_ui(rd.get_mpz_t(), d.get_mpz_t(), e);
  Rational r = k < 0 ? Rational(rd, rn) : Rational(rn, rd);
  r.canonicalize();
  return r;
}

std::optional<mpz_class> exact_root(const mpz_class& x, unsigned long v) {
  if (x < 0) {
    if (v % 2 == 0) return std::nullopt;
    auto r = exact_root(-x, v);
    if (!r) return std::nullopt;
    return -*r;
  }
  mpz_class r;
  if (!mpz_root(r.get_mpz_t(), x.get_mpz_t(), v)) return std::nullopt;
  return r;
}

// base^(u/v), exact or nothing.
std::optional<Rational> rational_pow_frac(const Rational& base, const Rational& exponent) {
  mpz_class u = exponent.get_num(), v = exponent.get_den();
  if (v == 1) return rational_pow(base, u.get_si());
  if (base == 0) {
    if (u < 0) throw PoleError();
    return Rational(0);
  }
  auto rn = exact_root(base.get_num(), v.get_ui());
  auto rd = exact_root(base.get_den(), v.get_ui());
  if (!rn || !rd) return std::nullopt;
  Rational root(*rn, *rd);
  root.canonicalize();
  return rational_pow(root, u.get_si());
}

std::string rational_str(const Rational& r) { return r.get_str(); }

}  // namespace

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(long c) {
  if (c != 0) terms_.push_back({Monomial{}, Rational(c)});
}

Scalar::Scalar(const Rational& c) {
  if (c != 0) terms_.push_back({Monomial{}, c});
}

Scalar Scalar::monomial(const Monomial& m, const Rational& c) {
  Scalar s;
  if (c != 0) s.terms_.push_back({m, c});
  return s;
}

Scalar Scalar::variable(std::size_t index, int32_t scaled_exp) {
  Monomial m;
  m.e.at(index) = scaled_exp;
  return monomial(m);
}

bool Scalar::is_one() const {
  return terms_.size() == 1 && terms_[0].mono.is_unit() && terms_[0].coeff == 1;
}

bool Scalar::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_unit());
}

Rational Scalar::constant_value() const {
  if (!is_constant()) throw Error("scalar is not a constant");
  return terms_.empty() ? Rational(0) : terms_[0].coeff;
}

void Scalar::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.mono < y.mono; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms_.size();) {
    std::size_t j = i + 1;
    Rational c = terms_[i].coeff;
    while (j < terms_.size() && terms_[j].mono == terms_[i].mono) c += terms_[j++].coeff;
    if (c != 0) {
      terms_[out].mono = terms_[i].mono;
      terms_[out].coeff = c;
      ++out;
    }
    i = j;
  }
  terms_.resize(out);
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

namespace {
// Merge of two sorted term lists; sign = +1 or -1 for the second operand.
std::vector<Scalar::Term> merge_terms(const std::vector<Scalar::Term>& x, const std::vector<Scalar::Term>& y,
                                      int sign) {
  std::vector<Scalar::Term> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].mono < y[j].mono)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].mono < x[i].mono) {
      out.push_back({y[j].mono, sign > 0 ? y[j].coeff : Rational(-y[j].coeff)});
      ++j;
    } else {
      Rational c = sign > 0 ? Rational(x[i].coeff + y[j].coeff) : Rational(x[i].coeff - y[j].coeff);
      if (c != 0) out.push_back({x[i].mono, c});
      ++i;
      ++j;
    }
  }
  return out;
}
}  // namespace

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return *this = o;
  terms_ = merge_terms(terms_, o.terms_, 1);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_, -1);
  return *this;
}

Scalar operator*(const Scalar& x, const Scalar& y) {
  Scalar r;
  if (x.terms_.empty() || y.terms_.empty()) return r;
  if (x.terms_.size() == 1) return y.shifted(x.terms_[0].mono).scaled(x.terms_[0].coeff);
  if (y.terms_.size() == 1) return x.shifted(y.terms_[0].mono).scaled(y.terms_[0].coeff);
  r.terms_.reserve(x.terms_.size() * y.terms_.size());
  for (const auto& a : x.terms_)
    for (const auto& b : y.terms_) r.terms_.push_back({a.mono + b.mono, a.coeff * b.coeff});
  r.normalize();
  return r;
}

Scalar& Scalar::operator*=(const Scalar& o) { return *this = *this * o; }

bool Scalar::operator==(const Scalar& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].mono != o.terms_[i].mono || terms_[i].coeff != o.terms_[i].coeff) return false;
  return true;
}

Scalar Scalar::scaled(const Rational& c) const {
  if (c == 0) return {};
  Scalar r = *this;
  if (c != 1)
    for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

Scalar Scalar::shifted(const Monomial& m) const {
  Scalar r = *this;
  if (!m.is_unit())
    for (auto& t : r.terms_) t.mono = t.mono + m;  // order preserved: lex is translation invariant
  return r;
}

Scalar Scalar::div_term(const Term& t) const {
  if (t.coeff == 0) throw Error("zero denominator");
  Scalar r = *this;
  Rational inv = 1 / t.coeff;
  for (auto& x : r.terms_) {
    x.mono = x.mono - t.mono;
    x.coeff *= inv;
  }
  return r;
}

Scalar Scalar::pow(int k) const {
  if (k < 0) {
    if (!is_monomial()) throw Error("negative power of a non-monomial");
    return monomial(terms_[0].mono.scaled(k), rational_pow(terms_[0].coeff, k));
  }
  Scalar result(1), base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

Scalar Scalar::pow_rational(const Rational& k) const {
  if (k.get_den() == 1) return pow(static_cast<int>(k.get_num().get_si()));
  if (is_zero()) return {};
  if (!is_monomial()) throw Error("fractional power of a non-monomial");
  Monomial m;
  for (std::size_t i = 0; i < kMaxParams; ++i) {
    Rational e = Rational(terms_[0].mono.e[i]) * k;
    if (e.get_den() != 1) throw Error("fractional exponent leaves the exponent lattice");
    m.e[i] = static_cast<int32_t>(e.get_num().get_si());
  }
  auto c = rational_pow_frac(terms_[0].coeff, k);
  if (!c) throw Error("no exact rational root");
  return monomial(m, *c);
}

std::optional<Scalar> Scalar::exact_div(const Scalar& d) const {
  if (d.is_zero()) throw Error("zero denominator");
  if (is_zero()) return Scalar{};
  if (d.is_monomial()) return div_term(d.terms_[0]);
  // Newton box: per variable, quotient exponents lie in [min(x)-min(d), max(x)-max(d)].
  Monomial lo, hi;
  for (std::size_t v = 0; v < kMaxParams; ++v) {
    int32_t xmin = terms_[0].mono.e[v], xmax = xmin, dmin = d.terms_[0].mono.e[v], dmax = dmin;
    for (const auto& t : terms_) xmin = std::min(xmin, t.mono.e[v]), xmax = std::max(xmax, t.mono.e[v]);
    for (const auto& t : d.terms_) dmin = std::min(dmin, t.mono.e[v]), dmax = std::max(dmax, t.mono.e[v]);
    lo.e[v] = xmin - dmin;
    hi.e[v] = xmax - dmax;
    if (lo.e[v] > hi.e[v]) return std::nullopt;
  }
  Scalar r = *this, q;
  const Term& lead = d.leading();
  while (!r.is_zero()) {
    const Term& rl = r.leading();
    Term t{rl.mono - lead.mono, rl.coeff / lead.coeff};
    for (std::size_t v = 0; v < kMaxParams; ++v)
      if (t.mono.e[v] < lo.e[v] || t.mono.e[v] > hi.e[v]) return std::nullopt;
    Scalar ts = monomial(t.mono, t.coeff);
    r -= ts * d;
    q += ts;
  }
  return q;
}

bool Scalar::univariate_in(std::size_t var) const {
  if (terms_.empty()) return true;
  Monomial ref = terms_[0].mono;
  ref.e[var] = 0;
  for (const auto& t : terms_) {
    Monomial m = t.mono;
    m.e[var] = 0;
    if (m != ref) return false;
  }
  return true;
}

std::optional<std::size_t> Scalar::single_variable() const {
  std::optional<std::size_t> found;
  for (const auto& t : terms_)
    for (std::size_t v = 0; v < kMaxParams; ++v)
      if (t.mono.e[v] != 0) {
        if (found && *found != v) return std::nullopt;
        found = v;
      }
  return found;
}

namespace {
std::string mono_str(const Monomial& m, const ParamSpace& space) {
  std::string s;
  for (std::size_t v = 0; v < space.num_params(); ++v) {
    if (m.e[v] == 0) continue;
    if (!s.empty()) s += "*";
    s += space.name(v);
    Rational e = space.exponent(m.e[v]);
    if (e != 1) {
      if (e.get_den() == 1)
        s += "^" + rational_str(e);
      else
        s += "^(" + rational_str(e) + ")";
    }
  }
  return s;
}
}  // namespace

std::string Scalar::to_string(const ParamSpace& space) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    std::string m = mono_str(t.mono, space);
    Rational c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    if (!first) out += neg ? "-" : "+";
    else if (neg) out += "-";
    first = false;
    if (m.empty()) {
      out += rational_str(c);
    } else {
      if (c != 1) out += rational_str(c) + "*";
      out += m;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Univariate helpers (dense polynomials over Q, ascending).

namespace {

using UPoly = std::vector<Rational>;

void trim(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

UPoly upoly_mod(UPoly a, const UPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  return a;
}

UPoly upoly_div(UPoly a, const UPoly& b) {
  trim(a);
  if (a.size() < b.size()) return {};
  UPoly q(a.size() - b.size() + 1);
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  return q;
}

UPoly upoly_gcd(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = upoly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rational lc = a.back();
    for (auto& c : a) c /= lc;
  }
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// Ratio

Ratio::Ratio(Scalar num, Scalar den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error("zero denominator");
  canonicalize();
}

void Ratio::canonicalize() {
  if (num_.is_zero()) {
    den_ = Scalar(1);
    return;
  }
  if (den_.is_one()) return;
  if (den_.is_monomial()) {
    num_ = num_.div_term(den_.terms()[0]);
    den_ = Scalar(1);
    return;
  }
  Scalar::Term lead = den_.leading();
  num_ = num_.div_term(lead);
  den_ = den_.div_term(lead);

  if (auto var = den_.single_variable()) {
    std::size_t v = *var;
    // Exponent step over both numerator and denominator in v.
    int32_t step = 0;
    for (const auto& t : den_.terms()) step = std::gcd(step, t.mono.e[v]);
    // Group numerator terms by (other exponents, residue of v-exponent mod step).
    std::map<Monomial, std::map<int32_t, Rational>> groups;
    for (const auto& t : num_.terms()) {
      Monomial key = t.mono;
      int32_t e = t.mono.e[v];
      int32_t r = ((e % step) + step) % step;
      key.e[v] = r;
      groups[key][(e - r) / step] = t.coeff;
    }
    auto to_upoly = [](const std::map<int32_t, Rational>& m, int32_t& base) {
      base = m.begin()->first;
      UPoly p(static_cast<std::size_t>(m.rbegin()->first - base + 1));
      for (const auto& [e, c] : m) p[static_cast<std::size_t>(e - base)] = c;
      return p;
    };
    std::map<int32_t, Rational> dmap;
    for (const auto& t : den_.terms()) dmap[t.mono.e[v] / step] = t.coeff;
    int32_t dbase;
    UPoly dp = to_upoly(dmap, dbase);
    UPoly g = dp;
    for (const auto& [key, m] : groups) {
      if (g.size() <= 1) break;
      int32_t base;
      g = upoly_gcd(g, to_upoly(m, base));
    }
    if (g.size() > 1) {
      auto rebuild = [&](const UPoly& p, int32_t base, Monomial key) {
        Scalar s;
        for (std::size_t i = 0; i < p.size(); ++i) {
          if (p[i] == 0) continue;
          Monomial m = key;
          m.e[v] = key.e[v] + (base + static_cast<int32_t>(i)) * step;
          s += Scalar::monomial(m, p[i]);
        }
        return s;
      };
      Scalar nn;
      for (const auto& [key, m] : groups) {
        int32_t base;
        UPoly p = to_upoly(m, base);
        nn += rebuild(upoly_div(p, g), base, key);
      }
      Monomial zero;
      Scalar nd = rebuild(upoly_div(dp, g), dbase, zero);
      num_ = std::move(nn);
      den_ = std::move(nd);
      if (den_.is_monomial()) {
        num_ = num_.div_term(den_.terms()[0]);
        den_ = Scalar(1);
        return;
      }
      lead = den_.leading();
      num_ = num_.div_term(lead);
      den_ = den_.div_term(lead);
    }
    return;
  }
  if (auto q = num_.exact_div(den_)) {
    num_ = std::move(*q);
    den_ = Scalar(1);
  }
}

Ratio Ratio::operator-() const {
  Ratio r = *this;
  r.num_ = -r.num_;
  return r;
}

Ratio& Ratio::operator+=(const Ratio& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    if (!den_.is_one()) canonicalize();
    else if (num_.is_zero()) den_ = Scalar(1);
    return *this;
  }
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  canonicalize();
  return *this;
}

Ratio& Ratio::operator-=(const Ratio& o) { return *this += -o; }

Ratio& Ratio::operator*=(const Ratio& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = Ratio();
  if (den_.is_one() && o.den_.is_one()) {
    num_ *= o.num_;
    return *this;
  }
  num_ *= o.num_;
  den_ *= o.den_;
  canonicalize();
  return *this;
}

Ratio& Ratio::operator/=(const Ratio& o) { return *this *= o.inverse(); }

bool Ratio::operator==(const Ratio& o) const {
  if (den_ == o.den_) return num_ == o.num_;
  return num_ * o.den_ == o.num_ * den_;
}

Ratio Ratio::inverse() const {
  if (is_zero()) throw Error("zero denominator");
  return Ratio(den_, num_);
}

Ratio Ratio::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  Ratio result(1), base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

std::string Ratio::to_string(const ParamSpace& space) const {
  return "(" + num_.to_string(space) + ")/(" + den_.to_string(space) + ")";
}

// ---------------------------------------------------------------------------
// ParamSpace

ParamSpace::ParamSpace(int n, int exp_denom) : n_(n), exp_denom_(exp_denom == 0 ? 2 * n : exp_denom) {
  if (n < 2) throw Error("matrix size must be at least 2");
  if (exp_denom_ <= 0) throw Error("exponent denominator must be positive");
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) names_.push_back("q" + std::to_string(i) + std::to_string(j));
  names_.push_back("a");
  if (names_.size() > kMaxParams) throw Error("too many parameters for this build");
}

std::size_t ParamSpace::q_index(int i, int j) const {
  if (!(1 <= i && i < j && j <= n_)) throw Error("q index out of range");
  std::size_t idx = 0;
  for (int r = 1; r < i; ++r) idx += static_cast<std::size_t>(n_ - r);
  return idx + static_cast<std::size_t>(j - i - 1);
}

std::optional<std::size_t> ParamSpace::find(std::string_view name) const {
  if (name == "a") return a_index();
  std::string s(name);
  if (s.size() >= 2 && s[0] == 'q') {
    std::string rest = s.substr(1);
    int i = 0, j = 0;
    if (rest.size() >= 4 && rest[0] == '.') {
      auto dot = rest.find('.', 1);
      if (dot == std::string::npos) return std::nullopt;
      auto r1 = std::from_chars(rest.data() + 1, rest.data() + dot, i);
      auto r2 = std::from_chars(rest.data() + dot + 1, rest.data() + rest.size(), j);
      if (r1.ec != std::errc() || r2.ec != std::errc() || r2.ptr != rest.data() + rest.size()) return std::nullopt;
    } else if (rest.size() == 2 && std::isdigit(rest[0]) && std::isdigit(rest[1])) {
      i = rest[0] - '0';
      j = rest[1] - '0';
    } else {
      return std::nullopt;
    }
    if (1 <= i && i < j && j <= n_) return q_index(i, j);
  }
  return std::nullopt;
}

Scalar ParamSpace::q(int i, int j) const {
  if (i == j) return Scalar(1);
  if (i < j) return Scalar::variable(q_index(i, j), exp_denom_);
  return Scalar::variable(q_index(j, i), -exp_denom_);
}

Scalar ParamSpace::a() const { return Scalar::variable(a_index(), exp_denom_); }

Scalar ParamSpace::param_pow(std::size_t idx, const Rational& exponent) const {
  Rational scaled = exponent * exp_denom_;
  if (scaled.get_den() != 1) throw Error("exponent not on the lattice");
  return Scalar::variable(idx, static_cast<int32_t>(scaled.get_num().get_si()));
}

// ---------------------------------------------------------------------------
// Cyclotomic arithmetic

std::vector<long> cyclotomic_polynomial(int k) {
  if (k < 1) throw Error("cyclotomic order must be positive");
  // Phi_k = (x^k - 1) / prod_{d | k, d < k} Phi_d
  UPoly p(static_cast<std::size_t>(k) + 1);
  p[0] = -1;
  p[static_cast<std::size_t>(k)] = 1;
  for (int d = 1; d < k; ++d) {
    if (k % d) continue;
    auto c = cyclotomic_polynomial(d);
    UPoly dp(c.begin(), c.end());
    p = upoly_div(p, dp);
  }
  std::vector<long> out;
  for (const auto& c : p) out.push_back(c.get_num().get_si());
  return out;
}

int euler_phi(int k) { return static_cast<int>(cyclotomic_polynomial(k).size()) - 1; }

namespace {

using RPoly = std::vector<Ratio>;

void rtrim(RPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

RPoly rpoly_mul(const RPoly& a, const RPoly& b) {
  if (a.empty() || b.empty()) return {};
  RPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
  }
  rtrim(r);
  return r;
}

// Returns (quotient, remainder).
std::pair<RPoly, RPoly> rpoly_divmod(RPoly a, const RPoly& b) {
  rtrim(a);
  RPoly q;
  if (a.size() >= b.size()) q.resize(a.size() - b.size() + 1);
  Ratio lead_inv = b.back().inverse();
  while (a.size() >= b.size() && !a.empty()) {
    Ratio f = a.back() * lead_inv;
    std::size_t shift = a.size() - b.size();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a.back() = Ratio();
    rtrim(a);
  }
  rtrim(q);
  return {q, a};
}

RPoly rpoly_sub(const RPoly& a, const RPoly& b) {
  RPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  rtrim(r);
  return r;
}

RPoly cyclo_rpoly(int order) {
  auto c = cyclotomic_polynomial(order);
  RPoly p;
  for (long x : c) p.emplace_back(x);
  return p;
}

RPoly rpoly_gcd(RPoly a, RPoly b) {
  rtrim(a);
  rtrim(b);
  while (!b.empty()) {
    auto r = rpoly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

CycScalar::CycScalar(int order, std::vector<Ratio> coeffs) : order_(order), coeffs_(std::move(coeffs)) {
  if (order < 1) throw Error("cyclotomic order must be positive");
  reduce();
}

CycScalar CycScalar::constant(int order, const Ratio& c) { return CycScalar(order, {c}); }

CycScalar CycScalar::generator(int order) { return CycScalar(order, {Ratio(0), Ratio(1)}); }

void CycScalar::reduce() {
  RPoly phi = cyclo_rpoly(order_);
  std::size_t deg = phi.size() - 1;
  rtrim(coeffs_);
  if (coeffs_.size() > deg) coeffs_ = rpoly_divmod(coeffs_, phi).second;
  coeffs_.resize(deg);
}

bool CycScalar::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Ratio& r) { return r.is_zero(); });
}

CycScalar CycScalar::operator-() const {
  CycScalar r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

CycScalar& CycScalar::operator+=(const CycScalar& o) {
  if (order_ != o.order_) throw Error("cyclotomic order mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

CycScalar& CycScalar::operator-=(const CycScalar& o) { return *this += -o; }

CycScalar& CycScalar::operator*=(const CycScalar& o) {
  if (order_ != o.order_) throw Error("cyclotomic order mismatch");
  coeffs_ = rpoly_mul(coeffs_, o.coeffs_);
  reduce();
  return *this;
}

bool CycScalar::operator==(const CycScalar& o) const {
  return order_ == o.order_ && (*this - o).is_zero();
}

CycScalar CycScalar::inverse() const {
  if (is_zero()) throw Error("zero denominator");
  // Extended Euclid: s*x + t*phi = g with g a nonzero constant since phi is irreducible.
  RPoly r0 = cyclo_rpoly(order_), r1 = coeffs_;
  rtrim(r1);
  RPoly s0, s1{Ratio(1)};
  while (r1.size() > 1) {
    auto [q, r] = rpoly_divmod(r0, r1);
    RPoly s = rpoly_sub(s0, rpoly_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r1.empty()) throw Error("element is not invertible modulo the cyclotomic polynomial");
  Ratio inv = r1[0].inverse();
  for (auto& c : s1) c *= inv;
  return CycScalar(order_, s1);
}

CycScalar CycScalar::pow(long k) const {
  if (k < 0) return inverse().pow(-k);
  CycScalar result = constant(order_, Ratio(1)), base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

std::string CycScalar::to_string(const ParamSpace& space) const {
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += coeffs_[i].to_string(space);
    if (i == 1) out += "*z";
    if (i > 1) out += "*z^" + std::to_string(i);
  }
  if (out.empty()) out = "0";
  return out + " [z^" + std::to_string(order_) + "=1]";
}

// ---------------------------------------------------------------------------
// q-combinatorics

Scalar q_int(const Scalar& base, int n) {
  if (n < 0) throw Error("q-integer of a negative number");
  Scalar s, p(1);
  for (int k = 0; k < n; ++k) {
    s += p;
    p *= base;
  }
  return s;
}

Scalar q_factorial(const Scalar& base, int n) {
  if (n < 0) throw Error("q-factorial of a negative number");
  Scalar s(1);
  for (int k = 1; k <= n; ++k) s *= q_int(base, k);
  return s;
}

namespace {
Scalar flavor_base(const ParamSpace& space, QFlavor f) {
  return f == QFlavor::A ? space.a() : space.a().pow(-1);
}
}  // namespace

Scalar q_int(const ParamSpace& space, int n, QFlavor flavor) { return q_int(flavor_base(space, flavor), n); }

Scalar q_factorial(const ParamSpace& space, int n, QFlavor flavor) {
  return q_factorial(flavor_base(space, flavor), n);
}

std::vector<Ratio> qexp_coeffs(const ParamSpace& space, int max_degree, QFlavor flavor) {
  std::vector<Ratio> out;
  for (int n = 0; n <= max_degree; ++n) out.push_back(Ratio(Scalar(1), q_factorial(space, n, flavor)));
  return out;
}

std::vector<GexpTerm> gexp_scheme(const ParamSpace& space, int root_order, int max_degree) {
  if (root_order < 2) throw Error("root order must be at least 2");
  std::vector<GexpTerm> out;
  for (int k = 0; k <= max_degree; ++k) {
    int m = k / root_order, n = k % root_order;
    CycScalar fact = at_root_of_unity(q_factorial(space, n), space, root_order);
    if (fact.is_zero()) throw Error("q-factorial below the root order vanished");
    mpz_class mf;
    mpz_fac_ui(mf.get_mpz_t(), static_cast<unsigned long>(m));
    CycScalar c = fact.inverse() * CycScalar::constant(root_order, Ratio(Rational(1, 1) / Rational(mf)));
    out.push_back({k, m, n, c});
  }
  return out;
}

RecursionReport verify_qexp_recursion(const ParamSpace& space, int k_max) {
  RecursionReport rep;
  auto f = qexp_coeffs(space, k_max + 1);
  for (int k = 0; k < k_max; ++k) {
    // coefficient of p^{k+1} in F_k F_1 - [k+1] F_{k+1}
    Ratio residual = f[static_cast<std::size_t>(k)] * f[1] -
                     Ratio(q_int(space, k + 1)) * f[static_cast<std::size_t>(k + 1)];
    if (!residual.is_zero()) {
      rep.ok = false;
      rep.failing_k.push_back(k);
    }
  }
  return rep;
}

RecursionReport verify_classical_recursion(int k_max) {
  RecursionReport rep;
  Rational fk = 1;
  for (int k = 0; k < k_max; ++k) {
    Rational next = fk / (k + 1);
    if (fk * 1 - Rational(k + 1) * next != 0) {
      rep.ok = false;
      rep.failing_k.push_back(k);
    }
    fk = next;
  }
  return rep;
}

RecursionReport verify_gexp_recursion(const ParamSpace& space, int root_order, int k_max) {
  RecursionReport rep;
  auto scheme = gexp_scheme(space, root_order, k_max + 1);
  // Elements of Q(zeta)[p, p']/(p^K) keyed by (m, n).
  using Elem = std::map<std::pair<int, int>, CycScalar>;
  auto mul = [&](const Elem& x, const Elem& y) {
    Elem r;
    for (const auto& [kx, cx] : x)
      for (const auto& [ky, cy] : y) {
        int n = kx.second + ky.second;
        if (n >= root_order) continue;
        std::pair<int, int> key{kx.first + ky.first, n};
        auto it = r.find(key);
        if (it == r.end()) r.emplace(key, cx * cy);
        else it->second += cx * cy;
      }
    return r;
  };
  auto F = [&](int k) {
    const auto& t = scheme[static_cast<std::size_t>(k)];
    return Elem{{{t.m, t.n}, t.coeff}};
  };
  for (int k = 0; k < k_max; ++k) {
    Elem lhs = mul(F(k), F(1));
    CycScalar qk = at_root_of_unity(q_int(space, k + 1), space, root_order);
    Elem rhs = F(k + 1);
    for (auto& [key, c] : rhs) c = qk * c;
    for (const auto& [key, c] : rhs) {
      auto it = lhs.find(key);
      if (it == lhs.end()) lhs.emplace(key, -c);
      else it->second -= c;
    }
    bool zero = std::all_of(lhs.begin(), lhs.end(), [](const auto& kv) { return kv.second.is_zero(); });
    if (!zero) {
      rep.ok = false;
      rep.failing_k.push_back(k);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Substitution

bool Assignment::all_symbolic() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](const ParamValue& v) { return v.kind == ParamValue::Kind::Symbolic; });
}

ParamValue Assignment::parse_value(std::string_view text) {
  std::string s(text);
  if (s == "sym") return ParamValue::symbolic();
  if (s.rfind("root:", 0) == 0) {
    int k = 0;
    auto r = std::from_chars(s.data() + 5, s.data() + s.size(), k);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || k < 2) throw Error("invalid root order: " + s);
    return ParamValue::root(k);
  }
  bool ok = !s.empty();
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || (c == '-' && i == 0))) ok = false;
  }
  if (!ok) throw Error("invalid parameter value: " + s);
  try {
    Rational r(s);
    if (r.get_den() == 0) throw Error("invalid parameter value: " + s);
    r.canonicalize();
    return ParamValue::of(r);
  } catch (const std::invalid_argument&) {
    throw Error("invalid parameter value: " + s);
  }
}

Scalar substitute_values(const Scalar& x, const ParamSpace& space, const Assignment& assignment) {
  Scalar out;
  for (const auto& t : x.terms()) {
    Monomial m = t.mono;
    Rational c = t.coeff;
    for (std::size_t v = 0; v < space.num_params(); ++v) {
      if (assignment[v].kind != ParamValue::Kind::Value || m.e[v] == 0) continue;
      auto p = rational_pow_frac(assignment[v].value, space.exponent(m.e[v]));
      if (!p) throw Error("fractional power of " + space.name(v) + " has no exact rational value");
      c *= *p;
      m.e[v] = 0;
    }
    out += Scalar::monomial(m, c);
  }
  return out;
}

Ratio substitute_values(const Ratio& x, const ParamSpace& space, const Assignment& assignment) {
  Scalar d = substitute_values(x.den(), space, assignment);
  if (d.is_zero()) throw PoleError();
  return Ratio(substitute_values(x.num(), space, assignment), d);
}

Scalar substitute_monomial(const Scalar& x, const ParamSpace& space, std::size_t idx, const Scalar& value) {
  if (!value.is_monomial()) throw Error("substituted value must be a monomial");
  Scalar out;
  for (const auto& t : x.terms()) {
    Monomial m = t.mono;
    int32_t e = m.e[idx];
    m.e[idx] = 0;
    out += Scalar::monomial(m, t.coeff) * value.pow_rational(space.exponent(e));
  }
  return out;
}

Ratio substitute_monomial(const Ratio& x, const ParamSpace& space, std::size_t idx, const Scalar& value) {
  Scalar d = substitute_monomial(x.den(), space, idx, value);
  if (d.is_zero()) throw PoleError();
  return Ratio(substitute_monomial(x.num(), space, idx, value), d);
}

namespace {
// Polynomial in a (ascending, shifted so the lowest a-power is a^0) with Ratio coefficients.
RPoly a_polynomial(const Scalar& x, const ParamSpace& space, int& low) {
  std::size_t ai = space.a_index();
  std::map<int, Scalar> by_power;
  for (const auto& t : x.terms()) {
    Rational e = space.exponent(t.mono.e[ai]);
    if (e.get_den() != 1) throw Error("fractional power of a at a root of unity");
    Monomial m = t.mono;
    m.e[ai] = 0;
    by_power[static_cast<int>(e.get_num().get_si())] += Scalar::monomial(m, t.coeff);
  }
  low = by_power.empty() ? 0 : by_power.begin()->first;
  RPoly p;
  for (const auto& [e, s] : by_power) {
    std::size_t i = static_cast<std::size_t>(e - low);
    if (p.size() <= i) p.resize(i + 1);
    p[i] = Ratio(s);
  }
  return p;
}

CycScalar cyc_from_apoly(const RPoly& p, int low, int order) {
  // multiply by zeta^low, using zeta^{-1} = zeta^{order-1}
  int shift = ((low % order) + order) % order;
  RPoly q(p.size() + static_cast<std::size_t>(shift));
  for (std::size_t i = 0; i < p.size(); ++i) q[i + static_cast<std::size_t>(shift)] = p[i];
  // fold using zeta^order = 1 before reducing by Phi
  RPoly folded(static_cast<std::size_t>(order));
  for (std::size_t i = 0; i < q.size(); ++i) folded[i % static_cast<std::size_t>(order)] += q[i];
  return CycScalar(order, folded);
}
}  // namespace

CycScalar at_root_of_unity(const Scalar& x, const ParamSpace& space, int order) {
  int low;
  RPoly p = a_polynomial(x, space, low);
  return cyc_from_apoly(p, low, order);
}

CycScalar at_root_of_unity(const Ratio& x, const ParamSpace& space, int order) {
  CycScalar d = at_root_of_unity(x.den(), space, order);
  if (d.is_zero()) {
    // Cancel the common factor in a before declaring a pole.
    int ln, ld;
    RPoly pn = a_polynomial(x.num(), space, ln), pd = a_polynomial(x.den(), space, ld);
    RPoly g = rpoly_gcd(pn, pd);
    if (g.size() > 1) {
      pn = rpoly_divmod(pn, g).first;
      pd = rpoly_divmod(pd, g).first;
      d = cyc_from_apoly(pd, ld, order);
      if (!d.is_zero()) return cyc_from_apoly(pn, ln, order) * d.inverse();
    }
    throw PoleError();
  }
  return at_root_of_unity(x.num(), space, order) * d.inverse();
}

Evaluated substitute(const Ratio& x, const ParamSpace& space, const Assignment& assignment) {
  Ratio v = substitute_values(x, space, assignment);
  const auto& av = assignment[space.a_index()];
  if (av.kind == ParamValue::Kind::Root) return at_root_of_unity(v, space, av.root_order);
  return v;
}

}  // namespace qtwist
