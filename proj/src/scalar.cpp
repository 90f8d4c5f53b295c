#include "qrigid/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>

namespace qrigid {

std::string var_name(int index) {
  if (index == 0) return "q";
  return "r" + std::to_string(index);
}

int var_index(std::string_view name) {
  if (name == "q") return 0;
  if (name.size() == 2 && name[0] == 'r' && name[1] >= '1' && name[1] <= '7') return name[1] - '0';
  return -1;
}

// ---------------------------------------------------------------- LaurentPoly

LaurentPoly::LaurentPoly(long c) {
  if (c != 0) terms_.push_back({Monomial{}, Rational(c)});
}

LaurentPoly::LaurentPoly(const Rational& c) {
  if (c != 0) terms_.push_back({Monomial{}, c});
}

LaurentPoly LaurentPoly::monomial(const Monomial& m, const Rational& c) {
  LaurentPoly p;
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

LaurentPoly LaurentPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.mono < b.mono; });
  LaurentPoly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coef += t.coef;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coef == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coef == 0) p.terms_.pop_back();
  return p;
}

bool LaurentPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
}

bool LaurentPoly::is_one() const {
  return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coef == 1;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p = *this;
  for (auto& t : p.terms_) t.coef = -t.coef;
  return p;
}

namespace {

template <bool Subtract>
std::vector<LaurentPoly::Term> merge(const std::vector<LaurentPoly::Term>& a,
                                     const std::vector<LaurentPoly::Term>& b) {
  std::vector<LaurentPoly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].mono < b[j].mono)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].mono < a[i].mono) {
      out.push_back(b[j++]);
      if constexpr (Subtract) out.back().coef = -out.back().coef;
    } else {
      Rational c = Subtract ? Rational(a[i].coef - b[j].coef) : Rational(a[i].coef + b[j].coef);
      if (c != 0) out.push_back({a[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return *this = o;
  terms_ = merge<false>(terms_, o.terms_);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge<true>(terms_, o.terms_);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_monomial()) return b.shifted(a.terms_[0].mono).scaled(a.terms_[0].coef);
  if (b.is_monomial()) return a.shifted(b.terms_[0].mono).scaled(b.terms_[0].coef);
  std::vector<LaurentPoly::Term> out;
  out.reserve(a.size() * b.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) out.push_back({s.mono + t.mono, s.coef * t.coef});
  return LaurentPoly::from_terms(std::move(out));
}

LaurentPoly LaurentPoly::shifted(const Monomial& m) const {
  LaurentPoly p = *this;
  if (!m.is_one())
    for (auto& t : p.terms_) t.mono += m;
  return p;
}

LaurentPoly LaurentPoly::scaled(const Rational& c) const {
  if (c == 0) return {};
  LaurentPoly p = *this;
  if (c != 1)
    for (auto& t : p.terms_) t.coef *= c;
  return p;
}

Monomial LaurentPoly::min_exponents() const {
  if (terms_.empty()) return {};
  Monomial m = terms_[0].mono;
  for (const auto& t : terms_)
    for (int i = 0; i < kMaxVars; ++i) m.e[i] = std::min(m.e[i], t.mono.e[i]);
  return m;
}

bool LaurentPoly::uses_var(int v) const {
  for (const auto& t : terms_)
    if (t.mono.e[v] != 0) return true;
  return false;
}

int LaurentPoly::max_degree(int v) const {
  int d = INT32_MIN;
  for (const auto& t : terms_) d = std::max<int>(d, t.mono.e[v]);
  return d;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].mono != o.terms_[i].mono || terms_[i].coef != o.terms_[i].coef) return false;
  return true;
}

namespace {

std::string monomial_string(const Monomial& m) {
  std::string s;
  for (int i = 0; i < kMaxVars; ++i) {
    if (m.e[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += var_name(i);
    if (m.e[i] != 1) s += '^' + std::to_string(m.e[i]);
  }
  return s;
}

}  // namespace

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    Rational c = it->coef;
    bool neg = c < 0;
    if (neg) c = -c;
    if (neg)
      s += '-';
    else if (!s.empty())
      s += '+';
    if (it->mono.is_one()) {
      s += c.get_str();
    } else {
      if (c != 1) s += c.get_str() + '*';
      s += monomial_string(it->mono);
    }
  }
  return s;
}

// ------------------------------------------------------------------------ gcd

namespace {

LaurentPoly monic(const LaurentPoly& p) {
  if (p.is_zero()) return p;
  Rational lc = p.leading().coef;
  return p.scaled(1 / lc);
}

Monomial min_mono(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (int i = 0; i < kMaxVars; ++i) m.e[i] = std::min(a.e[i], b.e[i]);
  return m;
}

LaurentPoly coeff_at(const LaurentPoly& p, int v, int deg) {
  std::vector<LaurentPoly::Term> out;
  for (const auto& t : p.terms())
    if (t.mono.e[v] == deg) {
      out.push_back(t);
      out.back().mono.e[v] = 0;
    }
  return LaurentPoly::from_terms(std::move(out));
}

std::map<int, LaurentPoly> coeffs_in(const LaurentPoly& p, int v) {
  std::map<int, std::vector<LaurentPoly::Term>> buckets;
  for (const auto& t : p.terms()) {
    auto term = t;
    term.mono.e[v] = 0;
    buckets[t.mono.e[v]].push_back(std::move(term));
  }
  std::map<int, LaurentPoly> out;
  for (auto& [k, ts] : buckets) out.emplace(k, LaurentPoly::from_terms(std::move(ts)));
  return out;
}

bool only_var(const LaurentPoly& p, int v) {
  for (const auto& t : p.terms())
    for (int i = 0; i < kMaxVars; ++i)
      if (i != v && t.mono.e[i] != 0) return false;
  return true;
}

std::vector<Rational> to_dense(const LaurentPoly& p, int v) {
  std::vector<Rational> c(p.max_degree(v) + 1);
  for (const auto& t : p.terms()) c[t.mono.e[v]] = t.coef;
  return c;
}

LaurentPoly from_dense(const std::vector<Rational>& c, int v) {
  std::vector<LaurentPoly::Term> out;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != 0) out.push_back({Monomial::var(v, static_cast<int>(k)), c[k]});
  return LaurentPoly::from_terms(std::move(out));
}

void trim(std::vector<Rational>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

LaurentPoly univariate_gcd(const LaurentPoly& a, const LaurentPoly& b, int v) {
  auto x = to_dense(a, v), y = to_dense(b, v);
  trim(x);
  trim(y);
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    Rational inv = 1 / y.back();
    for (auto& c : y) c *= inv;
    while (x.size() >= y.size() && !x.empty()) {
      Rational f = x.back();
      std::size_t shift = x.size() - y.size();
      for (std::size_t k = 0; k < y.size(); ++k) x[k + shift] -= f * y[k];
      trim(x);
    }
    std::swap(x, y);
  }
  return monic(from_dense(x, v));
}

LaurentPoly exact_div_nonneg(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly gcd_rec(const LaurentPoly& a, const LaurentPoly& b);

LaurentPoly content_in(const LaurentPoly& p, int v) {
  LaurentPoly g;
  for (const auto& [k, c] : coeffs_in(p, v)) {
    g = gcd_rec(g, c);
    if (g.is_one()) break;
  }
  return g;
}

LaurentPoly primitive_part(const LaurentPoly& p, int v) {
  LaurentPoly c = content_in(p, v);
  return monic(c.is_constant() ? p : exact_div_nonneg(p, c));
}

LaurentPoly prem(const LaurentPoly& a, const LaurentPoly& b, int v) {
  int db = b.max_degree(v);
  LaurentPoly lcb = coeff_at(b, v, db);
  LaurentPoly r = a;
  while (!r.is_zero() && r.max_degree(v) >= db) {
    int dr = r.max_degree(v);
    LaurentPoly lcr = coeff_at(r, v, dr);
    r = lcb * r - lcr * b.shifted(Monomial::var(v, dr - db));
  }
  return r;
}

LaurentPoly prs_gcd(LaurentPoly a, LaurentPoly b, int v) {
  if (a.max_degree(v) < b.max_degree(v)) std::swap(a, b);
  while (!b.is_zero()) {
    if (b.max_degree(v) == 0) return LaurentPoly(1);
    LaurentPoly r = prem(a, b, v);
    a = std::move(b);
    if (r.is_zero()) break;
    b = primitive_part(r, v);
  }
  return primitive_part(a, v);
}

// Image in Q[x_v] after substituting fixed integers for the other variables.
LaurentPoly specialize(const LaurentPoly& p, int v, const std::array<long, kMaxVars>& at) {
  std::vector<LaurentPoly::Term> out;
  for (const auto& t : p.terms()) {
    Rational c = t.coef;
    for (int i = 0; i < kMaxVars; ++i) {
      if (i == v || t.mono.e[i] == 0) continue;
      Integer pw;
      mpz_ui_pow_ui(pw.get_mpz_t(), at[i], static_cast<unsigned long>(std::abs(t.mono.e[i])));
      if (t.mono.e[i] > 0)
        c *= pw;
      else
        c /= pw;
    }
    out.push_back({Monomial::var(v, t.mono.e[v]), c});
  }
  return LaurentPoly::from_terms(std::move(out));
}

// True when some univariate image certifies that the gcd has degree 0 in every
// variable. Inputs have nonnegative exponents and no monomial content.
bool certainly_coprime(const LaurentPoly& A, const LaurentPoly& B) {
  static const std::array<long, kMaxVars> points[2] = {{3, 5, 7, 11, 13, 17, 19, 23},
                                                       {29, 31, 37, 41, 43, 47, 53, 59}};
  for (int v = 0; v < kMaxVars; ++v) {
    if (!A.uses_var(v) || !B.uses_var(v)) continue;
    bool certified = false;
    for (const auto& at : points) {
      LaurentPoly a = specialize(A, v, at), b = specialize(B, v, at);
      if (a.is_zero() || b.is_zero() || a.max_degree(v) != A.max_degree(v) ||
          b.max_degree(v) != B.max_degree(v))
        continue;
      if (univariate_gcd(a, b, v).is_constant()) {
        certified = true;
        break;
      }
    }
    if (!certified) return false;
  }
  return true;
}

std::optional<LaurentPoly> try_div_nonneg(const LaurentPoly& a, const LaurentPoly& b);

Integer max_norm(const LaurentPoly& p) {
  Integer m = 0;
  for (const auto& t : p.terms()) {
    Integer a = abs(t.coef.get_num());
    if (a > m) m = a;
  }
  return m;
}

// Scales to integer coefficients with trivial content.
LaurentPoly integer_primitive(const LaurentPoly& p) {
  Integer l = 1, g = 0;
  for (const auto& t : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.get_den_mpz_t());
  for (const auto& t : p.terms()) {
    Integer n = t.coef.get_num() * (l / t.coef.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  return p.scaled(Rational(l, g));
}

LaurentPoly evaluate_var(const LaurentPoly& p, int v, const Integer& x) {
  std::vector<LaurentPoly::Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    Integer pw;
    mpz_pow_ui(pw.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(t.mono.e[v]));
    auto term = t;
    term.mono.e[v] = 0;
    term.coef *= pw;
    out.push_back(std::move(term));
  }
  return LaurentPoly::from_terms(std::move(out));
}

Integer integer_content(const LaurentPoly& p) {
  Integer g = 0;
  for (const auto& t : p.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.get_num_mpz_t());
  return g;
}

// Heuristic gcd over Z (content included): evaluate one variable at a large
// integer, recurse, rebuild by xi-adic expansion and certify by division.
std::optional<LaurentPoly> heuristic_gcd(const LaurentPoly& a0, const LaurentPoly& b0) {
  Integer ca = integer_content(a0), cb = integer_content(b0), cg;
  mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  LaurentPoly A = a0.scaled(Rational(1) / Rational(ca)), B = b0.scaled(Rational(1) / Rational(cb));
  int v = -1;
  for (int i = 0; i < kMaxVars && v < 0; ++i)
    if (A.uses_var(i) || B.uses_var(i)) v = i;
  if (v < 0) return LaurentPoly(Rational(cg));
  Integer xi = 2 * std::min(max_norm(A), max_norm(B)) + 2;
  for (int attempt = 0; attempt < 4; ++attempt) {
    int deg = std::max(A.max_degree(v), B.max_degree(v));
    if (mpz_sizeinbase(xi.get_mpz_t(), 2) * static_cast<std::size_t>(deg) > 40000) return std::nullopt;
    LaurentPoly a = evaluate_var(A, v, xi), b = evaluate_var(B, v, xi);
    if (!a.is_zero() && !b.is_zero()) {
      if (auto gamma = heuristic_gcd(a, b)) {
        std::vector<LaurentPoly::Term> terms;
        Integer half = xi / 2;
        for (const auto& t : gamma->terms()) {
          Integer c = t.coef.get_num();
          for (int i = 0; c != 0; ++i) {
            Integer r;
            mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), xi.get_mpz_t());
            if (r > half) r -= xi;
            if (r != 0) {
              Monomial m = t.mono;
              m.e[v] = i;
              terms.push_back({m, Rational(r)});
            }
            c = (c - r) / xi;
          }
        }
        LaurentPoly G = LaurentPoly::from_terms(std::move(terms));
        if (!G.is_zero()) {
          G = G.scaled(Rational(1) / Rational(integer_content(G)));
          if (try_div_nonneg(A, G) && try_div_nonneg(B, G)) return G.scaled(Rational(cg));
        }
      }
    }
    xi = xi * 73794 / 27011;
  }
  return std::nullopt;
}

LaurentPoly gcd_rec(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  Monomial ma = a.min_exponents(), mb = b.min_exponents();
  Monomial mg = min_mono(ma, mb);
  LaurentPoly A = a.shifted(-ma), B = b.shifted(-mb);
  if (A.is_constant() || B.is_constant()) return LaurentPoly::monomial(mg);
  int v = 0;
  while (!A.uses_var(v) && !B.uses_var(v)) ++v;
  LaurentPoly G;
  if (!A.uses_var(v)) {
    G = gcd_rec(A, content_in(B, v));
  } else if (!B.uses_var(v)) {
    G = gcd_rec(content_in(A, v), B);
  } else if (only_var(A, v) && only_var(B, v)) {
    G = univariate_gcd(A, B, v);
  } else if (certainly_coprime(A, B)) {
    G = LaurentPoly(1);
  } else if (auto h = heuristic_gcd(integer_primitive(A), integer_primitive(B))) {
    G = *h;
  } else {
    LaurentPoly ca = content_in(A, v), cb = content_in(B, v);
    LaurentPoly pa = ca.is_constant() ? A : exact_div_nonneg(A, ca);
    LaurentPoly pb = cb.is_constant() ? B : exact_div_nonneg(B, cb);
    G = gcd_rec(ca, cb) * prs_gcd(pa, pb, v);
  }
  return monic(G.shifted(mg));
}

// Lex division of polynomials with nonnegative exponents.
std::optional<LaurentPoly> try_div_nonneg(const LaurentPoly& a, const LaurentPoly& b) {
  std::vector<LaurentPoly::Term> q;
  LaurentPoly r = a;
  const auto& lb = b.leading();
  Rational inv = 1 / lb.coef;
  while (!r.is_zero()) {
    const auto& lr = r.leading();
    Monomial m = lr.mono - lb.mono;
    for (auto x : m.e)
      if (x < 0) return std::nullopt;
    Rational c = lr.coef * inv;
    q.push_back({m, c});
    r -= b.shifted(m).scaled(c);
  }
  return LaurentPoly::from_terms(std::move(q));
}

LaurentPoly exact_div_nonneg(const LaurentPoly& a, const LaurentPoly& b) {
  auto q = try_div_nonneg(a, b);
  if (!q) throw ScalarError("internal: inexact polynomial division");
  return *q;
}

}  // namespace

LaurentPoly poly_gcd(const LaurentPoly& a, const LaurentPoly& b) { return gcd_rec(a, b); }

std::optional<LaurentPoly> poly_exact_divide(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) throw ScalarError("division by zero polynomial");
  if (a.is_zero()) return LaurentPoly();
  if (b.is_monomial())
    return a.shifted(-b.leading().mono).scaled(1 / b.leading().coef);
  Monomial ma = a.min_exponents(), mb = b.min_exponents();
  auto q = try_div_nonneg(a.shifted(-ma), b.shifted(-mb));
  if (!q) return std::nullopt;
  return q->shifted(ma - mb);
}

// --------------------------------------------------------------------- Scalar

Scalar Scalar::fraction(const LaurentPoly& n, const LaurentPoly& d) {
  if (d.is_zero()) throw ScalarError("division by zero");
  Scalar s;
  if (n.is_zero()) return s;
  if (d.is_monomial()) {
    s.num_ = n.shifted(-d.leading().mono).scaled(1 / d.leading().coef);
    return s;
  }
  Monomial mn = n.min_exponents(), md = d.min_exponents();
  LaurentPoly N = n.shifted(-mn), D = d.shifted(-md);
  LaurentPoly g = poly_gcd(N, D);
  if (!g.is_constant()) {
    N = exact_div_nonneg(N, g);
    D = exact_div_nonneg(D, g);
  }
  Rational lc = D.leading().coef;
  if (D.is_monomial()) {
    s.num_ = N.shifted(mn - md - D.leading().mono).scaled(1 / lc);
    return s;
  }
  s.num_ = N.shifted(mn - md).scaled(1 / lc);
  s.den_ = D.scaled(1 / lc);
  return s;
}

std::optional<std::pair<Monomial, Rational>> Scalar::as_monomial() const {
  if (!den_.is_one() || !num_.is_monomial()) return std::nullopt;
  return std::make_pair(num_.leading().mono, num_.leading().coef);
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw ScalarError("inverse of zero");
  return fraction(den_, num_);
}

Scalar Scalar::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  Scalar result(1), base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

Scalar Scalar::mul_monomial(const Monomial& m) const {
  Scalar s = *this;
  s.num_ = num_.shifted(m);
  return s;
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  s.num_ = -num_;
  return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    if (den_.is_one()) {
      num_ += o.num_;
      return *this;
    }
    return *this = fraction(num_ + o.num_, den_);
  }
  return *this = fraction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_zero() || o.is_zero()) return *this = Scalar();
  if (den_.is_one() && o.den_.is_one()) {
    num_ = num_ * o.num_;
    return *this;
  }
  return *this = fraction(num_ * o.num_, den_ * o.den_);
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw ScalarError("division by zero");
  if (o.den_.is_one() && o.num_.is_monomial()) {
    const auto& t = o.num_.leading();
    num_ = num_.shifted(-t.mono).scaled(1 / t.coef);
    return *this;
  }
  return *this = fraction(num_ * o.den_, den_ * o.num_);
}

std::string Scalar::to_string() const {
  if (den_.is_one()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

// --------------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Scalar parse() {
    Scalar v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw ScalarError("cannot parse scalar '" + std::string(s_) + "': " + what + " at offset " +
                      std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Scalar expr() {
    Scalar v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }
  Scalar term() {
    Scalar v = unary();
    for (;;) {
      if (eat('*'))
        v *= unary();
      else if (eat('/'))
        v /= unary();
      else
        return v;
    }
  }
  Scalar unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  long integer() {
    skip();
    bool neg = false;
    if (eat('(')) {
      long v = integer();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (eat('-')) neg = true;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    long v = std::stol(std::string(s_.substr(start, pos_ - start)));
    return neg ? -v : v;
  }
  Scalar power() {
    Scalar base = atom();
    if (eat('^')) return base.pow(static_cast<int>(integer()));
    return base;
  }
  Scalar atom() {
    skip();
    if (eat('(')) {
      Scalar v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Scalar(Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      auto name = s_.substr(start, pos_ - start);
      int idx = var_index(name);
      if (idx < 0) fail("unknown indeterminate '" + std::string(name) + "'");
      return Scalar::var(idx);
    }
    fail("unexpected character");
  }
};

}  // namespace

Scalar Scalar::parse(std::string_view text) { return Parser(text).parse(); }

// --------------------------------------------------------------- UnitMonomial

namespace {

int64_t mod(int64_t a, int64_t n) { return n == 0 ? a : ((a % n) + n) % n; }

int64_t common_order(int64_t a, int64_t b) {
  if (a == 0) return b;
  if (b == 0 || a == b) return a;
  throw ScalarError("torsion orders disagree");
}

}  // namespace

UnitMonomial UnitMonomial::operator*(const UnitMonomial& o) const {
  UnitMonomial u;
  u.order = common_order(order, o.order);
  u.free = free + o.free;
  u.tor = mod(tor + o.tor, u.order);
  return u;
}

UnitMonomial UnitMonomial::inverse() const {
  UnitMonomial u = *this;
  u.free = -free;
  u.tor = mod(-tor, order);
  return u;
}

UnitMonomial UnitMonomial::pow(int64_t k) const {
  UnitMonomial u = *this;
  u.free = free.scaled(static_cast<int>(k));
  u.tor = mod(tor * k, order);
  return u;
}

Scalar UnitMonomial::to_scalar() const {
  if (tor != 0) throw ScalarError("torsion unit has no image in Q(q, r)");
  return Scalar::monomial(free);
}

std::string UnitMonomial::to_string() const {
  std::string s = free.is_one() ? "1" : monomial_string(free);
  if (tor != 0) s += "*t" + std::to_string(tor) + "/" + std::to_string(order);
  return s;
}

// ------------------------------------------------------------------- q-numbers

Scalar q_int_balanced(int m, const Monomial& base) {
  if (m < 0) throw ScalarError("q-integer of negative argument");
  std::vector<LaurentPoly::Term> t;
  for (int i = 0; i < m; ++i) t.push_back({base.scaled(m - 1 - 2 * i), Rational(1)});
  return Scalar(LaurentPoly::from_terms(std::move(t)));
}

Scalar q_factorial_balanced(int m, const Monomial& base) {
  Scalar f(1);
  for (int i = 1; i <= m; ++i) f *= q_int_balanced(i, base);
  return f;
}

Scalar q_binomial_balanced(int m, int j, const Monomial& base) {
  if (j < 0 || j > m) return Scalar();
  // Pascal rule [m, j] = b^j [m-1, j] + b^(j-m) [m-1, j-1].
  std::vector<Scalar> row{Scalar(1)};
  for (int n = 1; n <= m; ++n) {
    std::vector<Scalar> next(n + 1);
    for (int k = 0; k <= n; ++k) {
      Scalar v;
      if (k < n) v += row[k].mul_monomial(base.scaled(k));
      if (k > 0) v += row[k - 1].mul_monomial(base.scaled(k - n));
      next[k] = std::move(v);
    }
    row = std::move(next);
  }
  return row[j];
}

Scalar q_int_unbalanced(int n, const Scalar& base) {
  if (n < 0) throw ScalarError("q-integer of negative argument");
  Scalar s, p(1);
  for (int i = 0; i < n; ++i) {
    s += p;
    p *= base;
  }
  return s;
}

Scalar q_factorial_unbalanced(int n, const Scalar& base) {
  Scalar f(1);
  for (int i = 1; i <= n; ++i) f *= q_int_unbalanced(i, base);
  return f;
}

}  // namespace qrigid
