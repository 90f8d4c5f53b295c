#include "qrigid/qtorus.hpp"

#include <algorithm>

namespace qrigid {

Bicharacter::Bicharacter(ExpLattice lat) : lat_(std::move(lat)) {
  for (int k = 0; k < lat_.n; ++k)
    if (!lat_.at(k, k).is_one()) throw TorusError("diagonal entries of q must be 1");
  kernel_ = mult_kernel(lat_);
}

BicharPtr make_bichar(ExpLattice lat) { return std::make_shared<const Bicharacter>(std::move(lat)); }

Monomial Bicharacter::cocycle(const Exps& f, const Exps& g) const {
  Monomial m;
  for (int k = 1; k < lat_.n; ++k) {
    if (f[k] == 0) continue;
    for (int l = 0; l < k; ++l) {
      if (g[l] == 0) continue;
      const auto& e = lat_.at(k, l);
      if (e.tor != 0) throw TorusError("torsion entries have no image in the scalar field");
      m += e.free.scaled(f[k] * g[l]);
    }
  }
  return m;
}

UnitMonomial Bicharacter::skew(const Exps& f, const Exps& g) const {
  UnitMonomial u{Monomial{}, 0, lat_.torsion_order};
  for (int k = 0; k < lat_.n; ++k)
    for (int l = 0; l < lat_.n; ++l)
      if (f[k] != 0 && g[l] != 0) u = u * lat_.at(k, l).pow(static_cast<int64_t>(f[k]) * g[l]);
  return u;
}

bool Bicharacter::in_kernel(const Exps& f) const {
  return in_row_lattice(kernel_, IntVec(f.begin(), f.end()));
}

// ----------------------------------------------------------------- elements

TorusElement TorusElement::monomial(BicharPtr b, const Exps& f, const Scalar& c) {
  if (static_cast<int>(f.size()) != b->rank()) throw TorusError("exponent vector has wrong length");
  TorusElement u(std::move(b));
  if (!c.is_zero()) u.terms_.emplace(f, c);
  return u;
}

TorusElement TorusElement::generator(BicharPtr b, int k, int power) {
  Exps f(b->rank(), 0);
  f[k] = power;
  return monomial(std::move(b), f);
}

Scalar TorusElement::coefficient(const Exps& f) const {
  auto it = terms_.find(f);
  return it == terms_.end() ? Scalar() : it->second;
}

void TorusElement::add_term(const Exps& f, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.emplace(f, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

void TorusElement::check_same(const TorusElement& o) const {
  if (b_ && o.b_ && b_ != o.b_ && !(*b_ == *o.b_))
    throw TorusError("elements of different quantum tori");
}

TorusElement& TorusElement::operator+=(const TorusElement& o) {
  check_same(o);
  if (!b_) b_ = o.b_;
  for (const auto& [f, c] : o.terms_) add_term(f, c);
  return *this;
}

TorusElement& TorusElement::operator-=(const TorusElement& o) {
  check_same(o);
  if (!b_) b_ = o.b_;
  for (const auto& [f, c] : o.terms_) add_term(f, -c);
  return *this;
}

TorusElement TorusElement::operator-() const {
  TorusElement u = *this;
  for (auto& [f, c] : u.terms_) c = -c;
  return u;
}

TorusElement TorusElement::scaled(const Scalar& c) const {
  TorusElement u(b_);
  if (c.is_zero()) return u;
  for (const auto& [f, a] : terms_) u.terms_.emplace(f, a * c);
  return u;
}

TorusElement operator*(const TorusElement& a, const TorusElement& b) {
  a.check_same(b);
  TorusElement u(a.b_ ? a.b_ : b.b_);
  for (const auto& [f, x] : a.terms_)
    for (const auto& [g, y] : b.terms_) {
      Exps h = add_exps(f, g);
      u.add_term(h, (x * y).mul_monomial(u.b_->cocycle(f, g)));
    }
  return u;
}

std::string TorusElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [f, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += "(" + c.to_string() + ")*X^(";
    for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
    s += ")";
  }
  return s;
}

// ---------------------------------------------------------------- gradings

int degree(const DegreeVector& d, const Exps& f) {
  if (d.size() != f.size()) throw TorusError("degree vector has wrong length");
  int s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += d[i] * f[i];
  return s;
}

Exps add_exps(const Exps& a, const Exps& b) {
  Exps c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

Exps scale_exps(const Exps& a, int k) {
  Exps c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] * k;
  return c;
}

std::optional<int> valuation(const TorusElement& u, const DegreeVector& d) {
  std::optional<int> v;
  for (const auto& [f, c] : u.terms()) {
    int x = degree(d, f);
    if (!v || x < *v) v = x;
  }
  return v;
}

TorusElement graded_component(const TorusElement& u, int m, const DegreeVector& d) {
  TorusElement out(u.bichar());
  for (const auto& [f, c] : u.terms())
    if (degree(d, f) == m) out.add_term(f, c);
  return out;
}

std::vector<Exps> support(const TorusElement& u) {
  std::vector<Exps> s;
  for (const auto& [f, c] : u.terms()) s.push_back(f);
  return s;
}

bool is_central(const TorusElement& u) {
  return std::all_of(u.terms().begin(), u.terms().end(),
                     [&](const auto& t) { return u.bichar()->in_kernel(t.first); });
}

TorusElement power(const TorusElement& u, int k) {
  if (k < 0) throw TorusError("negative power of a torus element");
  TorusElement r = TorusElement::one(u.bichar());
  for (int i = 0; i < k; ++i) r = r * u;
  return r;
}

TorusElement commutator(const TorusElement& a, const TorusElement& b) { return a * b - b * a; }

}  // namespace qrigid
