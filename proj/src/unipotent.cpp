#include "qrigid/unipotent.hpp"

#include <algorithm>
#include <set>

namespace qrigid {

BraidingViolation::BraidingViolation(int k_, int l_, int degree_)
    : UnipotentError("braiding condition fails for (k,l)=(" + std::to_string(k_) + "," +
                     std::to_string(l_) + ") at degree " + std::to_string(degree_)),
      k(k_), l(l_), degree(degree_) {}

UnipotentAuto::UnipotentAuto(BicharPtr b, DegreeVector d, int cutoff,
                             std::vector<TorusElement> tuple)
    : b_(std::move(b)), d_(std::move(d)), m_(cutoff), u_(std::move(tuple)),
      cache_(std::make_shared<Cache>()) {
  if (!b_) throw UnipotentError("missing bicharacter");
  if (static_cast<int>(d_.size()) != b_->rank()) throw UnipotentError("degree vector has wrong length");
  if (std::any_of(d_.begin(), d_.end(), [](int x) { return x < 1; }))
    throw UnipotentError("degree vector entries must be >= 1");
  if (m_ < 1) throw UnipotentError("cutoff must be >= 1");
  if (static_cast<int>(u_.size()) != b_->rank()) throw UnipotentError("tuple has wrong length");
  for (auto& u : u_) {
    if (!u.bichar()) u = TorusElement(b_);
    u = TruncatedSeries(u, d_, m_).payload();
    auto v = valuation(u, d_);
    if (v && *v < 1) throw UnipotentError("u_k must have valuation >= 1");
  }
}

UnipotentAuto UnipotentAuto::unchecked(BicharPtr b, DegreeVector d, int cutoff,
                                       std::vector<TorusElement> tuple) {
  return UnipotentAuto(std::move(b), std::move(d), cutoff, std::move(tuple));
}

UnipotentAuto UnipotentAuto::build(BicharPtr b, DegreeVector d, int cutoff,
                                   std::vector<TorusElement> tuple) {
  UnipotentAuto phi(std::move(b), std::move(d), cutoff, std::move(tuple));
  if (auto v = braiding_violation(phi.b_, phi.d_, phi.m_, phi.u_)) throw *v;
  return phi;
}

UnipotentAuto UnipotentAuto::identity(BicharPtr b, DegreeVector d, int cutoff) {
  std::vector<TorusElement> t(b->rank(), TorusElement(b));
  return UnipotentAuto(b, std::move(d), cutoff, std::move(t));
}

bool UnipotentAuto::is_identity() const {
  return std::all_of(u_.begin(), u_.end(), [](const TorusElement& u) { return u.is_zero(); });
}

TruncatedSeries UnipotentAuto::one_plus(int k) const {
  return TruncatedSeries(TorusElement::one(b_) + u_[k], d_, m_);
}

TruncatedSeries UnipotentAuto::generator_image(int k, int sign) const {
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->generators.find({k, sign});
    if (it != cache_->generators.end()) return it->second;
  }
  auto xk = TruncatedSeries::exact(TorusElement::generator(b_, k, sign), d_);
  TruncatedSeries out = sign > 0 ? one_plus(k) * xk : xk * one_plus(k).inverse();
  std::lock_guard lock(cache_->mu);
  cache_->generators.emplace(std::make_pair(k, sign), out);
  return out;
}

TruncatedSeries UnipotentAuto::image(const Exps& g, int upto) const {
  int full = cutoff_add(degree(d_, g), m_);
  int want = std::min(upto, full);
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->images.find(g);
    if (it != cache_->images.end() && it->second.cutoff() >= want) return it->second.truncated(want);
  }
  TruncatedSeries out;
  int j = static_cast<int>(g.size()) - 1;
  while (j >= 0 && g[j] == 0) --j;
  if (j < 0) {
    out = TruncatedSeries::exact(TorusElement::one(b_), d_);
  } else {
    // X^g = X^(g - s e_j) X_j^s with j the last nonzero index.
    int s = g[j] > 0 ? 1 : -1;
    TruncatedSeries gen = generator_image(j, s);
    Exps rest = g;
    rest[j] -= s;
    if (rest == Exps(g.size(), 0))
      out = gen.truncated(want);
    else
      out = (image(rest, want - s * d_[j]) * gen).truncated(want);
  }
  std::lock_guard lock(cache_->mu);
  auto [it, fresh] = cache_->images.emplace(g, out);
  if (!fresh && it->second.cutoff() < out.cutoff()) it->second = out;
  return out;
}

TruncatedSeries UnipotentAuto::apply(const TruncatedSeries& v) const {
  auto nu = valuation(v.payload(), d_);
  if (!nu) return v;
  int target = std::min(v.cutoff(), cutoff_add(*nu, m_));
  TorusElement acc(b_);
  for (const auto& [g, c] : v.payload().terms()) {
    if (degree(d_, g) > target) continue;
    auto img = image(g, target);
    for (const auto& [h, x] : img.payload().terms()) acc.add_term(h, x * c);
  }
  return TruncatedSeries(std::move(acc), d_, target);
}

std::vector<Exps> UnipotentAuto::support() const {
  std::set<Exps> s;
  for (const auto& u : u_)
    for (const auto& [f, c] : u.terms()) s.insert(f);
  return {s.begin(), s.end()};
}

std::optional<BraidingViolation> braiding_violation(const BicharPtr& b, const DegreeVector& d,
                                                    int cutoff,
                                                    const std::vector<TorusElement>& tuple) {
  int n = b->rank();
  std::vector<TruncatedSeries> img(n);
  for (int k = 0; k < n; ++k)
    img[k] = TruncatedSeries(TorusElement::one(b) + tuple[k], d, cutoff) *
             TruncatedSeries::exact(TorusElement::generator(b, k), d);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      auto lhs = img[k] * img[l];
      auto rhs = (img[l] * img[k]).scaled(b->entry(k, l).to_scalar());
      int m = std::min(lhs.cutoff(), rhs.cutoff());
      auto diff = TruncatedSeries(lhs.payload() - rhs.payload(), d, m);
      if (auto v = valuation(diff.payload(), d)) return BraidingViolation(k + 1, l + 1, *v);
    }
  return std::nullopt;
}

SupportReport support_report(const UnipotentAuto& phi) {
  SupportReport r;
  r.points = phi.support();
  r.cutoff = phi.cutoff();
  RationalCone c;
  for (const auto& p : r.points) {
    c.gens.emplace_back(p.begin(), p.end());
    if (!phi.bichar()->in_kernel(p)) r.in_kernel = false;
  }
  r.cone = extremal_rays(c);
  return r;
}

RationalCone joint_cone(const std::vector<const UnipotentAuto*>& phis) {
  std::set<Exps> s;
  for (const auto* p : phis)
    for (const auto& f : p->support()) s.insert(f);
  RationalCone c;
  for (const auto& f : s) c.gens.emplace_back(f.begin(), f.end());
  return c;
}

UnipotentAuto compose(const UnipotentAuto& phi, const UnipotentAuto& psi) {
  if (!(*phi.bichar() == *psi.bichar()) || phi.degrees() != psi.degrees())
    throw UnipotentError("composition of automorphisms of different tori");
  int m = std::min(phi.cutoff(), psi.cutoff());
  const auto& b = phi.bichar();
  const auto& d = phi.degrees();
  auto one = TruncatedSeries::exact(TorusElement::one(b), d);
  std::vector<TorusElement> out;
  for (int k = 0; k < phi.rank(); ++k) {
    auto pv = phi.apply(TruncatedSeries(psi.u(k), d, m));
    auto w = (one + pv) * TruncatedSeries(TorusElement::one(b) + phi.u(k), d, m) - one;
    out.push_back(w.truncated(m).payload());
  }
  return UnipotentAuto::unchecked(b, d, m, std::move(out));
}

std::vector<bool> finite_flags(const UnipotentAuto& phi) {
  std::vector<bool> out;
  for (const auto& u : phi.tuple()) {
    bool fin = true;
    for (const auto& [f, c] : u.terms())
      if (2 * degree(phi.degrees(), f) > phi.cutoff()) fin = false;
    out.push_back(fin);
  }
  return out;
}

InverseResult invert_auto(const UnipotentAuto& phi) {
  const auto& b = phi.bichar();
  const auto& d = phi.degrees();
  int m = phi.cutoff();
  auto one = TruncatedSeries::exact(TorusElement::one(b), d);
  std::vector<TorusElement> v(phi.rank());
  int iters = 0;
  for (int k = 0; k < phi.rank(); ++k) {
    // phi((1+v)X_k) = X_k  <=>  phi(v) = (1+u_k)^-1 - 1 =: w.
    auto w = (TruncatedSeries(TorusElement::one(b) + phi.u(k), d, m).inverse() - one).truncated(m);
    // v <- w - (phi(v) - v); phi(v) is updated through the changed terms only.
    auto cur = w;
    auto pv = phi.apply(cur).truncated(m);
    for (int it = 0; it <= m + 1; ++it) {
      ++iters;
      auto next = (w - (pv - cur)).truncated(m);
      auto delta = next - cur;
      if (delta.payload().is_zero()) break;
      if (it == m + 1) throw UnipotentError("inverse iteration did not stabilise");
      pv = (pv + phi.apply(delta)).truncated(m);
      cur = next;
    }
    v[k] = cur.payload();
  }
  InverseResult r{UnipotentAuto::unchecked(b, d, m, std::move(v)), {}, iters};
  r.finite = finite_flags(r.inverse);
  return r;
}

bool on_ray(const Exps& g, const Exps& f) {
  // g = t f with t >= 0 rational.
  long long num = 0, den = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (f[i] == 0) {
      if (g[i] != 0) return false;
      continue;
    }
    if (den == 0) {
      num = g[i];
      den = f[i];
      if (num != 0 && (num > 0) != (den > 0)) return false;
    } else if (static_cast<long long>(g[i]) * den != num * f[i]) {
      return false;
    }
  }
  return true;
}

TorusElement restrict_element(const TorusElement& u, const Exps& f) {
  TorusElement out(u.bichar());
  for (const auto& [g, c] : u.terms())
    if (on_ray(g, f)) out.add_term(g, c);
  return out;
}

UnipotentAuto restrict_unchecked(const UnipotentAuto& phi, const Exps& f) {
  std::vector<TorusElement> t;
  for (const auto& u : phi.tuple()) t.push_back(restrict_element(u, f));
  return UnipotentAuto::build(phi.bichar(), phi.degrees(), phi.cutoff(), std::move(t));
}

UnipotentAuto restrict_to_ray(const UnipotentAuto& phi, const Exps& f) {
  IntVec fv(f.begin(), f.end());
  if (std::all_of(fv.begin(), fv.end(), [](long long x) { return x == 0; }))
    throw UnipotentError("restriction to the zero vector");
  auto rep = support_report(phi);
  RationalCone cone;
  for (const auto& p : rep.points) cone.gens.emplace_back(p.begin(), p.end());
  if (cone.gens.empty() || !cone_contains(cone, fv))
    return UnipotentAuto::identity(phi.bichar(), phi.degrees(), phi.cutoff());
  IntVec p = primitive(fv);
  if (std::find(rep.cone.rays.begin(), rep.cone.rays.end(), p) == rep.cone.rays.end())
    throw UnipotentError("vector lies inside the cone but not on an extremal ray");
  return restrict_unchecked(phi, f);
}

UnipotentAuto phi_fc(BicharPtr b, DegreeVector d, int cutoff, const Exps& f, const Scalar& c) {
  if (static_cast<int>(f.size()) != b->rank()) throw UnipotentError("f has wrong length");
  if (b->in_kernel(f)) throw UnipotentError("f lies in the multiplicative kernel");
  int df = degree(d, f);
  if (df < 1) throw UnipotentError("phi_{f,c} needs D(f) >= 1");
  int n = b->rank();
  std::vector<TorusElement> t(n, TorusElement(b));
  if (!c.is_zero()) {
    TorusElement xf = TorusElement::monomial(b, f);
    TorusElement series(b), pw = TorusElement::one(b);
    Scalar cm(1);
    for (int m = 1; m * df <= cutoff; ++m) {
      pw = pw * xf;
      cm *= c;
      series += pw.scaled(cm);
    }
    for (int k = 0; k < n; ++k) {
      Exps e(n, 0);
      e[k] = 1;
      Scalar a = Scalar(1) - b->skew(f, e).inverse().to_scalar();
      t[k] = series.scaled(a);
    }
  }
  return UnipotentAuto::build(std::move(b), std::move(d), cutoff, std::move(t));
}

Decomposition const_decompose(const UnipotentAuto& phi, const Exps& f) {
  const auto& b = phi.bichar();
  const auto& d = phi.degrees();
  IntVec p = primitive(IntVec(f.begin(), f.end()));
  Decomposition dec;
  dec.f.assign(p.begin(), p.end());
  if (b->in_kernel(dec.f)) throw UnipotentError("ray generator lies in the multiplicative kernel");
  int df = degree(d, dec.f);
  if (df < 1) throw UnipotentError("ray generator must have positive degree");
  for (const auto& g : phi.support())
    if (!on_ray(g, dec.f)) throw UnipotentError("support is not contained in the ray");
  int n = phi.rank();
  auto psi = UnipotentAuto::identity(b, d, phi.cutoff());
  for (int m = 1; m * df <= phi.cutoff(); ++m) {
    Exps g = scale_exps(dec.f, m);
    std::optional<Scalar> cm;
    for (int k = 0; k < n; ++k) {
      Scalar diff = phi.u(k).coefficient(g) - psi.u(k).coefficient(g);
      Exps e(n, 0);
      e[k] = 1;
      Scalar a = Scalar(1) - b->skew(g, e).inverse().to_scalar();
      if (a.is_zero()) {
        if (!diff.is_zero())
          throw UnipotentError("obstruction at degree " + std::to_string(m * df) +
                               ": residual is not an inner derivation");
        continue;
      }
      Scalar c = diff / a;
      if (cm && *cm != c)
        throw UnipotentError("obstruction at degree " + std::to_string(m * df) +
                             ": residual is not an inner derivation");
      cm = c;
    }
    Scalar c = cm.value_or(Scalar());
    dec.c.push_back(c);
    if (!c.is_zero()) psi = compose(phi_fc(b, d, phi.cutoff(), g, c), psi);
  }
  for (int k = 0; k < n; ++k)
    if (phi.u(k) != psi.u(k)) throw UnipotentError("residual left after decomposition");
  return dec;
}

UnipotentAuto recompose(const BicharPtr& b, const DegreeVector& d, int cutoff,
                        const Decomposition& dec) {
  auto psi = UnipotentAuto::identity(b, d, cutoff);
  for (std::size_t i = 0; i < dec.c.size(); ++i) {
    if (dec.c[i].is_zero()) continue;
    Exps g = scale_exps(dec.f, static_cast<int>(i) + 1);
    if (degree(d, g) > cutoff) break;
    psi = compose(phi_fc(b, d, cutoff, g, dec.c[i]), psi);
  }
  return psi;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Central: return "CENTRAL";
    case Verdict::NotBifiniteAtCutoff: return "NOT-BIFINITE-AT-CUTOFF";
    case Verdict::Inconsistent: return "INCONSISTENT";
  }
  return "?";
}

RigidityReport rigidity_verdict(const UnipotentAuto& phi) {
  auto sat = is_saturated(phi.bichar()->lattice());
  if (!sat.saturated) {
    std::string w;
    for (auto x : sat.witness) w += (w.empty() ? "" : ",") + std::to_string(x);
    throw UnipotentError("torus is not saturated: witness f=(" + w + "), n=" +
                         std::to_string(sat.multiple));
  }
  RigidityReport r;
  r.cutoff = phi.cutoff();
  r.support = support_report(phi);
  for (const auto& p : r.support.points)
    if (!phi.bichar()->in_kernel(p)) r.noncentral_points.push_back(p);
  if (r.noncentral_points.empty()) return r;
  r.forward_finite = finite_flags(phi);
  r.inverse_finite = invert_auto(phi).finite;
  auto all = [](const std::vector<bool>& v) { return std::all_of(v.begin(), v.end(), [](bool x) { return x; }); };
  r.verdict = all(r.forward_finite) && all(r.inverse_finite) ? Verdict::Inconsistent
                                                              : Verdict::NotBifiniteAtCutoff;
  return r;
}

}  // namespace qrigid
