#include "qrigid/cauchon.hpp"

#include <algorithm>

namespace qrigid {

void poly_add(PbwPoly& p, const PbwExps& e, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = p.emplace(e, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) p.erase(it);
}

PbwPoly poly_scaled(const PbwPoly& p, const Scalar& c) {
  PbwPoly out;
  if (c.is_zero()) return out;
  for (const auto& [e, x] : p) out.emplace(e, x * c);
  return out;
}

std::string poly_to_string(const PbwPoly& p) {
  if (p.empty()) return "0";
  std::string s;
  for (const auto& [e, c] : p) {
    if (!s.empty()) s += " + ";
    s += "(" + c.to_string() + ")";
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      s += "*x" + std::to_string(i + 1);
      if (e[i] != 1) s += "^" + std::to_string(e[i]);
    }
  }
  return s;
}

namespace {

void add_into(PbwPoly& acc, const PbwPoly& p, const Scalar& c) {
  for (const auto& [e, x] : p) poly_add(acc, e, x * c);
}

Scalar deletion_coefficient(int n, const Scalar& qm) {
  // (1 - q_m)^-n / (n)_{q_m}!
  return (Scalar(1) - qm).pow(-n) / q_factorial_unbalanced(n, qm);
}

}  // namespace

// ------------------------------------------------------------ presentation

CGLPresentation CGLPresentation::quantum_affine(ExpLattice q, std::vector<UnitMonomial> ql) {
  CGLPresentation p;
  p.n = q.n;
  p.q = std::move(q);
  p.ql = std::move(ql);
  p.delta.resize(p.n);
  for (int l = 0; l < p.n; ++l) p.delta[l].resize(l);
  return p;
}

bool CGLPresentation::has_derivations() const {
  for (const auto& row : delta)
    for (const auto& d : row)
      if (!d.empty()) return true;
  return false;
}

void CGLPresentation::validate() const {
  if (n < 1) throw CauchonError("presentation needs at least one generator");
  if (q.n != n) throw CauchonError("q matrix has the wrong size");
  if (static_cast<int>(ql.size()) != n) throw CauchonError("need one q_l per generator");
  if (static_cast<int>(delta.size()) != n) throw CauchonError("need one delta row per level");
  if (nilpotency_bound < 1) throw CauchonError("nilpotency bound must be positive");
  for (int l = 0; l < n; ++l) {
    if (ql[l].is_one() || ql[l].free.is_one())
      throw CauchonError("q_" + std::to_string(l + 1) + " is a root of unity");
    if (static_cast<int>(delta[l].size()) != l)
      throw CauchonError("delta row " + std::to_string(l + 1) + " has the wrong length");
    for (int k = 0; k < l; ++k) {
      UnitMonomial want = ql[l] * q.at(l, k);
      for (const auto& [e, c] : delta[l][k]) {
        if (static_cast<int>(e.size()) != n) throw CauchonError("delta term has wrong length");
        UnitMonomial got{};
        for (int j = 0; j < n; ++j) {
          if (e[j] < 0 || (e[j] > 0 && j >= l))
            throw CauchonError("delta_" + std::to_string(l + 1) + "(x_" + std::to_string(k + 1) +
                               ") leaves the lower subalgebra");
          if (e[j] > 0) got = got * q.at(l, j).pow(e[j]);
        }
        if (!(got == want))
          throw CauchonError("sigma/delta compatibility fails for delta_" + std::to_string(l + 1) +
                             "(x_" + std::to_string(k + 1) + ")");
      }
    }
  }
}

// ------------------------------------------------------------ stage algebra

StageAlgebra::StageAlgebra(const CGLPresentation& p, int active, int inverted)
    : p_(&p), active_(active), inv_(inverted) {
  qs_.assign(p.n, std::vector<Scalar>(p.n, Scalar(1)));
  qsi_ = qs_;
  for (int l = 0; l < p.n; ++l)
    for (int k = 0; k < p.n; ++k)
      if (l != k) {
        qs_[l][k] = p.q.at(l, k).to_scalar();
        qsi_[l][k] = qs_[l][k].inverse();
      }
}

PbwPoly StageAlgebra::generator(int k, int power) const {
  if (power < 0 && k != inv_) throw CauchonError("only the current variable is inverted");
  PbwExps e(p_->n, 0);
  e[k] = power;
  return {{e, Scalar(1)}};
}

PbwPoly StageAlgebra::one() const { return {{PbwExps(p_->n, 0), Scalar(1)}}; }

PbwPoly StageAlgebra::swap(int l, int s, int k, int e) const {
  int n = p_->n;
  PbwExps ek(n, 0), el(n, 0);
  ek[k] = e;
  el[l] = s;
  PbwExps kl = ek;
  kl[l] = s;
  PbwPoly out;
  if (s > 0 && e > 0) {
    poly_add(out, kl, qs_[l][k]);
    if (l <= active_) add_into(out, p_->delta[l][k], Scalar(1));
    return out;
  }
  if (s > 0 && e < 0) {
    if (l <= active_ && !p_->delta[l][k].empty())
      throw CauchonError("reduction escapes the localization");
    poly_add(out, kl, qsi_[l][k]);
    return out;
  }
  if (s < 0 && e > 0) {
    // x_l^-1 x_k = q_lk^-1 (x_k x_l^-1 - x_l^-1 delta_l(x_k) x_l^-1)
    poly_add(out, kl, qsi_[l][k]);
    if (l <= active_ && !p_->delta[l][k].empty()) {
      PbwPoly left;
      for (const auto& [a, c] : p_->delta[l][k]) add_into(left, lmul(l, -1, a), c);
      for (const auto& [a, c] : left) add_into(out, mono_mul(a, el), -c * qsi_[l][k]);
    }
    return out;
  }
  throw CauchonError("reduction escapes the localization");
}

PbwPoly StageAlgebra::lmul(int l, int s, const PbwExps& a) const {
  int n = p_->n;
  int k = 0;
  while (k < n && a[k] == 0) ++k;
  if (k >= l) {
    PbwExps b = a;
    b[l] += s;
    if (b[l] < 0 && l != inv_) throw CauchonError("negative power of a non-inverted variable");
    return {{b, Scalar(1)}};
  }
  auto key = std::make_tuple(l, s, a);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  if (++depth_ > 2000) {
    depth_ = 0;
    throw CauchonError("reduction escapes the localization");
  }
  int e = a[k] > 0 ? 1 : -1;
  PbwExps rest = a;
  rest[k] -= e;
  PbwPoly out;
  for (const auto& [b, c] : swap(l, s, k, e)) add_into(out, mono_mul(b, rest), c);
  --depth_;
  memo_.emplace(key, out);
  return out;
}

PbwPoly StageAlgebra::mono_mul(const PbwExps& a, const PbwExps& b) const {
  PbwPoly cur{{b, Scalar(1)}};
  for (int i = p_->n - 1; i >= 0; --i) {
    int s = a[i] > 0 ? 1 : -1;
    for (int t = 0; t < std::abs(a[i]); ++t) {
      PbwPoly next;
      for (const auto& [m, c] : cur) add_into(next, lmul(i, s, m), c);
      cur = std::move(next);
    }
  }
  return cur;
}

PbwPoly StageAlgebra::mul(const PbwPoly& a, const PbwPoly& b) const {
  PbwPoly out;
  for (const auto& [x, c] : a)
    for (const auto& [y, d] : b) add_into(out, mono_mul(x, y), c * d);
  return out;
}

PbwPoly StageAlgebra::sigma(int m, const PbwPoly& a, int power) const {
  PbwPoly out;
  for (const auto& [e, c] : a) {
    Scalar f = c;
    for (int j = 0; j < p_->n; ++j)
      if (e[j] != 0 && j != m) f *= qs_[m][j].pow(e[j] * power);
    out.emplace(e, f);
  }
  return out;
}

PbwPoly StageAlgebra::delta(int m, const PbwPoly& a) const {
  PbwPoly out = mul(generator(m), a);
  for (const auto& [e, c] : sigma(m, a)) {
    PbwExps f = e;
    f[m] += 1;
    poly_add(out, f, -c);
  }
  for (const auto& [e, c] : out)
    if (e[m] != 0) throw CauchonError("delta leaves the lower subalgebra");
  return out;
}

PbwPoly StageAlgebra::table_on(int l, int k, const std::vector<PbwPoly>& z) const {
  PbwPoly out;
  for (const auto& [e, c] : p_->delta[l][k]) {
    PbwPoly m = one();
    for (int j = 0; j < p_->n; ++j)
      for (int t = 0; t < e[j]; ++t) m = mul(m, z[j]);
    add_into(out, m, c);
  }
  return out;
}

// ------------------------------------------------------------ deletion

StageReport delete_step(const CGLPresentation& p, int m) {
  if (m < 1 || m >= p.n) throw CauchonError("stage out of range");
  StageAlgebra alg(p, m, m);
  StageReport rep;
  rep.m = m + 1;
  Scalar qm = p.ql[m].to_scalar();
  for (int j = 0; j < p.n; ++j) rep.tuple.push_back(alg.generator(j));
  rep.powers.assign(m, 0);
  for (int j = 0; j < m; ++j) {
    PbwPoly a = rep.tuple[j];
    PbwPoly z = a;
    Scalar qmj_inv = p.q.at(m, j).to_scalar().inverse();
    for (int n = 1;; ++n) {
      a = alg.delta(m, a);
      if (a.empty()) break;
      if (n > p.nilpotency_bound)
        throw CauchonError("delta_" + std::to_string(m + 1) + " is not nilpotent on x_" +
                           std::to_string(j + 1) + " within the bound");
      PbwPoly term = alg.mul(a, alg.generator(m, -n));
      add_into(z, term, deletion_coefficient(n, qm) * qmj_inv.pow(n));
      rep.powers[j] = n;
    }
    rep.tuple[j] = z;
  }
  for (int l = 0; l < p.n; ++l)
    for (int k = 0; k < l; ++k) {
      PbwPoly r = alg.mul(rep.tuple[l], rep.tuple[k]);
      add_into(r, alg.mul(rep.tuple[k], rep.tuple[l]), -p.qlk(l, k));
      if (l < m) add_into(r, alg.table_on(l, k, rep.tuple), Scalar(-1));
      if (!r.empty()) {
        rep.relations_ok = false;
        rep.failures.push_back({l + 1, k + 1});
      }
    }
  return rep;
}

CauchonResult run_cauchon(const CGLPresentation& p) {
  p.validate();
  CauchonResult out;
  for (int m = p.n - 1; m >= 1; --m) {
    out.stages.push_back(delete_step(p, m));
    out.ok = out.ok && out.stages.back().relations_ok;
  }
  out.bichar = make_bichar(p.q);
  return out;
}

DeltaCheck delta_check(const RootDatum& d, const ReducedWord& w, const BicharPtr& b,
                       const TwistData* t) {
  int n = w.size();
  if (b->rank() != n) throw CauchonError("bicharacter rank does not match the word");
  DeltaCheck out;
  for (int l = 0; l < n; ++l) {
    Exps f(n, 0);
    for (int j : w.orbit_of(l)) f[j] = 1;
    out.deltas.push_back(f);
  }
  std::vector<Root> gamma(n, Root(d.rank(), 0));
  for (int l = 0; l < n; ++l)
    for (int j : w.orbit_of(l))
      for (int i = 0; i < d.rank(); ++i) gamma[l][i] += w.beta[j][i];
  out.torus_exponents.assign(n, std::vector<int>(n, 0));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      UnitMonomial u = b->skew(out.deltas[k], out.deltas[l]);
      if (t) u = u * (*t)(gamma[k], gamma[l]).pow(-1);
      UnitMonomial rest = u;
      rest.free.e[0] = 0;
      if (!rest.is_one()) out.pure_q = false;
      out.torus_exponents[k][l] = u.free.e[0];
    }
  for (auto c : {OrbitConvention::FromZero, OrbitConvention::FromOne})
    if (nprime_matrix(d, w, c) == out.torus_exponents) out.matching.push_back(c);
  return out;
}

}  // namespace qrigid
