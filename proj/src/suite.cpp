#include "qrigid/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <set>

namespace qrigid {

namespace {

struct Profile {
  bool full = false;
  int cutoff = 12;
};

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

UnitMonomial qunit(int a, int r1 = 0, int r2 = 0) {
  UnitMonomial u;
  u.free.e[0] = a;
  u.free.e[1] = r1;
  u.free.e[2] = r2;
  return u;
}

Scalar small_scalar(Rng& rng) {
  static const char* choices[] = {"1", "2", "-1", "1/2", "q", "-q^-1", "3", "q^2", "1+q"};
  return Scalar::parse(choices[rng() % 9]);
}

Exps random_exps(Rng& rng, int n, int r) {
  Exps f(n);
  for (auto& x : f) x = uniform(rng, -r, r);
  return f;
}

BicharPtr random_torus(Rng& rng, int n, int span = 2) {
  ExpLattice l = ExpLattice::trivial(n);
  for (int k = 0; k < n; ++k)
    for (int j = k + 1; j < n; ++j) l.set(k, j, qunit(uniform(rng, -span, span)));
  if (l.at(0, 1).is_one()) l.set(0, 1, qunit(1));
  return make_bichar(l);
}

TwistData random_twist(Rng& rng, int rank) {
  std::vector<UnitMonomial> up;
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j)
      up.push_back(qunit(uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)));
  return TwistData::from_upper(rank, up);
}

// Random f of degree in [1, dmax] outside the kernel.
Exps random_ray(Rng& rng, const BicharPtr& b, const DegreeVector& d, int dmax) {
  for (int tries = 0; tries < 100000; ++tries) {
    Exps f(b->rank());
    for (auto& x : f) x = uniform(rng, -1, 2);
    int df = degree(d, f);
    if (df >= 1 && df <= dmax && !b->in_kernel(f)) return f;
  }
  throw SuiteError("no admissible ray");
}

void box(int n, int r, const std::function<void(const IntVec&)>& fn) {
  IntVec v(n, -r);
  for (;;) {
    fn(v);
    int i = 0;
    while (i < n && ++v[i] > r) v[i++] = -r;
    if (i == n) return;
  }
}

// Ordered product X^f X^g = prod_{k > l} q_kl^(f_k g_l) X^(f+g), from X_k X_l = q_kl X_l X_k.
Scalar normal_order_factor(const BicharPtr& b, const Exps& f, const Exps& g) {
  UnitMonomial u;
  for (int k = 0; k < b->rank(); ++k)
    for (int l = 0; l < k; ++l)
      if (f[k] && g[l]) u = u * b->entry(k, l).pow(static_cast<int64_t>(f[k]) * g[l]);
  return u.to_scalar();
}

TorusElement mono(const BicharPtr& b, const Exps& f, const Scalar& c = Scalar(1)) {
  return TorusElement::monomial(b, f, c);
}

TorusElement inverse_mono(const BicharPtr& b, const Exps& g) {
  Exps h = scale_exps(g, -1);
  return mono(b, h, Scalar::monomial(-b->cocycle(g, h)));
}

bool same_tuple(const UnipotentAuto& a, const UnipotentAuto& b) {
  int m = std::min(a.cutoff(), b.cutoff());
  for (int k = 0; k < a.rank(); ++k)
    if (!TruncatedSeries(a.u(k), a.degrees(), m).agrees_with(TruncatedSeries(b.u(k), b.degrees(), m)))
      return false;
  return true;
}

// Membership in N S \ {0} for vectors of positive degree.
class Semigroup {
 public:
  Semigroup(std::vector<Exps> gens, DegreeVector d) : s_(std::move(gens)), d_(std::move(d)) {}
  bool contains(const Exps& g) {
    if (degree(d_, g) < 1) return false;
    auto it = memo_.find(g);
    if (it != memo_.end()) return it->second;
    bool r = false;
    for (const auto& s : s_) {
      if (s == g) {
        r = true;
        break;
      }
      Exps h = g;
      for (std::size_t i = 0; i < h.size(); ++i) h[i] -= s[i];
      if (contains(h)) {
        r = true;
        break;
      }
    }
    memo_[g] = r;
    return r;
  }

 private:
  std::vector<Exps> s_;
  DegreeVector d_;
  std::map<Exps, bool> memo_;
};

BicharPtr canonical_matrix(const std::string& type, const TwistData* t = nullptr) {
  auto d = RootDatum::make(type);
  auto w = validate_reduced(d, d.canonical_word());
  return commutation_matrix(d, w, t ? *t : TwistData::trivial(d.rank()));
}

std::string fmt(const char* f, long a, long b = 0, long c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------- criteria

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome torus_soundness(const Profile& p) {
  Rng rng(101);
  int triples = p.full ? 500 : 150, failures = 0, relations = 0;
  for (const auto& type : {"A2", "B2", "G2"}) {
    auto b = canonical_matrix(type);
    int n = b->rank();
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        auto xk = TorusElement::generator(b, k), xl = TorusElement::generator(b, l);
        if (xk * xl != (xl * xk).scaled(b->entry(k, l).to_scalar())) ++failures;
        if (xk * TorusElement::generator(b, k, -1) != TorusElement::one(b)) ++failures;
        ++relations;
      }
    for (int i = 0; i < triples / 3 + (type[0] == 'A' ? triples % 3 : 0); ++i) {
      Exps f = random_exps(rng, n, 2), g = random_exps(rng, n, 2), h = random_exps(rng, n, 2);
      auto a = mono(b, f, small_scalar(rng)), c = mono(b, g, small_scalar(rng)), e = mono(b, h, small_scalar(rng));
      if ((a * c) * e != a * (c * e)) ++failures;
      auto fg = mono(b, f) * mono(b, g);
      if (fg != mono(b, add_exps(f, g), normal_order_factor(b, f, g))) ++failures;
    }
  }
  return {failures == 0, fmt("%ld triples, %ld generator relations, %ld failures", triples, relations, failures)};
}

Outcome center_kernel(const Profile& p) {
  Rng rng(202);
  int tested = 0, disagree = 0;
  for (int n : {2, 3, 4}) {
    for (int it = 0; it < (p.full ? 4 : 2); ++it) {
      ExpLattice l = ExpLattice::trivial(n);
      for (int k = 0; k < n; ++k)
        for (int j = k + 1; j < n; ++j) l.set(k, j, qunit(uniform(rng, -2, 2), it % 2 ? uniform(rng, -1, 1) : 0));
      auto b = make_bichar(l);
      IntMatrix ker = mult_kernel(l);
      int r = (n == 4 && !p.full) ? 2 : 3;
      box(n, r, [&](const IntVec& fv) {
        Exps f(fv.begin(), fv.end());
        auto x = mono(b, f);
        bool central = true;
        for (int k = 0; k < n && central; ++k) {
          auto g = TorusElement::generator(b, k);
          central = (x * g - g * x).is_zero();
        }
        if (central != in_row_lattice(ker, fv)) ++disagree;
        ++tested;
      });
    }
  }
  return {disagree == 0, fmt("%ld monomials, %ld disagreements", tested, disagree)};
}

Outcome saturation(const Profile& p) {
  Rng rng(303);
  int bad = 0;
  for (int it = 0; it < 20; ++it) {
    ExpLattice l = ExpLattice::trivial(2 + it % 3);
    for (int k = 0; k < l.n; ++k)
      for (int j = k + 1; j < l.n; ++j) l.set(k, j, qunit(uniform(rng, -3, 3), uniform(rng, -1, 1)));
    if (!is_saturated(l).saturated) ++bad;
  }
  ExpLattice z2 = ExpLattice::trivial(2, 2);
  z2.set(0, 1, UnitMonomial{Monomial{}, 1, 2});
  auto s = is_saturated(z2);
  bool example = !s.saturated && s.witness == IntVec{1, 0} && s.multiple == 2;

  int disagree = 0, unsaturated = 0, instances = p.full ? 50 : 20;
  for (int it = 0; it < instances; ++it) {
    int n = 2 + it % 2;
    int64_t order = std::vector<int64_t>{0, 2, 3, 4, 6}[it % 5];
    ExpLattice l = ExpLattice::trivial(n, order);
    for (int k = 0; k < n; ++k)
      for (int j = k + 1; j < n; ++j) {
        UnitMonomial u = qunit(uniform(rng, -2, 2));
        if (order) {
          u.order = order;
          u.tor = uniform(rng, 0, static_cast<int>(order) - 1);
        }
        l.set(k, j, u);
      }
    auto b = make_bichar(l);
    bool c1 = is_saturated(l).saturated;
    bool c2 = true, c3 = true;
    box(n, 2, [&](const IntVec& f) {
      for (int m = 2; m <= 12; ++m) {
        IntVec g = f;
        for (auto& x : g) x *= m;
        if (l.kernel_contains(g) && !l.kernel_contains(f)) c2 = false;
        // X^f commutes with every generator, read off the group commutators.
        Exps fe(f.begin(), f.end()), ge(g.begin(), g.end());
        auto commutes = [&](const Exps& e) {
          for (int k = 0; k < n; ++k) {
            Exps ek(n, 0);
            ek[k] = 1;
            if (!b->skew(e, ek).is_one()) return false;
          }
          return true;
        };
        if (commutes(ge) && !commutes(fe)) c3 = false;
      }
    });
    if (!c1) ++unsaturated;
    if (c1 != c2 || c1 != c3) ++disagree;
  }
  return {bad == 0 && example && disagree == 0,
          fmt("torsion-free unsaturated: %ld; Z/2 witness ok: %ld; c1/c2/c3 disagreements: %ld", bad, example,
              disagree) +
              fmt(" over %ld instances (%ld unsaturated)", instances, unsaturated)};
}

Outcome phi_fc_braiding(const Profile& p) {
  Rng rng(404);
  int failures = 0, count = p.full ? 20 : 8;
  for (int i = 0; i < count; ++i) {
    int n = 2 + i % 3;
    auto b = random_torus(rng, n);
    DegreeVector d(n);
    for (auto& x : d) x = uniform(rng, 1, 2);
    Exps f = random_ray(rng, b, d, 3);
    Scalar c = small_scalar(rng);
    auto phi = phi_fc(b, d, p.cutoff, f, c);
    if (braiding_violation(b, d, p.cutoff, phi.tuple())) ++failures;
    try {
      UnipotentAuto::build(b, d, p.cutoff, phi.tuple());
    } catch (const UnipotentError&) {
      ++failures;
    }
  }
  return {failures == 0, fmt("%ld instances at cutoff %ld, %ld failures", count, p.cutoff, failures)};
}

Outcome rigidity_suite(const Profile& p) {
  Rng rng(505);
  int inconsistent = 0, wrong = 0, coef_checked = 0, autos = 0;
  int m = p.full ? p.cutoff : 8;
  // central tuples on the kernel example Ker = Z(1,1,1)
  ExpLattice kl = ExpLattice::trivial(3);
  kl.set(0, 1, qunit(1));
  kl.set(0, 2, qunit(-1));
  kl.set(1, 2, qunit(1));
  auto kb = make_bichar(kl);
  DegreeVector d3{1, 1, 1};
  std::vector<UnipotentAuto> central;
  for (int i = 0; i < 4; ++i) {
    std::vector<TorusElement> t;
    for (int k = 0; k < 3; ++k) {
      TorusElement u(kb);
      u.add_term({1, 1, 1}, small_scalar(rng));
      if (i % 2) u.add_term({2, 2, 2}, small_scalar(rng));
      t.push_back(u);
    }
    central.push_back(UnipotentAuto::build(kb, d3, m, t));
  }
  std::vector<UnipotentAuto> fcs;
  for (const auto& phi : central) {
    auto v = rigidity_verdict(phi).verdict;
    ++autos;
    if (v == Verdict::Inconsistent) ++inconsistent;
    if (v != Verdict::Central) ++wrong;
  }
  for (int i = 0; i < (p.full ? 8 : 4); ++i) {
    bool on_kernel_example = i % 2 == 0;
    auto b = on_kernel_example ? kb : random_torus(rng, 2 + i % 3);
    DegreeVector d(b->rank(), 1);
    Exps f = random_ray(rng, b, d, 2);
    Scalar c = small_scalar(rng);
    auto phi = phi_fc(b, d, m, f, c);
    auto rep = rigidity_verdict(phi);
    ++autos;
    if (rep.verdict == Verdict::Inconsistent) ++inconsistent;
    if (rep.verdict != Verdict::NotBifiniteAtCutoff) ++wrong;
    auto inv = invert_auto(phi).inverse;
    int df = degree(d, f);
    for (int k = 0; k < b->rank(); ++k) {
      Exps ek(b->rank(), 0);
      ek[k] = 1;
      if (b->skew(f, ek).is_one()) continue;
      auto img = inv.image(ek).payload();
      for (int j = 1; j * df <= m; ++j) {
        ++coef_checked;
        if (img.coefficient(add_exps(ek, scale_exps(f, j))).is_zero()) ++wrong;
      }
    }
    if (on_kernel_example) fcs.push_back(phi);
  }
  for (int i = 0; i < 20; ++i) {
    std::vector<const UnipotentAuto*> pool;
    for (const auto& x : central) pool.push_back(&x);
    for (const auto& x : fcs) pool.push_back(&x);
    auto a = *pool[rng() % pool.size()];
    auto b = *pool[rng() % pool.size()];
    auto c = compose(a, b);
    if (i % 3 == 0) c = compose(c, *pool[rng() % pool.size()]);
    ++autos;
    if (rigidity_verdict(c).verdict == Verdict::Inconsistent) ++inconsistent;
  }
  return {inconsistent == 0 && wrong == 0,
          fmt("%ld automorphisms, %ld INCONSISTENT, %ld wrong verdicts or zero coefficients", autos, inconsistent,
              wrong) +
              fmt(", %ld inverse coefficients checked", coef_checked)};
}

Outcome restriction_calculus(const Profile& p) {
  Rng rng(606);
  int pairs = p.full ? 20 : 6, failures = 0, rays_checked = 0, inv_checked = 0, m = 6;
  for (int it = 0; it < pairs; ++it) {
    auto t = random_torus(rng, 3);
    DegreeVector dv{1, 1, 1};
    auto phi = compose(phi_fc(t, dv, m, random_ray(rng, t, dv, 2), small_scalar(rng)),
                       phi_fc(t, dv, m, random_ray(rng, t, dv, 2), small_scalar(rng)));
    auto psi = phi_fc(t, dv, m, random_ray(rng, t, dv, 2), small_scalar(rng));
    auto joint = extremal_rays(joint_cone({&phi, &psi}));
    if (!joint.strict) continue;
    auto pp = compose(phi, psi);
    auto phinv = invert_auto(phi).inverse;
    auto own = support_report(phi).cone.rays;
    for (const auto& ray : joint.rays) {
      Exps f(ray.begin(), ray.end());
      auto rp = restrict_unchecked(phi, f);
      ++rays_checked;
      for (int j = 0; j < 3; ++j) {
        Exps g = random_exps(rng, 3, 2);
        auto lhs = rp.image(g);
        auto w = phi.image(g) * TruncatedSeries::exact(inverse_mono(t, g), dv);
        auto rhs = TruncatedSeries(restrict_element(w.payload(), f), dv, w.cutoff()) *
                   TruncatedSeries::exact(mono(t, g), dv);
        if (!lhs.agrees_with(rhs)) ++failures;
      }
      if (!same_tuple(restrict_unchecked(pp, f), compose(rp, restrict_unchecked(psi, f)))) ++failures;
      if (std::find(own.begin(), own.end(), ray) != own.end()) {
        ++inv_checked;
        if (!same_tuple(invert_auto(restrict_to_ray(phi, f)).inverse, restrict_unchecked(phinv, f))) ++failures;
      }
    }
    // support containments
    std::vector<Exps> gens = phi.support();
    for (const auto& g : psi.support()) gens.push_back(g);
    Semigroup both(gens, dv);
    for (const auto& g : pp.support())
      if (!both.contains(g)) ++failures;
    Semigroup s(phi.support(), dv), si(phinv.support(), dv);
    for (const auto& g : phinv.support())
      if (!s.contains(g)) ++failures;
    for (const auto& g : phi.support())
      if (!si.contains(g)) ++failures;
  }
  return {failures == 0 && inv_checked > 0,
          fmt("%ld pairs, %ld rays, %ld failures", pairs, rays_checked, failures) +
              fmt("; inversion checked on %ld rays", inv_checked)};
}

Outcome const_decomposition(const Profile& p) {
  Rng rng(707);
  int failures = 0, count = p.full ? 10 : 4;
  for (int i = 0; i < count; ++i) {
    auto b = random_torus(rng, 2 + i % 2);
    DegreeVector d(b->rank(), 1);
    Exps f = random_ray(rng, b, d, 2);
    IntVec fi(f.begin(), f.end());
    IntVec pf = primitive(fi);
    f.assign(pf.begin(), pf.end());
    Scalar c = small_scalar(rng);
    auto phi = phi_fc(b, d, 10, f, c);
    auto dec = const_decompose(phi, f);
    if (dec.c.empty() || dec.c[0] != c) ++failures;
    if (!same_tuple(recompose(b, d, 10, dec), phi)) ++failures;
  }
  return {failures == 0, fmt("%ld instances at cutoff 10, %ld failures", count, failures)};
}

Outcome serre_dimensions(const Profile& p) {
  std::vector<std::pair<std::string, int>> cases = {{"A2", 6}, {"B2", 6}, {"G2", 5}, {"A3", 5}};
  if (!p.full) cases = {{"A2", 5}, {"B2", 5}};
  int weights = 0, mismatches = 0;
  std::string where;
  for (const auto& [type, h] : cases) {
    auto d = RootDatum::make(type);
    UqMinus u(d, TwistData::trivial(d.rank()));
    for (const auto& g : weights_up_to(d.rank(), h)) {
      auto r = serre_component(u, g);
      ++weights;
      if (r.quotient_dim != r.kostant) ++mismatches;
    }
    where += (where.empty() ? "" : ", ") + type + " h<=" + std::to_string(h);
  }
  return {mismatches == 0, fmt("%ld weights, %ld mismatches (", weights, mismatches) + where + ")"};
}

Outcome linear_classification(const Profile&) {
  auto a2 = RootDatum::make("A2");
  auto b2 = RootDatum::make("B2");
  auto ca = classify_linear_autos(UqMinus(a2, TwistData::trivial(2)));
  auto cb = classify_linear_autos(UqMinus(b2, TwistData::trivial(2)));
  auto ct = classify_linear_autos(UqMinus(a2, TwistData::from_upper(2, {qunit(0, 1)})));
  using P = std::vector<std::vector<int>>;
  bool ok = ca.matches() && ca.thetas == P{{0, 1}, {1, 0}} && ca.group_closed && cb.matches() &&
            cb.thetas == P{{0, 1}} && ct.matches() && ct.thetas == P{{0, 1}};
  return {ok, fmt("A2: %ld permutations, B2: %ld, twisted A2: %ld", ca.thetas.size(), cb.thetas.size(),
                  ct.thetas.size())};
}

Outcome cauchon_engine(const Profile&) {
  auto d = RootDatum::make("A2");
  auto w = validate_reduced(d, {1, 2, 1});
  Rng rng(1010);
  int runs = 0, failures = 0;
  for (int i = 0; i < 4; ++i) {
    auto t = i == 0 ? TwistData::trivial(2) : random_twist(rng, 2);
    UqMinus u(d, t);
    auto pr = synthesize_root_vectors(u, w, 4);
    auto res = run_cauchon(pr.cgl);
    auto want = commutation_matrix(d, w, t);
    ++runs;
    if (!res.ok || !(res.bichar->lattice() == want->lattice())) ++failures;
  }
  auto b = random_torus(rng, 3);
  auto qa = CGLPresentation::quantum_affine(b->lattice(), std::vector<UnitMonomial>(3, qunit(2)));
  auto res = run_cauchon(qa);
  StageAlgebra alg(qa, -1, -1);
  bool fixed = res.ok && res.bichar->lattice() == b->lattice();
  for (const auto& st : res.stages)
    for (int j = 0; j < 3; ++j) fixed = fixed && st.tuple[j] == alg.generator(j);
  return {failures == 0 && fixed,
          fmt("%ld runs (1 untwisted, 3 twisted), %ld mismatches; quantum affine fixed: %ld", runs, failures, fixed)};
}

Outcome delta_convention(const Profile&) {
  std::set<OrbitConvention> seen;
  int words = 0, bad = 0;
  std::string counts;
  for (const auto& type : {"A2", "B2"}) {
    auto d = RootDatum::make(type);
    auto all = all_reduced_words(d);
    for (const auto& word : all) {
      auto w = validate_reduced(d, word);
      auto c = delta_check(d, w, commutation_matrix(d, w, TwistData::trivial(2)));
      ++words;
      if (c.matching.size() != 1 || !c.pure_q) {
        ++bad;
        continue;
      }
      seen.insert(c.matching.front());
    }
    counts += std::string(counts.empty() ? "" : ", ") + type + ": " + std::to_string(all.size()) + " words";
  }
  bool ok = bad == 0 && seen.size() == 1;
  std::string conv = seen.size() == 1 ? to_string(*seen.begin()) : "inconsistent";
  return {ok, counts + "; convention " + conv + fmt("; %ld words without a unique match", bad)};
}

Outcome gp_equality(const Profile&) {
  Rng rng(1212);
  int checks = 0, failures = 0;
  for (const auto& type : {"A2", "B2", "G2", "A3"}) {
    auto d = RootDatum::make(type);
    auto w = validate_reduced(d, d.canonical_word());
    for (int i = 0; i < 5; ++i) {
      auto t = random_twist(rng, d.rank());
      auto g = gp_group(d, t, w);
      ++checks;
      if (!g.equals_qlk || !lattice_equal(g.generators, g.qlk)) ++failures;
    }
  }
  return {failures == 0, fmt("%ld twists, %ld failures", checks, failures)};
}

Outcome term_elements(const Profile&) {
  Rng rng(1313);
  int checks = 0, failures = 0, printed_cases = 0, printed_zero = 0;
  auto residue_zero = [](const UqMinus& u, const FreeElem& x, int a, const Scalar& c) {
    FreeElem e = free_mul(x, u.generator(a));
    free_add(e, free_mul(u.generator(a), x), -c);
    return u.is_zero(e);
  };
  for (const auto& type : {"A2", "B2"}) {
    auto d = RootDatum::make(type);
    for (int i = 0; i < 3; ++i) {
      auto t = i == 0 ? TwistData::trivial(2) : random_twist(rng, 2);
      UqMinus u(d, t);
      for (int a = 0; a < 2; ++a) {
        int b = 1 - a, c = d.cartan(a, b), qe = d.q_exp(a);
        if (i == 0) {
          auto x = term0_element(u, a, b);
          ++checks;
          if (!residue_zero(u, x, a, Scalar::var(0, c * qe))) ++failures;
          ++printed_cases;
          if (residue_zero(u, x, a, Scalar::var(0, -qe))) ++printed_zero;
        }
        Scalar r = t.simple(b, a).to_scalar();
        for (int s : {1, -1}) {
          auto x = term1_element(u, a, b, s);
          ++checks;
          if (!residue_zero(u, x, a, r * Scalar::var(0, s * c * qe))) ++failures;
          ++printed_cases;
          if (residue_zero(u, x, a, r * Scalar::var(0, -s * c * qe))) ++printed_zero;
        }
      }
    }
  }
  return {failures == 0,
          fmt("%ld residues with factors q_a^a and r(a',a) q_a^(+-a), %ld nonzero", checks, failures) +
              fmt("; printed factors give zero residue in %ld of %ld cases", printed_zero, printed_cases)};
}

struct Spec {
  int id;
  const char* title;
  double budget;
  Outcome (*run)(const Profile&);
};

const std::vector<Spec>& specs() {
  static const std::vector<Spec> s = {
      {1, "torus algebra soundness", 5, torus_soundness},
      {2, "center/kernel agreement", 10, center_kernel},
      {3, "saturation", 5, saturation},
      {4, "phi_{f,c} braiding at cutoff", 30, phi_fc_braiding},
      {5, "rigidity verdicts", 60, rigidity_suite},
      {6, "restriction calculus", 30, restriction_calculus},
      {7, "constant decomposition", 10, const_decomposition},
      {8, "PBW/Serre dimensions", 120, serre_dimensions},
      {9, "linear automorphism classification", 120, linear_classification},
      {10, "Cauchon engine", 60, cauchon_engine},
      {11, "Delta commutation exponents", 30, delta_convention},
      {12, "G_p equals <q_lk>", 10, gp_equality},
      {13, "term0/term1 elements", 20, term_elements},
  };
  return s;
}

std::vector<CriterionResult> run_core(const Profile& p,
                                      const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const auto& s : specs()) {
    CriterionResult r;
    r.id = s.id;
    r.title = s.title;
    r.budget = s.budget;
    auto t0 = std::chrono::steady_clock::now();
    try {
      auto o = s.run(p);
      r.property = o.ok;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.property = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    out.push_back(r);
  }
  return out;
}

int env_cutoff() {
  const char* v = std::getenv("QRIGID_CUTOFF");
  if (!v) return 12;
  try {
    int c = std::stoi(v);
    return c >= 1 ? c : 12;
  } catch (...) {
    return 12;
  }
}

}  // namespace

bool known_profile(const std::string& profile) { return profile == "smoke" || profile == "full"; }

std::vector<CriterionResult> run_suite(const std::string& profile,
                                       const std::function<void(const CriterionResult&)>& on_result) {
  if (!known_profile(profile)) throw SuiteError("unknown profile \"" + profile + "\"");
  Profile p;
  p.full = profile == "full";
  p.cutoff = p.full ? 12 : std::min(env_cutoff(), 8);
  auto results = run_core(p, on_result);
  CriterionResult r;
  r.id = 14;
  r.title = "determinism";
  auto t0 = std::chrono::steady_clock::now();
  auto again = run_core(p, {});
  std::string a = suite_report(profile, results).dump(), b = suite_report(profile, again).dump();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.budget = 2 * 600;
  r.property = a == b;
  r.detail = r.property ? "two runs gave identical reports (" + std::to_string(a.size()) + " bytes)"
                        : "reports differ between runs";
  if (on_result) on_result(r);
  results.push_back(r);
  return results;
}

Json suite_report(const std::string& profile, const std::vector<CriterionResult>& results) {
  Json rows = Json::array();
  bool all = true;
  for (const auto& r : results) {
    rows.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.property}, {"detail", r.detail}});
    all = all && r.property;
  }
  return {{"profile", profile}, {"criteria", rows}, {"all_pass", all}};
}

std::string result_line(const CriterionResult& r) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s criterion %2d: ", r.pass() ? "PASS" : "FAIL", r.id);
  std::string s = buf + r.title;
  std::snprintf(buf, sizeof buf, " [%.2f s / %.0f s] ", r.seconds, r.budget);
  return s + buf + r.detail;
}

}  // namespace qrigid
