#include <doctest.h>

#include "support.hpp"

using namespace qrigid;
using namespace qrigid::testing;

namespace {

BicharPtr kernel_example() { return q_torus(3, {{0, 1, 1}, {0, 2, -1}, {1, 2, 1}}); }

TruncatedSeries exact(const TorusElement& u, const DegreeVector& d) {
  return TruncatedSeries::exact(u, d);
}

// phi_{f,c}^-1(X^g) = X^g + (Q^-1 - 1) sum_m c^m Q^-(m-1) (X^f)^m X^g with Q = q_{f,g}.
TorusElement phi_fc_inverse_u(const BicharPtr& b, const DegreeVector& d, int cutoff,
                              const Exps& f, const Scalar& c, const Exps& g) {
  Scalar qi = b->skew(f, g).inverse().to_scalar();
  TorusElement out(b), pw = TorusElement::one(b);
  int df = degree(d, f);
  for (int m = 1; m * df <= cutoff; ++m) {
    pw = pw * TorusElement::monomial(b, f);
    out += pw.scaled((qi - Scalar(1)) * c.pow(m) * qi.pow(m - 1));
  }
  return out;
}

// Inverse by the left-sided degree recursion psi(1 + u_k)(1 + v_k) = 1.
UnipotentAuto left_inverse(const UnipotentAuto& phi) {
  const auto& b = phi.bichar();
  const auto& d = phi.degrees();
  int n = phi.rank();
  std::vector<TorusElement> v(n, TorusElement(b));
  for (int m = 1; m <= phi.cutoff(); ++m) {
    auto psi = UnipotentAuto::unchecked(b, d, phi.cutoff(), v);
    std::vector<TorusElement> next;
    for (int k = 0; k < n; ++k) {
      auto img = psi.apply(TruncatedSeries(TorusElement::one(b) + phi.u(k), d, m));
      auto inv = img.inverse();
      next.push_back(TruncatedSeries(inv.payload() - TorusElement::one(b), d, m).payload());
    }
    v = next;
  }
  return UnipotentAuto::unchecked(b, d, phi.cutoff(), v);
}

bool same_tuple(const UnipotentAuto& a, const UnipotentAuto& b) {
  int m = std::min(a.cutoff(), b.cutoff());
  for (int k = 0; k < a.rank(); ++k)
    if (!TruncatedSeries(a.u(k), a.degrees(), m).agrees_with(TruncatedSeries(b.u(k), b.degrees(), m)))
      return false;
  return true;
}

TorusElement random_element(std::mt19937_64& rng, const BicharPtr& b, const DegreeVector& d,
                            int terms) {
  TorusElement v(b);
  for (int i = 0; i < terms; ++i) v.add_term(random_exps(rng, b->rank(), 2), random_small(rng));
  (void)d;
  return v;
}

}  // namespace

TEST_CASE("build accepts central tuples and rejects broken braiding") {
  auto b = kernel_example();
  DegreeVector d{1, 1, 1};
  auto id = UnipotentAuto::identity(b, d, 9);
  CHECK(id.is_identity());
  CHECK(support_report(id).points.empty());
  auto z = mono(b, {1, 1, 1});
  auto phi = UnipotentAuto::build(b, d, 9, {z.scaled(Scalar(2)), z, z.scaled(Scalar::var(0))});
  CHECK(support_report(phi).in_kernel);

  auto g = q_torus(3, {{0, 1, 2}, {0, 2, 1}, {1, 2, 1}});
  try {
    UnipotentAuto::build(g, d, 9, {mono(g, {0, 1, 0}), TorusElement(g), TorusElement(g)});
    FAIL("expected a braiding violation");
  } catch (const BraidingViolation& v) {
    // (1+X_2)X_1 braids with X_2; the first failing pair involves X_3.
    CHECK(v.k == 1);
    CHECK(v.l == 3);
  }
  auto b2 = q_torus(3, {{0, 1, 1}, {0, 2, 2}, {1, 2, -1}});
  CHECK(braiding_violation(b2, d, 9, {mono(b2, {0, 1, 0}), TorusElement(b2), TorusElement(b2)})
            ->l == 3);
  CHECK_THROWS_AS(UnipotentAuto::build(b, d, 9, {mono(b, {-1, 1, 0}), TorusElement(b), TorusElement(b)}),
                  UnipotentError);
}

TEST_CASE("apply on generators and their inverses") {
  auto b = kernel_example();
  DegreeVector d{1, 1, 1};
  auto z = mono(b, {1, 1, 1});
  auto phi = UnipotentAuto::build(b, d, 9, {z, z.scaled(Scalar(3)), z.scaled(Scalar(-1))});
  auto x3 = exact(TorusElement::generator(b, 2), d);
  CHECK(phi.apply(x3).payload() == (TorusElement::one(b) - z) * TorusElement::generator(b, 2));
  for (int k = 0; k < 3; ++k) {
    auto p = phi.image(unit_vec(3, k)) * phi.image(scale_exps(unit_vec(3, k), -1));
    CHECK(p.agrees_with(exact(TorusElement::one(b), d)));
    CHECK(p.cutoff() == 9);
  }
  auto id = UnipotentAuto::identity(b, d, 9);
  auto v = TruncatedSeries(z + mono(b, {2, -1, 0}), d, 6);
  CHECK(id.apply(v).payload() == v.payload());
}

TEST_CASE("phi_{f,c} matches its closed form") {
  auto b = q_torus(2, {{0, 1, 1}});
  DegreeVector d{1, 1};
  Scalar c = Scalar::parse("2");
  auto phi = phi_fc(b, d, 12, {1, 0}, c);
  CHECK(phi.u(0).is_zero());
  auto rep = support_report(phi);
  REQUIRE(rep.points.size() == 12);
  for (int m = 1; m <= 12; ++m) CHECK(rep.points[m - 1] == Exps{m, 0});
  CHECK(rep.cone.rays == std::vector<IntVec>{{1, 0}});
  CHECK(!rep.in_kernel);
  // phi(X_2) = X_2 + (1 - q^-1) sum c^m X^(m,0) X_2.
  for (int m = 1; m <= 12; ++m)
    CHECK(phi.u(1).coefficient({m, 0}) == (Scalar(1) - Scalar::var(0, -1)) * c.pow(m));
  CHECK(phi_fc(b, d, 12, {1, 0}, Scalar()).is_identity());
  CHECK_THROWS_AS(phi_fc(b, d, 12, {0, 0}, c), UnipotentError);

  std::mt19937_64 rng(17);
  for (int it = 0; it < 10; ++it) {
    auto t = random_torus(rng, 3);
    DegreeVector dv{1, 1 + static_cast<int>(rng() % 2), 1};
    Exps f = random_ray(rng, t, dv, 3);
    Scalar cc = random_small(rng);
    auto p = phi_fc(t, dv, 8, f, cc);
    for (int j = 0; j < 4; ++j) {
      Exps g = random_exps(rng, 3, 2);
      Scalar a = Scalar(1) - t->skew(f, g).inverse().to_scalar();
      TorusElement expect = mono(t, g), pw = TorusElement::one(t);
      for (int m = 1; m * degree(dv, f) <= 8; ++m) {
        pw = pw * mono(t, f);
        expect += (pw * mono(t, g)).scaled(a * cc.pow(m));
      }
      auto img = p.image(g);
      CHECK(img.cutoff() == degree(dv, g) + 8);
      CHECK(img.agrees_with(exact(expect, dv)));
    }
  }
}

TEST_CASE("inversion agrees with the closed form and the left recursion") {
  auto b = q_torus(2, {{0, 1, 1}});
  DegreeVector d{1, 1};
  Scalar c = Scalar::parse("q");
  auto phi = phi_fc(b, d, 12, {1, 0}, c);
  auto inv = invert_auto(phi);
  for (int k = 0; k < 2; ++k)
    CHECK(inv.inverse.u(k) == phi_fc_inverse_u(b, d, 12, {1, 0}, c, unit_vec(2, k)));
  CHECK(inv.finite[0]);
  CHECK(!inv.finite[1]);
  for (int m = 1; m <= 12; ++m) CHECK(!inv.inverse.u(1).coefficient({m, 0}).is_zero());

  auto kb = kernel_example();
  DegreeVector d3{1, 1, 1};
  auto z = mono(kb, {1, 1, 1});
  auto cen = UnipotentAuto::build(kb, d3, 12, {z, TorusElement(kb), TorusElement(kb)});
  auto ci = invert_auto(cen);
  CHECK(compose(cen, ci.inverse).is_identity());
  CHECK(!ci.finite[0]);
  // phi(z) = (1+z) z, so the inverse is not the plain geometric series in z.
  CHECK(ci.inverse.u(0) != TruncatedSeries(TorusElement::one(kb) + z, d3, 12).inverse().payload() -
                               TorusElement::one(kb));
  // With a central generator X_3 fixed by phi, it is.
  auto cb = q_torus(3, {{0, 1, 1}});
  auto x3 = TorusElement::generator(cb, 2);
  auto cg = UnipotentAuto::build(cb, d3, 12, {x3, x3.scaled(Scalar(2)), TorusElement(cb)});
  auto cgi = invert_auto(cg);
  CHECK(cgi.inverse.u(0) == TruncatedSeries(TorusElement::one(cb) + x3, d3, 12).inverse().payload() -
                                TorusElement::one(cb));
  CHECK(!cgi.finite[0]);

  std::mt19937_64 rng(23);
  for (int it = 0; it < 6; ++it) {
    auto t = random_torus(rng, 3);
    DegreeVector dv{1, 1, 2};
    auto p1 = phi_fc(t, dv, 7, random_ray(rng, t, dv, 2), random_small(rng));
    auto p2 = phi_fc(t, dv, 7, random_ray(rng, t, dv, 2), random_small(rng));
    auto phi2 = compose(p1, p2);
    CHECK(!braiding_violation(t, dv, 7, phi2.tuple()));
    auto r = invert_auto(phi2);
    CHECK(same_tuple(r.inverse, left_inverse(phi2)));
    CHECK(compose(phi2, r.inverse).is_identity());
    CHECK(compose(r.inverse, phi2).is_identity());
    CHECK(!braiding_violation(t, dv, 7, r.inverse.tuple()));
  }
}

TEST_CASE("group laws and valuation shift") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 5; ++it) {
    auto t = random_torus(rng, 3);
    DegreeVector dv{1, 2, 1};
    auto a = phi_fc(t, dv, 6, random_ray(rng, t, dv, 2), random_small(rng));
    auto b = phi_fc(t, dv, 6, random_ray(rng, t, dv, 2), random_small(rng));
    auto c = phi_fc(t, dv, 6, random_ray(rng, t, dv, 2), random_small(rng));
    CHECK(same_tuple(compose(compose(a, b), c), compose(a, compose(b, c))));
    auto id = UnipotentAuto::identity(t, dv, 6);
    CHECK(same_tuple(compose(a, id), a));
    CHECK(same_tuple(compose(id, a), a));
    auto ab = compose(a, b);
    for (int j = 0; j < 10; ++j) {
      auto v = TruncatedSeries(random_element(rng, t, dv, 3), dv, 10);
      auto nu = valuation(v.payload(), dv);
      if (!nu) continue;
      auto diff = ab.apply(v) - v;
      auto dn = valuation(diff.payload(), dv);
      if (dn) CHECK(*dn >= *nu + 1);
      // Applying the composite equals applying the factors in turn.
      CHECK(ab.apply(v).agrees_with(a.apply(b.apply(v))));
    }
  }
}

TEST_CASE("supports of composites and inverses") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 6; ++it) {
    auto t = random_torus(rng, 3);
    DegreeVector dv{1, 1, 1};
    auto a = phi_fc(t, dv, 6, random_ray(rng, t, dv, 2), random_small(rng));
    auto b = phi_fc(t, dv, 6, random_ray(rng, t, dv, 2), random_small(rng));
    auto ab = compose(a, b);
    std::vector<Exps> gens = a.support();
    for (const auto& g : b.support()) gens.push_back(g);
    Semigroup s(gens, dv);
    for (const auto& g : ab.support()) CHECK(s.contains(g));
    auto inv = invert_auto(ab).inverse;
    Semigroup sab(ab.support(), dv), sinv(inv.support(), dv);
    for (const auto& g : inv.support()) CHECK(sab.contains(g));
    for (const auto& g : ab.support()) CHECK(sinv.contains(g));
    // Images of arbitrary monomials stay inside the semigroup of the support.
    for (int j = 0; j < 3; ++j) {
      Exps g = random_exps(rng, 3, 2);
      auto img = ab.image(g) * exact(inverse_mono(t, g), dv);
      for (const auto& [h, c] : img.payload().terms())
        if (h != Exps(3, 0)) CHECK(sab.contains(h));
    }
  }
}

TEST_CASE("restriction to rays") {
  auto b = q_torus(2, {{0, 1, 1}});
  DegreeVector d{1, 1};
  auto id = UnipotentAuto::identity(b, d, 8);
  CHECK(restrict_to_ray(id, {1, 0}).is_identity());
  auto a = compose(phi_fc(b, d, 8, {1, 0}, Scalar(1)), phi_fc(b, d, 8, {0, 1}, Scalar(2)));
  auto rep = support_report(a);
  CHECK(rep.cone.rays == std::vector<IntVec>{{0, 1}, {1, 0}});
  auto r = restrict_to_ray(a, {1, 0});
  for (const auto& g : r.support()) CHECK(g[1] == 0);
  CHECK(same_tuple(r, phi_fc(b, d, 8, {1, 0}, Scalar(1))));
  CHECK(restrict_to_ray(a, {-1, 0}).is_identity());
  CHECK_THROWS_AS(restrict_to_ray(a, {1, 1}), UnipotentError);

  std::mt19937_64 rng(5);
  int checked = 0;
  for (int it = 0; it < 8; ++it) {
    auto t = random_torus(rng, 3);
    DegreeVector dv{1, 1, 1};
    auto phi = compose(phi_fc(t, dv, 6, random_ray(rng, t, dv, 2), random_small(rng)),
                       phi_fc(t, dv, 6, random_ray(rng, t, dv, 2), random_small(rng)));
    auto psi = phi_fc(t, dv, 6, random_ray(rng, t, dv, 2), random_small(rng));
    auto joint = extremal_rays(joint_cone({&phi, &psi}));
    REQUIRE(joint.strict);
    auto pp = compose(phi, psi);
    auto phinv = invert_auto(phi).inverse;
    auto own = support_report(phi).cone.rays;
    for (const auto& ray : joint.rays) {
      Exps f(ray.begin(), ray.end());
      auto rp = restrict_to_ray(phi, f);
      // (i)
      for (int j = 0; j < 3; ++j) {
        Exps g = random_exps(rng, 3, 2);
        auto lhs = rp.image(g);
        auto w = phi.image(g) * exact(inverse_mono(t, g), dv);
        auto rhs = TruncatedSeries(restrict_element(w.payload(), f), dv, w.cutoff()) *
                   exact(mono(t, g), dv);
        CHECK(lhs.agrees_with(rhs));
      }
      // (ii)
      CHECK(same_tuple(restrict_unchecked(pp, f), compose(rp, restrict_to_ray(psi, f))));
      // (iii)
      if (std::find(own.begin(), own.end(), ray) != own.end()) {
        CHECK(same_tuple(invert_auto(rp).inverse, restrict_unchecked(phinv, f)));
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("constant decomposition") {
  auto b = q_torus(2, {{0, 1, 1}});
  DegreeVector d{1, 1};
  Scalar c = Scalar::parse("3/2");
  auto phi = phi_fc(b, d, 10, {1, 0}, c);
  auto dec = const_decompose(phi, {1, 0});
  REQUIRE(!dec.c.empty());
  CHECK(dec.c[0] == c);
  for (std::size_t i = 1; i < dec.c.size(); ++i) CHECK(dec.c[i].is_zero());
  CHECK(same_tuple(recompose(b, d, 10, dec), phi));
  auto id = const_decompose(UnipotentAuto::identity(b, d, 10), {1, 0});
  for (const auto& x : id.c) CHECK(x.is_zero());

  Scalar c2 = Scalar::parse("q");
  auto two = compose(phi_fc(b, d, 10, {2, 0}, c2), phi);
  auto dec2 = const_decompose(two, {1, 0});
  CHECK(dec2.c[0] == c);
  CHECK(dec2.c[1] == c2);
  CHECK(same_tuple(recompose(b, d, 10, dec2), two));

  auto t = q_torus(3, {{0, 1, 1}, {0, 2, -2}, {1, 2, 1}});
  DegreeVector dv{1, 2, 1};
  auto p = compose(phi_fc(t, dv, 10, {2, 0, 2}, Scalar(5)), phi_fc(t, dv, 10, {1, 0, 1}, c2));
  auto dp = const_decompose(p, {1, 0, 1});
  CHECK(dp.c[0] == c2);
  CHECK(same_tuple(recompose(t, dv, 10, dp), p));
  CHECK_THROWS_AS(const_decompose(p, {1, 0, 0}), UnipotentError);
}

TEST_CASE("rigidity verdicts") {
  auto kb = kernel_example();
  DegreeVector d3{1, 1, 1};
  auto z = mono(kb, {1, 1, 1});
  auto cen = UnipotentAuto::build(kb, d3, 12, {z, z, TorusElement(kb)});
  CHECK(rigidity_verdict(cen).verdict == Verdict::Central);
  CHECK(rigidity_verdict(UnipotentAuto::identity(kb, d3, 12)).verdict == Verdict::Central);
  auto p = phi_fc(kb, d3, 12, {1, 0, 0}, Scalar(1));
  auto rep = rigidity_verdict(p);
  CHECK(rep.verdict == Verdict::NotBifiniteAtCutoff);
  CHECK(!rep.noncentral_points.empty());
  CHECK(rigidity_verdict(compose(p, cen)).verdict == Verdict::NotBifiniteAtCutoff);

  ExpLattice tl = ExpLattice::trivial(2, 2);
  UnitMonomial u;
  u.tor = 1;
  u.order = 2;
  tl.set(0, 1, u);
  auto tor = make_bichar(tl);
  auto id = UnipotentAuto::identity(tor, {1, 1}, 4);
  CHECK_THROWS_AS(rigidity_verdict(id), UnipotentError);
}
