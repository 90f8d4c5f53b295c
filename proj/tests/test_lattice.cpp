#include <doctest.h>

#include <algorithm>
#include <random>

#include "qrigid/lattice.hpp"

using namespace qrigid;

namespace {

UnitMonomial qpow(int a, int r1 = 0) {
  UnitMonomial u;
  u.free.e[0] = a;
  u.free.e[1] = r1;
  return u;
}

ExpLattice random_lattice(std::mt19937_64& rng, int n, int64_t torsion) {
  std::uniform_int_distribution<int> e(-1, 1), t(0, 5);
  ExpLattice l = ExpLattice::trivial(n, torsion);
  for (int k = 0; k < n; ++k)
    for (int j = k + 1; j < n; ++j) {
      UnitMonomial u = qpow(e(rng), rng() % 3 == 0 ? e(rng) : 0);
      if (torsion) u.tor = t(rng);
      l.set(k, j, u);
    }
  return l;
}

// Visits every vector in [-r, r]^n.
template <class F>
void box(int n, int r, F&& f) {
  IntVec v(n, -r);
  for (;;) {
    f(v);
    int i = 0;
    while (i < n && v[i] == r) v[i++] = -r;
    if (i == n) return;
    ++v[i];
  }
}

}  // namespace

TEST_CASE("hermite, kernel and smith forms") {
  IntMatrix m = IntMatrix::from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}, 3);
  auto d = smith_diagonal(m);
  REQUIRE(d.size() == 3);
  CHECK(d[0] == 2);
  CHECK(d[1] == 6);
  CHECK(d[2] == 12);
  IntMatrix h = hermite_normal_form(IntMatrix::from_rows({{2, 0}, {1, 0}, {0, 3}}, 2));
  CHECK(h == IntMatrix::from_rows({{1, 0}, {0, 3}}, 2));
  IntMatrix k = integer_kernel(IntMatrix::from_rows({{1, 2, 3}}, 3));
  CHECK(k.rows() == 2);
  for (const auto& r : k.to_rows()) CHECK(r[0] + 2 * r[1] + 3 * r[2] == 0);
  CHECK(in_row_lattice(k, {1, 1, -1}));
  CHECK(!in_row_lattice(k, {1, 1, 1}));
}

TEST_CASE("multiplicative kernel examples") {
  ExpLattice a = ExpLattice::trivial(2);
  a.set(0, 1, qpow(1));
  CHECK(mult_kernel(a).rows() == 0);

  ExpLattice b = ExpLattice::trivial(3);
  b.set(0, 1, qpow(1));
  b.set(0, 2, qpow(-1));
  b.set(1, 2, qpow(1));
  CHECK(mult_kernel(b) == IntMatrix::from_rows({{1, 1, 1}}, 3));

  CHECK(mult_kernel(ExpLattice::trivial(4)).rows() == 4);
}

TEST_CASE("kernel agrees with brute force in a box") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 40; ++it) {
    int n = 2 + it % 3;
    ExpLattice l = random_lattice(rng, n, it % 4 == 0 ? 2 + it % 3 : 0);
    IntMatrix k = mult_kernel(l);
    for (const auto& r : k.to_rows()) CHECK(l.kernel_contains(r));
    box(n, 3, [&](const IntVec& v) { CHECK(l.kernel_contains(v) == in_row_lattice(k, v)); });
  }
}

TEST_CASE("saturation") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 20; ++it) CHECK(is_saturated(random_lattice(rng, 2 + it % 3, 0)).saturated);

  ExpLattice t = ExpLattice::trivial(2, 2);
  t.set(0, 1, UnitMonomial{Monomial{}, 1, 2});
  auto s = is_saturated(t);
  CHECK(!s.saturated);
  CHECK(s.witness == IntVec{1, 0});
  CHECK(s.multiple == 2);
  CHECK(mult_kernel(t) == IntMatrix::from_rows({{2, 0}, {0, 2}}, 2));

  CHECK(is_saturated(ExpLattice::trivial(1)).saturated);
}

TEST_CASE("saturation matches the box conditions") {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 50; ++it) {
    int n = 2 + it % 2;
    ExpLattice l = random_lattice(rng, n, 2 + it % 3);
    auto s = is_saturated(l);
    bool violation = false;
    box(n, 3, [&](const IntVec& f) {
      if (l.kernel_contains(f)) return;
      for (int m = 2; m <= 4; ++m) {
        IntVec g = f;
        for (auto& x : g) x *= m;
        if (l.kernel_contains(g)) violation = true;
      }
    });
    CHECK(s.saturated == !violation);
    if (!s.saturated) {
      CHECK(!l.kernel_contains(s.witness));
      IntVec g = s.witness;
      for (auto& x : g) x *= s.multiple;
      CHECK(l.kernel_contains(g));
    }
  }
}

TEST_CASE("subgroup equality") {
  CHECK(lattice_equal({qpow(2), qpow(1)}, {qpow(1)}));
  CHECK(!lattice_equal({qpow(2)}, {qpow(1)}));
  CHECK(lattice_equal({qpow(2), qpow(-1, 1)}, {qpow(1, 1), qpow(2, 0), qpow(3, 1)}));
  UnitMonomial tor{Monomial{}, 1, 2};
  CHECK(!subgroup_torsion_free({tor}, 2));
  CHECK(subgroup_torsion_free({qpow(2)}, 2));
  UnitMonomial a = qpow(1);
  a.order = 2;
  a.tor = 1;
  UnitMonomial b = qpow(1);
  b.order = 2;
  CHECK(!subgroup_torsion_free({a, b}, 2));
}

TEST_CASE("extremal rays") {
  auto r = extremal_rays({{{1, 0}, {0, 1}, {1, 1}}});
  CHECK(r.strict);
  CHECK(r.rays == std::vector<IntVec>{{0, 1}, {1, 0}});
  CHECK(extremal_rays({{{1, 0}}}).rays == std::vector<IntVec>{{1, 0}});
  CHECK(extremal_rays({{{2, 0}, {1, 0}, {0, 3}}}).rays == std::vector<IntVec>{{0, 1}, {1, 0}});
  CHECK(extremal_rays({{{-2, 1}, {1, 1}, {0, 1}}}).rays == std::vector<IntVec>{{-2, 1}, {1, 1}});

  auto ns = extremal_rays({{{1, 0}, {-1, 1}, {0, -1}}});
  CHECK(!ns.strict);
  CHECK(ns.certificate.size() == 3);

  CHECK(cone_contains({{{1, 0}, {0, 1}}}, {2, 3}));
  CHECK(!cone_contains({{{1, 0}, {0, 1}}}, {-1, 3}));

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-3, 3), s(1, 4);
  for (int it = 0; it < 30; ++it) {
    std::vector<IntVec> g;
    for (int i = 0; i < 5; ++i) g.push_back({std::abs(c(rng)), c(rng), std::abs(c(rng)) + 1});
    auto base = extremal_rays({g});
    std::shuffle(g.begin(), g.end(), rng);
    int k = s(rng);
    for (auto& x : g[0]) x *= k;
    CHECK(extremal_rays({g}).rays == base.rays);
    for (const auto& v : g) CHECK(cone_contains({base.rays}, v));
  }
}

TEST_CASE("exact LP") {
  auto x = lp_feasible({{1, 1}, {1, -1}}, {3, 1});
  REQUIRE(x);
  CHECK((*x)[0] == 2);
  CHECK((*x)[1] == 1);
  CHECK(!lp_feasible({{1, 1}}, {-1}));
}
