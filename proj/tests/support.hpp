#pragma once

#include <random>

#include "qrigid/completion.hpp"

namespace qrigid::testing {

inline UnitMonomial qpow(int a, int r1 = 0) {
  UnitMonomial u;
  u.free.e[0] = a;
  u.free.e[1] = r1;
  return u;
}

// Torus with q_kl = q^(a_kl) for the given upper-triangular exponents.
inline BicharPtr q_torus(int n, const std::vector<std::tuple<int, int, int>>& upper) {
  ExpLattice l = ExpLattice::trivial(n);
  for (auto [k, j, a] : upper) l.set(k, j, qpow(a));
  return make_bichar(l);
}

inline BicharPtr random_torus(std::mt19937_64& rng, int n, int span = 2) {
  std::uniform_int_distribution<int> e(-span, span);
  ExpLattice l = ExpLattice::trivial(n);
  for (int k = 0; k < n; ++k)
    for (int j = k + 1; j < n; ++j) l.set(k, j, qpow(e(rng)));
  if (l.at(0, 1).is_one()) l.set(0, 1, qpow(1));
  return make_bichar(l);
}

inline Exps random_exps(std::mt19937_64& rng, int n, int r) {
  std::uniform_int_distribution<int> e(-r, r);
  Exps f(n);
  for (auto& x : f) x = e(rng);
  return f;
}

inline Scalar random_coef(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> c(-3, 3), p(-2, 2);
  int a = c(rng);
  if (a == 0) a = 1;
  Scalar s = Scalar::var(0, p(rng)) * Scalar(a) + Scalar(rng() % 2);
  return s.is_zero() ? Scalar(1) : s;
}

inline TorusElement mono(const BicharPtr& b, const Exps& f, const Scalar& c = Scalar(1)) {
  return TorusElement::monomial(b, f, c);
}

}  // namespace qrigid::testing

#include "qrigid/unipotent.hpp"
#include <set>

namespace qrigid::testing {

// (X^g)^-1 = sigma(g, -g)^-1 X^-g.
inline TorusElement inverse_mono(const BicharPtr& b, const Exps& g) {
  Exps h = scale_exps(g, -1);
  return TorusElement::monomial(b, h, Scalar::monomial(-b->cocycle(g, h)));
}

inline Exps unit_vec(int n, int k) {
  Exps e(n, 0);
  e[k] = 1;
  return e;
}

// Membership of g in N S \ {0} for a set S of positive-degree vectors.
class Semigroup {
 public:
  Semigroup(std::vector<Exps> gens, DegreeVector d) : s_(std::move(gens)), d_(std::move(d)) {}
  bool contains(const Exps& g) {
    if (degree(d_, g) < 1) return false;
    auto it = memo_.find(g);
    if (it != memo_.end()) return it->second;
    bool r = false;
    for (const auto& s : s_) {
      if (s == g) { r = true; break; }
      Exps h = g;
      for (std::size_t i = 0; i < h.size(); ++i) h[i] -= s[i];
      if (contains(h)) { r = true; break; }
    }
    memo_[g] = r;
    return r;
  }

 private:
  std::vector<Exps> s_;
  DegreeVector d_;
  std::map<Exps, bool> memo_;
};

// Random f with D(f) in [1, dmax] outside the kernel.
inline Exps random_ray(std::mt19937_64& rng, const BicharPtr& b, const DegreeVector& d, int dmax) {
  std::uniform_int_distribution<int> e(-1, 2);
  for (int tries = 0;; ++tries) {
    if (tries > 10000) throw std::runtime_error("no admissible ray");
    Exps f(b->rank());
    for (auto& x : f) x = e(rng);
    int df = degree(d, f);
    if (df >= 1 && df <= dmax && !b->in_kernel(f)) return f;
  }
}

inline Scalar random_small(std::mt19937_64& rng) {
  static const char* choices[] = {"1", "2", "-1", "1/2", "q", "-q^-1", "3", "q^2"};
  return Scalar::parse(choices[rng() % 8]);
}

}  // namespace qrigid::testing
