#pragma once

#include <mutex>
#include <tuple>

#include "qrigid/rootsys.hpp"

namespace qrigid {

struct CauchonError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exponents of x_1^a_1 ... x_N^a_N (ascending order).
using PbwExps = std::vector<int>;
using PbwPoly = std::map<PbwExps, Scalar>;

void poly_add(PbwPoly& p, const PbwExps& e, const Scalar& c);
PbwPoly poly_scaled(const PbwPoly& p, const Scalar& c);
std::string poly_to_string(const PbwPoly& p);

// Iterated Ore extension x_l x_k = q_lk x_k x_l + delta_l(x_k) for k < l.
struct CGLPresentation {
  int n = 0;
  ExpLattice q;                              // q.at(l, k) = q_lk
  std::vector<UnitMonomial> ql;              // sigma_l delta_l = q_l delta_l sigma_l
  std::vector<std::vector<PbwPoly>> delta;   // delta[l][k] for k < l
  int nilpotency_bound = 8;

  static CGLPresentation quantum_affine(ExpLattice q, std::vector<UnitMonomial> ql);
  Scalar qlk(int l, int k) const { return q.at(l, k).to_scalar(); }
  // Shapes, triangularity of the delta tables, sigma-delta compatibility, q_l != 1.
  void validate() const;
  bool has_derivations() const;
};

// Stage algebra: delta_l kept for l <= active, localized at x_inverted (or -1).
class StageAlgebra {
 public:
  StageAlgebra(const CGLPresentation& p, int active, int inverted);

  int rank() const { return p_->n; }
  PbwPoly generator(int k, int power = 1) const;
  PbwPoly one() const;
  PbwPoly mul(const PbwPoly& a, const PbwPoly& b) const;
  PbwPoly mono_mul(const PbwExps& a, const PbwExps& b) const;
  // delta_m(a) = x_m a - sigma_m(a) x_m for a in the subalgebra of x_1..x_{m-1}.
  PbwPoly delta(int m, const PbwPoly& a) const;
  PbwPoly sigma(int m, const PbwPoly& a, int power = 1) const;
  // The delta table of level l evaluated on a tuple of elements.
  PbwPoly table_on(int l, int k, const std::vector<PbwPoly>& z) const;

 private:
  PbwPoly lmul(int l, int s, const PbwExps& a) const;
  PbwPoly swap(int l, int s, int k, int e) const;

  const CGLPresentation* p_;
  int active_, inv_;
  std::vector<std::vector<Scalar>> qs_, qsi_;
  mutable std::map<std::tuple<int, int, PbwExps>, PbwPoly> memo_;
  mutable int depth_ = 0;
};

struct StageReport {
  int m = 0;                          // 1-based stage index
  std::vector<PbwPoly> tuple;         // x^(m) in the stage-(m+1) generators
  std::vector<int> powers;            // number of nonzero delta powers per j (j < m)
  bool relations_ok = true;
  std::vector<std::pair<int, int>> failures;  // (l, k), 1-based
};

struct CauchonResult {
  std::vector<StageReport> stages;  // m = N, ..., 2
  BicharPtr bichar;                 // X_k X_l = q_kl X_l X_k
  bool ok = true;
};

// One step of deleting derivations at 0-based level m, on a presentation whose
// derivations above m have already been removed.
StageReport delete_step(const CGLPresentation& p, int m);
CauchonResult run_cauchon(const CGLPresentation& p);

struct DeltaCheck {
  std::vector<std::vector<int>> torus_exponents;  // q-exponents of Delta_k Delta_l (Delta_l Delta_k)^-1
  bool pure_q = true;
  std::vector<OrbitConvention> matching;
  std::vector<Exps> deltas;                       // exponent vectors of the Delta_l
};
// With a twist t, Delta_k Delta_l (Delta_l Delta_k)^-1 carries the extra factor
// r(gamma_k, gamma_l), gamma_l the weight of Delta_l; it is divided out before comparing.
DeltaCheck delta_check(const RootDatum& d, const ReducedWord& w, const BicharPtr& b,
                       const TwistData* t = nullptr);

}  // namespace qrigid
