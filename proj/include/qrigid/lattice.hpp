#pragma once

#include <optional>
#include <vector>

#include "qrigid/scalar.hpp"

namespace qrigid {

using IntVec = std::vector<long long>;

struct LatticeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  static IntMatrix from_rows(const std::vector<IntVec>& rows, std::size_t cols);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  Integer& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  IntVec row(std::size_t i) const;
  std::vector<IntVec> to_rows() const;
  void swap_rows(std::size_t i, std::size_t j);
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& k);  // dst += k*src
  bool row_is_zero(std::size_t i) const;
  void drop_zero_rows();
  IntMatrix transpose() const;
  bool operator==(const IntMatrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<Integer> a_;
};

// Canonical Hermite basis of the lattice spanned by the rows (zero rows removed).
IntMatrix hermite_normal_form(IntMatrix m);
// Rows form a basis of {x in Z^n : A x = 0}, in Hermite form.
IntMatrix integer_kernel(const IntMatrix& a);
// Nonzero invariant factors d_1 | d_2 | ... of the Smith form.
std::vector<Integer> smith_diagonal(IntMatrix m);
// Membership of v in the row lattice of a Hermite basis.
bool in_row_lattice(const IntMatrix& hnf, const IntVec& v);

// Exponent data of a multiplicatively skew-symmetric matrix q_{kl} with values in
// Lambda = Z^{kMaxVars} (+) Z/d.
struct ExpLattice {
  int n = 0;
  int64_t torsion_order = 0;           // 0: no torsion factor
  std::vector<UnitMonomial> entries;  // row-major n*n

  static ExpLattice trivial(int n, int64_t torsion_order = 0);
  const UnitMonomial& at(int k, int l) const { return entries[k * n + l]; }
  void set(int k, int l, UnitMonomial u);  // also stores the inverse at (l, k)
  bool operator==(const ExpLattice& o) const {
    return n == o.n && torsion_order == o.torsion_order && entries == o.entries;
  }
  // Lambda-valued image of j under row k: sum_l j_l E_{kl}.
  UnitMonomial row_image(int k, const IntVec& j) const;
  bool kernel_contains(const IntVec& j) const;
};

IntMatrix mult_kernel(const ExpLattice& lat);

struct SaturationResult {
  bool saturated = true;
  IntVec witness;                  // f not in Ker with n f in Ker
  long long multiple = 0;          // n
  std::vector<Integer> divisors;   // invariant factors of Ker inside its saturation
};
SaturationResult is_saturated(const ExpLattice& lat);

// Subgroups of Lambda generated by the given units.
IntMatrix subgroup_hnf(const std::vector<UnitMonomial>& gens, int64_t torsion_order);
bool lattice_equal(const std::vector<UnitMonomial>& a, const std::vector<UnitMonomial>& b);
bool subgroup_torsion_free(const std::vector<UnitMonomial>& gens, int64_t torsion_order);

// Exact feasibility of {A x = b, x >= 0}; returns a feasible point.
std::optional<std::vector<Rational>> lp_feasible(const std::vector<std::vector<Rational>>& a,
                                                 const std::vector<Rational>& b);

struct RationalCone {
  std::vector<IntVec> gens;
};

struct ConeRays {
  bool strict = true;
  std::vector<IntVec> rays;           // primitive, sorted
  std::vector<IntVec> certificate;    // non-strict: generators with a vanishing combination
  std::vector<Rational> coefficients; // the combination (positive)
};

IntVec primitive(IntVec v);
ConeRays extremal_rays(const RationalCone& c);
bool cone_contains(const RationalCone& c, const IntVec& v);

}  // namespace qrigid
