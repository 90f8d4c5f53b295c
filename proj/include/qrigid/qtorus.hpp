#pragma once

#include <map>
#include <memory>

#include "qrigid/lattice.hpp"

namespace qrigid {

using Exps = std::vector<int>;
using DegreeVector = std::vector<int>;

struct TorusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The matrix q = (q_kl) of the quantum torus X_k X_l = q_kl X_l X_k.
class Bicharacter {
 public:
  explicit Bicharacter(ExpLattice lat);

  int rank() const { return lat_.n; }
  const ExpLattice& lattice() const { return lat_; }
  const UnitMonomial& entry(int k, int l) const { return lat_.at(k, l); }

  // X^f X^g = sigma(f, g) X^(f+g) for ordered monomials.
  Monomial cocycle(const Exps& f, const Exps& g) const;
  // q_{f,g} = X^f X^g X^-f X^-g.
  UnitMonomial skew(const Exps& f, const Exps& g) const;
  bool in_kernel(const Exps& f) const;
  const IntMatrix& kernel() const { return kernel_; }

  bool operator==(const Bicharacter& o) const { return lat_ == o.lat_; }

 private:
  ExpLattice lat_;
  IntMatrix kernel_;
};

using BicharPtr = std::shared_ptr<const Bicharacter>;
BicharPtr make_bichar(ExpLattice lat);

class TorusElement {
 public:
  TorusElement() = default;
  explicit TorusElement(BicharPtr b) : b_(std::move(b)) {}
  static TorusElement monomial(BicharPtr b, const Exps& f, const Scalar& c = Scalar(1));
  static TorusElement generator(BicharPtr b, int k, int power = 1);
  static TorusElement one(BicharPtr b) { return monomial(b, Exps(b->rank(), 0)); }

  const BicharPtr& bichar() const { return b_; }
  int rank() const { return b_->rank(); }
  const std::map<Exps, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Scalar coefficient(const Exps& f) const;
  void add_term(const Exps& f, const Scalar& c);

  TorusElement& operator+=(const TorusElement& o);
  TorusElement& operator-=(const TorusElement& o);
  TorusElement operator-() const;
  TorusElement scaled(const Scalar& c) const;
  friend TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }
  friend TorusElement operator-(TorusElement a, const TorusElement& b) { return a -= b; }
  friend TorusElement operator*(const TorusElement& a, const TorusElement& b);
  bool operator==(const TorusElement& o) const { return terms_ == o.terms_; }
  bool operator!=(const TorusElement& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  void check_same(const TorusElement& o) const;
  BicharPtr b_;
  std::map<Exps, Scalar> terms_;
};

int degree(const DegreeVector& d, const Exps& f);
Exps add_exps(const Exps& a, const Exps& b);
Exps scale_exps(const Exps& a, int k);

std::optional<int> valuation(const TorusElement& u, const DegreeVector& d);
TorusElement graded_component(const TorusElement& u, int m, const DegreeVector& d);
std::vector<Exps> support(const TorusElement& u);
bool is_central(const TorusElement& u);
TorusElement power(const TorusElement& u, int k);  // k >= 0
TorusElement commutator(const TorusElement& a, const TorusElement& b);

}  // namespace qrigid
