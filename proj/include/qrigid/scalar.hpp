#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qrigid {

using Rational = mpq_class;
using Integer = mpz_class;

// Indeterminates are q (index 0) and r1..r7.
inline constexpr int kMaxVars = 8;

struct ScalarError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string var_name(int index);
int var_index(std::string_view name);  // -1 when the name is not q or r1..r7

struct Monomial {
  std::array<int32_t, kMaxVars> e{};

  static Monomial var(int index, int power = 1) {
    Monomial m;
    m.e[index] = power;
    return m;
  }
  bool is_one() const {
    for (auto x : e)
      if (x != 0) return false;
    return true;
  }
  Monomial& operator+=(const Monomial& o) {
    for (int i = 0; i < kMaxVars; ++i) e[i] += o.e[i];
    return *this;
  }
  Monomial& operator-=(const Monomial& o) {
    for (int i = 0; i < kMaxVars; ++i) e[i] -= o.e[i];
    return *this;
  }
  Monomial operator+(const Monomial& o) const { return Monomial(*this) += o; }
  Monomial operator-(const Monomial& o) const { return Monomial(*this) -= o; }
  Monomial operator-() const { return Monomial() -= *this; }
  Monomial scaled(int k) const {
    Monomial m;
    for (int i = 0; i < kMaxVars; ++i) m.e[i] = e[i] * k;
    return m;
  }
  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;
};

// Sparse Laurent polynomial over Q; terms strictly increasing in lex order.
class LaurentPoly {
 public:
  struct Term {
    Monomial mono;
    Rational coef;
  };

  LaurentPoly() = default;
  LaurentPoly(long c);
  LaurentPoly(const Rational& c);
  static LaurentPoly monomial(const Monomial& m, const Rational& c = 1);
  static LaurentPoly from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  bool is_monomial() const { return terms_.size() == 1; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.back(); }

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

  LaurentPoly shifted(const Monomial& m) const;
  LaurentPoly scaled(const Rational& c) const;
  Monomial min_exponents() const;
  bool uses_var(int v) const;
  int max_degree(int v) const;

  bool operator==(const LaurentPoly& o) const;
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }
  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

// Monic gcd of two polynomials (nonnegative exponents), up to monomial factors.
LaurentPoly poly_gcd(const LaurentPoly& a, const LaurentPoly& b);
std::optional<LaurentPoly> poly_exact_divide(const LaurentPoly& a, const LaurentPoly& b);

// Element of Q(q, r1, ..., r7). Canonical: the denominator is a polynomial with
// no monomial factor, coprime to the numerator and with leading coefficient 1.
class Scalar {
 public:
  Scalar() : den_(1) {}
  Scalar(long v) : num_(v), den_(1) {}
  Scalar(const Rational& v) : num_(v), den_(1) {}
  Scalar(LaurentPoly p) : num_(std::move(p)), den_(1) {}

  static Scalar fraction(const LaurentPoly& n, const LaurentPoly& d);
  static Scalar monomial(const Monomial& m, const Rational& c = 1) {
    return Scalar(LaurentPoly::monomial(m, c));
  }
  static Scalar var(int index, int power = 1) { return monomial(Monomial::var(index, power)); }
  static Scalar parse(std::string_view text);

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return den_.is_one() && num_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_rational() const { return den_.is_one() && num_.is_constant(); }
  std::optional<std::pair<Monomial, Rational>> as_monomial() const;

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }

  Scalar inverse() const;
  Scalar pow(int k) const;
  Scalar mul_monomial(const Monomial& m) const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  // Number of terms, used as a cheap complexity measure for pivoting.
  std::size_t weight() const { return num_.size() + den_.size() - 1; }
  std::string to_string() const;

 private:
  LaurentPoly num_, den_;
};

// Group-like unit q^a r1^b ... with an optional torsion part in Z/order.
struct UnitMonomial {
  Monomial free;
  int64_t tor = 0;
  int64_t order = 0;  // 0: no torsion component

  bool is_one() const { return free.is_one() && tor == 0; }
  UnitMonomial operator*(const UnitMonomial& o) const;
  UnitMonomial inverse() const;
  UnitMonomial pow(int64_t k) const;
  bool operator==(const UnitMonomial& o) const {
    return free == o.free && tor == o.tor && order == o.order;
  }
  Scalar to_scalar() const;  // throws if the torsion part is nonzero
  std::string to_string() const;
};

// Balanced q-numbers at base b: [m]_b = (b^m - b^-m)/(b - b^-1), [0]_b = 0.
Scalar q_int_balanced(int m, const Monomial& base);
Scalar q_factorial_balanced(int m, const Monomial& base);
Scalar q_binomial_balanced(int m, int j, const Monomial& base);
// Unbalanced: (n)_b = 1 + b + ... + b^(n-1).
Scalar q_int_unbalanced(int n, const Scalar& base);
Scalar q_factorial_unbalanced(int n, const Scalar& base);

}  // namespace qrigid
