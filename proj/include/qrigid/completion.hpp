#pragma once

#include <climits>

#include "qrigid/qtorus.hpp"

namespace qrigid {

// Cutoff value of a series known in every degree.
inline constexpr int kExact = INT_MAX / 4;

// Element of the completion, known exactly in degrees <= cutoff.
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  TruncatedSeries(TorusElement payload, DegreeVector d, int cutoff);
  static TruncatedSeries exact(TorusElement payload, DegreeVector d) {
    return TruncatedSeries(std::move(payload), std::move(d), kExact);
  }

  const TorusElement& payload() const { return p_; }
  const DegreeVector& degrees() const { return d_; }
  int cutoff() const { return m_; }
  bool is_exact() const { return m_ >= kExact; }
  const BicharPtr& bichar() const { return p_.bichar(); }

  // Lower bound for the valuation: the lowest degree present, or cutoff + 1.
  int valuation_bound() const;
  TruncatedSeries truncated(int cutoff) const;

  TruncatedSeries operator-() const;
  TruncatedSeries scaled(const Scalar& c) const;
  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

  struct Leading {
    Exps exp;
    Scalar coef;
  };
  // Lowest graded component when it is a single monomial known within the cutoff.
  std::optional<Leading> unit_leading() const;
  bool is_unit() const { return unit_leading().has_value(); }
  // Inverse; the result is valid up to min(request, cutoff - 2 D(f)).
  TruncatedSeries inverse(int request = kExact) const;

  // Equality of the payloads in degrees <= min of both cutoffs.
  bool agrees_with(const TruncatedSeries& o) const;

 private:
  TorusElement p_;
  DegreeVector d_;
  int m_ = kExact;
};

int cutoff_add(int a, int b);

}  // namespace qrigid
