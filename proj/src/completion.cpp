#include "qrigid/completion.hpp"

#include <algorithm>

namespace qrigid {

int cutoff_add(int a, int b) {
  if (a >= kExact || b >= kExact) return kExact;
  return a + b;
}

TruncatedSeries::TruncatedSeries(TorusElement payload, DegreeVector d, int cutoff)
    : p_(std::move(payload)), d_(std::move(d)), m_(std::min(cutoff, kExact)) {
  if (p_.bichar() && static_cast<int>(d_.size()) != p_.rank())
    throw TorusError("degree vector has wrong length");
  if (m_ < kExact) {
    std::vector<Exps> drop;
    for (const auto& [f, c] : p_.terms())
      if (degree(d_, f) > m_) drop.push_back(f);
    for (const auto& f : drop) p_.add_term(f, -p_.coefficient(f));
  }
}

int TruncatedSeries::valuation_bound() const {
  auto v = valuation(p_, d_);
  if (v) return *v;
  return m_ >= kExact ? kExact : m_ + 1;
}

TruncatedSeries TruncatedSeries::truncated(int cutoff) const {
  return TruncatedSeries(p_, d_, std::min(cutoff, m_));
}

TruncatedSeries TruncatedSeries::operator-() const { return TruncatedSeries(-p_, d_, m_); }

TruncatedSeries TruncatedSeries::scaled(const Scalar& c) const {
  return TruncatedSeries(p_.scaled(c), d_, m_);
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  return TruncatedSeries(a.p_ + b.p_, a.d_.empty() ? b.d_ : a.d_, std::min(a.m_, b.m_));
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  return TruncatedSeries(a.p_ - b.p_, a.d_.empty() ? b.d_ : a.d_, std::min(a.m_, b.m_));
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  const DegreeVector& d = a.d_.empty() ? b.d_ : a.d_;
  if ((a.is_exact() && a.p_.is_zero()) || (b.is_exact() && b.p_.is_zero()))
    return TruncatedSeries(TorusElement(a.bichar() ? a.bichar() : b.bichar()), d, kExact);
  int m = std::min(cutoff_add(a.m_, b.valuation_bound()), cutoff_add(b.m_, a.valuation_bound()));
  // Only pairs of terms landing at or below the new cutoff are needed.
  TorusElement out(a.bichar() ? a.bichar() : b.bichar());
  if (m >= kExact) {
    out = a.p_ * b.p_;
  } else {
    std::vector<std::pair<int, const std::pair<const Exps, Scalar>*>> bt;
    for (const auto& t : b.p_.terms()) bt.push_back({degree(d, t.first), &t});
    for (const auto& [f, x] : a.p_.terms()) {
      int df = degree(d, f);
      for (const auto& [dg, t] : bt) {
        if (df + dg > m) continue;
        out.add_term(add_exps(f, t->first),
                     (x * t->second).mul_monomial(out.bichar()->cocycle(f, t->first)));
      }
    }
  }
  return TruncatedSeries(std::move(out), d, m);
}

std::optional<TruncatedSeries::Leading> TruncatedSeries::unit_leading() const {
  auto v = valuation(p_, d_);
  if (!v || *v > m_) return std::nullopt;
  std::optional<Leading> lead;
  for (const auto& [f, c] : p_.terms()) {
    if (degree(d_, f) != *v) continue;
    if (lead) return std::nullopt;
    lead = Leading{f, c};
  }
  return lead;
}

TruncatedSeries TruncatedSeries::inverse(int request) const {
  auto lead = unit_leading();
  if (!lead) throw TorusError("series is not a unit: lowest component is not a single monomial");
  const auto& b = p_.bichar();
  int df = degree(d_, lead->exp);
  Exps minus_f = scale_exps(lead->exp, -1);
  // (c X^f)^-1 = c^-1 sigma(f, -f)^-1 X^-f.
  Scalar lead_inv = lead->coef.inverse().mul_monomial(-b->cocycle(lead->exp, minus_f));
  TruncatedSeries linv = exact(TorusElement::monomial(b, minus_f, lead_inv), d_);
  TruncatedSeries w = *this - exact(TorusElement::monomial(b, lead->exp, lead->coef), d_);
  int rel = std::min(cutoff_add(request, df), cutoff_add(m_, -df));
  if (rel >= kExact && !w.payload().is_zero())
    throw TorusError("inverse of a non-monomial exact element needs a finite cutoff");
  // u = (1 + t) c X^f with t = w (c X^f)^-1; s = (1 + t)^-1 solves s = 1 - t s degree by degree.
  if (rel < 0) return TruncatedSeries(TorusElement(b), d_, cutoff_add(rel, -df));
  TruncatedSeries t = (w * linv).truncated(rel);
  std::map<int, std::vector<std::pair<Exps, Scalar>>> tg;
  for (const auto& [g, c] : t.payload().terms()) tg[degree(d_, g)].push_back({g, c});
  std::vector<TorusElement> sg(rel >= kExact ? 1 : rel + 1, TorusElement(b));
  sg[0] = TorusElement::one(b);
  TorusElement s = sg[0];
  for (int m = 1; m < static_cast<int>(sg.size()); ++m) {
    TorusElement acc(b);
    for (const auto& [j, terms] : tg) {
      if (j > m) break;
      for (const auto& [g, c] : terms)
        for (const auto& [h, x] : sg[m - j].terms())
          acc.add_term(add_exps(g, h), -(c * x).mul_monomial(b->cocycle(g, h)));
    }
    sg[m] = acc;
    s += acc;
  }
  TruncatedSeries out = linv * TruncatedSeries(s, d_, rel);
  return out.truncated(cutoff_add(rel, -df));
}

bool TruncatedSeries::agrees_with(const TruncatedSeries& o) const {
  int m = std::min(m_, o.m_);
  TorusElement diff = p_ - o.p_;
  for (const auto& [f, c] : diff.terms())
    if (degree(d_, f) <= m) return false;
  return true;
}

}  // namespace qrigid
