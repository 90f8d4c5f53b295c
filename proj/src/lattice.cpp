#include "qrigid/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace qrigid {

// ------------------------------------------------------------------ IntMatrix

IntMatrix IntMatrix::from_rows(const std::vector<IntVec>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw LatticeError("ragged integer matrix");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<long>(rows[i][j]);
  }
  return m;
}

IntVec IntMatrix::row(std::size_t i) const {
  IntVec v(c_);
  for (std::size_t j = 0; j < c_; ++j) {
    if (!(*this)(i, j).fits_slong_p()) throw LatticeError("integer entry overflows 64 bits");
    v[j] = (*this)(i, j).get_si();
  }
  return v;
}

std::vector<IntVec> IntMatrix::to_rows() const {
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < r_; ++i) out.push_back(row(i));
  return out;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t k = 0; k < c_; ++k) std::swap((*this)(i, k), (*this)(j, k));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Integer& k) {
  if (k == 0) return;
  for (std::size_t j = 0; j < c_; ++j) (*this)(dst, j) += k * (*this)(src, j);
}

bool IntMatrix::row_is_zero(std::size_t i) const {
  for (std::size_t j = 0; j < c_; ++j)
    if ((*this)(i, j) != 0) return false;
  return true;
}

void IntMatrix::drop_zero_rows() {
  std::vector<Integer> kept;
  std::size_t rows = 0;
  for (std::size_t i = 0; i < r_; ++i) {
    if (row_is_zero(i)) continue;
    for (std::size_t j = 0; j < c_; ++j) kept.push_back((*this)(i, j));
    ++rows;
  }
  a_ = std::move(kept);
  r_ = rows;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

// ------------------------------------------------------------ normal forms

namespace {

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Row echelon form by unimodular row operations on columns [0, col_limit).
std::size_t echelon(IntMatrix& m, std::size_t col_limit) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < col_limit && r < m.rows(); ++c) {
    for (;;) {
      std::size_t best = m.rows();
      for (std::size_t i = r; i < m.rows(); ++i)
        if (m(i, c) != 0 && (best == m.rows() || abs(m(i, c)) < abs(m(best, c)))) best = i;
      if (best == m.rows()) break;
      m.swap_rows(r, best);
      bool clean = true;
      for (std::size_t i = r + 1; i < m.rows(); ++i) {
        if (m(i, c) == 0) continue;
        m.add_row_multiple(i, r, -floor_div(m(i, c), m(r, c)));
        if (m(i, c) != 0) clean = false;
      }
      if (clean) {
        ++r;
        break;
      }
    }
  }
  return r;
}

}  // namespace

IntMatrix hermite_normal_form(IntMatrix m) {
  std::size_t rank = echelon(m, m.cols());
  IntMatrix h(rank, m.cols());
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) h(i, j) = m(i, j);
  for (std::size_t r = 0; r < rank; ++r) {
    std::size_t p = 0;
    while (h(r, p) == 0) ++p;
    if (h(r, p) < 0)
      for (std::size_t j = 0; j < h.cols(); ++j) h(r, j) = -h(r, j);
    for (std::size_t i = 0; i < r; ++i) h.add_row_multiple(i, r, -floor_div(h(i, p), h(r, p)));
  }
  return h;
}

IntMatrix integer_kernel(const IntMatrix& a) {
  std::size_t m = a.rows(), n = a.cols();
  IntMatrix b(n, m + n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) b(i, j) = a(j, i);
    b(i, m + i) = 1;
  }
  std::size_t rank = echelon(b, m);
  IntMatrix k(n - rank, n);
  for (std::size_t i = rank; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k(i - rank, j) = b(i, m + j);
  return hermite_normal_form(k);
}

std::vector<Integer> smith_diagonal(IntMatrix m) {
  std::vector<Integer> d;
  std::size_t R = m.rows(), C = m.cols();
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < R; ++i) std::swap(m(i, a), m(i, b));
  };
  for (std::size_t t = 0; t < std::min(R, C); ++t) {
    std::size_t pi = R, pj = C;
    for (std::size_t i = t; i < R; ++i)
      for (std::size_t j = t; j < C; ++j)
        if (m(i, j) != 0 && (pi == R || abs(m(i, j)) < abs(m(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == R) break;
    m.swap_rows(t, pi);
    swap_cols(t, pj);
    for (;;) {
      bool changed = false;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (m(i, t) == 0) continue;
        m.add_row_multiple(i, t, -floor_div(m(i, t), m(t, t)));
        if (m(i, t) != 0) {
          m.swap_rows(i, t);
          changed = true;
        }
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (m(t, j) == 0) continue;
        Integer q = floor_div(m(t, j), m(t, t));
        for (std::size_t i = 0; i < R; ++i) m(i, j) -= q * m(i, t);
        if (m(t, j) != 0) {
          swap_cols(j, t);
          changed = true;
        }
      }
      if (!changed) {
        for (std::size_t i = t + 1; i < R && !changed; ++i)
          for (std::size_t j = t + 1; j < C && !changed; ++j)
            if (m(i, j) % m(t, t) != 0) {
              m.add_row_multiple(t, i, 1);
              changed = true;
            }
      }
      if (!changed) break;
    }
    d.push_back(abs(m(t, t)));
  }
  return d;
}

bool in_row_lattice(const IntMatrix& hnf, const IntVec& v) {
  std::vector<Integer> x;
  for (auto e : v) x.emplace_back(static_cast<long>(e));
  for (std::size_t r = 0; r < hnf.rows(); ++r) {
    std::size_t p = 0;
    while (hnf(r, p) == 0) ++p;
    if (x[p] % hnf(r, p) != 0) return false;
    Integer q = x[p] / hnf(r, p);
    for (std::size_t j = 0; j < hnf.cols(); ++j) x[j] -= q * hnf(r, j);
  }
  return std::all_of(x.begin(), x.end(), [](const Integer& e) { return e == 0; });
}

// ---------------------------------------------------------------- ExpLattice

ExpLattice ExpLattice::trivial(int n, int64_t torsion_order) {
  ExpLattice l;
  l.n = n;
  l.torsion_order = torsion_order;
  l.entries.assign(static_cast<std::size_t>(n) * n, UnitMonomial{Monomial{}, 0, torsion_order});
  return l;
}

void ExpLattice::set(int k, int l, UnitMonomial u) {
  if (k == l && !u.is_one()) throw LatticeError("diagonal entries must be 1");
  u.order = torsion_order;
  if (torsion_order > 0) u.tor = ((u.tor % torsion_order) + torsion_order) % torsion_order;
  else if (u.tor != 0) throw LatticeError("torsion component without a torsion order");
  entries[k * n + l] = u;
  entries[l * n + k] = u.inverse();
}

UnitMonomial ExpLattice::row_image(int k, const IntVec& j) const {
  UnitMonomial u{Monomial{}, 0, torsion_order};
  for (int l = 0; l < n; ++l)
    if (j[l] != 0) u = u * at(k, l).pow(j[l]);
  return u;
}

bool ExpLattice::kernel_contains(const IntVec& j) const {
  for (int k = 0; k < n; ++k)
    if (!row_image(k, j).is_one()) return false;
  return true;
}

namespace {

std::vector<IntVec> free_rows(const ExpLattice& lat) {
  std::vector<IntVec> rows;
  for (int k = 0; k < lat.n; ++k)
    for (int v = 0; v < kMaxVars; ++v) {
      IntVec r(lat.n);
      bool nz = false;
      for (int l = 0; l < lat.n; ++l) {
        r[l] = lat.at(k, l).free.e[v];
        nz |= r[l] != 0;
      }
      if (nz) rows.push_back(std::move(r));
    }
  return rows;
}

IntMatrix identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix free_kernel(const ExpLattice& lat) {
  auto rows = free_rows(lat);
  if (rows.empty()) return identity(lat.n);
  return integer_kernel(IntMatrix::from_rows(rows, lat.n));
}

}  // namespace

IntMatrix mult_kernel(const ExpLattice& lat) {
  if (lat.torsion_order == 0) return free_kernel(lat);
  int n = lat.n;
  auto rows = free_rows(lat);
  IntMatrix m(rows.size() + n, 2 * n);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int l = 0; l < n; ++l) m(i, l) = static_cast<long>(rows[i][l]);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) m(rows.size() + k, l) = static_cast<long>(lat.at(k, l).tor);
    m(rows.size() + k, n + k) = static_cast<long>(lat.torsion_order);
  }
  IntMatrix ker = integer_kernel(m);
  IntMatrix proj(ker.rows(), n);
  for (std::size_t i = 0; i < ker.rows(); ++i)
    for (int l = 0; l < n; ++l) proj(i, l) = ker(i, l);
  return hermite_normal_form(proj);
}

SaturationResult is_saturated(const ExpLattice& lat) {
  SaturationResult res;
  IntMatrix sat = free_kernel(lat);
  IntMatrix ker = mult_kernel(lat);
  // Coordinates of the kernel basis in the saturation basis.
  IntMatrix coords(ker.rows(), sat.rows());
  for (std::size_t i = 0; i < ker.rows(); ++i) {
    std::vector<Integer> x(ker.cols());
    for (std::size_t j = 0; j < ker.cols(); ++j) x[j] = ker(i, j);
    for (std::size_t r = 0; r < sat.rows(); ++r) {
      std::size_t p = 0;
      while (sat(r, p) == 0) ++p;
      Integer c = x[p] / sat(r, p);
      coords(i, r) = c;
      for (std::size_t j = 0; j < sat.cols(); ++j) x[j] -= c * sat(r, j);
    }
  }
  res.divisors = smith_diagonal(coords);
  for (std::size_t r = 0; r < sat.rows() && res.saturated; ++r) {
    IntVec s = sat.row(r);
    if (lat.kernel_contains(s)) continue;
    res.saturated = false;
    res.witness = s;
    IntVec ns = s;
    for (long long n = 2;; ++n) {
      for (std::size_t j = 0; j < s.size(); ++j) ns[j] = n * s[j];
      if (lat.kernel_contains(ns)) {
        res.multiple = n;
        break;
      }
    }
  }
  bool by_divisors = std::all_of(res.divisors.begin(), res.divisors.end(),
                                 [](const Integer& d) { return d == 1; }) &&
                     res.divisors.size() == sat.rows();
  if (by_divisors != res.saturated) throw LatticeError("internal: saturation tests disagree");
  return res;
}

IntMatrix subgroup_hnf(const std::vector<UnitMonomial>& gens, int64_t torsion_order) {
  std::size_t cols = kMaxVars + 1;
  IntMatrix m(gens.size() + (torsion_order > 0 ? 1 : 0), cols);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (int v = 0; v < kMaxVars; ++v) m(i, v) = gens[i].free.e[v];
    m(i, kMaxVars) = static_cast<long>(gens[i].tor);
  }
  if (torsion_order > 0) m(gens.size(), kMaxVars) = static_cast<long>(torsion_order);
  return hermite_normal_form(m);
}

namespace {

int64_t order_of(const std::vector<UnitMonomial>& a, const std::vector<UnitMonomial>& b) {
  int64_t d = 0;
  for (const auto* v : {&a, &b})
    for (const auto& u : *v) {
      if (u.order != 0 && d != 0 && u.order != d) throw LatticeError("torsion orders disagree");
      if (u.order != 0) d = u.order;
    }
  return d;
}

}  // namespace

bool lattice_equal(const std::vector<UnitMonomial>& a, const std::vector<UnitMonomial>& b) {
  int64_t d = order_of(a, b);
  return subgroup_hnf(a, d) == subgroup_hnf(b, d);
}

bool subgroup_torsion_free(const std::vector<UnitMonomial>& gens, int64_t torsion_order) {
  if (torsion_order == 0 || gens.empty()) return true;
  IntMatrix a(kMaxVars, gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (int v = 0; v < kMaxVars; ++v) a(v, i) = gens[i].free.e[v];
  IntMatrix k = integer_kernel(a);
  for (std::size_t r = 0; r < k.rows(); ++r) {
    Integer t = 0;
    for (std::size_t i = 0; i < gens.size(); ++i) t += k(r, i) * static_cast<long>(gens[i].tor);
    if (t % static_cast<long>(torsion_order) != 0) return false;
  }
  return true;
}

// ----------------------------------------------------------------------- LP

std::optional<std::vector<Rational>> lp_feasible(const std::vector<std::vector<Rational>>& a,
                                                 const std::vector<Rational>& b) {
  std::size_t m = a.size();
  std::size_t n = m ? a[0].size() : 0;
  std::size_t N = n + m;
  // Phase I: minimise the sum of artificial variables, Bland's rule.
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(N + 1));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    int s = b[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = s * a[i][j];
    t[i][n + i] = 1;
    t[i][N] = s * b[i];
    basis[i] = n + i;
  }
  auto cost = [&](std::size_t j) { return j >= n ? 1 : 0; };
  for (;;) {
    std::vector<char> in_basis(N, 0);
    for (auto j : basis) in_basis[j] = 1;
    std::size_t enter = N;
    for (std::size_t j = 0; j < N && enter == N; ++j) {
      if (in_basis[j]) continue;
      Rational r = cost(j);
      for (std::size_t i = 0; i < m; ++i)
        if (cost(basis[i])) r -= t[i][j];
      if (r < 0) enter = j;
    }
    if (enter == N) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][N] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;
    Rational piv = t[leave][enter];
    for (auto& x : t[leave]) x /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j <= N; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] >= n) {
      if (t[i][N] != 0) return std::nullopt;
    } else {
      x[basis[i]] = t[i][N];
    }
  }
  return x;
}

// -------------------------------------------------------------------- cones

IntVec primitive(IntVec v) {
  long long g = 0;
  for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

namespace {

std::vector<IntVec> normalized_generators(const RationalCone& c) {
  std::set<IntVec> s;
  for (const auto& g : c.gens) {
    if (std::all_of(g.begin(), g.end(), [](long long x) { return x == 0; })) continue;
    s.insert(primitive(g));
  }
  return {s.begin(), s.end()};
}

std::optional<std::vector<Rational>> combination(const std::vector<IntVec>& gens, const IntVec& target,
                                                 bool normalise) {
  std::size_t dim = target.size();
  std::vector<std::vector<Rational>> a(dim + (normalise ? 1 : 0),
                                       std::vector<Rational>(gens.size()));
  std::vector<Rational> b(a.size());
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < gens.size(); ++j) a[i][j] = static_cast<long>(gens[j][i]);
    b[i] = static_cast<long>(target[i]);
  }
  if (normalise) {
    for (std::size_t j = 0; j < gens.size(); ++j) a[dim][j] = 1;
    b[dim] = 1;
  }
  return lp_feasible(a, b);
}

}  // namespace

ConeRays extremal_rays(const RationalCone& c) {
  ConeRays out;
  auto gens = normalized_generators(c);
  if (gens.empty()) return out;
  std::size_t dim = gens[0].size();
  if (auto cert = combination(gens, IntVec(dim, 0), true)) {
    out.strict = false;
    for (std::size_t j = 0; j < gens.size(); ++j)
      if ((*cert)[j] != 0) {
        out.certificate.push_back(gens[j]);
        out.coefficients.push_back((*cert)[j]);
      }
    return out;
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::vector<IntVec> others;
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (j != i) others.push_back(gens[j]);
    if (others.empty() || !combination(others, gens[i], false)) out.rays.push_back(gens[i]);
  }
  return out;
}

bool cone_contains(const RationalCone& c, const IntVec& v) {
  if (std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; })) return true;
  auto gens = normalized_generators(c);
  if (gens.empty()) return false;
  return combination(gens, v, false).has_value();
}

}  // namespace qrigid
