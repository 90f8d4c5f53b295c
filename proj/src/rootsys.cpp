#include "qrigid/rootsys.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <numeric>
#include <set>

namespace qrigid {

namespace {

std::vector<int> chain_form(int r, const std::vector<int>& diag, const std::vector<int>& link) {
  std::vector<int> f(r * r, 0);
  for (int i = 0; i < r; ++i) f[i * r + i] = diag[i];
  for (int i = 0; i + 1 < r; ++i) f[i * r + i + 1] = f[(i + 1) * r + i] = link[i];
  return f;
}

void join(std::vector<int>& f, int r, int i, int j, int v) { f[i * r + j] = f[j * r + i] = v; }

}  // namespace

int height(const Root& b) { return std::accumulate(b.begin(), b.end(), 0); }

RootDatum RootDatum::make(std::string_view name) {
  if (name.size() < 2) throw RootError("unknown Cartan type '" + std::string(name) + "'");
  char t = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  int r = 0;
  for (char c : name.substr(1)) {
    if (c < '0' || c > '9') throw RootError("unknown Cartan type '" + std::string(name) + "'");
    r = r * 10 + (c - '0');
  }
  if (r < 2) throw RootError("rank must be at least 2");
  if (r > 8) throw RootError("rank above 8 is not supported");
  std::vector<int> f;
  switch (t) {
    case 'A':
      f = chain_form(r, std::vector<int>(r, 2), std::vector<int>(r - 1, -1));
      break;
    case 'B': {
      std::vector<int> diag(r, 4);
      diag[r - 1] = 2;
      f = chain_form(r, diag, std::vector<int>(r - 1, -2));
      break;
    }
    case 'C': {
      std::vector<int> diag(r, 2), link(r - 1, -1);
      diag[r - 1] = 4;
      link[r - 2] = -2;
      f = chain_form(r, diag, link);
      break;
    }
    case 'D':
      if (r < 4) throw RootError("type D needs rank >= 4");
      f = chain_form(r, std::vector<int>(r, 2), std::vector<int>(r - 1, -1));
      join(f, r, r - 2, r - 1, 0);
      join(f, r, r - 3, r - 1, -1);
      break;
    case 'E': {
      if (r < 6) throw RootError("type E needs rank 6, 7 or 8");
      f.assign(r * r, 0);
      for (int i = 0; i < r; ++i) f[i * r + i] = 2;
      join(f, r, 0, 2, -1);
      join(f, r, 1, 3, -1);
      for (int i = 2; i + 1 < r; ++i) join(f, r, i, i + 1, -1);
      break;
    }
    case 'F':
      if (r != 4) throw RootError("type F exists only in rank 4");
      f = chain_form(4, {4, 4, 2, 2}, {-2, -2, -1});
      break;
    case 'G':
      if (r != 2) throw RootError("type G exists only in rank 2");
      f = chain_form(2, {2, 6}, {-3});
      break;
    default:
      throw RootError("unknown Cartan type '" + std::string(name) + "'");
  }
  RootDatum d;
  d.name_ = std::string(1, t) + std::to_string(r);
  d.r_ = r;
  d.form_ = std::move(f);
  std::set<Root> seen;
  std::deque<Root> todo;
  for (int i = 0; i < r; ++i) {
    seen.insert(d.simple(i));
    todo.push_back(d.simple(i));
  }
  while (!todo.empty()) {
    Root b = todo.front();
    todo.pop_front();
    for (int i = 0; i < r; ++i) {
      Root c = d.reflect(i, b);
      if (std::all_of(c.begin(), c.end(), [](int x) { return x >= 0; }) && seen.insert(c).second)
        todo.push_back(c);
    }
  }
  d.pos_.assign(seen.begin(), seen.end());
  std::stable_sort(d.pos_.begin(), d.pos_.end(),
                   [](const Root& a, const Root& b) { return height(a) < height(b); });
  return d;
}

int RootDatum::pairing(const Root& a, const Root& b) const {
  int s = 0;
  for (int i = 0; i < r_; ++i)
    if (a[i] != 0)
      for (int j = 0; j < r_; ++j) s += a[i] * b[j] * form(i, j);
  return s;
}

Root RootDatum::simple(int i) const {
  Root b(r_, 0);
  b[i] = 1;
  return b;
}

Root RootDatum::reflect(int i, const Root& b) const {
  Root c = b;
  c[i] -= 2 * pairing(b, simple(i)) / form(i, i);
  return c;
}

bool RootDatum::is_positive_root(const Root& b) const {
  return std::binary_search(pos_.begin(), pos_.end(), b, [](const Root& x, const Root& y) {
    int hx = height(x), hy = height(y);
    return hx != hy ? hx < hy : x < y;
  });
}

std::vector<int> RootDatum::canonical_word() const {
  // Walk 2 rho down to -2 rho, always reflecting in the first positive wall.
  Root v(r_, 0);
  for (const auto& b : pos_)
    for (int i = 0; i < r_; ++i) v[i] += b[i];
  std::vector<int> word;
  for (;;) {
    int pick = -1;
    for (int i = 0; i < r_ && pick < 0; ++i)
      if (pairing(v, simple(i)) > 0) pick = i;
    if (pick < 0) break;
    v = reflect(pick, v);
    word.push_back(pick + 1);
  }
  return word;
}

// ------------------------------------------------------------------ twists

TwistData TwistData::trivial(int rank) {
  TwistData t;
  t.r_ = rank;
  t.v_.assign(rank * rank, UnitMonomial{});
  return t;
}

TwistData TwistData::from_upper(int rank, const std::vector<UnitMonomial>& upper) {
  if (static_cast<int>(upper.size()) != rank * (rank - 1) / 2)
    throw RootError("twist needs one value per pair i < j");
  TwistData t = trivial(rank);
  std::size_t p = 0;
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j) {
      if (upper[p].tor != 0) throw RootError("twist values must be free monomials");
      t.v_[i * rank + j] = upper[p];
      t.v_[j * rank + i] = upper[p].inverse();
      ++p;
    }
  return t;
}

bool TwistData::is_trivial() const {
  return std::all_of(v_.begin(), v_.end(), [](const UnitMonomial& u) { return u.is_one(); });
}

UnitMonomial TwistData::operator()(const Root& a, const Root& b) const {
  UnitMonomial u{};
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j)
      if (a[i] != 0 && b[j] != 0 && i != j) u = u * v_[i * r_ + j].pow(a[i] * b[j]);
  return u;
}

// ----------------------------------------------------------- reduced words

std::vector<int> ReducedWord::orbit_of(int l) const {
  std::vector<int> o;
  for (int k = l; k >= 0; k = succ[k]) o.push_back(k);
  return o;
}

ReducedWord validate_reduced(const RootDatum& d, const std::vector<int>& word) {
  int n = d.num_positive();
  if (static_cast<int>(word.size()) != n)
    throw RootError("word has length " + std::to_string(word.size()) + ", expected " +
                    std::to_string(n));
  for (int a : word)
    if (a < 1 || a > d.rank()) throw RootError("letter " + std::to_string(a) + " out of range");
  ReducedWord w;
  w.letters = word;
  std::set<Root> seen;
  for (int l = 0; l < n; ++l) {
    Root b = d.simple(word[l] - 1);
    for (int j = l - 1; j >= 0; --j) b = d.reflect(word[j] - 1, b);
    if (!d.is_positive_root(b))
      throw RootError("not reduced: beta_" + std::to_string(l + 1) + " is negative");
    if (!seen.insert(b).second)
      throw RootError("not reduced: beta_" + std::to_string(l + 1) + " repeats");
    w.beta.push_back(b);
  }
  w.succ.assign(n, -1);
  w.orbit.assign(n, 0);
  for (int l = n - 1; l >= 0; --l) {
    for (int k = l + 1; k < n; ++k)
      if (word[k] == word[l]) {
        w.succ[l] = k;
        w.orbit[l] = w.orbit[k] + 1;
        break;
      }
  }
  return w;
}

std::vector<std::vector<int>> all_reduced_words(const RootDatum& d) {
  auto braid_len = [&](int i, int j) {
    switch (d.cartan(i, j) * d.cartan(j, i)) {
      case 0: return 2;
      case 1: return 3;
      case 2: return 4;
      default: return 6;
    }
  };
  std::set<std::vector<int>> seen{d.canonical_word()};
  std::deque<std::vector<int>> todo(seen.begin(), seen.end());
  while (!todo.empty()) {
    auto w = todo.front();
    todo.pop_front();
    for (int i = 0; i < d.rank(); ++i)
      for (int j = 0; j < d.rank(); ++j) {
        if (i == j) continue;
        int m = braid_len(i, j);
        for (std::size_t p = 0; p + m <= w.size(); ++p) {
          bool match = true;
          for (int t = 0; t < m && match; ++t) match = w[p + t] == (t % 2 ? j : i) + 1;
          if (!match) continue;
          auto v = w;
          for (int t = 0; t < m; ++t) v[p + t] = (t % 2 ? i : j) + 1;
          if (seen.insert(v).second) todo.push_back(v);
        }
      }
  }
  return {seen.begin(), seen.end()};
}

bool convex_order(const RootDatum& d, const ReducedWord& w) {
  int n = w.size();
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      Root s = w.beta[k];
      for (int i = 0; i < d.rank(); ++i) s[i] += w.beta[l][i];
      if (!d.is_positive_root(s)) continue;
      auto it = std::find(w.beta.begin(), w.beta.end(), s);
      int m = static_cast<int>(it - w.beta.begin());
      if (m <= k || m >= l) return false;
    }
  return true;
}

BicharPtr commutation_matrix(const RootDatum& d, const ReducedWord& w, const TwistData& t) {
  int n = w.size();
  ExpLattice lat = ExpLattice::trivial(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < l; ++k) {
      UnitMonomial u = t(w.beta[l], w.beta[k]);
      u.free.e[0] -= d.pairing(w.beta[l], w.beta[k]);
      lat.set(l, k, u);
    }
  return make_bichar(std::move(lat));
}

DegreeVector degree_vector(const RootDatum& d, const ReducedWord& w,
                           const std::vector<int>& coweight) {
  if (static_cast<int>(coweight.size()) != d.rank())
    throw RootError("coweight needs " + std::to_string(d.rank()) + " coordinates");
  for (int c : coweight)
    if (c < 1) throw RootError("coweight is not strictly dominant");
  DegreeVector out;
  for (int l = 0; l < w.size(); ++l) {
    int s = 0;
    for (int j : w.orbit_of(l))
      for (int i = 0; i < d.rank(); ++i) s += coweight[i] * w.beta[j][i];
    out.push_back(s);
  }
  return out;
}

std::string to_string(OrbitConvention c) {
  return c == OrbitConvention::FromZero ? "from-zero" : "from-one";
}

std::vector<std::vector<int>> nprime_matrix(const RootDatum& d, const ReducedWord& w,
                                            OrbitConvention c) {
  int n = w.size();
  std::vector<std::vector<int>> out(n, std::vector<int>(n, 0));
  int skip = c == OrbitConvention::FromZero ? 0 : 1;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      auto ok = w.orbit_of(k), ol = w.orbit_of(l);
      int s = 0;
      for (std::size_t j = skip; j < ok.size(); ++j)
        for (std::size_t m = skip; m < ol.size(); ++m) {
          int a = ok[j], b = ol[m];
          if (a != b) s += (b > a ? 1 : -1) * d.pairing(w.beta[a], w.beta[b]);
        }
      out[k][l] = s;
    }
  return out;
}

W0Data w0_involution(const RootDatum& d) {
  auto word = d.canonical_word();
  W0Data out;
  for (int i = 0; i < d.rank(); ++i) {
    Root b = d.simple(i);
    for (auto it = word.rbegin(); it != word.rend(); ++it) b = d.reflect(*it - 1, b);
    for (auto& x : b) x = -x;
    int j = static_cast<int>(std::find(b.begin(), b.end(), 1) - b.begin());
    if (j >= d.rank() || b != d.simple(j)) throw RootError("w0 does not permute -simple roots");
    out.theta.push_back(j);
  }
  for (int i = 0; i < d.rank(); ++i) {
    int j = out.theta[i];
    if (j == i) {
      out.fixed.push_back(i);
    } else if (i < j) {
      out.plus.push_back(i);
    } else {
      out.minus.push_back(i);
    }
  }
  for (int i : out.fixed) {
    IntVec v(d.rank(), 0);
    v[i] = 1;
    out.kernel_basis.push_back(v);
  }
  for (int i : out.plus) {
    IntVec v(d.rank(), 0);
    v[i] = v[out.theta[i]] = 1;
    out.kernel_basis.push_back(v);
  }
  return out;
}

std::vector<std::vector<int>> diagram_auts(const RootDatum& d, const TwistData& t) {
  int r = d.rank();
  std::vector<int> p(r);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    bool ok = true;
    for (int i = 0; i < r && ok; ++i)
      for (int j = 0; j < r && ok; ++j)
        ok = d.cartan(p[i], p[j]) == d.cartan(i, j) && t.simple(p[i], p[j]) == t.simple(i, j);
    if (ok) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

GpReport gp_group(const RootDatum& d, const TwistData& t, const ReducedWord& w) {
  GpReport g;
  UnitMonomial q2{};
  q2.free.e[0] = 2;
  g.generators.push_back(q2);
  for (int i = 0; i < d.rank(); ++i)
    for (int j = i + 1; j < d.rank(); ++j) {
      UnitMonomial u = t.simple(i, j);
      u.free.e[0] -= d.form(i, j);
      g.generators.push_back(u);
    }
  auto b = commutation_matrix(d, w, t);
  for (int l = 0; l < w.size(); ++l)
    for (int k = 0; k < l; ++k) g.qlk.push_back(b->entry(l, k));
  g.torsion_free = subgroup_torsion_free(g.generators, 0);
  g.equals_qlk = lattice_equal(g.generators, g.qlk);
  return g;
}

bool cond2_holds(const RootDatum& d, const TwistData& t) {
  for (int i = 0; i < d.rank(); ++i)
    for (int j = 0; j < d.rank(); ++j) {
      if (i == j || d.cartan(i, j) != -1) continue;
      for (int s : {1, -1}) {
        UnitMonomial u = t.simple(i, j);
        u.free.e[0] += s * d.q_exp(i);
        if (u.is_one()) return false;
      }
    }
  return true;
}

}  // namespace qrigid
