#include "qrigid/uqgraded.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>

namespace qrigid {

// ----------------------------------------------------------- free algebra

void free_add(FreeElem& a, const FreeElem& b, const Scalar& c) {
  if (c.is_zero()) return;
  for (const auto& [w, x] : b) {
    Scalar v = x * c;
    auto [it, fresh] = a.emplace(w, v);
    if (fresh) continue;
    it->second += v;
    if (it->second.is_zero()) a.erase(it);
  }
}

FreeElem free_mul(const FreeElem& a, const FreeElem& b) {
  FreeElem out;
  for (const auto& [u, x] : a)
    for (const auto& [v, y] : b) free_add(out, {{u + v, x * y}});
  return out;
}

FreeElem free_scaled(const FreeElem& a, const Scalar& c) {
  FreeElem out;
  free_add(out, a, c);
  return out;
}

Root word_weight(const Word& w, int rank) {
  Root g(rank, 0);
  for (char c : w) ++g[static_cast<int>(c)];
  return g;
}

std::string word_to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (char c : w) s += "F" + std::to_string(static_cast<int>(c) + 1);
  return s;
}

std::string free_to_string(const FreeElem& x) {
  if (x.empty()) return "0";
  std::string s;
  for (const auto& [w, c] : x) {
    if (!s.empty()) s += " + ";
    s += "(" + c.to_string() + ")*" + word_to_string(w);
  }
  return s;
}

long long kostant_count(const RootDatum& d, const Root& gamma) {
  const auto& pos = d.positive_roots();
  std::map<std::pair<int, Root>, long long> memo;
  std::function<long long(int, const Root&)> go = [&](int i, const Root& rem) -> long long {
    if (std::all_of(rem.begin(), rem.end(), [](int x) { return x == 0; })) return 1;
    if (i == static_cast<int>(pos.size())) return 0;
    auto key = std::make_pair(i, rem);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    long long total = 0;
    Root r = rem;
    for (;;) {
      total += go(i + 1, r);
      bool ok = true;
      for (int j = 0; j < d.rank(); ++j) {
        r[j] -= pos[i][j];
        if (r[j] < 0) ok = false;
      }
      if (!ok) break;
    }
    memo.emplace(key, total);
    return total;
  };
  for (int x : gamma)
    if (x < 0) return 0;
  return go(0, gamma);
}

namespace {

Monomial qmono(int e) { return Monomial::var(0, e); }

// Clears the pivot columns of v using a reduced echelon basis.
void reduce_against(std::vector<Scalar>& v, const std::vector<std::vector<Scalar>>& rows,
                    const std::vector<int>& pivots) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    int p = pivots[i];
    if (v[p].is_zero()) continue;
    Scalar f = v[p];
    for (std::size_t j = p; j < v.size(); ++j)
      if (!rows[i][j].is_zero()) v[j] -= f * rows[i][j];
  }
}

// Adds v to a reduced echelon basis; false when v is already in the span.
bool insert_row(std::vector<std::vector<Scalar>>& rows, std::vector<int>& pivots,
                std::vector<Scalar> v) {
  reduce_against(v, rows, pivots);
  int p = -1;
  for (std::size_t j = 0; j < v.size(); ++j)
    if (!v[j].is_zero()) {
      p = static_cast<int>(j);
      break;
    }
  if (p < 0) return false;
  Scalar inv = v[p].inverse();
  for (std::size_t j = p; j < v.size(); ++j)
    if (!v[j].is_zero()) v[j] *= inv;
  for (auto& row : rows) {
    if (row[p].is_zero()) continue;
    Scalar f = row[p];
    for (std::size_t j = p; j < v.size(); ++j)
      if (!v[j].is_zero()) row[j] -= f * v[j];
  }
  auto pos = std::lower_bound(pivots.begin(), pivots.end(), p) - pivots.begin();
  rows.insert(rows.begin() + pos, std::move(v));
  pivots.insert(pivots.begin() + pos, p);
  return true;
}

// Basis of {x : M x = 0}; M is given by its rows.
std::vector<std::vector<Scalar>> nullspace(const std::vector<std::vector<Scalar>>& m, int cols) {
  std::vector<std::vector<Scalar>> rows;
  std::vector<int> pivots;
  for (const auto& r : m) insert_row(rows, pivots, r);
  std::vector<std::vector<Scalar>> out;
  std::set<int> piv(pivots.begin(), pivots.end());
  for (int f = 0; f < cols; ++f) {
    if (piv.count(f)) continue;
    std::vector<Scalar> x(cols);
    x[f] = Scalar(1);
    for (std::size_t i = 0; i < rows.size(); ++i) x[pivots[i]] = -rows[i][f];
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<Word> words_of_weight(const Root& gamma) {
  Word w;
  for (std::size_t i = 0; i < gamma.size(); ++i) w.append(gamma[i], static_cast<char>(i));
  std::vector<Word> out;
  do out.push_back(w);
  while (std::next_permutation(w.begin(), w.end()));
  return out;
}

Word letter(int a) { return Word(1, static_cast<char>(a)); }

Word power_word(int a, int k) { return Word(k, static_cast<char>(a)); }

int lambda_degree(const std::vector<int>& lam, const Root& g) {
  int s = 0;
  for (std::size_t i = 0; i < g.size(); ++i) s += lam[i] * g[i];
  return s;
}

}  // namespace

// ---------------------------------------------------------------- U_q^-

UqMinus::UqMinus(RootDatum d, TwistData t) : d_(std::move(d)), t_(std::move(t)) {
  if (t_.rank() != d_.rank()) throw UqError("twist rank does not match the root datum");
}

FreeElem UqMinus::generator(int a) const { return {{letter(a), Scalar(1)}}; }

FreeElem UqMinus::serre(int a, int b) const {
  if (a == b) throw UqError("Serre relations need distinct simple roots");
  int m = 1 - d_.cartan(a, b);
  Scalar rb = -t_.simple(b, a).to_scalar();
  FreeElem out;
  for (int j = 0; j <= m; ++j) {
    Scalar c = rb.pow(j) * q_binomial_balanced(m, j, qmono(d_.q_exp(a)));
    free_add(out, {{power_word(a, j) + letter(b) + power_word(a, m - j), c}});
  }
  return out;
}

std::shared_ptr<const UqMinus::Component> UqMinus::component(const Root& gamma) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = memo_.find(gamma);
  if (it != memo_.end()) return it->second;
  if (static_cast<int>(gamma.size()) != rank()) throw UqError("weight has wrong length");
  for (int x : gamma)
    if (x < 0) throw UqError("weight is not in Q_+");
  auto c = std::make_shared<Component>();
  c->gamma = gamma;
  c->words = words_of_weight(gamma);
  for (std::size_t i = 0; i < c->words.size(); ++i) c->index.emplace(c->words[i], static_cast<int>(i));
  auto dense = [&](const FreeElem& x) {
    std::vector<Scalar> v(c->words.size());
    for (const auto& [w, s] : x) v[c->index.at(w)] = s;
    return v;
  };
  for (int a = 0; a < rank(); ++a)
    for (int b = 0; b < rank(); ++b) {
      if (a == b) continue;
      Root g(rank(), 0);
      g[a] = 1 - d_.cartan(a, b);
      g[b] = 1;
      if (g == gamma) insert_row(c->rows, c->pivots, dense(serre(a, b)));
    }
  for (int a = 0; a < rank(); ++a) {
    if (gamma[a] == 0) continue;
    Root sub = gamma;
    --sub[a];
    auto s = component(sub);
    for (const auto& row : s->rows) {
      FreeElem left, right;
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j].is_zero()) continue;
        left.emplace(letter(a) + s->words[j], row[j]);
        right.emplace(s->words[j] + letter(a), row[j]);
      }
      insert_row(c->rows, c->pivots, dense(left));
      insert_row(c->rows, c->pivots, dense(right));
    }
  }
  std::set<int> piv(c->pivots.begin(), c->pivots.end());
  for (int j = 0; j < c->free_dim(); ++j)
    if (!piv.count(j)) c->complement.push_back(j);
  memo_.emplace(gamma, c);
  return c;
}

std::vector<Scalar> UqMinus::residue(const FreeElem& x, const Root& gamma) const {
  auto c = component(gamma);
  std::vector<Scalar> v(c->words.size());
  for (const auto& [w, s] : x) {
    auto it = c->index.find(w);
    if (it == c->index.end()) throw UqError("element is not homogeneous");
    v[it->second] = s;
  }
  reduce_against(v, c->rows, c->pivots);
  std::vector<Scalar> out;
  for (int j : c->complement) out.push_back(v[j]);
  return out;
}

FreeElem UqMinus::normal_form(const FreeElem& x) const {
  std::map<Root, FreeElem> parts;
  for (const auto& [w, s] : x) parts[word_weight(w, rank())].emplace(w, s);
  FreeElem out;
  for (const auto& [g, part] : parts) {
    auto c = component(g);
    auto r = residue(part, g);
    for (std::size_t i = 0; i < r.size(); ++i)
      if (!r[i].is_zero()) out.emplace(c->words[c->complement[i]], r[i]);
  }
  return out;
}

std::optional<Scalar> UqMinus::commutation_factor(const FreeElem& x, const FreeElem& y) const {
  FreeElem xy = mul(x, y), yx = mul(y, x);
  if (yx.empty()) return std::nullopt;
  Scalar c = xy.count(yx.begin()->first) ? xy.at(yx.begin()->first) / yx.begin()->second : Scalar();
  FreeElem diff = xy;
  free_add(diff, yx, -c);
  if (!diff.empty()) return std::nullopt;
  return c;
}

std::vector<Root> weights_up_to(int rank, int h) {
  std::vector<Root> out;
  Root g(rank, 0);
  std::function<void(int, int)> go = [&](int i, int left) {
    if (i == rank) {
      if (left < h) out.push_back(g);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      g[i] = x;
      go(i + 1, left - x);
    }
    g[i] = 0;
  };
  go(0, h);
  std::erase_if(out, [](const Root& r) { return height(r) == 0; });
  std::stable_sort(out.begin(), out.end(),
                   [](const Root& a, const Root& b) { return height(a) < height(b); });
  return out;
}

SerreReport serre_component(const UqMinus& u, const Root& gamma, int max_height) {
  if (height(gamma) > max_height)
    throw UqError("weight height " + std::to_string(height(gamma)) + " exceeds the bound " +
                  std::to_string(max_height));
  auto c = u.component(gamma);
  SerreReport r;
  r.gamma = gamma;
  r.free_dim = c->free_dim();
  r.ideal_dim = c->ideal_dim();
  r.quotient_dim = c->quotient_dim();
  r.kostant = kostant_count(u.datum(), gamma);
  return r;
}

FreeElem term0_element(const UqMinus& u, int a, int b) {
  const auto& d = u.datum();
  int n = -d.cartan(a, b);
  if (a == b || n == 0) throw UqError("term elements need adjacent simple roots");
  Scalar mq = -Scalar::var(0, d.q_exp(a));
  FreeElem out;
  for (int j = 0; j <= n; ++j)
    free_add(out, {{power_word(a, j) + letter(b) + power_word(a, n - j),
                    mq.pow(j) * q_binomial_balanced(n, j, qmono(d.q_exp(a)))}});
  return out;
}

FreeElem term1_element(const UqMinus& u, int a, int b, int sign) {
  const auto& d = u.datum();
  int n = -d.cartan(a, b);
  if (a == b || n == 0) throw UqError("term elements need adjacent simple roots");
  Scalar base = -(u.twist().simple(b, a).to_scalar() * Scalar::var(0, sign * d.q_exp(a)));
  FreeElem out;
  for (int j = 0; j <= n; ++j)
    free_add(out, {{power_word(a, j) + letter(b) + power_word(a, n - j),
                    base.pow(j) * q_binomial_balanced(n, j, qmono(sign * d.q_exp(a)))}});
  return out;
}

// ------------------------------------------------------- linear automorphisms

namespace {

FreeElem apply_linear(const FreeElem& x, const std::vector<std::vector<Scalar>>& c) {
  FreeElem out;
  for (const auto& [w, s] : x) {
    FreeElem img{{Word(), s}};
    for (char ch : w) {
      FreeElem f;
      for (std::size_t b = 0; b < c.size(); ++b)
        if (!c[ch][b].is_zero()) f.emplace(letter(static_cast<int>(b)), c[ch][b]);
      img = free_mul(img, f);
    }
    free_add(out, img);
  }
  return out;
}

bool invertible(std::vector<std::vector<Scalar>> c) {
  std::vector<std::vector<Scalar>> rows;
  std::vector<int> piv;
  int rank = 0;
  for (auto& r : c) rank += insert_row(rows, piv, r);
  return rank == static_cast<int>(c.size());
}

}  // namespace

bool is_linear_automorphism(const UqMinus& u, const std::vector<std::vector<Scalar>>& c) {
  int r = u.rank();
  if (static_cast<int>(c.size()) != r) throw UqError("matrix has the wrong size");
  for (const auto& row : c)
    if (static_cast<int>(row.size()) != r) throw UqError("matrix has the wrong size");
  if (!invertible(c)) return false;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      if (a != b && !u.is_zero(apply_linear(u.serre(a, b), c))) return false;
  return true;
}

LinearClassification classify_linear_autos(const UqMinus& u) {
  int r = u.rank();
  if (r > 3) throw UqError("linear classification is limited to rank <= 3");
  int nv = r * r;
  // Coefficient of each monomial in the entries c_ab, projected to the quotient.
  struct Entry {
    unsigned support;                  // bitmask of entries used
    std::vector<Scalar> coords;
  };
  // One block of equations per relation.
  std::vector<std::map<Root, std::vector<Entry>>> blocks;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      if (a == b) continue;
      std::map<std::pair<Root, std::vector<int>>, FreeElem> ex;
      for (const auto& [w, s] : u.serre(a, b)) {
        int len = static_cast<int>(w.size());
        std::vector<int> choice(len, 0);
        for (;;) {
          std::vector<int> e(nv, 0);
          Word t;
          for (int i = 0; i < len; ++i) {
            ++e[w[i] * r + choice[i]];
            t += static_cast<char>(choice[i]);
          }
          free_add(ex[{word_weight(t, r), e}], {{t, s}});
          int i = 0;
          while (i < len && ++choice[i] == r) choice[i++] = 0;
          if (i == len) break;
        }
      }
      std::map<Root, std::vector<Entry>> block;
      for (const auto& [key, x] : ex) {
        if (x.empty()) continue;
        Entry en;
        en.support = 0;
        for (int v = 0; v < nv; ++v)
          if (key.second[v] > 0) en.support |= 1u << v;
        en.coords = u.residue(x, key.first);
        block[key.first].push_back(std::move(en));
      }
      blocks.push_back(std::move(block));
    }

  LinearClassification out;
  out.cond2 = cond2_holds(u.datum(), u.twist());
  out.expected = diagram_auts(u.datum(), u.twist());
  std::vector<int> perm(r);
  for (unsigned mask = 0; mask < (1u << nv); ++mask) {
    bool has_perm = false;
    for (int i = 0; i < r; ++i) perm[i] = i;
    do {
      bool ok = true;
      for (int a = 0; a < r && ok; ++a) ok = mask >> (a * r + perm[a]) & 1u;
      has_perm = has_perm || ok;
    } while (!has_perm && std::next_permutation(perm.begin(), perm.end()));
    if (!has_perm) continue;
    ++out.patterns;
    // An equation with a single surviving monomial in nonzero entries cannot hold.
    bool refuted = false;
    for (const auto& block : blocks) {
      for (const auto& [g, entries] : block) {
        std::size_t dim = entries.front().coords.size();
        for (std::size_t i = 0; i < dim && !refuted; ++i) {
          int live = 0;
          for (const auto& en : entries)
            if ((en.support & ~mask) == 0 && !en.coords[i].is_zero()) ++live;
          refuted = live == 1;
        }
        if (refuted) break;
      }
      if (refuted) break;
    }
    if (refuted) {
      ++out.refuted;
      continue;
    }
    std::vector<int> theta(r, -1);
    bool monomial = true;
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        if (mask >> (a * r + b) & 1u) {
          if (theta[a] >= 0) monomial = false;
          theta[a] = b;
        }
    if (monomial) {
      // Phi(R_ab) scales uniformly in t, so t = 1 decides the whole torus orbit.
      std::vector<std::vector<Scalar>> c(r, std::vector<Scalar>(r));
      for (int a = 0; a < r; ++a) c[a][theta[a]] = Scalar(1);
      if (!is_linear_automorphism(u, c)) {
        ++out.refuted;
        continue;
      }
      out.thetas.push_back(theta);
    } else {
      std::vector<int> s(nv);
      for (int v = 0; v < nv; ++v) s[v] = mask >> v & 1u;
      out.unresolved.push_back(s);
    }
  }
  std::sort(out.thetas.begin(), out.thetas.end());
  std::set<std::vector<int>> g(out.thetas.begin(), out.thetas.end());
  for (const auto& x : out.thetas) {
    std::vector<int> inv(r);
    for (int a = 0; a < r; ++a) inv[x[a]] = a;
    if (!g.count(inv)) out.group_closed = false;
    for (const auto& y : out.thetas) {
      std::vector<int> xy(r);
      for (int a = 0; a < r; ++a) xy[a] = x[y[a]];
      if (!g.count(xy)) out.group_closed = false;
    }
  }
  return out;
}

// ------------------------------------------------------------ unipotence

std::string to_string(UnipotentCheck v) {
  switch (v) {
    case UnipotentCheck::Unipotent: return "UNIPOTENT";
    case UnipotentCheck::NotUnipotent: return "NOT-UNIPOTENT";
    default: return "INDETERMINATE";
  }
}

UnipotentCheckResult lambda_unipotent_check(const UqMinus& u, const std::vector<int>& coweight,
                                            const std::vector<FreeElem>& images, int bound) {
  int r = u.rank();
  if (static_cast<int>(coweight.size()) != r) throw UqError("coweight has the wrong length");
  for (int c : coweight)
    if (c < 1) throw UqError("coweight is not strictly dominant");
  if (static_cast<int>(images.size()) != r) throw UqError("need one image per generator");
  UnipotentCheckResult res;
  auto deg = [&](const Word& w) { return lambda_degree(coweight, word_weight(w, r)); };
  std::vector<FreeElem> img(r);
  for (int a = 0; a < r; ++a)
    for (const auto& [w, s] : images[a])
      if (deg(w) <= bound) img[a].emplace(w, s);
  if (bound < *std::max_element(coweight.begin(), coweight.end())) {
    res.reason = "bound is below the degree of a generator";
    return res;
  }
  for (int a = 0; a < r; ++a) {
    FreeElem diff = img[a];
    free_add(diff, u.generator(a), Scalar(-1));
    for (const auto& [w, s] : u.normal_form(diff))
      if (deg(w) <= coweight[a]) {
        res.verdict = UnipotentCheck::NotUnipotent;
        res.reason = "Phi(F" + std::to_string(a + 1) + ") - F" + std::to_string(a + 1) +
                     " has a term of degree " + std::to_string(deg(w));
        return res;
      }
  }
  res.checked_degree = std::numeric_limits<int>::max();
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      if (a == b) continue;
      int m = 1 - u.datum().cartan(a, b);
      int top = bound + m * coweight[a] + coweight[b] - std::max(coweight[a], coweight[b]);
      res.checked_degree = std::min(res.checked_degree, top);
      FreeElem out;
      for (const auto& [w, s] : u.serre(a, b)) {
        FreeElem acc{{Word(), s}};
        for (char ch : w) {
          FreeElem next;
          for (const auto& [x, cx] : acc)
            for (const auto& [y, cy] : img[static_cast<int>(ch)])
              if (deg(x) + deg(y) <= top) free_add(next, {{x + y, cx * cy}});
          acc = std::move(next);
        }
        free_add(out, acc);
      }
      if (!u.is_zero(out)) {
        res.verdict = UnipotentCheck::NotUnipotent;
        res.reason = "Serre relation (" + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                     ") is not preserved";
        return res;
      }
    }
  res.verdict = UnipotentCheck::Unipotent;
  res.reason = "holds up to the bound";
  return res;
}

// ------------------------------------------------------------ root vectors

namespace {

// Exponent vectors over the variables lo < j < hi with sum a_j beta_j = gamma.
std::vector<PbwExps> pbw_monomials(const ReducedWord& w, int lo, int hi, const Root& gamma) {
  std::vector<PbwExps> out;
  PbwExps e(w.size(), 0);
  std::function<void(int, Root)> go = [&](int j, Root rem) {
    if (std::all_of(rem.begin(), rem.end(), [](int x) { return x == 0; })) {
      out.push_back(e);
      return;
    }
    if (j >= hi) return;
    go(j + 1, rem);
    int k = 0;
    for (;;) {
      bool ok = true;
      for (std::size_t i = 0; i < rem.size(); ++i) {
        rem[i] -= w.beta[j][i];
        if (rem[i] < 0) ok = false;
      }
      if (!ok) break;
      e[j] = ++k;
      go(j + 1, rem);
    }
    e[j] = 0;
  };
  go(lo + 1, gamma);
  std::sort(out.begin(), out.end());
  return out;
}

Root add_roots(const Root& a, const Root& b) {
  Root c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}

}  // namespace

UqPresentation synthesize_root_vectors(const UqMinus& u, const ReducedWord& w, int pbw_height) {
  const auto& d = u.datum();
  if (d.rank() > 3) throw UqError("root vector synthesis is limited to rank <= 3");
  int n = w.size();
  auto b = commutation_matrix(d, w, u.twist());
  std::vector<FreeElem> f(n);
  std::map<PbwExps, FreeElem> pbw_memo;
  std::function<FreeElem(const PbwExps&)> pbw = [&](const PbwExps& a) -> FreeElem {
    auto it = pbw_memo.find(a);
    if (it != pbw_memo.end()) return it->second;
    int last = n - 1;
    while (last >= 0 && a[last] == 0) --last;
    FreeElem out;
    if (last < 0) {
      out = {{Word(), Scalar(1)}};
    } else {
      PbwExps p = a;
      --p[last];
      out = u.mul(pbw(p), f[last]);
    }
    pbw_memo.emplace(a, out);
    return out;
  };
  auto qlk = [&](int l, int k) { return b->entry(l, k).to_scalar(); };

  for (int l = 0; l < n; ++l) {
    if (height(w.beta[l]) == 1) {
      f[l] = u.generator(static_cast<int>(std::find(w.beta[l].begin(), w.beta[l].end(), 1) - w.beta[l].begin()));
      continue;
    }
    auto comp = u.component(w.beta[l]);
    std::vector<Word> basis;
    for (int j : comp->complement) basis.push_back(comp->words[j]);
    int p = static_cast<int>(basis.size());
    // columns: x_1..x_p, then one y per intermediate PBW monomial for each k
    std::vector<std::vector<std::vector<Scalar>>> cols;
    std::vector<std::vector<Scalar>> matrix;
    std::vector<std::pair<int, std::vector<PbwExps>>> ys;
    int ncols = p;
    for (int k = 0; k < l; ++k) ys.push_back({k, pbw_monomials(w, k, l, add_roots(w.beta[l], w.beta[k]))});
    for (const auto& y : ys) ncols += static_cast<int>(y.second.size());
    int offset = p;
    for (const auto& [k, monos] : ys) {
      Root g = add_roots(w.beta[l], w.beta[k]);
      std::vector<std::vector<Scalar>> c;
      for (const auto& word : basis) {
        FreeElem x{{word, Scalar(1)}};
        FreeElem e = free_mul(x, f[k]);
        free_add(e, free_mul(f[k], x), -qlk(l, k));
        c.push_back(u.residue(e, g));
      }
      for (const auto& m : monos) c.push_back(u.residue(free_scaled(pbw(m), Scalar(-1)), g));
      std::size_t rows = c.front().size();
      for (std::size_t i = 0; i < rows; ++i) {
        std::vector<Scalar> row(ncols);
        for (int j = 0; j < p; ++j) row[j] = c[j][i];
        for (std::size_t j = 0; j < monos.size(); ++j) row[offset + j] = c[p + j][i];
        matrix.push_back(std::move(row));
      }
      offset += static_cast<int>(monos.size());
    }
    auto ker = nullspace(matrix, ncols);
    std::vector<std::vector<Scalar>> xs;
    std::vector<int> piv;
    for (const auto& v : ker) insert_row(xs, piv, std::vector<Scalar>(v.begin(), v.begin() + p));
    if (xs.empty())
      throw UqError("synthesis failure: no root vector for beta_" + std::to_string(l + 1));
    if (xs.size() > 1)
      throw UqError("synthesis failure: root vector for beta_" + std::to_string(l + 1) +
                    " is not determined by the straightening law");
    FreeElem x;
    for (int j = 0; j < p; ++j)
      if (!xs[0][j].is_zero()) x.emplace(basis[j], xs[0][j]);
    f[l] = x;
  }

  UqPresentation out;
  out.word = w;
  out.root_vectors = f;
  out.cgl.n = n;
  out.cgl.q = b->lattice();
  for (int l = 0; l < n; ++l) {
    UnitMonomial ql{};
    ql.free.e[0] = -2 * d.q_exp(w.letters[l] - 1);
    out.cgl.ql.push_back(ql);
  }
  out.cgl.delta.resize(n);
  out.cgl.nilpotency_bound = n + 1;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < l; ++k) {
      Root g = add_roots(w.beta[l], w.beta[k]);
      FreeElem e = free_mul(f[l], f[k]);
      free_add(e, free_mul(f[k], f[l]), -qlk(l, k));
      auto target = u.residue(e, g);
      auto monos = pbw_monomials(w, k, l, g);
      std::vector<std::vector<Scalar>> c;
      for (const auto& m : monos) c.push_back(u.residue(pbw(m), g));
      // solve sum_m y_m c_m = target
      std::vector<std::vector<Scalar>> mat;
      for (std::size_t i = 0; i < target.size(); ++i) {
        std::vector<Scalar> row;
        for (const auto& col : c) row.push_back(col[i]);
        row.push_back(-target[i]);
        mat.push_back(std::move(row));
      }
      int cols = static_cast<int>(monos.size()) + 1;
      auto ker = nullspace(mat, cols);
      std::optional<std::vector<Scalar>> sol;
      for (const auto& v : ker)
        if (!v.back().is_zero()) {
          Scalar inv = v.back().inverse();
          std::vector<Scalar> s;
          for (int j = 0; j + 1 < cols; ++j) s.push_back(v[j] * inv);
          sol = s;
          break;
        }
      if (!sol)
        throw UqError("straightening law fails for (" + std::to_string(l + 1) + "," +
                      std::to_string(k + 1) + ")");
      PbwPoly poly;
      for (std::size_t j = 0; j < monos.size(); ++j) poly_add(poly, monos[j], (*sol)[j]);
      out.cgl.delta[l].push_back(poly);
    }

  // PBW test: ordered monomials in the F_beta are a basis of each component.
  for (const auto& g : weights_up_to(d.rank(), pbw_height)) {
    auto monos = pbw_monomials(w, -1, n, g);
    long long kc = kostant_count(d, g);
    std::vector<std::vector<Scalar>> rows;
    std::vector<int> piv;
    for (const auto& m : monos) insert_row(rows, piv, u.residue(pbw(m), g));
    auto comp = u.component(g);
    if (static_cast<long long>(monos.size()) != kc || static_cast<int>(rows.size()) != comp->quotient_dim() ||
        static_cast<long long>(rows.size()) != kc) {
      std::string s;
      for (int x : g) s += (s.empty() ? "" : ",") + std::to_string(x);
      throw UqError("synthesis failure: PBW test fails at weight (" + s + ")");
    }
  }
  out.pbw_height = pbw_height;
  out.cgl.validate();
  return out;
}

}  // namespace qrigid
