#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "qrigid/rootsys.hpp"
#include "support.hpp"

using namespace qrigid;
using namespace qrigid::testing;

namespace {

// Positive roots in simple-root coordinates from the classical tables.
std::set<Root> table_roots(const std::string& t) {
  if (t == "A2") return {{1, 0}, {0, 1}, {1, 1}};
  if (t == "B2") return {{1, 0}, {0, 1}, {1, 1}, {1, 2}};
  if (t == "G2") return {{1, 0}, {0, 1}, {1, 1}, {2, 1}, {3, 1}, {3, 2}};
  if (t == "A3") return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 1, 1}, {1, 1, 1}};
  return {};
}

int dim_g(char t, int r) {
  switch (t) {
    case 'A': return r * (r + 2);
    case 'B':
    case 'C': return r * (2 * r + 1);
    case 'D': return r * (2 * r - 1);
    case 'E': return r == 6 ? 78 : r == 7 ? 133 : 248;
    case 'F': return 52;
    default: return 14;
  }
}

UnitMonomial rmono(int q, int r1, int r2 = 0) {
  UnitMonomial u;
  u.free.e[0] = q;
  u.free.e[1] = r1;
  u.free.e[2] = r2;
  return u;
}

TwistData random_twist(std::mt19937_64& rng, int rank) {
  std::uniform_int_distribution<int> e(-2, 2);
  std::vector<UnitMonomial> up;
  for (int i = 0; i < rank * (rank - 1) / 2; ++i) up.push_back(rmono(e(rng), e(rng), e(rng)));
  return TwistData::from_upper(rank, up);
}

const std::vector<std::string> kTypes = {"A2", "B2", "G2", "A3", "B3", "C3", "A4", "D4",
                                         "F4", "B4", "C4", "E6"};

}  // namespace

TEST_CASE("root data match the classical tables") {
  for (const auto& name : kTypes) {
    auto d = RootDatum::make(name);
    CAPTURE(name);
    CHECK(d.num_positive() == (dim_g(name[0], d.rank()) - d.rank()) / 2);
    for (int i = 0; i < d.rank(); ++i)
      for (int j = 0; j < d.rank(); ++j) {
        CHECK(d.form(i, j) == d.form(j, i));
        CHECK(d.cartan(i, j) * d.form(i, i) == 2 * d.form(i, j));
      }
    auto t = table_roots(name);
    if (!t.empty()) CHECK(std::set<Root>(d.positive_roots().begin(), d.positive_roots().end()) == t);
    // short roots have square length 2
    int shortest = 100;
    for (int i = 0; i < d.rank(); ++i) shortest = std::min(shortest, d.form(i, i));
    CHECK(shortest == 2);
  }
  CHECK(RootDatum::make("E7").num_positive() == 63);
  CHECK(RootDatum::make("E8").num_positive() == 120);
  CHECK_THROWS_AS(RootDatum::make("A1"), RootError);
  CHECK_THROWS_AS(RootDatum::make("G3"), RootError);
  CHECK_THROWS_AS(RootDatum::make("X2"), RootError);
}

TEST_CASE("reduced words and Lusztig roots") {
  auto a2 = RootDatum::make("A2");
  auto w = validate_reduced(a2, {1, 2, 1});
  CHECK(w.beta == std::vector<Root>{{1, 0}, {1, 1}, {0, 1}});
  CHECK(w.succ == std::vector<int>{2, -1, -1});
  CHECK(w.orbit == std::vector<int>{1, 0, 0});
  CHECK_THROWS_WITH_AS(validate_reduced(a2, {1, 1, 2}), "not reduced: beta_2 is negative",
                       RootError);
  CHECK_THROWS_AS(validate_reduced(a2, {1, 2}), RootError);
  CHECK_THROWS_AS(validate_reduced(a2, {1, 3, 1}), RootError);

  std::map<std::string, std::size_t> counts = {{"A2", 2}, {"B2", 2}, {"G2", 2},
                                               {"A3", 16}, {"B3", 42}, {"C3", 42}};
  for (const auto& [name, count] : counts) {
    auto d = RootDatum::make(name);
    auto words = all_reduced_words(d);
    CAPTURE(name);
    CHECK(words.size() == count);
    for (const auto& word : words) {
      auto rw = validate_reduced(d, word);
      std::set<Root> got(rw.beta.begin(), rw.beta.end());
      CHECK(got == std::set<Root>(d.positive_roots().begin(), d.positive_roots().end()));
      CHECK(convex_order(d, rw));
      CHECK(rw.beta.front() == d.simple(word.front() - 1));
    }
    if (d.rank() == 2 || name == "A3") {
      // brute force: every word of length N that validates
      std::vector<std::vector<int>> brute;
      std::vector<int> cur(d.num_positive(), 1);
      for (;;) {
        try {
          validate_reduced(d, cur);
          brute.push_back(cur);
        } catch (const RootError&) {
        }
        std::size_t i = 0;
        while (i < cur.size() && ++cur[i] > d.rank()) cur[i++] = 1;
        if (i == cur.size()) break;
      }
      std::sort(brute.begin(), brute.end());
      CHECK(brute == words);
    }
  }
  CHECK(RootDatum::make("A3").canonical_word() == std::vector<int>{1, 2, 1, 3, 2, 1});
  CHECK(RootDatum::make("B2").canonical_word() == std::vector<int>{1, 2, 1, 2});
  CHECK(RootDatum::make("G2").canonical_word() == std::vector<int>{1, 2, 1, 2, 1, 2});
}

TEST_CASE("commutation matrix and degree vectors") {
  auto a2 = RootDatum::make("A2");
  auto w = validate_reduced(a2, {1, 2, 1});
  auto b = commutation_matrix(a2, w, TwistData::trivial(2));
  CHECK(b->entry(1, 0) == qpow(-1));
  CHECK(b->entry(2, 0) == qpow(1));
  CHECK(b->entry(2, 1) == qpow(-1));
  CHECK(degree_vector(a2, w, {1, 1}) == DegreeVector{2, 2, 1});
  CHECK(degree_vector(a2, w, {2, 1}) == DegreeVector{3, 3, 1});
  CHECK_THROWS_AS(degree_vector(a2, w, {1, 0}), RootError);
  CHECK_THROWS_AS(degree_vector(a2, w, {1}), RootError);

  std::mt19937_64 rng(11);
  for (const auto& name : {"A2", "B2", "G2", "A3", "B3"}) {
    auto d = RootDatum::make(name);
    for (const auto& word : all_reduced_words(d)) {
      auto rw = validate_reduced(d, word);
      auto t = random_twist(rng, d.rank());
      auto m = commutation_matrix(d, rw, t);
      for (int k = 0; k < rw.size(); ++k)
        for (int l = 0; l < rw.size(); ++l) CHECK((m->entry(k, l) * m->entry(l, k)).is_one());
      std::vector<int> lam(d.rank());
      for (auto& x : lam) x = 1 + static_cast<int>(rng() % 3);
      auto dv = degree_vector(d, rw, lam);
      for (int x : dv) CHECK(x >= 1);
      // the last occurrence of each letter carries a single root
      for (int l = 0; l < rw.size(); ++l)
        if (rw.succ[l] < 0) {
          int s = 0;
          for (int i = 0; i < d.rank(); ++i) s += lam[i] * rw.beta[l][i];
          CHECK(dv[l] == s);
        }
    }
  }
}

TEST_CASE("n-prime matrices") {
  for (const auto& name : {"A2", "B2", "G2", "A3"}) {
    auto d = RootDatum::make(name);
    for (const auto& word : all_reduced_words(d)) {
      auto rw = validate_reduced(d, word);
      for (auto c : {OrbitConvention::FromZero, OrbitConvention::FromOne}) {
        auto n = nprime_matrix(d, rw, c);
        for (int k = 0; k < rw.size(); ++k) {
          CHECK(n[k][k] == 0);
          for (int l = 0; l < rw.size(); ++l) CHECK(n[k][l] == -n[l][k]);
        }
      }
    }
  }
  auto a2 = RootDatum::make("A2");
  auto n = nprime_matrix(a2, validate_reduced(a2, {1, 2, 1}), OrbitConvention::FromZero);
  // Delta_1 = X3 X1, Delta_2 = X2, Delta_3 = X3 with <b1,b2> = 1, <b1,b3> = -1, <b2,b3> = 1
  CHECK(n[0][1] == 1 - 1);
  CHECK(n[0][2] == -1);
  CHECK(n[1][2] == 1);
}

TEST_CASE("w0 involution and Ker(1 + w0)") {
  auto a2 = w0_involution(RootDatum::make("A2"));
  CHECK(a2.theta == std::vector<int>{1, 0});
  CHECK(a2.fixed.empty());
  CHECK(a2.plus == std::vector<int>{0});
  CHECK(a2.kernel_basis == std::vector<IntVec>{{1, 1}});
  auto b2 = w0_involution(RootDatum::make("B2"));
  CHECK(b2.theta == std::vector<int>{0, 1});
  CHECK(b2.kernel_basis == std::vector<IntVec>{{1, 0}, {0, 1}});
  CHECK(w0_involution(RootDatum::make("A3")).theta == std::vector<int>{2, 1, 0});
  CHECK(w0_involution(RootDatum::make("D5")).theta == std::vector<int>{0, 1, 2, 4, 3});
  CHECK(w0_involution(RootDatum::make("D4")).theta == std::vector<int>{0, 1, 2, 3});
  CHECK(w0_involution(RootDatum::make("E6")).theta == std::vector<int>{5, 1, 4, 3, 2, 0});

  for (const auto& name : kTypes) {
    auto d = RootDatum::make(name);
    auto w = w0_involution(d);
    for (int i = 0; i < d.rank(); ++i) CHECK(w.theta[w.theta[i]] == i);
    auto auts = diagram_auts(d, TwistData::trivial(d.rank()));
    CHECK(std::find(auts.begin(), auts.end(), w.theta) != auts.end());
    // Ker(1 + w0) on weights: c with c_i = c_theta(i), rank = |fixed| + |plus|
    IntMatrix m(d.rank(), d.rank());
    for (int i = 0; i < d.rank(); ++i) {
      m(i, i) += 1;
      m(i, w.theta[i]) -= 1;
    }
    auto ker = integer_kernel(m);
    CHECK(ker.rows() == w.kernel_basis.size());
    for (const auto& v : w.kernel_basis) CHECK(in_row_lattice(ker, v));
  }
}

TEST_CASE("diagram automorphisms") {
  auto none = [](const char* n) { return TwistData::trivial(RootDatum::make(n).rank()); };
  CHECK(diagram_auts(RootDatum::make("A2"), none("A2")).size() == 2);
  CHECK(diagram_auts(RootDatum::make("B2"), none("B2")).size() == 1);
  CHECK(diagram_auts(RootDatum::make("G2"), none("G2")).size() == 1);
  CHECK(diagram_auts(RootDatum::make("A3"), none("A3")).size() == 2);
  CHECK(diagram_auts(RootDatum::make("D4"), none("D4")).size() == 6);
  CHECK(diagram_auts(RootDatum::make("E6"), none("E6")).size() == 2);
  auto a2 = RootDatum::make("A2");
  auto tw = TwistData::from_upper(2, {rmono(0, 1)});
  CHECK(diagram_auts(a2, tw) == std::vector<std::vector<int>>{{0, 1}});
  // the A3 flip keeps r exactly when r(a3,a2) = r(a1,a2) and r(a1,a3) = 1
  auto a3 = RootDatum::make("A3");
  auto sym = TwistData::from_upper(3, {rmono(0, 1), UnitMonomial{}, rmono(0, -1)});
  CHECK(diagram_auts(a3, sym).size() == 2);
  auto asym = TwistData::from_upper(3, {rmono(0, 1), UnitMonomial{}, rmono(0, 1)});
  CHECK(diagram_auts(a3, asym).size() == 1);
}

TEST_CASE("G_p equals the group of the q_lk") {
  auto a2 = RootDatum::make("A2");
  auto w = validate_reduced(a2, {1, 2, 1});
  auto g = gp_group(a2, TwistData::trivial(2), w);
  CHECK(lattice_equal(g.generators, {qpow(1)}));
  CHECK(g.equals_qlk);
  CHECK(g.torsion_free);
  CHECK(cond2_holds(a2, TwistData::trivial(2)));
  CHECK(!lattice_equal({qpow(2)}, {qpow(1)}));

  std::mt19937_64 rng(5);
  for (const auto& name : {"A2", "B2", "G2", "A3"}) {
    auto d = RootDatum::make(name);
    for (int trial = 0; trial < 5; ++trial) {
      auto t = random_twist(rng, d.rank());
      for (const auto& word : all_reduced_words(d)) {
        auto rep = gp_group(d, t, validate_reduced(d, word));
        CHECK(rep.equals_qlk);
      }
    }
  }
  // q_a r = 1 for r = q^-1 on the pair (a1, a2) of A2
  auto bad = TwistData::from_upper(2, {qpow(-1)});
  CHECK(!cond2_holds(a2, bad));
  auto gbad = gp_group(a2, bad, w);
  CHECK(gbad.equals_qlk);
}
