#include <doctest.h>

#include "qrigid/cauchon.hpp"
#include "qrigid/uqgraded.hpp"
#include "support.hpp"

using namespace qrigid;
using namespace qrigid::testing;

namespace {

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
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j) up.push_back(rmono(e(rng), e(rng), e(rng)));
  return TwistData::from_upper(rank, up);
}

UqPresentation presentation(const std::string& type, const std::vector<int>& word,
                            const TwistData* t = nullptr, int height = 4) {
  auto d = RootDatum::make(type);
  UqMinus u(d, t ? *t : TwistData::trivial(d.rank()));
  return synthesize_root_vectors(u, validate_reduced(d, word), height);
}

bool same_matrix(const BicharPtr& a, const BicharPtr& b) {
  if (a->rank() != b->rank()) return false;
  for (int l = 0; l < a->rank(); ++l)
    for (int k = 0; k < a->rank(); ++k)
      if (!(a->entry(l, k) == b->entry(l, k))) return false;
  return true;
}

}  // namespace

TEST_CASE("quantum affine space is a fixed point") {
  std::mt19937_64 rng(11);
  for (int n : {2, 3, 4}) {
    auto b = random_torus(rng, n);
    std::vector<UnitMonomial> ql(n, rmono(2, 0));
    auto p = CGLPresentation::quantum_affine(b->lattice(), ql);
    auto res = run_cauchon(p);
    CHECK(res.ok);
    CHECK(same_matrix(res.bichar, b));
    StageAlgebra alg(p, -1, -1);
    for (const auto& st : res.stages)
      for (int j = 0; j < n; ++j) CHECK(st.tuple[j] == alg.generator(j));
  }
}

TEST_CASE("A2 stages") {
  auto pr = presentation("A2", {1, 2, 1});
  const auto& p = pr.cgl;
  auto s3 = delete_step(p, 2);
  CHECK(s3.relations_ok);
  CHECK(s3.powers == std::vector<int>{1, 0});
  REQUIRE(s3.tuple[0].size() == 2);
  PbwExps corr{0, 1, -1};
  CHECK(s3.tuple[0].count(corr) == 1);
  CHECK(s3.tuple[0].count({1, 0, 0}) == 1);
  StageAlgebra alg(p, 2, 2);
  CHECK(s3.tuple[1] == alg.generator(1));
  CHECK(s3.tuple[2] == alg.generator(2));

  auto s2 = delete_step(p, 1);
  CHECK(s2.relations_ok);
  for (int j = 0; j < 3; ++j) CHECK(s2.tuple[j] == alg.generator(j));
}

TEST_CASE("delta is locally nilpotent on the A2 instance") {
  auto pr = presentation("A2", {1, 2, 1});
  StageAlgebra alg(pr.cgl, 2, -1);
  auto once = alg.delta(2, alg.generator(0));
  CHECK(!once.empty());
  CHECK(alg.delta(2, once).empty());
  CHECK(alg.delta(2, alg.generator(1)).empty());
}

TEST_CASE("final torus matches the commutation matrix") {
  auto d = RootDatum::make("A2");
  auto w = validate_reduced(d, {1, 2, 1});
  auto res = run_cauchon(presentation("A2", {1, 2, 1}).cgl);
  CHECK(res.ok);
  CHECK(same_matrix(res.bichar, commutation_matrix(d, w, TwistData::trivial(2))));
  CHECK(res.bichar->entry(1, 0) == rmono(-1, 0));
  CHECK(res.bichar->entry(2, 0) == rmono(1, 0));
  CHECK(res.bichar->entry(2, 1) == rmono(-1, 0));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 3; ++i) {
    auto t = random_twist(rng, 2);
    auto r = run_cauchon(presentation("A2", {1, 2, 1}, &t).cgl);
    CHECK(r.ok);
    CHECK(same_matrix(r.bichar, commutation_matrix(d, w, t)));
  }
}

TEST_CASE("every rank-two word") {
  for (std::string type : {"A2", "B2", "G2"}) {
    auto d = RootDatum::make(type);
    for (const auto& word : all_reduced_words(d)) {
      auto pr = presentation(type, word, nullptr, type == "G2" ? 3 : 4);
      auto res = run_cauchon(pr.cgl);
      CHECK_MESSAGE(res.ok, type);
      CHECK(same_matrix(res.bichar, commutation_matrix(d, pr.word, TwistData::trivial(2))));
    }
  }
}

TEST_CASE("delta monomials match n' from zero") {
  std::mt19937_64 rng(9);
  for (std::string type : {"A2", "B2", "G2", "A3"}) {
    auto d = RootDatum::make(type);
    for (const auto& word : all_reduced_words(d)) {
      auto w = validate_reduced(d, word);
      for (bool twisted : {false, true}) {
        auto t = twisted ? random_twist(rng, d.rank()) : TwistData::trivial(d.rank());
        auto c = delta_check(d, w, commutation_matrix(d, w, t), &t);
        CHECK(c.pure_q);
        CHECK(c.matching == std::vector<OrbitConvention>{OrbitConvention::FromZero});
        for (int l = 0; l < w.size(); ++l) CHECK(c.torus_exponents[l][l] == 0);
      }
    }
  }
  auto d = RootDatum::make("A2");
  auto w = validate_reduced(d, {1, 2, 1});
  auto c = delta_check(d, w, commutation_matrix(d, w, TwistData::trivial(2)));
  CHECK(c.deltas == std::vector<Exps>{{1, 0, 1}, {0, 1, 0}, {0, 0, 1}});
  // without dividing out the twist the exponents are not pure q-powers
  auto t = TwistData::from_upper(2, {rmono(0, 1)});
  CHECK(!delta_check(d, w, commutation_matrix(d, w, t)).pure_q);
  CHECK(delta_check(d, w, commutation_matrix(d, w, t), &t).pure_q);
}

TEST_CASE("presentation errors") {
  auto pr = presentation("B2", {1, 2, 1, 2});
  auto p = pr.cgl;
  int top = 0;
  for (int m = 1; m < p.n; ++m)
    for (int x : delete_step(p, m).powers) top = std::max(top, x);
  CHECK(top >= 2);
  p.nilpotency_bound = 1;
  CHECK_THROWS_WITH_AS(run_cauchon(p), doctest::Contains("not nilpotent"), CauchonError);

  auto bad = pr.cgl;
  bad.ql[1] = UnitMonomial{};
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("root of unity"), CauchonError);

  bad = pr.cgl;
  for (auto& row : bad.delta)
    for (auto& poly : row)
      if (!poly.empty()) {
        PbwExps e(bad.n, 0);
        e[bad.n - 1] = 1;
        poly_add(poly, e, Scalar(1));
      }
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("leaves the lower subalgebra"), CauchonError);

  bad = pr.cgl;
  bad.q.set(bad.n - 1, 0, bad.q.at(bad.n - 1, 0) * rmono(1, 0));
  CHECK_THROWS_AS(bad.validate(), CauchonError);
  CHECK_THROWS_AS(delete_step(pr.cgl, 0), CauchonError);
}
