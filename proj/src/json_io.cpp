#include "qrigid/json_io.hpp"

namespace qrigid {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::vector<int> int_list(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<int> out;
  for (const auto& x : j) out.push_back(as_int(x, what));
  return out;
}

Json exps_json(const std::vector<int>& e) { return Json(e); }

Json one_based(const std::vector<int>& p) {
  Json out = Json::array();
  for (int x : p) out.push_back(x + 1);
  return out;
}

}  // namespace

Json int_rows(const std::vector<IntVec>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) out.push_back(r);
  return out;
}

// ------------------------------------------------------------------ scalars

Json scalar_json(const Scalar& s) { return s.to_string(); }

Scalar scalar_from(const Json& j) {
  try {
    if (j.is_number_integer()) return Scalar(j.get<long>());
    if (!j.is_string()) throw InputError("scalar must be a string");
    return Scalar::parse(j.get<std::string>());
  } catch (const ScalarError& e) {
    throw InputError(e.what());
  }
}

Json unit_json(const UnitMonomial& u) { return u.to_string(); }

UnitMonomial unit_from(const Json& j) {
  auto m = scalar_from(j).as_monomial();
  if (!m || m->second != 1) throw InputError("expected a monomial with coefficient 1");
  UnitMonomial u;
  u.free = m->first;
  return u;
}

// ------------------------------------------------------------------ lattices

Json lattice_json(const ExpLattice& l) {
  int top = 0;
  for (const auto& u : l.entries)
    for (int v = 0; v < kMaxVars; ++v)
      if (u.free.e[v] != 0) top = std::max(top, v);
  Json vars = Json::array();
  for (int v = 0; v <= top; ++v) vars.push_back(var_name(v));
  Json pairs = Json::array();
  for (int k = 0; k < l.n; ++k)
    for (int m = k + 1; m < l.n; ++m) {
      const auto& u = l.at(k, m);
      if (u.is_one()) continue;
      Json e = Json::array();
      for (int v = 0; v <= top; ++v) e.push_back(u.free.e[v]);
      if (l.torsion_order) e.push_back(u.tor);
      pairs.push_back({{"k", k + 1}, {"l", m + 1}, {"exp", e}});
    }
  return {{"n", l.n},
          {"vars", vars},
          {"torsion_order", l.torsion_order ? Json(l.torsion_order) : Json(nullptr)},
          {"pairs", pairs}};
}

ExpLattice lattice_from(const Json& j) {
  int n = as_int(field(j, "n"), "n");
  if (n < 1 || n > 64) throw InputError("n out of range");
  std::vector<int> vars;
  if (j.contains("vars")) {
    for (const auto& v : j.at("vars")) {
      if (!v.is_string()) throw InputError("vars must be names");
      int idx = var_index(v.get<std::string>());
      if (idx < 0) throw InputError("unknown variable " + v.get<std::string>());
      vars.push_back(idx);
    }
  } else {
    vars.push_back(0);
  }
  int64_t tor = 0;
  if (j.contains("torsion_order") && !j.at("torsion_order").is_null()) {
    tor = as_int(j.at("torsion_order"), "torsion_order");
    if (tor < 2) throw InputError("torsion_order must be at least 2");
  }
  ExpLattice l = ExpLattice::trivial(n, tor);
  if (j.contains("pairs"))
    for (const auto& p : j.at("pairs")) {
      int k = as_int(field(p, "k"), "k") - 1, m = as_int(field(p, "l"), "l") - 1;
      if (k < 0 || m >= n || k >= m) throw InputError("pair indices must satisfy 1 <= k < l <= n");
      auto e = int_list(field(p, "exp"), "exp");
      if (e.size() != vars.size() + (tor ? 1 : 0)) throw InputError("exp has the wrong length");
      UnitMonomial u;
      for (std::size_t v = 0; v < vars.size(); ++v) u.free.e[vars[v]] = e[v];
      if (tor) {
        u.order = tor;
        u.tor = ((e.back() % tor) + tor) % tor;
      }
      l.set(k, m, u);
    }
  return l;
}

// ------------------------------------------------------------------ elements

Json element_json(const TorusElement& u) {
  Json out = Json::array();
  for (const auto& [e, c] : u.terms()) out.push_back({{"exp", exps_json(e)}, {"coef", scalar_json(c)}});
  return out;
}

TorusElement element_from(const BicharPtr& b, const Json& j) {
  if (!j.is_array()) throw InputError("element must be a list of terms");
  TorusElement u(b);
  for (const auto& t : j) {
    auto e = int_list(field(t, "exp"), "exp");
    if (static_cast<int>(e.size()) != b->rank()) throw InputError("exp has the wrong length");
    u.add_term(e, t.contains("coef") ? scalar_from(t.at("coef")) : Scalar(1));
  }
  return u;
}

Json auto_json(const UnipotentAuto& phi) {
  Json tuple = Json::array();
  for (const auto& u : phi.tuple()) tuple.push_back(element_json(u));
  return {{"torus", lattice_json(phi.bichar()->lattice())},
          {"degree_vector", phi.degrees()},
          {"cutoff", phi.cutoff()},
          {"tuple", tuple}};
}

UnipotentAuto auto_from(const Json& j, std::optional<int> cutoff, bool checked) {
  auto b = make_bichar(lattice_from(field(j, "torus")));
  auto d = int_list(field(j, "degree_vector"), "degree_vector");
  if (static_cast<int>(d.size()) != b->rank()) throw InputError("degree_vector has the wrong length");
  for (int x : d)
    if (x < 1) throw InputError("degrees must be positive");
  int m = cutoff ? *cutoff : as_int(field(j, "cutoff"), "cutoff");
  if (m < 1) throw InputError("cutoff must be at least 1");
  std::vector<TorusElement> tuple;
  if (j.contains("tuple")) {
    for (const auto& x : j.at("tuple")) tuple.push_back(element_from(b, x));
  } else {
    tuple.assign(b->rank(), TorusElement(b));
  }
  if (static_cast<int>(tuple.size()) != b->rank()) throw InputError("tuple has the wrong length");
  if (checked) return UnipotentAuto::build(b, d, m, tuple);
  return UnipotentAuto::unchecked(b, d, m, tuple);
}

Json support_json(const SupportReport& r) {
  Json out{{"points", r.points},
           {"rays", int_rows(r.cone.rays)},
           {"strict", r.cone.strict},
           {"in_kernel", r.in_kernel},
           {"cutoff", r.cutoff}};
  if (!r.cone.strict) out["certificate"] = int_rows(r.cone.certificate);
  return out;
}

Json rigidity_json(const RigidityReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"noncentral_points", r.noncentral_points},
          {"forward_finite", r.forward_finite},
          {"inverse_finite", r.inverse_finite},
          {"rays", int_rows(r.support.cone.rays)},
          {"cutoff", r.cutoff}};
}

// ------------------------------------------------------------------ root data

Json twist_json(const TwistData& t) {
  if (t.is_trivial()) return nullptr;
  Json out = Json::array();
  for (int i = 0; i < t.rank(); ++i)
    for (int j = i + 1; j < t.rank(); ++j) out.push_back(unit_json(t.simple(i, j)));
  return out;
}

TwistData twist_from(const Json& j, int rank) {
  if (j.is_null()) return TwistData::trivial(rank);
  if (!j.is_array()) throw InputError("twist must be a list of monomials");
  std::vector<UnitMonomial> up;
  for (const auto& x : j) up.push_back(unit_from(x));
  if (static_cast<int>(up.size()) != rank * (rank - 1) / 2)
    throw InputError("twist needs rank*(rank-1)/2 values");
  try {
    return TwistData::from_upper(rank, up);
  } catch (const RootError& e) {
    throw InputError(e.what());
  }
}

Json free_json(const FreeElem& x) {
  Json out = Json::array();
  for (const auto& [w, c] : x) {
    Json word = Json::array();
    for (char ch : w) word.push_back(static_cast<int>(ch) + 1);
    out.push_back({{"word", word}, {"coef", scalar_json(c)}});
  }
  return out;
}

FreeElem free_from(const Json& j, int rank) {
  if (!j.is_array()) throw InputError("element must be a list of terms");
  FreeElem out;
  for (const auto& t : j) {
    Word w;
    for (int x : int_list(field(t, "word"), "word")) {
      if (x < 1 || x > rank) throw InputError("letter out of range");
      w += static_cast<char>(x - 1);
    }
    free_add(out, {{w, t.contains("coef") ? scalar_from(t.at("coef")) : Scalar(1)}});
  }
  return out;
}

// ------------------------------------------------------------------ CGL data

Json poly_json(const PbwPoly& p) {
  Json out = Json::array();
  for (const auto& [e, c] : p) out.push_back({{"exp", exps_json(e)}, {"coef", scalar_json(c)}});
  return out;
}

Json cgl_json(const CGLPresentation& p) {
  Json q = Json::array(), ql = Json::array(), delta = Json::array();
  for (int l = 0; l < p.n; ++l)
    for (int k = 0; k < l; ++k) q.push_back({{"l", l + 1}, {"k", k + 1}, {"value", unit_json(p.q.at(l, k))}});
  for (const auto& u : p.ql) ql.push_back(unit_json(u));
  for (int l = 0; l < p.n; ++l) {
    Json on = Json::array();
    for (int k = 0; k < l; ++k)
      if (!p.delta[l][k].empty()) on.push_back({{"k", k + 1}, {"terms", poly_json(p.delta[l][k])}});
    if (!on.empty()) delta.push_back({{"level", l + 1}, {"on", on}});
  }
  return {{"n", p.n}, {"q_lk", q}, {"q_l", ql}, {"delta", delta}, {"nilpotency_bound", p.nilpotency_bound}};
}

CGLPresentation cgl_from(const Json& j) {
  int n = as_int(field(j, "n"), "n");
  if (n < 1 || n > 32) throw InputError("n out of range");
  ExpLattice q = ExpLattice::trivial(n);
  for (const auto& e : field(j, "q_lk")) {
    int l = as_int(field(e, "l"), "l") - 1, k = as_int(field(e, "k"), "k") - 1;
    if (k < 0 || l >= n || k >= l) throw InputError("q_lk needs 1 <= k < l <= n");
    q.set(l, k, unit_from(field(e, "value")));
  }
  std::vector<UnitMonomial> ql;
  for (const auto& e : field(j, "q_l")) ql.push_back(unit_from(e));
  auto p = CGLPresentation::quantum_affine(q, ql);
  if (j.contains("delta"))
    for (const auto& lv : j.at("delta")) {
      int l = as_int(field(lv, "level"), "level") - 1;
      if (l < 0 || l >= n) throw InputError("delta level out of range");
      for (const auto& on : field(lv, "on")) {
        int k = as_int(field(on, "k"), "k") - 1;
        if (k < 0 || k >= l) throw InputError("delta_l(x_k) needs k < l");
        for (const auto& t : field(on, "terms")) {
          auto e = int_list(field(t, "exp"), "exp");
          if (static_cast<int>(e.size()) != n) throw InputError("exp has the wrong length");
          poly_add(p.delta[l][k], e, scalar_from(field(t, "coef")));
        }
      }
    }
  if (j.contains("nilpotency_bound")) p.nilpotency_bound = as_int(j.at("nilpotency_bound"), "nilpotency_bound");
  try {
    p.validate();
  } catch (const CauchonError& e) {
    throw InputError(e.what());
  }
  return p;
}

Json bichar_json(const BicharPtr& b) {
  Json out = Json::array();
  for (int l = 0; l < b->rank(); ++l)
    for (int k = 0; k < l; ++k) out.push_back({{"l", l + 1}, {"k", k + 1}, {"value", unit_json(b->entry(l, k))}});
  return out;
}

Json cauchon_json(const CauchonResult& r) {
  Json stages = Json::array();
  for (const auto& s : r.stages) {
    Json tuple = Json::array(), fails = Json::array();
    for (const auto& x : s.tuple) tuple.push_back(poly_json(x));
    for (auto [l, k] : s.failures) fails.push_back({l, k});
    stages.push_back({{"m", s.m},
                      {"relations_ok", s.relations_ok},
                      {"powers", s.powers},
                      {"failures", fails},
                      {"tuple", tuple}});
  }
  return {{"ok", r.ok}, {"matrix", bichar_json(r.bichar)}, {"stages", stages}};
}

Json delta_check_json(const DeltaCheck& c) {
  Json m = Json::array();
  for (auto x : c.matching) m.push_back(to_string(x));
  return {{"deltas", c.deltas}, {"torus_exponents", c.torus_exponents}, {"pure_q", c.pure_q}, {"matching", m}};
}

// ------------------------------------------------------------------ U_q^-

Json serre_json(const SerreReport& r) {
  return {{"weight", r.gamma},
          {"free_dim", r.free_dim},
          {"ideal_dim", r.ideal_dim},
          {"quotient_dim", r.quotient_dim},
          {"kostant", r.kostant}};
}

Json classification_json(const LinearClassification& c) {
  Json th = Json::array(), ex = Json::array();
  for (const auto& t : c.thetas) th.push_back(one_based(t));
  for (const auto& t : c.expected) ex.push_back(one_based(t));
  return {{"thetas", th},
          {"expected", ex},
          {"unresolved", c.unresolved},
          {"patterns", c.patterns},
          {"refuted", c.refuted},
          {"cond2", c.cond2},
          {"group_closed", c.group_closed},
          {"matches", c.matches()}};
}

Json presentation_json(const UqPresentation& p) {
  Json rv = Json::array();
  for (const auto& x : p.root_vectors) rv.push_back(free_json(x));
  Json beta = Json::array();
  for (const auto& b : p.word.beta) beta.push_back(b);
  return {{"word", p.word.letters},
          {"beta", beta},
          {"root_vectors", rv},
          {"presentation", cgl_json(p.cgl)},
          {"pbw_height", p.pbw_height}};
}

Json gp_json(const GpReport& g) {
  Json gens = Json::array(), q = Json::array();
  for (const auto& u : g.generators) gens.push_back(unit_json(u));
  for (const auto& u : g.qlk) q.push_back(unit_json(u));
  return {{"generators", gens}, {"qlk", q}, {"torsion_free", g.torsion_free}, {"equals_qlk", g.equals_qlk}};
}

}  // namespace qrigid
