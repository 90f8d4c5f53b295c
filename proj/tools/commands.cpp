#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qrigid/suite.hpp"

namespace qrigid::cli {

namespace {

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::vector<int> int_flag(const std::string& text, const char* name) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::logic_error&) {
      throw InputError(std::string("--") + name + " expects comma-separated integers, got \"" + text + "\"");
    }
  }
  if (out.empty()) throw InputError(std::string("--") + name + " is required");
  return out;
}

RootDatum root_datum(const JobConfig& j) {
  if (j.type.empty()) throw InputError("--type is required");
  try {
    return RootDatum::make(j.type);
  } catch (const RootError& e) {
    throw InputError(e.what());
  }
}

ReducedWord reduced_word(const RootDatum& d, const JobConfig& j) {
  std::vector<int> w = j.word.empty() ? d.canonical_word() : int_flag(j.word, "word");
  try {
    return validate_reduced(d, w);
  } catch (const RootError& e) {
    throw InputError(e.what());
  }
}

// --twist "r1,q^-1*r2": r(a_i, a_j) for i < j, row by row.
TwistData twist(const RootDatum& d, const JobConfig& j) {
  if (j.twist.empty()) return TwistData::trivial(d.rank());
  Json list = Json::array();
  std::stringstream ss(j.twist);
  std::string part;
  while (std::getline(ss, part, ',')) list.push_back(part);
  return twist_from(list, d.rank());
}

int cutoff_or(const JobConfig& j, std::optional<int> fallback) {
  if (j.cutoff) return *j.cutoff;
  if (fallback) return *fallback;
  return default_cutoff();
}

UnipotentAuto load_auto(const JobConfig& j, std::size_t i) {
  Json doc = read_json(j.inputs.at(i));
  if (!j.cutoff && !doc.contains("cutoff")) doc["cutoff"] = default_cutoff();
  return auto_from(doc, j.cutoff, true);
}

Exps exps_flag(const std::string& text, const char* name, int rank) {
  auto v = int_flag(text, name);
  if (static_cast<int>(v.size()) != rank) throw InputError(std::string("--") + name + " has the wrong length");
  return Exps(v.begin(), v.end());
}

Scalar scalar_flag(const std::string& text) {
  if (text.empty()) throw InputError("--c is required");
  return scalar_from(Json(text));
}

CommandResult ok(Json j) { return {std::move(j), 0}; }

// ------------------------------------------------------------------ torus

CommandResult torus_kernel(const JobConfig& j) {
  auto l = lattice_from(read_json(j.inputs[0]));
  auto k = mult_kernel(l);
  return ok({{"kernel", int_rows(k.to_rows())}, {"rank", k.rows()}});
}

CommandResult torus_saturated(const JobConfig& j) {
  auto s = is_saturated(lattice_from(read_json(j.inputs[0])));
  Json out{{"saturated", s.saturated}};
  if (!s.saturated) out["witness"] = {{"f", s.witness}, {"n", s.multiple}};
  return ok(out);
}

CommandResult torus_center(const JobConfig& j) {
  auto l = lattice_from(read_json(j.inputs[0]));
  auto k = mult_kernel(l);
  Json out{{"generators", int_rows(k.to_rows())}};
  if (!j.exp.empty()) {
    auto f = int_flag(j.exp, "exp");
    if (static_cast<int>(f.size()) != l.n) throw InputError("--exp has the wrong length");
    out["central"] = in_row_lattice(k, IntVec(f.begin(), f.end()));
  }
  return ok(out);
}

// ------------------------------------------------------------------ auto

CommandResult auto_build(const JobConfig& j) {
  Json doc = read_json(j.inputs[0]);
  if (!j.cutoff && !doc.contains("cutoff")) doc["cutoff"] = default_cutoff();
  auto phi = auto_from(doc, j.cutoff, false);
  if (auto v = braiding_violation(phi.bichar(), phi.degrees(), phi.cutoff(), phi.tuple()))
    return {{{"braiding_ok", false}, {"violation", {{"k", v->k + 1}, {"l", v->l + 1}, {"degree", v->degree}}}}, 1};
  return ok({{"braiding_ok", true}, {"automorphism", auto_json(UnipotentAuto::build(
                                                         phi.bichar(), phi.degrees(), phi.cutoff(), phi.tuple()))}});
}

CommandResult auto_support(const JobConfig& j) { return ok(support_json(support_report(load_auto(j, 0)))); }

CommandResult auto_restrict(const JobConfig& j) {
  auto phi = load_auto(j, 0);
  return ok(auto_json(restrict_to_ray(phi, exps_flag(j.ray, "ray", phi.rank()))));
}

CommandResult auto_compose(const JobConfig& j) {
  auto phi = load_auto(j, 0), psi = load_auto(j, 1);
  return ok(auto_json(compose(phi, psi)));
}

CommandResult auto_invert(const JobConfig& j) {
  auto r = invert_auto(load_auto(j, 0));
  return ok({{"inverse", auto_json(r.inverse)}, {"finite", r.finite}, {"iterations", r.iterations}});
}

CommandResult auto_phi_fc(const JobConfig& j) {
  auto b = make_bichar(lattice_from(read_json(j.inputs[0])));
  DegreeVector d = j.degrees.empty() ? DegreeVector(b->rank(), 1) : exps_flag(j.degrees, "degrees", b->rank());
  if (j.exp.empty()) throw InputError("--exp is required");
  auto phi = phi_fc(b, d, cutoff_or(j, std::nullopt), exps_flag(j.exp, "exp", b->rank()), scalar_flag(j.c));
  return ok(auto_json(phi));
}

CommandResult auto_decompose(const JobConfig& j) {
  auto phi = load_auto(j, 0);
  auto dec = const_decompose(phi, exps_flag(j.ray, "ray", phi.rank()));
  Json c = Json::array();
  for (const auto& x : dec.c) c.push_back(scalar_json(x));
  return ok({{"f", dec.f}, {"c", c}});
}

CommandResult auto_rigidity(const JobConfig& j) {
  auto r = rigidity_verdict(load_auto(j, 0));
  return {rigidity_json(r), r.verdict == Verdict::Inconsistent ? 1 : 0};
}

// ------------------------------------------------------------------ rootsys

Json one_based_perms(const std::vector<std::vector<int>>& ps) {
  Json out = Json::array();
  for (auto p : ps) {
    for (auto& x : p) ++x;
    out.push_back(p);
  }
  return out;
}

CommandResult rootsys_data(const JobConfig& j) {
  auto d = root_datum(j);
  std::vector<std::vector<int>> cartan(d.rank(), std::vector<int>(d.rank()));
  for (int a = 0; a < d.rank(); ++a)
    for (int b = 0; b < d.rank(); ++b) cartan[a][b] = d.cartan(a, b);
  auto w0 = w0_involution(d);
  std::vector<int> qexp;
  for (int a = 0; a < d.rank(); ++a) qexp.push_back(d.q_exp(a));
  Json roots = Json::array();
  for (const auto& r : d.positive_roots()) roots.push_back(r);
  auto theta = w0.theta;
  for (auto& x : theta) ++x;
  return ok({{"type", d.name()},
             {"rank", d.rank()},
             {"cartan", cartan},
             {"q_exp", qexp},
             {"positive_roots", roots},
             {"canonical_word", d.canonical_word()},
             {"w0_theta", theta}});
}

OrbitConvention convention(const std::string& s) {
  if (s.empty() || s == "from-zero") return OrbitConvention::FromZero;
  if (s == "from-one") return OrbitConvention::FromOne;
  throw InputError("--convention must be from-zero or from-one");
}

CommandResult rootsys_nprime(const JobConfig& j) {
  auto d = root_datum(j);
  auto w = reduced_word(d, j);
  auto c = convention(j.convention);
  return ok({{"convention", to_string(c)}, {"nprime", nprime_matrix(d, w, c)}});
}

CommandResult rootsys_degvec(const JobConfig& j) {
  auto d = root_datum(j);
  auto w = reduced_word(d, j);
  auto cw = int_flag(j.coweight, "coweight");
  if (static_cast<int>(cw.size()) != d.rank()) throw InputError("--coweight has the wrong length");
  return ok({{"d", degree_vector(d, w, cw)}});
}

CommandResult rootsys_auts(const JobConfig& j) {
  auto d = root_datum(j);
  return ok({{"auts", one_based_perms(diagram_auts(d, twist(d, j)))}});
}

CommandResult rootsys_gp(const JobConfig& j) {
  auto d = root_datum(j);
  auto g = gp_group(d, twist(d, j), reduced_word(d, j));
  return {gp_json(g), g.equals_qlk ? 0 : 1};
}

// ------------------------------------------------------------------ uq

CommandResult uq_dims(const JobConfig& j) {
  auto d = root_datum(j);
  UqMinus u(d, twist(d, j));
  int h = j.height > 0 ? j.height : 4;
  Json rows = Json::array();
  bool all = true;
  for (const auto& g : weights_up_to(d.rank(), h)) {
    auto r = serre_component(u, g);
    all = all && r.quotient_dim == r.kostant;
    rows.push_back(serre_json(r));
  }
  return {{{"height", h}, {"components", rows}, {"matches_kostant", all}}, all ? 0 : 1};
}

CommandResult uq_classify(const JobConfig& j) {
  auto d = root_datum(j);
  auto c = classify_linear_autos(UqMinus(d, twist(d, j)));
  return {classification_json(c), c.matches() ? 0 : 1};
}

CommandResult uq_check_unipotent(const JobConfig& j) {
  auto d = root_datum(j);
  UqMinus u(d, twist(d, j));
  Json doc = read_json(j.inputs[0]);
  if (!doc.is_array() || static_cast<int>(doc.size()) != d.rank())
    throw InputError("expected one image per generator");
  std::vector<FreeElem> images;
  for (const auto& x : doc) images.push_back(free_from(x, d.rank()));
  auto cw = int_flag(j.coweight, "coweight");
  if (static_cast<int>(cw.size()) != d.rank()) throw InputError("--coweight has the wrong length");
  if (j.bound < 1) throw InputError("--bound must be at least 1");
  auto r = lambda_unipotent_check(u, cw, images, j.bound);
  return ok({{"verdict", to_string(r.verdict)}, {"reason", r.reason}, {"checked_degree", r.checked_degree}});
}

CommandResult uq_synthesize(const JobConfig& j) {
  auto d = root_datum(j);
  UqMinus u(d, twist(d, j));
  int h = j.height > 0 ? j.height : 4;
  return ok(presentation_json(synthesize_root_vectors(u, reduced_word(d, j), h)));
}

// ------------------------------------------------------------------ cauchon

CommandResult cauchon_run(const JobConfig& j) {
  CGLPresentation p;
  try {
    p = cgl_from(read_json(j.inputs[0]));
  } catch (const CauchonError& e) {
    throw InputError(e.what());
  }
  auto r = run_cauchon(p);
  return {cauchon_json(r), r.ok ? 0 : 1};
}

CommandResult cauchon_delta_check(const JobConfig& j) {
  auto d = root_datum(j);
  auto w = reduced_word(d, j);
  auto t = twist(d, j);
  auto c = delta_check(d, w, commutation_matrix(d, w, t), &t);
  bool good = c.pure_q && c.matching.size() == 1;
  return {delta_check_json(c), good ? 0 : 1};
}

// ------------------------------------------------------------------ suite

CommandResult suite_run(const JobConfig& j) {
  const std::string& profile = j.profile;
  if (!known_profile(profile)) throw InputError("unknown profile \"" + profile + "\" (expected smoke or full)");
  bool all = true;
  auto results = run_suite(profile, [&](const CriterionResult& r) {
    std::cerr << result_line(r) << std::endl;
    all = all && r.pass();
  });
  return {suite_report(profile, results), all ? 0 : 1};
}

}  // namespace

int default_cutoff() {
  const char* v = std::getenv("QRIGID_CUTOFF");
  if (!v || !*v) return 12;
  try {
    std::size_t used = 0;
    int c = std::stoi(v, &used);
    if (used == std::string(v).size() && c >= 1) return c;
  } catch (const std::logic_error&) {
  }
  throw InputError(std::string("QRIGID_CUTOFF must be a positive integer, got \"") + v + "\"");
}

const std::vector<CommandInfo>& commands() {
  static const std::vector<CommandInfo> table = {
      {"torus", "kernel", "multiplicative kernel of a torus", {}, 1, 1, torus_kernel},
      {"torus", "saturated", "saturation test with a witness", {}, 1, 1, torus_saturated},
      {"torus", "center", "center generators; --exp tests one monomial", {"exp"}, 1, 1, torus_center},
      {"auto", "build", "braiding check of a generator tuple", {}, 1, 1, auto_build},
      {"auto", "support", "support points and cone", {}, 1, 1, auto_support},
      {"auto", "restrict", "restriction to an extremal ray", {"ray"}, 1, 1, auto_restrict},
      {"auto", "compose", "composition phi o psi", {}, 2, 2, auto_compose},
      {"auto", "invert", "inverse up to the cutoff", {}, 1, 1, auto_invert},
      {"auto", "phi-fc", "phi_{f,c} on a torus", {"exp", "c", "degrees"}, 1, 1, auto_phi_fc},
      {"auto", "decompose", "constants c_m along a ray", {"ray"}, 1, 1, auto_decompose},
      {"auto", "rigidity", "rigidity verdict", {}, 1, 1, auto_rigidity},
      {"rootsys", "data", "Cartan data and positive roots", {"type"}, 0, 0, rootsys_data},
      {"rootsys", "nprime", "n' matrix of a reduced word", {"type", "word", "convention"}, 0, 0, rootsys_nprime},
      {"rootsys", "degvec", "degree vector of a coweight", {"type", "word", "coweight"}, 0, 0, rootsys_degvec},
      {"rootsys", "auts", "diagram automorphisms compatible with a twist", {"type", "twist"}, 0, 0, rootsys_auts},
      {"rootsys", "gp", "the group G_p against the q_lk", {"type", "word", "twist"}, 0, 0, rootsys_gp},
      {"uq", "dims", "Serre quotient dimensions", {"type", "twist", "height"}, 0, 0, uq_dims},
      {"uq", "classify-linear", "linear automorphisms", {"type", "twist"}, 0, 0, uq_classify},
      {"uq", "check-unipotent", "lambda-unipotent test of generator images",
       {"type", "twist", "coweight", "bound"}, 1, 1, uq_check_unipotent},
      {"uq", "synthesize", "root vectors and CGL data", {"type", "word", "twist", "height"}, 0, 0, uq_synthesize},
      {"cauchon", "run", "deleting derivations", {}, 1, 1, cauchon_run},
      {"cauchon", "delta-check", "Delta commutation exponents", {"type", "word", "twist"}, 0, 0,
       cauchon_delta_check},
      {"suite", "run", "acceptance suite", {"profile"}, 0, 0, suite_run},
  };
  return table;
}

}  // namespace qrigid::cli
