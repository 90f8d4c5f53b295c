#pragma once

#include <json.hpp>

#include "qrigid/cauchon.hpp"
#include "qrigid/unipotent.hpp"
#include "qrigid/uqgraded.hpp"

namespace qrigid {

using Json = nlohmann::json;

// Malformed JSON input (wrong shape, bad scalar text, out-of-range indices).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json scalar_json(const Scalar& s);
Scalar scalar_from(const Json& j);
// "q^-1*r1"; torsion-free units only.
Json unit_json(const UnitMonomial& u);
UnitMonomial unit_from(const Json& j);

// {"n", "vars", "torsion_order", "pairs": [{"k", "l", "exp"}]} with 1-based k < l.
// exp lists the exponents of vars; with a torsion factor it ends with the Z/d residue.
Json lattice_json(const ExpLattice& l);
ExpLattice lattice_from(const Json& j);

// [{"exp": [...], "coef": "..."}]
Json element_json(const TorusElement& u);
TorusElement element_from(const BicharPtr& b, const Json& j);

// {"torus", "degree_vector", "cutoff", "tuple"}
Json auto_json(const UnipotentAuto& phi);
// Throws BraidingViolation through UnipotentAuto::build unless unchecked.
UnipotentAuto auto_from(const Json& j, std::optional<int> cutoff, bool checked = true);

Json support_json(const SupportReport& r);
Json rigidity_json(const RigidityReport& r);

// Values r(a_i, a_j) for i < j row by row, or null for the trivial twist.
Json twist_json(const TwistData& t);
TwistData twist_from(const Json& j, int rank);

// [{"word": [1, 2], "coef": "..."}] with 1-based letters.
Json free_json(const FreeElem& x);
FreeElem free_from(const Json& j, int rank);

Json cgl_json(const CGLPresentation& p);
CGLPresentation cgl_from(const Json& j);

Json poly_json(const PbwPoly& p);
Json bichar_json(const BicharPtr& b);  // strictly lower entries {"l", "k", "value"}
Json cauchon_json(const CauchonResult& r);
Json delta_check_json(const DeltaCheck& c);

Json serre_json(const SerreReport& r);
Json classification_json(const LinearClassification& c);
Json presentation_json(const UqPresentation& p);
Json gp_json(const GpReport& g);

Json int_rows(const std::vector<IntVec>& rows);

}  // namespace qrigid
