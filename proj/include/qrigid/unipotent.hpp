#pragma once

#include <mutex>

#include "qrigid/completion.hpp"

namespace qrigid {

struct UnipotentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Braiding condition failed for (k, l) at the given absolute degree (1-based k, l).
struct BraidingViolation : UnipotentError {
  BraidingViolation(int k_, int l_, int degree_);
  int k, l, degree;
};

// phi(X_k) = (1 + u_k) X_k with every u_k known in degrees <= cutoff.
class UnipotentAuto {
 public:
  // Checks nu(u_k) >= 1 and the braiding condition up to the cutoff.
  static UnipotentAuto build(BicharPtr b, DegreeVector d, int cutoff,
                             std::vector<TorusElement> tuple);
  static UnipotentAuto identity(BicharPtr b, DegreeVector d, int cutoff);
  // No braiding check; used for partial data such as the inverse recursion.
  static UnipotentAuto unchecked(BicharPtr b, DegreeVector d, int cutoff,
                                 std::vector<TorusElement> tuple);

  const BicharPtr& bichar() const { return b_; }
  const DegreeVector& degrees() const { return d_; }
  int cutoff() const { return m_; }
  int rank() const { return b_->rank(); }
  const std::vector<TorusElement>& tuple() const { return u_; }
  const TorusElement& u(int k) const { return u_[k]; }
  bool is_identity() const;

  // phi(X^g), exact in degrees <= D(g) + cutoff (or <= upto when smaller).
  TruncatedSeries image(const Exps& g, int upto = kExact) const;
  TruncatedSeries apply(const TruncatedSeries& v) const;

  // Exps of all terms of the u_k.
  std::vector<Exps> support() const;

 private:
  UnipotentAuto(BicharPtr b, DegreeVector d, int cutoff, std::vector<TorusElement> tuple);
  TruncatedSeries one_plus(int k) const;
  TruncatedSeries generator_image(int k, int sign) const;

  BicharPtr b_;
  DegreeVector d_;
  int m_ = 0;
  std::vector<TorusElement> u_;
  struct Cache {
    std::mutex mu;
    std::map<Exps, TruncatedSeries> images;
    std::map<std::pair<int, int>, TruncatedSeries> generators;
  };
  std::shared_ptr<Cache> cache_;
};

// First failure of (1+u_k)X_k(1+u_l)X_l = q_kl (1+u_l)X_l(1+u_k)X_k, if any.
std::optional<BraidingViolation> braiding_violation(const BicharPtr& b, const DegreeVector& d,
                                                    int cutoff,
                                                    const std::vector<TorusElement>& tuple);

struct SupportReport {
  std::vector<Exps> points;  // sorted
  ConeRays cone;
  bool in_kernel = true;
  int cutoff = 0;
};
SupportReport support_report(const UnipotentAuto& phi);

// Common support set of several automorphisms, as a cone.
RationalCone joint_cone(const std::vector<const UnipotentAuto*>& phis);

UnipotentAuto compose(const UnipotentAuto& phi, const UnipotentAuto& psi);  // phi o psi

struct InverseResult {
  UnipotentAuto inverse;
  std::vector<bool> finite;  // per generator: no terms in the top half of the window
  int iterations = 0;
};
InverseResult invert_auto(const UnipotentAuto& phi);

// Per generator: u_k has no terms of degree > cutoff / 2.
std::vector<bool> finite_flags(const UnipotentAuto& phi);

// Terms of u on the closed ray R>=0 f (the origin included).
TorusElement restrict_element(const TorusElement& u, const Exps& f);
bool on_ray(const Exps& g, const Exps& f);
UnipotentAuto restrict_to_ray(const UnipotentAuto& phi, const Exps& f);
// Restriction to a ray of a joint cone (no cone check on phi alone).
UnipotentAuto restrict_unchecked(const UnipotentAuto& phi, const Exps& f);

UnipotentAuto phi_fc(BicharPtr b, DegreeVector d, int cutoff, const Exps& f, const Scalar& c);

struct Decomposition {
  Exps f;                  // primitive generator of the ray
  std::vector<Scalar> c;   // c_1, c_2, ... for every m with m D(f) <= cutoff
};
Decomposition const_decompose(const UnipotentAuto& phi, const Exps& f);
// phi_{mf,c_m} o ... o phi_{f,c_1}
UnipotentAuto recompose(const BicharPtr& b, const DegreeVector& d, int cutoff,
                        const Decomposition& dec);

enum class Verdict { Central, NotBifiniteAtCutoff, Inconsistent };
std::string to_string(Verdict v);

struct RigidityReport {
  Verdict verdict = Verdict::Central;
  SupportReport support;
  std::vector<Exps> noncentral_points;
  std::vector<bool> forward_finite;
  std::vector<bool> inverse_finite;
  int cutoff = 0;
};
RigidityReport rigidity_verdict(const UnipotentAuto& phi);

}  // namespace qrigid
