#pragma once

#include <mutex>

#include "qrigid/cauchon.hpp"

namespace qrigid {

struct UqError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Words in the generators F_1..F_r; letter i is the char i (0-based).
using Word = std::string;
using FreeElem = std::map<Word, Scalar>;

void free_add(FreeElem& a, const FreeElem& b, const Scalar& c = Scalar(1));
FreeElem free_mul(const FreeElem& a, const FreeElem& b);
FreeElem free_scaled(const FreeElem& a, const Scalar& c);
Root word_weight(const Word& w, int rank);
std::string word_to_string(const Word& w);  // "F1F2F1"
std::string free_to_string(const FreeElem& x);

// Number of ways to write gamma as a sum of positive roots.
long long kostant_count(const RootDatum& d, const Root& gamma);

// U_q^-(g), or its twist, as the free algebra modulo the (twisted) Serre ideal.
class UqMinus {
 public:
  UqMinus(RootDatum d, TwistData t);

  const RootDatum& datum() const { return d_; }
  const TwistData& twist() const { return t_; }
  int rank() const { return d_.rank(); }

  FreeElem generator(int a) const;
  // Left-hand side of the Serre relation for the ordered pair (a, b), a != b.
  FreeElem serre(int a, int b) const;

  struct Component {
    Root gamma;
    std::vector<Word> words;                    // sorted
    std::map<Word, int> index;
    std::vector<std::vector<Scalar>> rows;      // reduced row echelon basis of the ideal part
    std::vector<int> pivots;
    std::vector<int> complement;                // non-pivot columns: basis of the quotient
    int free_dim() const { return static_cast<int>(words.size()); }
    int ideal_dim() const { return static_cast<int>(rows.size()); }
    int quotient_dim() const { return static_cast<int>(complement.size()); }
  };
  std::shared_ptr<const Component> component(const Root& gamma) const;

  // Coordinates of a homogeneous element in the quotient basis of its component.
  std::vector<Scalar> residue(const FreeElem& x, const Root& gamma) const;
  // Residue of every weight component, as an element supported on complement words.
  FreeElem normal_form(const FreeElem& x) const;
  bool is_zero(const FreeElem& x) const { return normal_form(x).empty(); }
  FreeElem mul(const FreeElem& a, const FreeElem& b) const { return normal_form(free_mul(a, b)); }
  // c with x y = c y x in the quotient, when it exists and y x != 0.
  std::optional<Scalar> commutation_factor(const FreeElem& x, const FreeElem& y) const;

 private:
  RootDatum d_;
  TwistData t_;
  mutable std::recursive_mutex mu_;
  mutable std::map<Root, std::shared_ptr<const Component>> memo_;
};

struct SerreReport {
  Root gamma;
  int free_dim = 0, ideal_dim = 0, quotient_dim = 0;
  long long kostant = 0;
};
SerreReport serre_component(const UqMinus& u, const Root& gamma, int max_height = 8);
// All gamma in Q_+ with 1 <= height <= h.
std::vector<Root> weights_up_to(int rank, int h);

// sum_j (-q_a)^j [-a_{ab}, j]_{q_a} F_a^j F_b F_a^(-a_{ab}-j).
FreeElem term0_element(const UqMinus& u, int a, int b);
// sum_j (-r(b,a) q_a^(+-1))^j [-a_{ab}, j]_{q_a^(+-1)} F_a^j F_b F_a^(-a_{ab}-j).
FreeElem term1_element(const UqMinus& u, int a, int b, int sign);

// Phi(F_a) = sum_b c[a][b] F_b preserves the ideal and c is invertible.
bool is_linear_automorphism(const UqMinus& u, const std::vector<std::vector<Scalar>>& c);

struct LinearClassification {
  std::vector<std::vector<int>> thetas;     // Phi(F_a) = t_a F_theta(a), sorted
  std::vector<std::vector<int>> expected;   // diagram automorphisms compatible with the twist
  std::vector<std::vector<int>> unresolved; // surviving non-monomial supports (row-major 0/1)
  int patterns = 0, refuted = 0;
  bool cond2 = true;
  bool group_closed = true;
  bool matches() const { return unresolved.empty() && thetas == expected; }
};
LinearClassification classify_linear_autos(const UqMinus& u);

enum class UnipotentCheck { Unipotent, NotUnipotent, Indeterminate };
std::string to_string(UnipotentCheck v);
struct UnipotentCheckResult {
  UnipotentCheck verdict = UnipotentCheck::Indeterminate;
  std::string reason;
  int checked_degree = 0;  // Serre images verified in lambda-degrees <= this
};
// images[a] is Phi(F_a) known in lambda-degrees <= bound.
UnipotentCheckResult lambda_unipotent_check(const UqMinus& u, const std::vector<int>& coweight,
                                            const std::vector<FreeElem>& images, int bound);

struct UqPresentation {
  ReducedWord word;
  std::vector<FreeElem> root_vectors;  // normal forms of F_{beta_l}
  CGLPresentation cgl;
  int pbw_height = 0;                  // PBW monomials checked up to this height
};
UqPresentation synthesize_root_vectors(const UqMinus& u, const ReducedWord& w, int pbw_height);

}  // namespace qrigid
