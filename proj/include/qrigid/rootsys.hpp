#pragma once

#include <string>
#include <string_view>

#include "qrigid/qtorus.hpp"

namespace qrigid {

struct RootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coordinates in the basis of simple roots.
using Root = std::vector<int>;

class RootDatum {
 public:
  // "A2", "B3", "G2", ... with Bourbaki numbering; rank 1 is rejected.
  static RootDatum make(std::string_view name);

  const std::string& name() const { return name_; }
  int rank() const { return r_; }
  int num_positive() const { return static_cast<int>(pos_.size()); }
  const std::vector<Root>& positive_roots() const { return pos_; }  // by height, then lex

  int form(int i, int j) const { return form_[i * r_ + j]; }  // <a_i, a_j>, short roots 2
  int cartan(int i, int j) const { return 2 * form(i, j) / form(i, i); }
  int pairing(const Root& a, const Root& b) const;
  // Exponent of q_a = q^(<a, a>/2) for a simple root.
  int q_exp(int i) const { return form(i, i) / 2; }
  Root simple(int i) const;
  Root reflect(int i, const Root& b) const;
  bool is_positive_root(const Root& b) const;
  // Reduced word for w0 built greedily with the smallest available letter (1-based).
  std::vector<int> canonical_word() const;

 private:
  std::string name_;
  int r_ = 0;
  std::vector<int> form_;
  std::vector<Root> pos_;
};

int height(const Root& b);

// Skew bicharacter r on the root lattice, stored on simple roots.
class TwistData {
 public:
  static TwistData trivial(int rank);
  // Values r(a_i, a_j) for i < j, row by row.
  static TwistData from_upper(int rank, const std::vector<UnitMonomial>& upper);

  int rank() const { return r_; }
  bool is_trivial() const;
  const UnitMonomial& simple(int i, int j) const { return v_[i * r_ + j]; }
  UnitMonomial operator()(const Root& a, const Root& b) const;
  bool operator==(const TwistData& o) const { return r_ == o.r_ && v_ == o.v_; }

 private:
  int r_ = 0;
  std::vector<UnitMonomial> v_;
};

struct ReducedWord {
  std::vector<int> letters;  // 1-based simple-root indices
  std::vector<Root> beta;
  std::vector<int> succ;     // 0-based successor, -1 for none
  std::vector<int> orbit;    // O(l)

  int size() const { return static_cast<int>(letters.size()); }
  // l, s(l), s^2(l), ... (0-based).
  std::vector<int> orbit_of(int l) const;
};

ReducedWord validate_reduced(const RootDatum& d, const std::vector<int>& word);
// All reduced words of w0, connected by braid moves; sorted.
std::vector<std::vector<int>> all_reduced_words(const RootDatum& d);
// If b_k + b_l is a root for k < l, it occurs strictly between them.
bool convex_order(const RootDatum& d, const ReducedWord& w);

// q_lk = q^-<b_l, b_k> r(b_l, b_k) for k < l.
BicharPtr commutation_matrix(const RootDatum& d, const ReducedWord& w, const TwistData& t);

DegreeVector degree_vector(const RootDatum& d, const ReducedWord& w, const std::vector<int>& coweight);

enum class OrbitConvention { FromZero, FromOne };
std::string to_string(OrbitConvention c);
std::vector<std::vector<int>> nprime_matrix(const RootDatum& d, const ReducedWord& w,
                                            OrbitConvention c);

struct W0Data {
  std::vector<int> theta;  // a_i -> -w0(a_i), 0-based
  std::vector<int> fixed, plus, minus;
  std::vector<IntVec> kernel_basis;  // Ker(1 + w0) in fundamental-weight coordinates
};
W0Data w0_involution(const RootDatum& d);

// Diagram automorphisms as permutations (0-based), identity first.
std::vector<std::vector<int>> diagram_auts(const RootDatum& d, const TwistData& t);

struct GpReport {
  std::vector<UnitMonomial> generators;  // q^2 and q^-<a,a'> r(a,a') for a < a'
  std::vector<UnitMonomial> qlk;         // entries below the diagonal
  bool torsion_free = true;
  bool equals_qlk = false;
};
GpReport gp_group(const RootDatum& d, const TwistData& t, const ReducedWord& w);

// q_a r(a,a') != 1 and q_a^-1 r(a,a') != 1 whenever a_{aa'} = -1.
bool cond2_holds(const RootDatum& d, const TwistData& t);

}  // namespace qrigid
