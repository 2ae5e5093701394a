#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opcalc/coeff.hpp"
#include "opcalc/perm.hpp"

namespace opcalc {

struct DegreeOutOfWindow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GroupMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TestNotQuasiprojective : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeUnsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidComplex : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite group given by its multiplication table; element 0 is the identity.
class Group {
 public:
  static Group trivial();
  static Group cyclic(int n);
  static Group symmetric(int n);
  static Group product(const Group& a, const Group& b);
  static Group from_table(std::string name, std::vector<std::string> labels, std::vector<std::vector<int>> table,
                          std::vector<int> generators);

  const std::string& name() const { return name_; }
  std::size_t order() const { return labels_.size(); }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inv_[a]; }
  const std::vector<int>& generators() const { return gens_; }
  const std::string& label(int e) const { return labels_[e]; }
  int find(const std::string& label) const;
  // For symmetric groups: the permutation of {0..n-1} represented by element e.
  const Perm& perm(int e) const;
  bool is_symmetric() const { return !perms_.empty(); }
  // Shortest word in the generators for every element (indices into generators()).
  const std::vector<std::vector<int>>& words() const { return words_; }

  friend bool operator==(const Group& a, const Group& b) { return a.name_ == b.name_ && a.table_ == b.table_; }

 private:
  void finish();
  std::string name_;
  std::vector<std::string> labels_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inv_;
  std::vector<int> gens_;
  std::vector<Perm> perms_;
  std::vector<std::vector<int>> words_;
};

// One signed basis image: g·e_i = sign · e_index.
struct SignedImage {
  std::int32_t index;
  std::int32_t sign;
};

struct HomologyGroup {
  Ring ring;
  std::size_t rank = 0;          // dimension over a field, free rank over Z
  std::vector<BigInt> torsion;  // only over Z
  bool is_zero() const { return rank == 0 && torsion.empty(); }
  std::string str() const;
  friend bool operator==(const HomologyGroup& a, const HomologyGroup& b) {
    return a.ring == b.ring && a.rank == b.rank && a.torsion == b.torsion;
  }
};

// Bounded complex of finitely generated free modules with a group action by
// degree-preserving chain maps. Degrees are homological.
class GComplex {
 public:
  GComplex() = default;
  GComplex(Ring ring, Group group, int d_min, int d_max);

  const Ring& ring() const { return ring_; }
  const Group& group() const { return group_; }
  int d_min() const { return d_min_; }
  int d_max() const { return d_max_; }
  // Degrees in which homology is exact (narrower than the stored range after truncation).
  int valid_min() const { return valid_min_; }
  int valid_max() const { return valid_max_; }
  void set_valid_window(int lo, int hi);
  bool truncated_below() const { return valid_min_ > d_min_; }
  bool truncated_above() const { return valid_max_ < d_max_; }

  bool in_range(int d) const { return d >= d_min_ && d <= d_max_; }
  std::size_t dim(int d) const { return in_range(d) ? basis_[d - d_min_].size() : 0; }
  const std::vector<std::string>& basis(int d) const;
  void set_basis(int d, std::vector<std::string> labels);
  // ∂: C_d → C_{d-1}; rows index C_{d-1}.
  const ZMatrix& diff(int d) const;
  void set_diff(int d, ZMatrix m);
  // Action of generator number `gen` (index into group().generators()).
  const ZMatrix& action(std::size_t gen, int d) const;
  void set_action(std::size_t gen, int d, ZMatrix m);
  bool has_action() const { return !action_.empty(); }
  // Matrix of an arbitrary group element.
  ZMatrix element_action(int e, int d) const;
  // Signed permutation of an element; throws if the action is not by signed permutations.
  std::vector<SignedImage> signed_perm(int e, int d) const;
  bool is_signed_permutation() const;

  // Checks shapes, ∂∘∂ = 0 and g∂ = ∂g over the ring; throws InvalidComplex.
  void validate() const;

 private:
  Ring ring_;
  Group group_;
  int d_min_ = 0, d_max_ = -1;
  int valid_min_ = 0, valid_max_ = -1;
  std::vector<std::vector<std::string>> basis_;
  std::vector<ZMatrix> diff_;
  std::vector<std::vector<ZMatrix>> action_;  // [generator][degree]
};

HomologyGroup homology(const GComplex& x, int degree);
std::vector<HomologyGroup> homology_range(const GComplex& x, int lo, int hi);
HomologyGroup homology_of(const Ring& ring, std::size_t dim, const ZMatrix* out_diff, const ZMatrix* in_diff);

// Degree-0 chain map between complexes; matrices per source degree.
struct ChainMap {
  const GComplex* source = nullptr;
  const GComplex* target = nullptr;
  std::vector<ZMatrix> components;  // index d - source.d_min()
  const ZMatrix& at(int d) const { return components.at(d - source->d_min()); }
  bool is_chain_map() const;
};

ChainMap identity_map(const GComplex& x);
GComplex mapping_cone(const ChainMap& f);
GComplex shift(const GComplex& x, int k);
GComplex direct_sum(const GComplex& a, const GComplex& b);
// Tensor product over the ring with the diagonal action and Koszul-signed differential.
GComplex tensor(const GComplex& a, const GComplex& b);
GComplex free_module_complex(const Ring& ring, const Group& group, int degree, std::size_t copies);
GComplex trivial_module_complex(const Ring& ring, const Group& group, int degree);

GComplex hom_complex(const GComplex& p, const GComplex& x);

struct TameVerdict {
  bool equivalence = true;
  std::optional<int> witness_degree;  // first degree with nonzero cone homology
};
std::vector<TameVerdict> tame_equivalence_test(const ChainMap& f, const std::vector<GComplex>& tests);

// Orbit and fixed-point complexes of a signed permutation action.
GComplex orbits(const GComplex& x);
GComplex fixed_points(const GComplex& x);
struct NormMap {
  GComplex source, target;
  std::vector<ZMatrix> components;
};
NormMap norm(const GComplex& x);
bool is_free_action(const GComplex& x);

// Free resolution of the trivial module by the bar resolution, degrees 0..length.
GComplex bar_resolution(const Ring& ring, const Group& group, int length);
// Minimal periodic resolution for cyclic groups, degrees 0..length.
GComplex periodic_resolution(const Ring& ring, int n, int length);
// Linear dual with the contragredient action, degrees negated.
GComplex dual(const GComplex& x);

enum class OrbitDirection { BoundedBelowProjective, BoundedAboveFree };
struct DividedOrbits {
  GComplex complex;
  int valid_min = 0, valid_max = -1;
};
DividedOrbits divided_orbits(const GComplex& x, OrbitDirection dir, int resolution_length);

// Modules over k[ε]/ε²: a complex of free k-modules with an ε-action, where each
// degree has free generators g_i and ε·g_i as its k-basis.
struct EpsComplex {
  GComplex underlying;                        // over the field k
  std::vector<ZMatrix> eps;                   // per degree, commutes with ∂
  std::vector<std::vector<int>> generators;  // per degree, indices of free generators
};
struct EpsMap {
  const EpsComplex* source = nullptr;
  const EpsComplex* target = nullptr;
  std::vector<ZMatrix> components;
};
// A → A → … by ε in degrees [lo, hi]; a truncated end narrows the valid window.
EpsComplex eps_periodic(const Ring& k, int lo, int hi, bool truncated_below, bool truncated_above);
GComplex base_change_eps(const EpsComplex& x);
ChainMap underlying_map(const EpsMap& f);
ChainMap base_change_eps(const EpsMap& f, const GComplex& src, const GComplex& tgt);
// Quasi-isomorphism of underlying complexes, then base change to k as the test.
struct EpsVerdict {
  bool quasi_isomorphic = false;
  TameVerdict base_change;
};
EpsVerdict tame_equivalence_test_eps(const EpsMap& f);

// Dold–Kan data. Levels are indexed 0..top.
struct CosimplicialModule {
  Ring ring;
  std::vector<std::size_t> rank;                      // rank[n]
  std::vector<std::vector<ZMatrix>> coface;           // coface[n][i]: X^{n-1} → X^n, n ≥ 1, i = 0..n
  std::vector<std::vector<ZMatrix>> codegeneracy;     // codegeneracy[n][j]: X^{n+1} → X^n, j = 0..n
  void validate() const;
};
struct SimplicialModule {
  Ring ring;
  std::vector<std::size_t> rank;
  std::vector<std::vector<ZMatrix>> face;        // face[n][i]: X_n → X_{n-1}
  std::vector<std::vector<ZMatrix>> degeneracy;  // degeneracy[n][j]: X_n → X_{n+1}
  void validate() const;
};
// Normalised complex in degrees [-top+1 .. 0] (the top level lacks its coface data).
GComplex normalize(const CosimplicialModule& c);
GComplex normalize(const SimplicialModule& s);

// Double complex with horizontal degree p ≥ 0 and vertical cochain degree q ≥ 0;
// total degree p - q, total differential dh + (-1)^p dv.
struct Bicomplex {
  Ring ring;
  std::vector<std::vector<std::size_t>> rank;  // rank[p][q]
  std::vector<std::vector<ZMatrix>> dh;        // dh[p][q]: (p,q) → (p-1,q)
  std::vector<std::vector<ZMatrix>> dv;        // dv[p][q]: (p,q) → (p,q+1)
};
GComplex tot_sum(const Bicomplex& b);

}  // namespace opcalc
