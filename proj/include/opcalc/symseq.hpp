#pragma once

#include <map>
#include <string>
#include <vector>

#include "opcalc/complex.hpp"

namespace opcalc {

struct Overflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DivergenceGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class OverflowMode { Error, Truncate };

struct TruncationPolicy {
  int r_max = 4;
  int d_min = 0;
  int d_max = 0;
  OverflowMode on_overflow = OverflowMode::Error;
  void validate() const;
};

// Arity-indexed family of complexes; the component in arity r carries a Σ_r action.
// Missing arities are zero.
class SymSeq {
 public:
  SymSeq() = default;
  SymSeq(Ring ring, TruncationPolicy policy);

  const Ring& ring() const { return ring_; }
  const TruncationPolicy& policy() const { return policy_; }
  // Set when some part of a result fell outside the window and was dropped.
  bool truncated() const { return truncated_; }
  void mark_truncated() { truncated_ = true; }

  // Installs the arity-r component. Its group must be Σ_r and its ring ours; parts
  // outside the window overflow per policy.
  void set(int r, GComplex c);
  const GComplex* get(int r) const;
  std::vector<int> arities() const;
  std::size_t dim(int r, int d) const;
  void validate() const;

 private:
  Ring ring_;
  TruncationPolicy policy_;
  bool truncated_ = false;
  std::map<int, GComplex> comps_;
};

// Lexicographic rank of a permutation, which is its element index in Group::symmetric.
int perm_index(const Perm& p);

// 𝟙: R in arity 1, degree 0.
SymSeq unit_symseq(const Ring& ring, const TruncationPolicy& policy);
// R with trivial action in every arity in [r_min, policy.r_max], degree 0.
SymSeq constant_symseq(const Ring& ring, const TruncationPolicy& policy, int r_min = 1);
// Regular representation R[Σ_r] in one arity and degree.
SymSeq free_symseq(const Ring& ring, const TruncationPolicy& policy, int r, int degree, std::size_t copies = 1);
// Trivial representation R^copies in one arity and degree.
SymSeq trivial_symseq(const Ring& ring, const TruncationPolicy& policy, int r, int degree, std::size_t copies = 1);

// (x⊗y)(n) = ⊕_{p+q=n} Ind_{Σ_p×Σ_q}^{Σ_n} x(p)⊗y(q).
SymSeq day_tensor(const SymSeq& x, const SymSeq& y);
// (x⊗y)(r) = x(r)⊗y(r) with the diagonal action.
SymSeq lev_tensor(const SymSeq& x, const SymSeq& y);

enum class ComposeMode { Orbits, Invariants };
// ⊕_r X(r) ⊗ Y^{⊗r} with Σ_r orbits or invariants taken. The basis of the
// unquotiented sum in arity n is indexed by a component index of X, an ordered
// tuple of Y-labels and a leaf-to-slot assignment.
SymSeq compose(const SymSeq& x, const SymSeq& y, ComposeMode mode);

// Nm: compose(x, y, Orbits) → compose(x, y, Invariants) per arity, degree by degree.
struct SymSeqMap {
  std::map<int, std::vector<ZMatrix>> components;  // arity → matrices per source degree
};
struct NormData {
  SymSeq orbits, invariants;
  SymSeqMap map;
  bool is_iso(int r) const;
};
NormData norm_map(const SymSeq& x, const SymSeq& y);

}  // namespace opcalc
