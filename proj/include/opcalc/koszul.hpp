#pragma once

#include <functional>
#include <string>
#include <vector>

#include "opcalc/trees.hpp"

namespace opcalc {

struct StructureMapsNotAssociative : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntVecHash {
  std::size_t operator()(const std::vector<int>& v) const;
};

// K(P) = Bar(P) ∘ P. A basis element is a set partition of {1..n} into blocks
// ordered by minimum, a bar tree whose leaf i stands for block i, and one
// P-decoration per block (standardised to the block). Elements are written
// T ⊗ p_1 ⊗ … ⊗ p_m for signs. ∂ = ∂_Bar + ∂_P + ∂_τ, where ∂_τ removes a top
// vertex x and replaces the decorations above it by γ(x; p_ℓ…).
class KoszulComplex {
 public:
  // [p_lo, p_hi] must bound the degrees of P̄.
  KoszulComplex(const DgOperad& p, int p_lo, int p_hi);

  struct Elem {
    std::vector<int> block_of;  // leaf → block index (0-based)
    int dt = 0;
    std::uint32_t t = 0;  // tree in Bar(P)(m, dt)
    std::vector<std::pair<int, std::uint32_t>> dec;  // per block: (degree, index)
  };

  std::size_t dim(int n, int d) const { return cell(n, d).size(); }
  Elem elem(int n, int d, std::uint32_t i) const { return decode(cell(n, d).keys.at(i)); }
  std::string label(int n, int d, std::uint32_t i) const;
  Vec diff(int n, int d, std::uint32_t i) const;
  // ∂ without the twisting terms at top vertices fed by the block containing `leaf`.
  // This is the differential of the first factor of coact().
  Vec diff_avoiding(int n, int d, std::uint32_t i, int leaf) const;
  Vec act(int n, int d, std::uint32_t i, const Perm& s) const;
  // Right P-module structure k ∘_j q.
  Vec compose_right(int n, int d1, std::uint32_t k, int j, int s, int d2, std::uint32_t q) const;
  // Left Bar(P)-coaction on a union S of blocks lying over a vertex (or a single
  // block, or everything): terms x ⊗ y with x ∈ K(n/S) decorated by the unit on the
  // collapsed block and y ∈ K(S).
  std::vector<DTerm> coact(int n, int d, std::uint32_t i, const std::vector<int>& S) const;
  // The augmentation is the identification of K(1)_0 with R.
  std::size_t augmentation_rank() const { return dim(1, 0); }

  GComplex component(int n, int lo, int hi, const Ring& ring) const;
  const BarCooperad& bar() const { return bar_; }
  const DgOperad& operad() const { return p_; }
  std::pair<int, int> degree_bounds(int n) const;
  // Index of a (possibly unsorted) element after sorting its blocks by minimum.
  Vec canon(int n, const Elem& e) const;

 private:
  const BasisCell<std::vector<int>, IntVecHash>& cell(int n, int d) const;
  static std::vector<int> encode(const Elem& e);
  static Elem decode(const std::vector<int>& key);
  Vec diff_impl(int n, int d, std::uint32_t i, int avoid) const;

  const DgOperad& p_;
  int lo_, hi_;
  BarCooperad bar_;
  BasisCache<std::vector<int>, IntVecHash> cache_;
};

// A P-algebra on a finite complex A (trivial group): γ(x; a_1, …, a_r) for x in
// P(r) with r ≥ 2. The unit acts as the identity.
struct PAlgebra {
  GComplex a;
  std::function<Vec(int r, int d, std::uint32_t x, const std::vector<std::pair<int, std::uint32_t>>& args)> act;
};

// Checks equivariance, associativity against ∘_k and compatibility with ∂ for
// operations of arity ≤ r_max and degrees in [lo, hi]; throws
// StructureMapsNotAssociative with a witness.
void verify_algebra(const DgOperad& p, const PAlgebra& a, int r_max, int lo, int hi);

// Bar_P(A) = ⊕_{r ≤ r_max} Bar(P)(r) ⊗_{Σ_r} A^{⊗r} over a field, with ∂ = ∂_A +
// ∂_Bar, where ∂_Bar contracts edges and removes top vertices by applying them to
// the leaf labels. Weight r_max is a subcomplex truncation.
GComplex bar_algebra(const BarCooperad& bar, const PAlgebra& a, int r_max, int lo, int hi);

}  // namespace opcalc
