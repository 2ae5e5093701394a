#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "opcalc/complex.hpp"
#include "opcalc/operad.hpp"

namespace opcalc {

// Partition of {1..r} as block ids per element (0-based), with ids assigned in order
// of first appearance, so blocks are ordered by least element.
using Partition = std::vector<int>;

Partition canonical_partition(const std::vector<int>& labels);
Partition bottom_partition(int r);  // 0̂
Partition top_partition(int r);     // 1̂
int num_blocks(const Partition& x);
std::vector<std::vector<int>> blocks(const Partition& x);  // 1-based, sorted
// x ≤ y: every block of x lies in a block of y.
bool finer_or_equal(const Partition& x, const Partition& y);
Partition join(const Partition& x, const Partition& y);
Partition meet(const Partition& x, const Partition& y);
// Partition of the sorted subset B induced by x, standardised to {1..|B|}.
Partition restrict_to(const Partition& x, const std::vector<int>& B);
// For x ≥ y, the partition of the blocks of y induced by x.
Partition quotient_partition(const Partition& x, const Partition& y);
// B is a union of blocks of x / B is a block of x.
bool is_union_of_blocks(const Partition& x, const std::vector<int>& B);
bool has_block(const Partition& x, const std::vector<int>& B);
Partition relabel_partition(const Partition& x, const Perm& s);
std::string partition_str(const Partition& x);  // "12|3"
Partition parse_partition(const std::string& s, int r);
std::vector<Partition> all_partitions(int r);  // Bell(r) of them

struct PartitionPoset {
  int r = 1;
  std::vector<Partition> elements;
  std::vector<std::pair<int, int>> covers;  // (i, j): elements[i] ⋖ elements[j]
  int bottom = 0, top = 0;
};
PartitionPoset partition_poset(int r);

// Strictly increasing list of partitions (a nondegenerate chain).
using PartitionChain = std::vector<Partition>;
std::string chain_str(const PartitionChain& c);
// Chains 0̂ = x_0 < … < x_t = 1̂ in P_r.
std::vector<PartitionChain> full_chains(int r);

// Normalised chains of N(P_r) / N(P_r)^{-[0̂<1̂]} in degrees 0..r-1: chains from 0̂ to 1̂ in degree t,
// ∂ = Σ_{0<i<t} (-1)^i d_i, Σ_r relabelling.
GComplex bar_com_complex(int r, const Ring& ring);

// Simplex (σ, S) of sdBar(Com^nu)(r): σ = [x_0 < … < x_t] is the top chain and
// S_0 ⊆ … ⊆ S_d = {0..t} are nonempty bitmasks of levels.
struct NestedChain {
  PartitionChain sigma;
  std::vector<std::uint32_t> S;
  int dim() const { return int(S.size()) - 1; }
  friend bool operator==(const NestedChain&, const NestedChain&) = default;
  friend auto operator<=>(const NestedChain&, const NestedChain&) = default;
};
std::string nested_str(const NestedChain& s);
bool is_degenerate(const NestedChain& s);
NestedChain degeneracy(const NestedChain& s, int j);
// d_i; nullopt is the basepoint (the new top chain misses 0̂ or 1̂).
std::optional<NestedChain> face(const NestedChain& s, int i);
NestedChain act(const NestedChain& s, const Perm& p);

// Every chain of x_α ∨ y and of x_α ∧ y restricted to each block of y, with
// repetitions removed, together with the level maps.
struct Ungrafting {
  PartitionChain trunk;
  std::vector<PartitionChain> branches;    // one per block of y, standardised
  std::vector<int> to_trunk;               // level α ↦ trunk level
  std::vector<std::vector<int>> to_branch; // block i, level α ↦ branch level
  std::vector<std::vector<bool>> inside;   // block i, level α: block i is a union of blocks of x_α
};
bool is_branched(const PartitionChain& sigma, const Partition& y);
// nullopt when σ is not y-branched.
std::optional<Ungrafting> ungraft(const PartitionChain& sigma, const Partition& y);

struct Cocomposition {
  NestedChain trunk;
  std::vector<NestedChain> branches;
  friend bool operator==(const Cocomposition&, const Cocomposition&) = default;
  friend auto operator<=>(const Cocomposition&, const Cocomposition&) = default;
};
// Δ_y on a simplex; nullopt is the basepoint. Blocks of size one always receive
// the unique simplex of sdBar(1).
std::optional<Cocomposition> cocompose(const NestedChain& s, const Partition& y);

// One arity of sdBar(Com^nu): all non-basepoint simplices of dimension ≤ d_max.
class SdBarCom {
 public:
  SdBarCom(int r, int d_max);
  int arity() const { return r_; }
  int d_max() const { return d_max_; }
  const std::vector<NestedChain>& simplices(int d) const { return simp_.at(d); }
  std::optional<std::uint32_t> index(const NestedChain& s) const;
  // Normalised chains (nondegenerate simplices) in degrees 0..d_max.
  GComplex normalized(const Ring& ring) const;
  SimplicialModule simplicial_module(const Ring& ring) const;

 private:
  int r_, d_max_;
  std::vector<std::vector<NestedChain>> simp_;
  std::map<NestedChain, std::uint32_t> index_;
};

// Lie^π_Δ(r) = R-linear dual of sdBar(Com^nu)(r), levels 0..top, as a cosimplicial
// module, and its normalisation (degrees -top+1..0).
CosimplicialModule partition_lie_dual(const SdBarCom& x, const Ring& ring);
GComplex partition_lie_dual_normalized(int r, int top, const Ring& ring);

// Restricted-operad composition dual to Δ_y: all simplices s of arity r, dimension d,
// with Δ_y(s) = c.
std::vector<NestedChain> restricted_compose(const Partition& y, const Cocomposition& c);

// Counitality of Δ_0̂ and Δ_1̂, coassociativity (Δ_z then Δ_{y/z} on the trunk against
// Δ_y then Δ_{z|B} on the branches, for all z ≤ y) and Σ_r-equivariance on every
// simplex of x.
CheckReport check_cocomposition(const SdBarCom& x);

// ---- labelled trees: sdBar(P) and sdK(P) for reduced operads concentrated in degree 0

// Vertex of the levelled tree of a chain: level α ≥ 1, output block of x_α and its
// input blocks in x_{α-1}, ordered by least element.
struct TreeVertexInfo {
  int level;
  std::vector<int> out;
  std::vector<std::vector<int>> in;
};
// Vertices with at least two inputs, level by level, blocks ordered by least element.
std::vector<TreeVertexInfo> chain_vertices(const PartitionChain& c);

// A basis element of sdBar(P)(r)_d or sdK(P)(r)_d: a simplex and one P-label per
// vertex of chain_vertices(top chain).
struct LabelledSimplex {
  NestedChain simplex;
  std::vector<std::uint32_t> labels;
  friend bool operator==(const LabelledSimplex&, const LabelledSimplex&) = default;
  friend auto operator<=>(const LabelledSimplex&, const LabelledSimplex&) = default;
};
using LabelledVec = std::map<LabelledSimplex, std::int64_t>;

// sdBar(P) (koszul = false) or sdK(P) (koszul = true). For sdK the chain carries
// x_{-1} = 0̂ as level 0, level 1 may equal it, and every S_α contains level 0.
class SdTreeComplex {
 public:
  SdTreeComplex(const DgOperad& p, int r, int d_max, bool koszul);
  int arity() const { return r_; }
  bool koszul() const { return koszul_; }
  const std::vector<LabelledSimplex>& basis(int d) const { return basis_.at(d); }
  std::optional<std::uint32_t> index(const LabelledSimplex& x) const;
  LabelledVec face(const LabelledSimplex& x, int i) const;
  LabelledVec act(const LabelledSimplex& x, const Perm& s) const;
  // Normalised chains in degrees 0..d_max (nondegenerate simplices).
  GComplex normalized(const Ring& ring) const;
  // Δ_y on sdBar(P): the ungrafted trunk and branches keep their vertex labels.
  struct LabelledCocomposition {
    LabelledSimplex trunk;
    std::vector<LabelledSimplex> branches;
    friend auto operator<=>(const LabelledCocomposition&, const LabelledCocomposition&) = default;
  };
  std::optional<LabelledCocomposition> cocompose(const LabelledSimplex& x, const Partition& y) const;
  // Right P-action on sdK(P): precompose the leaf vertex containing input k.
  LabelledVec act_right(const LabelledSimplex& x, int k, int s, std::uint32_t mu) const;
  // Augmentation sdK(P) → 𝟙 on degree d: 1 on every simplex in arity 1.
  std::int64_t augmentation(const LabelledSimplex& x) const;

 private:
  // Label of the vertex over `out` between levels lo < hi of the top chain.
  Vec composite(const PartitionChain& c, const std::vector<std::uint32_t>& labels, int hi, const std::vector<int>& out, int lo) const;
  const DgOperad& p_;
  int r_, d_max_;
  bool koszul_;
  std::vector<std::vector<LabelledSimplex>> basis_;
  std::map<LabelledSimplex, std::uint32_t> index_;
};

// ---- restricted algebras ----------------------------------------------------------

// Free restricted Lie^π_Δ-algebra at cosimplicial level d on V = R^n, through arity
// r_max: ⊕_r (Lie^π_Δ(r)^d ⊗ V^{⊗r})^{Σ_r}. A basis key is an arity, a d-simplex of
// sdBar(Com^nu)(r) and a word of basis indices of V.
class RestrictedFreeAlgebra {
 public:
  struct Key {
    int arity;
    std::uint32_t simplex;
    std::vector<int> word;
    friend bool operator==(const Key&, const Key&) = default;
    friend auto operator<=>(const Key&, const Key&) = default;
  };
  using Elem = std::map<Key, std::int64_t>;
  // One summand τ ⊗ x_1 ⊗ … ⊗ x_b of Lie^π_Δ(b) ⊗ A^{⊗b}.
  struct Term {
    std::uint32_t tau;
    std::vector<Key> x;
    friend auto operator<=>(const Term&, const Term&) = default;
  };
  using Outer = std::map<Term, std::int64_t>;

  RestrictedFreeAlgebra(const Ring& ring, int n, int level, int r_max);
  const Ring& ring() const { return ring_; }
  int rank_v() const { return n_; }
  int level() const { return level_; }
  int r_max() const { return r_max_; }
  const SdBarCom& simplices(int r) const { return *sd_.at(r); }
  std::size_t operations(int r) const { return sd_.at(r)->simplices(level_).size(); }
  std::uint32_t act_simplex(int r, std::uint32_t s, const Perm& p) const;

  Elem generator(int i) const;
  Elem vector(const std::vector<std::int64_t>& c) const;
  Elem reduce(Elem x) const;
  // ρ·(s ⊗ v_1 … v_r) = ρs ⊗ w with w_{ρ(i)} = v_i.
  Elem act(const Elem& x, const Perm& p) const;
  bool is_invariant(const Elem& x) const;

  // Σ_{ρ ∈ Σ_b/H} ρ·(τ ⊗ x_1 ⊗ … ⊗ x_b) with H the stabiliser of (τ, x), or the sum
  // over all of Σ_b when `full`, expanded multilinearly.
  Outer orbit_sum(std::uint32_t tau, const std::vector<Elem>& x, bool full) const;
  // Structure map (Lie^π_Δ ∘̄ A) → A on a Σ_b-invariant element.
  Elem structure_map(int b, const Outer& w) const;
  Elem bracket(std::uint32_t sigma, const std::vector<Elem>& a) const;  // {a_1..a_r}_σ
  Elem gamma(std::uint32_t sigma, const std::vector<Elem>& a) const;    // γ_σ(a_1..a_r)
  // |{ρ ∈ Σ_r : ρσ = σ and each tuple t satisfies t_{ρ(i)} = t_i}|.
  std::size_t stabilizer_order(int r, std::uint32_t sigma, const std::vector<std::vector<Elem>>& tuples) const;
  // Simplices s of arity |y| with Δ_y(s) = c (cached).
  const std::vector<std::uint32_t>& composites(const Partition& y, const Cocomposition& c) const;

 private:
  Ring ring_;
  int n_, level_, r_max_;
  std::map<int, std::unique_ptr<SdBarCom>> sd_;
  mutable std::map<Partition, std::map<Cocomposition, std::vector<std::uint32_t>>> comp_cache_;
};

// Rank of (V^{⊗2})^{Σ_2} for V = R^n with the swap action.
std::size_t gamma2_rank(int n, const Ring& ring);

struct RelationReport {
  std::map<std::string, std::size_t> checked, failed;
  std::vector<std::string> witnesses;
  bool ok() const;
  std::string summary() const;
};
// Relations (4)–(8) of restricted Lie^π_Δ-algebras on seeded random tuples from V.
RelationReport check_restricted_relations(const RestrictedFreeAlgebra& alg, int samples, std::uint64_t seed);

}  // namespace opcalc
