#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "opcalc/operad.hpp"
#include "opcalc/symseq.hpp"

namespace opcalc {

// Sentinel for an open end of a degree range.
constexpr int kUnbounded = 1 << 20;

// Vertex decorations for trees: a graded Σ-module in arities ≥ 2. The grading w is
// the degree the vertex contributes to its tree (after any shift).
class LabelSet {
 public:
  virtual ~LabelSet() = default;
  virtual std::size_t dim(int r, int w) const = 0;
  virtual std::string label(int r, int w, std::uint32_t i) const = 0;
  virtual Vec act(int r, int w, std::uint32_t i, const Perm& s) const = 0;
  // Weights that may occur in arity r, ±kUnbounded for an open end; lo > hi if none.
  virtual std::pair<int, int> weights(int r) const = 0;
};

// P̄ in arities ≥ 2 with w = degree + shift; [lo, hi] bounds the degrees of P.
class OperadLabels : public LabelSet {
 public:
  OperadLabels(const DgOperad& p, int shift, int lo, int hi) : p_(p), shift_(shift), lo_(lo), hi_(hi) {}
  std::size_t dim(int r, int w) const override;
  std::string label(int r, int w, std::uint32_t i) const override { return p_.label(r, w - shift_, i); }
  Vec act(int r, int w, std::uint32_t i, const Perm& s) const override { return p_.act(r, w - shift_, i, s); }
  std::pair<int, int> weights(int r) const override;
  const DgOperad& operad() const { return p_; }
  int shift() const { return shift_; }

 private:
  const DgOperad& p_;
  int shift_, lo_, hi_;
};

class CooperadLabels : public LabelSet {
 public:
  CooperadLabels(const DgCooperad& c, int shift, int lo, int hi) : c_(c), shift_(shift), lo_(lo), hi_(hi) {}
  std::size_t dim(int r, int w) const override;
  std::string label(int r, int w, std::uint32_t i) const override { return c_.label(r, w - shift_, i); }
  Vec act(int r, int w, std::uint32_t i, const Perm& s) const override { return c_.act(r, w - shift_, i, s); }
  std::pair<int, int> weights(int r) const override;

 private:
  const DgCooperad& c_;
  int shift_, lo_, hi_;
};

// Components of a symmetric sequence in arities ≥ 2.
class SymSeqLabels : public LabelSet {
 public:
  explicit SymSeqLabels(SymSeq x) : x_(std::move(x)) {}
  std::size_t dim(int r, int w) const override { return r >= 2 ? x_.dim(r, w) : 0; }
  std::string label(int r, int w, std::uint32_t i) const override;
  Vec act(int r, int w, std::uint32_t i, const Perm& s) const override;
  std::pair<int, int> weights(int r) const override;
  const SymSeq& symseq() const { return x_; }

 private:
  SymSeq x_;
};

struct TreeVertex {
  int arity = 0;
  int weight = 0;
  std::uint32_t label = 0;
  std::vector<int> in;  // per slot: a vertex index, or -p for leaf p
  friend bool operator==(const TreeVertex&, const TreeVertex&) = default;
};

// Rooted tree with leaves 1..n. The vertex list is the tensor order of the
// decorations. Canonical trees have every vertex's slots sorted by minimal leaf and
// the vertices in preorder, root first. The trivial tree has n = 1 and no vertices.
struct Tree {
  int n = 1;
  int root = 0;
  std::vector<TreeVertex> v;
  int weight() const;
  friend bool operator==(const Tree&, const Tree&) = default;
};

struct TreeHash {
  std::size_t operator()(const Tree& t) const;
};

class TreeBasis {
 public:
  explicit TreeBasis(std::shared_ptr<const LabelSet> labels) : labels_(std::move(labels)) {}
  const LabelSet& labels() const { return *labels_; }

  std::size_t dim(int n, int w) const { return cell(n, w).size(); }
  const Tree& tree(int n, int w, std::uint32_t i) const { return cell(n, w).keys.at(i); }
  std::optional<std::uint32_t> find(const Tree& t) const { return cell(t.n, t.weight()).find(t); }
  // Rewrites any tree as a combination of canonical ones in its cell, acting on the
  // labels to sort slots and applying the Koszul sign of the vertex reordering.
  Vec canonicalize(const Tree& t) const;
  std::string str(const Tree& t) const;
  // Number of levels: 0 for the trivial tree, 1 for a corolla.
  static int height(const Tree& t);
  // Bounds on the total weight of a tree with n leaves.
  std::pair<long, long> weight_bounds(int n) const;

 private:
  const BasisCell<Tree, TreeHash>& cell(int n, int w) const;
  std::shared_ptr<const LabelSet> labels_;
  BasisCache<Tree, TreeHash> cache_;
};

// Set partitions of {1..k} into m blocks, blocks ordered by minimum.
void for_each_set_partition(int k, int m, const std::function<void(const std::vector<std::vector<int>>&)>& f);

// Leaf sets of all vertices of a tree (sorted), indexed like t.v.
std::vector<std::vector<int>> vertex_leaves(const Tree& t);
// Relabels leaf p to s(p) (s 0-based).
Tree relabel_leaves(const Tree& t, const Perm& s);

// Free operad on a label set: canonical trees, grafting, and the derivation
// extending generator_diff. Degree = total weight.
class FreeOperad : public DgOperad {
 public:
  FreeOperad(std::shared_ptr<const LabelSet> gens, std::string name = "Free");
  std::string name() const override { return name_; }
  std::size_t dim(int r, int d) const override { return basis_.dim(r, d); }
  std::string label(int r, int d, std::uint32_t i) const override { return basis_.str(basis_.tree(r, d, i)); }
  Vec diff(int r, int d, std::uint32_t i) const override;
  Vec act(int r, int d, std::uint32_t i, const Perm& s) const override;
  Vec compose(int r, int d1, std::uint32_t a, int k, int s, int d2, std::uint32_t b) const override;

  // ∂ of the corolla on one generator, as a combination of trees of weight w - 1.
  virtual Vec generator_diff(int r, int w, std::uint32_t label) const;
  const TreeBasis& basis() const { return basis_; }
  Vec from_tree(const Tree& t) const { return basis_.canonicalize(t); }
  static Tree corolla(int r, int w, std::uint32_t label);
  // Dimension of the filtration stage T^(n): trees with at most n levels.
  std::size_t filtration_dim(int r, int d, int n) const;

 protected:
  TreeBasis basis_;
  std::string name_;
};

// Free operad on a symmetric sequence concentrated in arities ≥ 2, with the
// differential induced by the internal one.
class FreeSymSeqOperad : public FreeOperad {
 public:
  explicit FreeSymSeqOperad(SymSeq x, std::string name = "Free");
  Vec generator_diff(int r, int w, std::uint32_t label) const override;

 private:
  const SymSeqLabels* x_;
};

// Bar construction of a reduced operad: trees decorated by P̄[1], with the internal
// differential, edge contraction, and degrafting of full subtrees. [p_lo, p_hi]
// bounds the degrees of P̄ (±kUnbounded allowed on one side).
class BarCooperad : public DgCooperad {
 public:
  BarCooperad(const DgOperad& p, int p_lo, int p_hi);
  std::string name() const override { return "Bar(" + p_.name() + ")"; }
  std::size_t dim(int n, int d) const override { return basis_.dim(n, d); }
  std::string label(int n, int d, std::uint32_t i) const override { return basis_.str(basis_.tree(n, d, i)); }
  Vec diff(int n, int d, std::uint32_t i) const override;
  Vec act(int n, int d, std::uint32_t i, const Perm& s) const override;
  std::vector<DTerm> decompose(int n, int d, std::uint32_t u, const std::vector<int>& S) const override;

  const TreeBasis& basis() const { return basis_; }
  const DgOperad& operad() const { return p_; }
  // Edge contraction part of the differential alone.
  Vec contraction(int n, int d, std::uint32_t i) const;

 private:
  const DgOperad& p_;
  TreeBasis basis_;
};

// Cobar construction of a coreduced cooperad: the free operad on the desuspension
// of C̄ with ∂ = ∂_C + ∂_cobar.
class CobarOperad : public FreeOperad {
 public:
  CobarOperad(const DgCooperad& c, int c_lo, int c_hi);
  Vec generator_diff(int r, int w, std::uint32_t label) const override;

 private:
  const DgCooperad& c_;
};

namespace detail {
struct BarHolder {
  BarCooperad bar;
};
}  // namespace detail

// KD(P) = Bar(P)^∨.
class KoszulDualOperad : private detail::BarHolder, public TransposeOperad {
 public:
  KoszulDualOperad(const DgOperad& p, int p_lo, int p_hi);
  const BarCooperad& bar() const { return BarHolder::bar; }
};

// Throws NotReduced unless p(1) is spanned by the unit and p(0) vanishes on [lo, hi]
// (clipped to a finite range).
void require_reduced(const DgOperad& p, int lo, int hi);
void require_coreduced(const DgCooperad& c, int lo, int hi);

}  // namespace opcalc
