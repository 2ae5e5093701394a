#pragma once

#include <map>
#include <string>
#include <vector>

#include "opcalc/surjections.hpp"
#include "opcalc/trees.hpp"

namespace opcalc {

// Full binary bracketing of distinct letters; a leaf has no children.
struct LieWord {
  int letter = 0;
  std::vector<LieWord> kids;  // empty or exactly two
  bool is_leaf() const { return kids.empty(); }
  friend bool operator==(const LieWord&, const LieWord&) = default;
};

LieWord lie_letter(int x);
LieWord lie_bracket(LieWord a, LieWord b);
// "[1,[2,3]]" and friends; letters are positive integers.
LieWord parse_lie_word(const std::string& s);
std::string lie_str(const LieWord& w);
std::vector<int> lie_letters(const LieWord& w);  // in reading order
bool well_formed(const LieWord& w);

// A basis element [x_{σ1},[x_{σ2},[…,[x_{σ(r-1)}, x_m]…]]] where m is the largest
// letter, stored as the list σ1…σ(r-1).
using LieBasisElt = std::vector<int>;
using LieComb = std::map<LieBasisElt, std::int64_t>;

LieWord right_comb(const LieBasisElt& head, int last);
// Rewrites w in the right-combed basis by antisymmetry and Jacobi (ungraded). The
// signed variant is LieSOperad::evaluate.
LieComb lie_normalize(const LieWord& w);
// Image in the free associative algebra under [a,b] ↦ ab − ba (an injective map
// on multilinear Lie elements): word of letters → coefficient.
std::map<std::vector<int>, std::int64_t> assoc_expand(const LieWord& w);
std::map<std::vector<int>, std::int64_t> assoc_expand(const LieComb& c, int last);

// Lie(r) in degree 0, basis the right-combed words on 1..r with last letter r,
// indexed by the lexicographic rank of σ1…σ(r-1).
class LieOperad : public DgOperad {
 public:
  std::string name() const override { return "Lie"; }
  std::size_t dim(int r, int d) const override { return (r >= 1 && d == 0) ? factorial(r - 1) : 0; }
  std::string label(int r, int d, std::uint32_t i) const override;
  Vec diff(int, int, std::uint32_t) const override { return {}; }
  Vec act(int r, int d, std::uint32_t i, const Perm& s) const override;
  Vec compose(int r, int d1, std::uint32_t a, int k, int s, int d2, std::uint32_t b) const override;

  LieWord word(int r, std::uint32_t i) const;
  Vec from_comb(int r, const LieComb& c) const;
};

// Λ = End of a line in degree 1: one operation f_r in arity r and degree 1 - r,
// σ·f_r = sgn(σ) f_r and f_r ∘_k f_s = (-1)^{(s-1)(k-1)} f_{r+s-1}.
class LambdaOperad : public DgOperad {
 public:
  std::string name() const override { return "Lambda"; }
  std::size_t dim(int r, int d) const override { return (r >= 1 && d == 1 - r) ? 1 : 0; }
  std::string label(int r, int, std::uint32_t) const override { return "f" + std::to_string(r); }
  Vec diff(int, int, std::uint32_t) const override { return {}; }
  Vec act(int, int, std::uint32_t i, const Perm& s) const override { return {{i, perm_sign(s)}}; }
  Vec compose(int r, int d1, std::uint32_t a, int k, int s, int d2, std::uint32_t b) const override;
};

// Arity bound for the finite degree ranges used when Lie^s is a tensor factor.
constexpr int kMaxLieArity = 16;

namespace detail {
struct LieParts {
  LieOperad lie;
  LambdaOperad lambda;
};
}  // namespace detail

// Lie^s = Lie ⊗_lev Λ: rank (r-1)! in degree 1 - r, zero differential.
class LieSOperad : private detail::LieParts, public LevTensorOperad {
 public:
  LieSOperad() : LevTensorOperad(LieParts::lie, LieParts::lambda, 0, 0, "Lie^s") {}
  const LieOperad& lie() const { return LieParts::lie; }
  // Index of the basis element λ ⊗ f_r for a Lie basis index.
  std::uint32_t index(int r, std::uint32_t lie_index) const { return join(r, 1 - r, {0, lie_index, 0}); }
  // Element of Lie^s(#letters) given by the bracketing w, letters standardised.
  Vec evaluate(const LieWord& w) const;
};

// Lie^π = Lie^s ⊗_lev Surj^∨. Basis of (r, d): pairs (λ, u) with u of Surj-degree
// (1 - r) - d.
namespace detail {
struct PlieParts {
  LieSOperad lies;
  PdSurjOperad pd;
};
}  // namespace detail

class SpectralPartitionLie : private detail::PlieParts, public LevTensorOperad {
 public:
  SpectralPartitionLie() : LevTensorOperad(PlieParts::lies, PlieParts::pd, 1 - kMaxLieArity, 0, "Lie^pi") {}
  const LieSOperad& lie_s() const { return PlieParts::lies; }
  const PdSurjOperad& pd_surj() const { return PlieParts::pd; }
};

// (λ, u) ∘_k (μ, v) by the mixed composition rule: (λ ∘_k μ) paired with every
// nondegenerate w whose block subsequence ends in a copy of v and which collapses
// to u, signed by the caesura bijection Caes(w) ≅ Caes(u) ⋆ Caes(v) and the Koszul
// sign of passing u over μ. Candidates w are enumerated exhaustively.
Vec rule_c_compose(const SpectralPartitionLie& p, int r, int d1, std::uint32_t a, int k, int s, int d2, std::uint32_t b);

// Pieces of the third row of the partition L∞ differential, exposed for tests.
struct UnshuffleTerm {
  std::vector<int> block;  // σ(1) < … < σ(k)
  Sequence v, w;
  int sign;  // ±_||
};
std::vector<UnshuffleTerm> compatible_unshuffles(const Sequence& u, int r, int k);

// The free operad on nondegenerate sequences u (arity r ≥ 2, degree -1-d) with the
// three-part differential of spectral partition L∞-algebras: insertion with the
// caesura sign, plus one term per compatible unshuffle, k = 1 … r-1.
namespace detail {
struct PdHolder {
  PdSurjOperad pd;
};
}  // namespace detail

class PartitionLInfty : private detail::PdHolder, public FreeOperad {
 public:
  PartitionLInfty();
  Vec generator_diff(int r, int w, std::uint32_t label) const override;
  const PdSurjOperad& pd_surj() const { return PdHolder::pd; }
};

// Change of basis in arity 3 from {[1,[2,3]], [3,[1,2]]} to the right-combed basis
// (columns are the two words).
ZMatrix lie3_basis_change();

}  // namespace opcalc
