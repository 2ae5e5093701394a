#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "opcalc/complex.hpp"
#include "opcalc/perm.hpp"

namespace opcalc {

struct NotReduced : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotCoreduced : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfiniteRankInWindow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sparse vector over basis indices with integer coefficients, sorted by index.
using Vec = std::vector<std::pair<std::uint32_t, std::int64_t>>;

Vec canonical(Vec v);
Vec scaled(const Vec& v, std::int64_t c);
void axpy(Vec& acc, std::int64_t c, const Vec& v);  // acc += c·v, result canonical
bool equal_in(const Vec& a, const Vec& b, const Ring& ring);

// Relabel a 1-based input p through a 0-based permutation.
inline int relabel(const Perm& s, int p) { return s[p - 1] + 1; }

// Lazily enumerated basis of one (arity, degree) cell, with lookup by key.
template <class Key, class Hash = std::hash<Key>>
struct BasisCell {
  std::vector<Key> keys;
  std::unordered_map<Key, std::uint32_t, Hash> index;
  void add(Key k) {
    index.emplace(k, std::uint32_t(keys.size()));
    keys.push_back(std::move(k));
  }
  std::optional<std::uint32_t> find(const Key& k) const {
    auto it = index.find(k);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
  std::size_t size() const { return keys.size(); }
};

template <class Key, class Hash = std::hash<Key>>
class BasisCache {
 public:
  using Cell = BasisCell<Key, Hash>;
  template <class Gen>
  const Cell& get(int r, int d, Gen&& generate) const {
    {
      std::shared_lock<std::shared_mutex> lock(mu_);
      auto it = cells_.find({r, d});
      if (it != cells_.end()) return *it->second;
    }
    std::unique_lock<std::shared_mutex> lock(mu_);
    auto& slot = cells_[{r, d}];
    if (!slot) {
      auto cell = std::make_unique<Cell>();
      generate(r, d, *cell);
      slot = std::move(cell);
    }
    return *slot;
  }

 private:
  mutable std::shared_mutex mu_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<Cell>> cells_;
};

// A dg-operad given by structure constants on finite bases of each (arity, degree).
// Inputs are 1-based; act(σ) sends input p to σ(p). In a ∘_k b the inputs of b
// occupy positions k..k+s-1.
class DgOperad {
 public:
  virtual ~DgOperad() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dim(int r, int d) const = 0;
  virtual std::string label(int r, int d, std::uint32_t i) const = 0;
  virtual Vec diff(int r, int d, std::uint32_t i) const = 0;
  virtual Vec act(int r, int d, std::uint32_t i, const Perm& s) const = 0;
  virtual Vec compose(int r, int d1, std::uint32_t a, int k, int s, int d2, std::uint32_t b) const = 0;
  // Index of the unit in arity 1, degree 0.
  virtual std::optional<std::uint32_t> unit() const { return 0; }
  // p(0) = 0 and p(1) spanned by the unit, so that bar/cobar make sense.
  virtual bool reduced() const { return true; }
};

struct DTerm {
  std::int64_t coeff;
  int d1;
  std::uint32_t a;  // in arity n - |S| + 1
  int d2;
  std::uint32_t b;  // in arity |S|
};

// Numbering of n/S: the collapsed block sits where min(S) sat.
int quotient_position(int n, const std::vector<int>& S, int p);
// Position of p ∈ S inside S.
int block_position(const std::vector<int>& S, int p);

// A dg-cooperad with partial cocompositions Δ_S: C(n) → C(n/S) ⊗ C(S) for every
// nonempty S ⊆ {1..n} (S sorted).
class DgCooperad {
 public:
  virtual ~DgCooperad() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dim(int n, int d) const = 0;
  virtual std::string label(int n, int d, std::uint32_t i) const = 0;
  virtual Vec diff(int n, int d, std::uint32_t i) const = 0;
  virtual Vec act(int n, int d, std::uint32_t i, const Perm& s) const = 0;
  virtual std::vector<DTerm> decompose(int n, int d, std::uint32_t u, const std::vector<int>& S) const = 0;
  virtual std::optional<std::uint32_t> counit() const { return 0; }
  virtual bool coreduced() const { return true; }
};

struct Window {
  int r_max = 3;
  int d_min = 0;
  int d_max = 0;
  bool contains(int d) const { return d >= d_min && d <= d_max; }
};

struct CheckReport {
  std::string object;
  std::map<std::string, std::size_t> instances;
  std::vector<std::string> failures;
  std::size_t max_failures = 20;
  std::size_t failure_count = 0;

  bool ok() const { return failure_count == 0; }
  void count(const std::string& axiom, std::size_t n = 1) { instances[axiom] += n; }
  void fail(const std::string& axiom, const std::string& witness);
  void merge(const CheckReport& o);
  std::string summary() const;
};

CheckReport check_operad(const DgOperad& p, const Window& w, const Ring& ring);
CheckReport check_cooperad(const DgCooperad& c, const Window& w, const Ring& ring);

// Arity-r component over [lo, hi] with its Σ_r action.
GComplex component(const DgOperad& p, int r, int lo, int hi, const Ring& ring);
GComplex component(const DgCooperad& c, int r, int lo, int hi, const Ring& ring);

// Homology of the arity-r component in degrees lo..hi, exact at both ends: the
// complex is built one degree wider on each side.
std::vector<HomologyGroup> component_homology(const DgOperad& p, int r, int lo, int hi, const Ring& ring);
std::vector<HomologyGroup> component_homology(const DgCooperad& c, int r, int lo, int hi, const Ring& ring);

// Differential of one cell as a matrix (rows index degree d-1).
ZMatrix diff_matrix(const DgOperad& p, int r, int d);
ZMatrix diff_matrix(const DgCooperad& c, int r, int d);

// Structure-constant matrix of ∘_k from P(r,d1) ⊗ P(s,d2) (columns a·dim2 + b).
ZMatrix composition_matrix(const DgOperad& p, int r, int d1, int k, int s, int d2);
// Matrix of Δ_S onto C(n/S,d1) ⊗ C(S,d2) (rows a·dim2 + b); columns index C(n, d1+d2).
ZMatrix decomposition_matrix(const DgCooperad& c, int n, const std::vector<int>& S, int d1, int d2);

// Bilinear extension of compose.
Vec compose_vec(const DgOperad& p, int r, int d1, const Vec& a, int k, int s, int d2, const Vec& b);
Vec act_vec(const DgOperad& p, int r, int d, const Vec& a, const Perm& s);
Vec diff_vec(const DgOperad& p, int r, int d, const Vec& a);

// The block permutation σ ∘_k τ on r+s-1 inputs.
Perm block_perm(const Perm& sigma, int k, const Perm& tau);

// Com^nu: one operation in each arity ≥ 1, degree 0, trivial action.
class ComNu : public DgOperad {
 public:
  std::string name() const override { return "Com^nu"; }
  std::size_t dim(int r, int d) const override { return (r >= 1 && d == 0) ? 1 : 0; }
  std::string label(int r, int, std::uint32_t) const override { return "mu" + std::to_string(r); }
  Vec diff(int, int, std::uint32_t) const override { return {}; }
  Vec act(int, int, std::uint32_t i, const Perm&) const override { return {{i, 1}}; }
  Vec compose(int, int, std::uint32_t, int, int, int, std::uint32_t) const override { return {{0, 1}}; }
};

// Ass: arity r spanned by the words in 1..r (index = lexicographic rank), degree 0.
// σ relabels letters; a ∘_k b substitutes the shifted word b for the letter k.
class AssOperad : public DgOperad {
 public:
  std::string name() const override { return "Ass"; }
  std::size_t dim(int r, int d) const override { return (r >= 1 && d == 0) ? factorial(r) : 0; }
  std::string label(int r, int d, std::uint32_t i) const override;
  Vec diff(int, int, std::uint32_t) const override { return {}; }
  Vec act(int r, int d, std::uint32_t i, const Perm& s) const override;
  Vec compose(int r, int d1, std::uint32_t a, int k, int s, int d2, std::uint32_t b) const override;
  std::optional<std::uint32_t> unit() const override { return 0; }
};

// Linear dual of an operad: the cooperad with transposed structure constants and
// negated degrees. [lo, hi] bounds the degrees of P that occur.
class TransposeCooperad : public DgCooperad {
 public:
  TransposeCooperad(const DgOperad& p, int lo, int hi) : p_(p), lo_(lo), hi_(hi) {}
  std::string name() const override { return p_.name() + "^dual"; }
  std::size_t dim(int n, int d) const override { return p_.dim(n, -d); }
  std::string label(int n, int d, std::uint32_t i) const override { return p_.label(n, -d, i); }
  Vec diff(int n, int d, std::uint32_t i) const override;
  Vec act(int n, int d, std::uint32_t i, const Perm& s) const override;
  std::vector<DTerm> decompose(int n, int d, std::uint32_t u, const std::vector<int>& S) const override;
  std::optional<std::uint32_t> counit() const override { return p_.unit(); }

 private:
  const DgOperad& p_;
  int lo_, hi_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, ZMatrix> diff_t_;
  // (n, k, s, d) → per basis element of C(n, d), the terms of Δ on the block at k
  mutable std::map<std::tuple<int, int, int, int>, std::shared_ptr<std::vector<std::vector<DTerm>>>> comp_t_;
};

// Linear dual of a cooperad: the operad with transposed structure constants.
class TransposeOperad : public DgOperad {
 public:
  explicit TransposeOperad(const DgCooperad& c, std::string name = "") : c_(c), name_(std::move(name)) {}
  std::string name() const override { return name_.empty() ? c_.name() + "^dual" : name_; }
  std::size_t dim(int r, int d) const override { return c_.dim(r, -d); }
  std::string label(int r, int d, std::uint32_t i) const override { return c_.label(r, -d, i); }
  Vec diff(int r, int d, std::uint32_t i) const override;
  Vec act(int r, int d, std::uint32_t i, const Perm& s) const override;
  Vec compose(int r, int d1, std::uint32_t a, int k, int s, int d2, std::uint32_t b) const override;
  std::optional<std::uint32_t> unit() const override { return c_.counit(); }

 private:
  const DgCooperad& c_;
  std::string name_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, ZMatrix> diff_t_;
  // (n, k, s, D) → (d1, a, d2, b) → element of C(n, D)
  using Table = std::map<std::tuple<int, std::uint32_t, int, std::uint32_t>, Vec>;
  mutable std::map<std::tuple<int, int, int, int>, std::shared_ptr<Table>> comp_t_;
};

// Levelwise tensor product P ⊗ Q with the diagonal action and Koszul signs:
// (x⊗y)∘_k(x'⊗y') = (-1)^{|y||x'|} (x∘_k x')⊗(y∘_k y').
// Basis of (r, d) is ordered by (d_P, i, j).
class LevTensorOperad : public DgOperad {
 public:
  LevTensorOperad(const DgOperad& p, const DgOperad& q, int p_lo, int p_hi, std::string name = "")
      : p_(p), q_(q), p_lo_(p_lo), p_hi_(p_hi), name_(std::move(name)) {}
  std::string name() const override { return name_.empty() ? p_.name() + "(x)" + q_.name() : name_; }
  std::size_t dim(int r, int d) const override;
  std::string label(int r, int d, std::uint32_t i) const override;
  Vec diff(int r, int d, std::uint32_t i) const override;
  Vec act(int r, int d, std::uint32_t i, const Perm& s) const override;
  Vec compose(int r, int d1, std::uint32_t a, int k, int s, int d2, std::uint32_t b) const override;
  std::optional<std::uint32_t> unit() const override;

  struct Pair {
    int dp;
    std::uint32_t i, j;
  };
  Pair split(int r, int d, std::uint32_t idx) const;
  std::uint32_t join(int r, int d, const Pair& pr) const;

  const DgOperad& left() const { return p_; }
  const DgOperad& right() const { return q_; }

 private:
  const DgOperad& p_;
  const DgOperad& q_;
  int p_lo_, p_hi_;  // degree range of P that can occur
  std::string name_;
};

}  // namespace opcalc
