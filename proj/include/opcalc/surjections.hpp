#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opcalc/operad.hpp"

namespace opcalc {

struct Degenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Values in {1..r}; positions below are 1-based.
using Sequence = std::vector<int>;

struct CaesuraData {
  std::vector<int> positions;  // caesuras in increasing order
  std::vector<int> signs;      // one of +1, -1, 0 per position
};

bool is_nondegenerate(const Sequence& u, int r);
// Throws Degenerate unless u is nondegenerate on {1..max(u)}.
CaesuraData caesuras(const Sequence& u);
std::string seq_label(const Sequence& u);
Sequence parse_sequence(const std::string& s);
// All nondegenerate sequences of arity r and degree d, in lexicographic order.
std::vector<Sequence> nondegenerate_sequences(int r, int d);
std::uint64_t surj_ranks(int r, int d);

struct SeqTerm {
  std::int64_t coeff;
  Sequence seq;
};
struct SeqPair {
  std::int64_t coeff;
  Sequence first, second;
};

// ∂ in the surjections cooperad.
std::vector<SeqTerm> surj_differential(const Sequence& u);
// Δ_S(u) for u of arity n; the first factor uses the numbering of n/S with the
// collapsed block at min(S), the second factor is standardised.
std::vector<SeqPair> surj_decompose(const Sequence& u, int n, const std::vector<int>& S);
// ∂ in the PD surjections operad: insertion of one element.
std::vector<SeqTerm> pd_differential(const Sequence& u, int r);
// u ∘_k v in the PD surjections operad.
std::vector<SeqTerm> pd_compose(const Sequence& u, int r, int k, const Sequence& v, int s);

class SurjCooperad : public DgCooperad {
 public:
  std::string name() const override { return "Surj"; }
  std::size_t dim(int n, int d) const override;
  std::string label(int n, int d, std::uint32_t i) const override { return seq_label(sequence(n, d, i)); }
  Vec diff(int n, int d, std::uint32_t i) const override;
  Vec act(int n, int d, std::uint32_t i, const Perm& s) const override;
  std::vector<DTerm> decompose(int n, int d, std::uint32_t u, const std::vector<int>& S) const override;

  const Sequence& sequence(int n, int d, std::uint32_t i) const;
  std::uint32_t index(int n, const Sequence& u) const;

 private:
  const BasisCell<std::string>& cell(int n, int d) const;
  BasisCache<std::string> cache_;
};

// Surj^∨: same basis as Surj, degree -d.
class PdSurjOperad : public DgOperad {
 public:
  std::string name() const override { return "Surj^dual"; }
  std::size_t dim(int r, int d) const override { return base_.dim(r, -d); }
  std::string label(int r, int d, std::uint32_t i) const override { return base_.label(r, -d, i); }
  Vec diff(int r, int d, std::uint32_t i) const override;
  Vec act(int r, int d, std::uint32_t i, const Perm& s) const override { return base_.act(r, -d, i, s); }
  Vec compose(int r, int d1, std::uint32_t a, int k, int s, int d2, std::uint32_t b) const override;

  const SurjCooperad& cooperad() const { return base_; }

 private:
  SurjCooperad base_;
};

// Deformation retraction of Surj(r) onto Surj(r - {1}) with maps per degree 0..d_max.
struct Retraction {
  int r = 2;
  std::vector<ZMatrix> i;    // Surj(r-1)_d → Surj(r)_d
  std::vector<ZMatrix> rho;  // Surj(r)_d → Surj(r-1)_d
  std::vector<ZMatrix> h;    // Surj(r)_d → Surj(r)_{d+1}
};
Retraction retraction_homotopy(const SurjCooperad& c, int r, int d_max);
// Checks ρi = id and ∂h + h∂ = id − iρ in degrees 0..d_max-1 (h needs degree d+1).
bool verify_retraction(const SurjCooperad& c, const Retraction& ret, const Ring& ring, std::string* why = nullptr);

}  // namespace opcalc
