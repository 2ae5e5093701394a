#pragma once

#include <string>
#include <vector>

#include "opcalc/complex.hpp"

namespace opcalc {

// Finite pointed simplicial set through level `top`, simplices stored by index.
struct SimplicialSet {
  std::vector<std::vector<std::string>> simplices;  // simplices[n]
  std::vector<std::vector<std::vector<int>>> face;  // face[n][i][σ], n ≥ 1
  std::vector<std::vector<std::vector<int>>> degeneracy;  // degeneracy[n][j][σ]: level n → n+1, n < top
  std::vector<int> basepoint;                       // basepoint index per level, -1 if unpointed

  int top() const { return int(simplices.size()) - 1; }
  // Checks the simplicial identities on all composable pairs; throws InvalidComplex.
  void validate() const;
  bool is_degenerate(int n, int s) const;
};

// Reduced chains (basepoint killed) as a simplicial module, and its dual.
SimplicialModule reduced_chains(const SimplicialSet& x, const Ring& ring);
CosimplicialModule reduced_cochains(const SimplicialSet& x, const Ring& ring);

// Normalised reduced chains directly on nondegenerate non-basepoint simplices.
GComplex normalized_chains(const SimplicialSet& x, const Ring& ring);

}  // namespace opcalc
