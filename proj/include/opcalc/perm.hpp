#pragma once

#include <cstdint>
#include <vector>

namespace opcalc {

// A permutation of {0..n-1}, stored as the list of images.
using Perm = std::vector<int>;

Perm identity_perm(int n);
Perm compose(const Perm& a, const Perm& b);  // (a∘b)(i) = a(b(i))
Perm inverse(const Perm& p);
int perm_sign(const Perm& p);
std::vector<Perm> all_perms(int n);  // lexicographic order
std::uint64_t factorial(int n);

// Sign of the permutation that sorts `degrees` blocks into `order`, where only odd
// blocks contribute: the Koszul sign of reordering graded factors.
// `order[j]` is the old position of the factor that ends up at position j.
int koszul_sign(const std::vector<int>& degrees, const std::vector<int>& order);

}  // namespace opcalc
