#include <map>

#include "doctest.h"
#include "opcalc/koszul.hpp"

using namespace opcalc;

namespace {

const Ring Z = Ring::integers();
const Ring Q = Ring::rationals();
const Ring F2 = Ring::prime_field(2);

std::vector<std::size_t> ranks(const GComplex& x, int lo, int hi) {
  std::vector<std::size_t> out;
  for (auto& h : homology_range(x, lo, hi)) out.push_back(h.rank);
  return out;
}

// Binary generators b (degree 1) and m (degree 0), trivial actions, ∂b = m.
SymSeq dg_binary() {
  SymSeq x(Z, {4, 0, 1, OverflowMode::Error});
  GComplex c(Z, Group::symmetric(2), 0, 1);
  c.set_basis(0, {"m"});
  c.set_basis(1, {"b"});
  ZMatrix d(1, 1);
  d.cols[0].push_back({0, 1});
  c.set_diff(1, d);
  for (int deg = 0; deg <= 1; ++deg) {
    ZMatrix a(1, 1);
    a.cols[0].push_back({0, 1});
    c.set_action(0, deg, a);
  }
  x.set(2, c);
  return x;
}

using PairMap = std::map<std::tuple<int, std::uint32_t, int, std::uint32_t>, std::int64_t>;

void add_terms(PairMap& m, const std::vector<DTerm>& ts, std::int64_t c) {
  for (auto& t : ts) m[{t.d1, t.a, t.d2, t.b}] += c * t.coeff;
}

bool zero_map(const PairMap& m) {
  for (auto& [k, v] : m)
    if (v != 0) return false;
  return true;
}

// Right module axioms and the chain property of both structure maps in arity ≤ n_max.
void check_koszul(const KoszulComplex& k, int n_max, int lo, int hi) {
  const DgOperad& p = k.operad();
  std::uint32_t unit = *p.unit();
  for (int n = 1; n <= n_max; ++n) {
    GComplex x = k.component(n, lo, hi, Z);
    CHECK_NOTHROW(x.validate());
    for (int d = lo; d <= hi; ++d)
      for (std::uint32_t i = 0; i < k.dim(n, d); ++i) {
        // coaction commutes with ∂
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
          std::vector<int> S;
          for (int q = 1; q <= n; ++q)
            if (mask >> (q - 1) & 1) S.push_back(q);
          int n1 = n - int(S.size()) + 1, s = int(S.size());
          int leaf = quotient_position(n, S, S.front());
          PairMap lhs;
          for (auto& [j, c] : k.diff(n, d, i)) add_terms(lhs, k.coact(n, d - 1, j, S), c);
          for (auto& t : k.coact(n, d, i, S)) {
            for (auto& [a2, c] : k.diff_avoiding(n1, t.d1, t.a, leaf)) lhs[{t.d1 - 1, a2, t.d2, t.b}] -= t.coeff * c;
            std::int64_t sg = (t.d1 % 2 + 2) % 2 ? -1 : 1;
            for (auto& [b2, c] : k.diff(s, t.d2, t.b)) lhs[{t.d1, t.a, t.d2 - 1, b2}] -= sg * t.coeff * c;
          }
          CHECK_MESSAGE(zero_map(lhs), "coaction " << k.label(n, d, i));
        }
        if (n + 1 > n_max) continue;
        // right action: unit, Leibniz, sequential and parallel associativity
        for (int j = 1; j <= n; ++j) {
          CHECK(k.compose_right(n, d, i, j, 1, 0, unit) == Vec{{i, 1}});
          for (int d2 = 0; d2 <= 1; ++d2)
            for (std::uint32_t q = 0; q < p.dim(2, d2); ++q) {
              if (d + d2 > hi + 1) continue;
              Vec lhs = canonical({});
              for (auto& [a, c] : k.compose_right(n, d, i, j, 2, d2, q)) axpy(lhs, c, k.diff(n + 1, d + d2, a));
              Vec rhs;
              for (auto& [a, c] : k.diff(n, d, i)) axpy(rhs, c, k.compose_right(n, d - 1, a, j, 2, d2, q));
              for (auto& [b, c] : p.diff(2, d2, q)) axpy(rhs, (d % 2 ? -1 : 1) * c, k.compose_right(n, d, i, j, 2, d2 - 1, b));
              CHECK(lhs == rhs);
              if (n + 2 > n_max) continue;
              for (int l = 1; l <= n; ++l)
                for (std::uint32_t q2 = 0; q2 < p.dim(2, 0); ++q2) {
                  if (l == j) {
                    for (int t = 1; t <= 2; ++t) {
                      Vec a, b;
                      for (auto& [u, c] : k.compose_right(n, d, i, j, 2, d2, q)) axpy(a, c, k.compose_right(n + 1, d + d2, u, j + t - 1, 2, 0, q2));
                      for (auto& [v, c] : p.compose(2, d2, q, t, 2, 0, q2)) axpy(b, c, k.compose_right(n, d, i, j, 3, d2, v));
                      CHECK(a == b);
                    }
                  } else if (j < l) {
                    Vec a, b;
                    for (auto& [u, c] : k.compose_right(n, d, i, l, 2, 0, q2)) axpy(a, c, k.compose_right(n + 1, d, u, j, 2, d2, q));
                    for (auto& [u, c] : k.compose_right(n, d, i, j, 2, d2, q)) axpy(b, c, k.compose_right(n + 1, d + d2, u, l + 1, 2, 0, q2));
                    CHECK(a == b);
                  }
                }
            }
        }
      }
  }
}

}  // namespace

TEST_CASE("Koszul complex of Com^nu is acyclic above arity 1") {
  ComNu com;
  KoszulComplex k(com, 0, 0);
  CHECK(k.augmentation_rank() == 1);
  for (const Ring& ring : {Z, Q, F2}) {
    CHECK(ranks(k.component(1, 0, 1, ring), 0, 0) == std::vector<std::size_t>{1});
    for (int n = 2; n <= 4; ++n) {
      GComplex x = k.component(n, 0, n, ring);
      x.validate();
      for (auto& h : homology_range(x, 0, n - 1)) CHECK(h.is_zero());
    }
  }
}

TEST_CASE("Koszul complex structure maps") {
  ComNu com;
  KoszulComplex k(com, 0, 0);
  check_koszul(k, 4, 0, 3);
}

TEST_CASE("Koszul complex of a free dg-operad with odd generators") {
  FreeSymSeqOperad f(dg_binary());
  KoszulComplex k(f, 0, 3);
  check_koszul(k, 3, 0, 4);
  for (int n = 2; n <= 3; ++n) {
    GComplex x = k.component(n, 0, 2 * n, Q);
    x.validate();
    for (auto& h : homology_range(x, 0, 2 * n - 1)) CHECK(h.is_zero());
  }
}

namespace {

// Com^nu-algebra on F2{x, y} with x·x = y and all other products zero.
PAlgebra square_algebra(bool consistent) {
  GComplex a(F2, Group::trivial(), 0, 0);
  a.set_basis(0, {"x", "y"});
  PAlgebra alg{a, [consistent](int r, int, std::uint32_t, const std::vector<std::pair<int, std::uint32_t>>& args) -> Vec {
                 bool all_x = std::all_of(args.begin(), args.end(), [](auto& g) { return g.second == 0; });
                 if (r == 2 && all_x) return {{1, 1}};
                 if (!consistent && r == 3 && all_x) return {{1, 1}};
                 return {};
               }};
  return alg;
}

PAlgebra trivial_algebra() {
  GComplex a(F2, Group::trivial(), 0, 0);
  a.set_basis(0, {"x"});
  return {a, [](int, int, std::uint32_t, const std::vector<std::pair<int, std::uint32_t>>&) -> Vec { return {}; }};
}

}  // namespace

TEST_CASE("bar construction of algebras") {
  ComNu com;
  BarCooperad bar(com, 0, 0);
  PAlgebra triv = trivial_algebra();
  CHECK_NOTHROW(verify_algebra(com, triv, 4, 0, 0));
  GComplex b = bar_algebra(bar, triv, 4, 0, 4);
  b.validate();
  auto h = ranks(b, 0, 3);
  // ⊕_r H(Bar(Com^nu)(r)_{Σ_r}) with r ≤ 4
  std::vector<std::size_t> expect(4, 0);
  for (int r = 1; r <= 4; ++r) {
    GComplex o = orbits(component(bar, r, 0, 4, F2));
    auto hr = ranks(o, 0, 3);
    for (int d = 0; d <= 3; ++d) expect[d] += hr[d];
  }
  CHECK(h == expect);
  CHECK(h[0] == 1);

  PAlgebra sq = square_algebra(true);
  CHECK_NOTHROW(verify_algebra(com, sq, 4, 0, 0));
  GComplex c = bar_algebra(bar, sq, 4, 0, 4);
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(verify_algebra(com, square_algebra(false), 4, 0, 0), StructureMapsNotAssociative);
}
