#include <random>

#include "doctest.h"
#include "opcalc/coeff.hpp"

using namespace opcalc;

namespace {

BigInt det(std::vector<std::vector<BigInt>> a) {
  // Laplace expansion; inputs are at most 3×3
  std::size_t n = a.size();
  if (n == 1) return a[0][0];
  BigInt s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<BigInt>> m;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<BigInt> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      m.push_back(row);
    }
    BigInt t = a[0][j] * det(m);
    s += (j % 2 == 0) ? t : BigInt(-t);
  }
  return s;
}

// Determinantal divisors: gcd of all k×k minors.
std::vector<BigInt> determinantal(const std::vector<std::vector<std::int64_t>>& a) {
  std::size_t m = a.size(), n = a[0].size();
  std::vector<BigInt> out;
  for (std::size_t k = 1; k <= std::min(m, n); ++k) {
    BigInt g = 0;
    for (unsigned rs = 0; rs < (1u << m); ++rs) {
      if (std::size_t(__builtin_popcount(rs)) != k) continue;
      for (unsigned cs = 0; cs < (1u << n); ++cs) {
        if (std::size_t(__builtin_popcount(cs)) != k) continue;
        std::vector<std::vector<BigInt>> sub;
        for (std::size_t i = 0; i < m; ++i) {
          if (!(rs >> i & 1)) continue;
          std::vector<BigInt> row;
          for (std::size_t j = 0; j < n; ++j)
            if (cs >> j & 1) row.push_back(a[i][j]);
          sub.push_back(row);
        }
        g = gcd(g, abs(det(sub)));
      }
    }
    if (g == 0) break;
    out.push_back(g);
  }
  return out;
}

}  // namespace

TEST_CASE("ring parsing and primality") {
  CHECK(Ring::parse("z") == Ring::integers());
  CHECK(Ring::parse("q") == Ring::rationals());
  CHECK(Ring::parse("fp:3").characteristic() == 3);
  CHECK_THROWS(Ring::parse("fp:4"));
  CHECK_THROWS(Ring::parse("r"));
  CHECK(Ring::prime_field(7).reduce(-1) == 6);
}

TEST_CASE("scalar arithmetic is exact") {
  Ring q = Ring::rationals();
  Scalar a = Scalar::parse(q, "3/4"), b = Scalar::parse(q, "-5/6");
  CHECK(((a + b) - b) == a);
  CHECK(((a * b) / b) == a);
  CHECK((a + b).str() == "-1/12");
  Ring f5 = Ring::prime_field(5);
  Scalar x(f5, 3);
  CHECK((x * x.inverse()) == Scalar(f5, 1));
  CHECK(Scalar::parse(f5, "1/2") == Scalar(f5, 3));
  CHECK_THROWS(Scalar::parse(Ring::integers(), "1/2"));
  CHECK_THROWS(Scalar(Ring::integers(), 2).inverse());
  CHECK_THROWS_AS(Scalar(q, 1) + Scalar(f5, 1), RingMismatch);
}

TEST_CASE("smith normal form examples") {
  Ring z = Ring::integers();
  auto s = smith_normal_form(SparseMatrix::from_dense(z, {{2, 0}, {0, 3}}));
  CHECK(s.rank == 2);
  CHECK(s.diagonal == std::vector<BigInt>{1, 6});
  auto zero = smith_normal_form(SparseMatrix(z, 3, 3));
  CHECK(zero.rank == 0);
  CHECK(zero.diagonal.empty());
  auto id = smith_normal_form(SparseMatrix::from_dense(z, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  CHECK(id.rank == 3);
  CHECK(id.diagonal == std::vector<BigInt>{1, 1, 1});
}

TEST_CASE("smith normal form agrees with determinantal divisors") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> val(-6, 6), dim(1, 3);
  Ring z = Ring::integers();
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t m = dim(rng), n = dim(rng);
    std::vector<std::vector<std::int64_t>> a(m, std::vector<std::int64_t>(n));
    for (auto& row : a)
      for (auto& v : row) v = (rng() % 3 == 0) ? 0 : val(rng);
    auto s = smith_normal_form(SparseMatrix::from_dense(z, a));
    auto dd = determinantal(a);
    REQUIRE(s.rank == dd.size());
    BigInt prod = 1;
    for (std::size_t k = 0; k < s.rank; ++k) {
      prod *= s.diagonal[k];
      CHECK(prod == dd[k]);
      if (k + 1 < s.rank) CHECK(s.diagonal[k + 1] % s.diagonal[k] == 0);
    }
  }
}

TEST_CASE("row reduction examples") {
  Ring f2 = Ring::prime_field(2), f3 = Ring::prime_field(3), q = Ring::rationals();
  auto a = row_reduce(SparseMatrix::from_dense(f2, {{1, 1}, {1, 1}}));
  CHECK(a.rank == 1);
  REQUIRE(a.kernel_basis.size() == 1);
  CHECK(a.kernel_basis[0] == std::vector<Scalar>{Scalar(f2, 1), Scalar(f2, 1)});
  auto b = row_reduce(SparseMatrix::from_dense(q, {{1, 0}, {0, 1}}));
  CHECK(b.rank == 2);
  CHECK(b.kernel_basis.empty());
  auto c = row_reduce(SparseMatrix::from_dense(f3, {{1, 2}}));
  CHECK(c.rank == 1);
  REQUIRE(c.kernel_basis.size() == 1);
  CHECK(c.kernel_basis[0] == std::vector<Scalar>{Scalar(f3, 1), Scalar(f3, 1)});
  CHECK_THROWS_AS(row_reduce(SparseMatrix(Ring::integers(), 1, 1)), NotAField);
}

TEST_CASE("rank plus nullity and sparse kernels agree with dense elimination") {
  std::mt19937_64 rng(11);
  for (std::int64_t p : {2, 3, 5}) {
    Ring f = Ring::prime_field(p);
    for (int trial = 0; trial < 100; ++trial) {
      std::size_t m = 1 + rng() % 6, n = 1 + rng() % 6;
      std::vector<std::vector<std::int64_t>> a(m, std::vector<std::int64_t>(n));
      ZMatrix z(m, n);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          a[i][j] = (rng() % 2) ? std::int64_t(rng() % 7) - 3 : 0;
          if (a[i][j]) z.cols[j].push_back({std::int32_t(i), a[i][j]});
        }
      auto rr = row_reduce(SparseMatrix::from_dense(f, a));
      CHECK(rr.rank + rr.kernel_basis.size() == n);
      CHECK(rank_in(z, f) == rr.rank);
      // kernel vectors really are in the kernel
      for (auto& v : rr.kernel_basis)
        for (std::size_t i = 0; i < m; ++i) {
          Scalar s(f, 0);
          for (std::size_t j = 0; j < n; ++j) s = s + Scalar(f, a[i][j]) * v[j];
          CHECK(s.is_zero());
        }
    }
  }
}

TEST_CASE("integral rank keeps torsion and survives coefficient growth") {
  // [[2,1],[1,2]] has invariant factors 1, 3
  ZMatrix m(2, 2);
  m.cols[0] = {{0, 2}, {1, 1}};
  m.cols[1] = {{0, 1}, {1, 2}};
  auto ir = integral_rank(m);
  CHECK(ir.rank == 2);
  CHECK(ir.torsion == std::vector<BigInt>{3});
  CHECK(rank_in(m, Ring::prime_field(3)) == 1);
  CHECK(rank_in(m, Ring::rationals()) == 2);
  // entries near 2^62 force the big-integer path
  ZMatrix big(2, 2);
  std::int64_t h = std::int64_t(1) << 61;
  big.cols[0] = {{0, 1}, {1, h}};
  big.cols[1] = {{0, h}, {1, 1}};
  CHECK(integral_rank(big).rank == 2);
}
