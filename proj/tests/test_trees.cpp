#include "doctest.h"
#include "opcalc/surjections.hpp"
#include "opcalc/trees.hpp"

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

TruncationPolicy window(int r_max, int lo, int hi) { return {r_max, lo, hi, OverflowMode::Error}; }

}  // namespace

TEST_CASE("free operad on one binary generator") {
  FreeSymSeqOperad triv(trivial_symseq(Z, window(4, 0, 0), 2, 0));
  CHECK(triv.dim(1, 0) == 1);
  CHECK(triv.dim(2, 0) == 1);
  CHECK(triv.dim(3, 0) == 3);
  CHECK(triv.dim(4, 0) == 15);
  FreeSymSeqOperad reg(free_symseq(Z, window(4, 0, 0), 2, 0));
  CHECK(reg.dim(2, 0) == 2);
  CHECK(reg.dim(3, 0) == 12);
  SymSeq zero(Z, window(4, 0, 0));
  FreeSymSeqOperad unit(zero);
  CHECK(unit.dim(1, 0) == 1);
  for (int r = 2; r <= 4; ++r) CHECK(unit.dim(r, 0) == 0);

  for (const FreeOperad* p : {static_cast<const FreeOperad*>(&triv), static_cast<const FreeOperad*>(&reg)}) {
    auto rep = check_operad(*p, {4, 0, 0}, Z);
    INFO(rep.summary());
    CHECK(rep.ok());
  }
}

TEST_CASE("height filtration stabilises") {
  FreeSymSeqOperad reg(free_symseq(Z, window(5, 0, 0), 2, 0));
  for (int r = 2; r <= 5; ++r) {
    for (int n = 0; n < r - 1; ++n) CHECK(reg.filtration_dim(r, 0, n) < reg.dim(r, 0));
    for (int n = r - 1; n <= r + 1; ++n) CHECK(reg.filtration_dim(r, 0, n) == reg.dim(r, 0));
  }
}

TEST_CASE("bar construction of Com^nu") {
  ComNu com;
  BarCooperad bar(com, 0, 0);
  for (const Ring& ring : {Z, F2}) {
    auto rep = check_cooperad(bar, {5, 0, 4}, ring);
    INFO(rep.summary());
    CHECK(rep.ok());
  }
  for (const Ring& ring : {Q, F2}) {
    GComplex b2 = component(bar, 2, 0, 2, ring);
    b2.validate();
    CHECK(ranks(b2, 0, 2) == std::vector<std::size_t>{0, 1, 0});
    GComplex b3 = component(bar, 3, 0, 3, ring);
    b3.validate();
    CHECK(ranks(b3, 0, 3) == std::vector<std::size_t>{0, 0, 2, 0});
    GComplex b4 = component(bar, 4, 0, 4, ring);
    b4.validate();
    CHECK(ranks(b4, 0, 4) == std::vector<std::size_t>{0, 0, 0, 6, 0});
  }
}

TEST_CASE("Koszul dual of Com^nu") {
  ComNu com;
  KoszulDualOperad kd(com, 0, 0);
  for (int r = 2; r <= 5; ++r)
    for (const Ring& ring : {Q, F2}) {
      GComplex x = component(kd, r, 1 - r, 0, ring);
      auto h = ranks(x, 1 - r, 0);
      for (int d = 1 - r; d <= 0; ++d) CHECK(h[d - (1 - r)] == (d == 1 - r ? factorial(r - 1) : 0));
    }
  auto rep = check_operad(kd, {4, -3, 0}, Z);
  INFO(rep.summary());
  CHECK(rep.ok());
}

TEST_CASE("cobar of coCom") {
  ComNu com;
  TransposeCooperad cocom(com, 0, 0);
  CobarOperad cobar(cocom, 0, 0);
  auto rep = check_operad(cobar, {4, -3, 0}, Z);
  INFO(rep.summary());
  CHECK(rep.ok());
  GComplex x = component(cobar, 3, -2, -1, Q);
  x.validate();
  CHECK(ranks(x, -2, -1) == std::vector<std::size_t>{2, 0});
  GComplex y = component(cobar, 4, -3, -1, Q);
  CHECK(ranks(y, -3, -1) == std::vector<std::size_t>{6, 0, 0});
}

TEST_CASE("cobar of bar of Com^nu recovers Com^nu") {
  ComNu com;
  BarCooperad bar(com, 0, 0);
  CobarOperad cb(bar, 0, kUnbounded);
  auto rep = check_operad(cb, {3, 0, 2}, Z);
  INFO(rep.summary());
  CHECK(rep.ok());
  for (int r = 1; r <= 3; ++r) {
    GComplex x = component(cb, r, 0, 3, Q);
    x.validate();
    auto h = ranks(x, 0, 2);
    CHECK(h == std::vector<std::size_t>{1, 0, 0});
  }
}

TEST_CASE("bar of a free operad keeps only the generators") {
  FreeSymSeqOperad reg(free_symseq(Z, window(4, 0, 0), 2, 0));
  BarCooperad bar(reg, 0, 0);
  for (int r = 2; r <= 3; ++r) {
    GComplex x = component(bar, r, 0, r, Q);
    x.validate();
    auto h = ranks(x, 0, r - 1);
    for (int d = 0; d <= r - 1; ++d) CHECK(h[d] == (r == 2 && d == 1 ? 2u : 0u));
  }
}

TEST_CASE("Koszul dual of Surj^dual has the homology of Lie^s") {
  PdSurjOperad pd;
  KoszulDualOperad kd(pd, -kUnbounded, 0);
  for (int r = 2; r <= 4; ++r)
    for (const Ring& ring : {Q, F2, Ring::prime_field(3)}) {
      int lo = 1 - r;
      GComplex x = component(kd, r, lo, lo + 3, ring);
      x.validate();
      auto h = ranks(x, lo, lo + 2);
      CHECK(h[0] == factorial(r - 1));
      CHECK(h[1] == 0);
      CHECK(h[2] == 0);
    }
}
