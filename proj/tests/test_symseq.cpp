#include "doctest.h"
#include "opcalc/symseq.hpp"

using namespace opcalc;

namespace {

const Ring Z = Ring::integers();
const Ring Q = Ring::rationals();
const Ring F2 = Ring::prime_field(2);

TruncationPolicy window(int r_max, int lo, int hi) { return {r_max, lo, hi, OverflowMode::Error}; }

SymSeq arity0(const Ring& ring, std::size_t copies) {
  SymSeq s(ring, window(4, 0, 2));
  GComplex c(ring, Group::symmetric(0), 0, 0);
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < copies; ++k) labels.push_back(std::string(1, char('a' + k)));
  c.set_basis(0, labels);
  s.set(0, c);
  return s;
}

// R[Σ_2] in degrees 0 and 1 with ∂ = id: an acyclic free sequence.
SymSeq free_cone(const Ring& ring) {
  SymSeq s = free_symseq(ring, window(6, 0, 2), 2, 1);
  GComplex c = *s.get(2);
  GComplex cone(ring, c.group(), 0, 1);
  cone.set_basis(0, {"e", "t"});
  cone.set_basis(1, {"se", "st"});
  ZMatrix id(2, 2);
  id.cols[0].push_back({0, 1});
  id.cols[1].push_back({1, 1});
  cone.set_diff(1, id);
  ZMatrix sw(2, 2);
  sw.cols[0].push_back({1, 1});
  sw.cols[1].push_back({0, 1});
  cone.set_action(0, 0, sw);
  cone.set_action(0, 1, sw);
  SymSeq out(ring, window(6, 0, 2));
  out.set(2, cone);
  return out;
}

void same_dims(const SymSeq& a, const SymSeq& b, int lo, int hi) {
  CHECK(a.arities() == b.arities());
  for (int r : a.arities())
    for (int d = lo; d <= hi; ++d) CHECK(a.dim(r, d) == b.dim(r, d));
}

std::size_t total(const SymSeq& s, int r) {
  const GComplex* c = s.get(r);
  if (!c) return 0;
  std::size_t t = 0;
  for (int d = c->d_min(); d <= c->d_max(); ++d) t += c->dim(d);
  return t;
}

}  // namespace

TEST_CASE("day tensor") {
  SymSeq y = free_symseq(Z, window(4, 0, 0), 2, 0);
  SymSeq u = arity0(Z, 1);
  SymSeq uy = day_tensor(u, y);
  uy.validate();
  same_dims(uy, y, 0, 0);

  SymSeq one = trivial_symseq(Z, window(4, 0, 0), 1, 0);
  SymSeq two = day_tensor(one, one);
  two.validate();
  CHECK(two.arities() == std::vector<int>{2});
  CHECK(two.dim(2, 0) == 2);
  CHECK(is_free_action(*two.get(2)));

  SymSeq t2 = trivial_symseq(Z, window(4, 0, 0), 2, 0);
  SymSeq four = day_tensor(t2, t2);
  CHECK(four.arities() == std::vector<int>{4});
  CHECK(four.dim(4, 0) == 6);

  SymSeq c = day_tensor(free_cone(Z), trivial_symseq(Z, window(4, 0, 1), 1, 1));
  c.validate();
  CHECK(c.dim(3, 1) == 6);
  CHECK(c.dim(3, 2) == 6);
}

TEST_CASE("levelwise tensor") {
  SymSeq y = free_cone(Z);
  SymSeq com = constant_symseq(Z, window(4, 0, 0));
  SymSeq cy = lev_tensor(com, y);
  cy.validate();
  same_dims(cy, y, 0, 1);
  SymSeq zero(Z, window(4, 0, 0));
  CHECK(lev_tensor(y, zero).arities().empty());
}

TEST_CASE("composition product units") {
  for (const Ring& ring : {Z, F2}) {
    SymSeq unit = unit_symseq(ring, window(6, 0, 2));
    SymSeq y = free_cone(ring);
    SymSeq uy = compose(unit, y, ComposeMode::Orbits);
    uy.validate();
    same_dims(uy, y, 0, 1);
    SymSeq yu = compose(y, unit, ComposeMode::Orbits);
    yu.validate();
    same_dims(yu, y, 0, 1);
    same_dims(compose(unit, y, ComposeMode::Invariants), y, 0, 1);
  }
}

TEST_CASE("composition with arity-0 inputs") {
  SymSeq x = free_symseq(Z, window(4, 0, 0), 2, 0);
  SymSeq y = arity0(Z, 2);
  SymSeq o = compose(x, y, ComposeMode::Orbits);
  SymSeq i = compose(x, y, ComposeMode::Invariants);
  CHECK(o.dim(0, 0) == 4);
  CHECK(i.dim(0, 0) == 4);
  NormData nd = norm_map(x, y);
  CHECK(nd.is_iso(0));

  SymSeq t = trivial_symseq(F2, window(4, 0, 0), 2, 0);
  SymSeq y1 = arity0(F2, 1);
  NormData tn = norm_map(t, y1);
  CHECK(tn.orbits.dim(0, 0) == 1);
  CHECK(tn.invariants.dim(0, 0) == 1);
  CHECK(tn.map.components.at(0).at(0).nnz() == 0);
  CHECK_FALSE(tn.is_iso(0));

  SymSeq cut(Z, {1, 0, 0, OverflowMode::Truncate});
  cut.set(1, trivial_module_complex(Z, Group::symmetric(1), 0));
  cut.set(2, trivial_module_complex(Z, Group::symmetric(2), 0));
  CHECK(cut.truncated());
  CHECK_THROWS_AS(compose(cut, arity0(Z, 1), ComposeMode::Invariants), DivergenceGuard);
  CHECK(compose(cut, arity0(Z, 1), ComposeMode::Orbits).truncated());
}

TEST_CASE("odd arity-0 inputs and sign-inconsistent orbits") {
  auto odd = [](const Ring& ring, std::size_t copies) {
    SymSeq y(ring, window(4, 0, 2));
    GComplex c(ring, Group::symmetric(0), 1, 1);
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < copies; ++k) labels.push_back(std::string(1, char('s' + k)));
    c.set_basis(1, labels);
    y.set(0, c);
    return y;
  };
  // μ(s, s) with |s| = 1: the swap acts on s⊗s by -1
  SymSeq xq = trivial_symseq(Q, window(4, 0, 2), 2, 0);
  CHECK(compose(xq, odd(Q, 1), ComposeMode::Orbits).dim(0, 2) == 0);
  CHECK(compose(xq, odd(Q, 1), ComposeMode::Invariants).dim(0, 2) == 0);
  CHECK(compose(xq, odd(Q, 2), ComposeMode::Orbits).dim(0, 2) == 1);
  SymSeq x2 = trivial_symseq(F2, window(4, 0, 2), 2, 0);
  CHECK(compose(x2, odd(F2, 1), ComposeMode::Orbits).dim(0, 2) == 1);
  CHECK(compose(x2, odd(F2, 2), ComposeMode::Invariants).dim(0, 2) == 3);
  SymSeq xz = trivial_symseq(Z, window(4, 0, 2), 2, 0);
  CHECK_THROWS_AS(compose(xz, odd(Z, 1), ComposeMode::Orbits), ShapeUnsupported);
}

TEST_CASE("composition is additive and associative on free sequences") {
  for (const Ring& ring : {Z, F2}) {
    SymSeq a = free_symseq(ring, window(8, 0, 4), 2, 0);
    SymSeq b = free_cone(ring);
    SymSeq ab(ring, window(8, 0, 4));
    GComplex sum = direct_sum(*a.get(2), *b.get(2));
    ab.set(2, sum);
    SymSeq y = free_symseq(ring, window(8, 0, 4), 2, 0);
    SymSeq l = compose(ab, y, ComposeMode::Orbits);
    SymSeq l1 = compose(a, y, ComposeMode::Orbits), l2 = compose(b, y, ComposeMode::Orbits);
    l.validate();
    for (int d = 0; d <= 1; ++d) CHECK(l.dim(4, d) == l1.dim(4, d) + l2.dim(4, d));

    TruncationPolicy cap{5, 0, 4, OverflowMode::Truncate};
    SymSeq x(ring, cap), yc(ring, cap), z(ring, cap);
    x.set(2, *a.get(2));
    yc.set(2, *b.get(2));
    z.set(1, trivial_module_complex(ring, Group::symmetric(1), 0));
    z.set(2, *a.get(2));
    SymSeq left = compose(compose(x, yc, ComposeMode::Orbits), z, ComposeMode::Orbits);
    SymSeq right = compose(x, compose(yc, z, ComposeMode::Orbits), ComposeMode::Orbits);
    left.validate();
    right.validate();
    CHECK(left.arities() == right.arities());
    for (int r : left.arities()) {
      for (int d = 0; d <= 4; ++d) CHECK(left.dim(r, d) == right.dim(r, d));
      const GComplex& cl = *left.get(r);
      const GComplex& cr = *right.get(r);
      REQUIRE(cl.d_max() == cr.d_max());
      CHECK(homology_range(cl, 0, cl.d_max() - 1) == homology_range(cr, 0, cr.d_max() - 1));
    }
  }
}

TEST_CASE("norm map") {
  for (const Ring& ring : {Z, Q, F2}) {
    SymSeq x = free_cone(ring);
    SymSeq y = trivial_symseq(ring, window(6, 0, 2), 1, 0);
    y.set(2, trivial_module_complex(ring, Group::symmetric(2), 0));
    NormData nd = norm_map(x, y);
    nd.orbits.validate();
    nd.invariants.validate();
    for (int r : nd.orbits.arities()) {
      CHECK(nd.is_iso(r));
      const GComplex& s = *nd.orbits.get(r);
      const GComplex& t = *nd.invariants.get(r);
      auto& ms = nd.map.components.at(r);
      for (int d = s.d_min() + 1; d <= s.d_max(); ++d) {
        ZMatrix lhs = multiply(ms[d - s.d_min()], s.diff(d)) ;
        ZMatrix rhs = multiply(t.diff(d), ms[d - s.d_min()]);
        CHECK(lhs == rhs);
      }
      for (std::size_t g = 0; g < s.group().generators().size(); ++g)
        for (int d = s.d_min(); d <= s.d_max(); ++d)
          CHECK(multiply(ms[d - s.d_min()], s.action(g, d)) == multiply(t.action(g, d), ms[d - s.d_min()]));
    }
    CHECK(total(nd.orbits, 4) > 0);
  }
  // Y in arities ≥ 1 with trivial X over F2 still gives isomorphisms above arity 2·1
  SymSeq t = trivial_symseq(F2, window(6, 0, 0), 2, 0);
  SymSeq y = free_symseq(F2, window(6, 0, 0), 2, 0);
  NormData nd = norm_map(t, y);
  CHECK(nd.is_iso(4));
}
