#include "doctest.h"
#include "opcalc/surjections.hpp"

using namespace opcalc;

namespace {

std::vector<std::pair<std::int64_t, std::string>> terms(const std::vector<SeqTerm>& ts) {
  std::vector<std::pair<std::int64_t, std::string>> out;
  for (auto& t : ts) out.push_back({t.coeff, seq_label(t.seq)});
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.second < b.second; });
  return out;
}

}  // namespace

TEST_CASE("caesuras and the alternating sign rule") {
  auto c = caesuras({1, 3, 2, 4, 1, 2, 3, 1});
  CHECK(c.positions == std::vector<int>{1, 2, 3, 5});
  CHECK(c.signs == std::vector<int>{1, -1, 1, 0, -1, -1, 1, 1});
  CHECK(caesuras({1, 2}).positions.empty());
  CHECK(caesuras({1, 2}).signs == std::vector<int>{0, 0});
  auto e = caesuras({1, 2, 1});
  CHECK(e.positions == std::vector<int>{1});
  CHECK(e.signs == std::vector<int>{1, 0, -1});
  CHECK_THROWS_AS(caesuras({1, 1, 2}), Degenerate);
  CHECK_THROWS_AS(caesuras({1, 3}), Degenerate);
}

TEST_CASE("ranks of the surjections module") {
  CHECK(surj_ranks(3, 0) == 6);
  for (int d = 0; d <= 6; ++d) CHECK(surj_ranks(2, d) == 2);
  CHECK(surj_ranks(3, 1) == 18);
  CHECK(surj_ranks(4, 0) == 24);
  CHECK(surj_ranks(1, 0) == 1);
  CHECK(surj_ranks(1, 1) == 0);
}

TEST_CASE("differential and cocomposition examples") {
  CHECK(terms(surj_differential({1, 2, 1})) == decltype(terms({})){{-1, "(1,2)"}, {1, "(2,1)"}});

  auto a = surj_decompose({1, 2, 3, 1, 2, 3}, 3, {2, 3});
  REQUIRE(a.size() == 1);
  CHECK(a[0].coeff == 1);
  CHECK(a[0].first == Sequence{1, 2, 1});
  CHECK(a[0].second == Sequence{1, 2, 1, 2});

  auto b = surj_decompose({1, 2, 1, 3, 1, 2, 3}, 3, {2, 3});
  REQUIRE(b.size() == 2);
  CHECK(b[0].coeff == 1);
  CHECK(b[0].first == Sequence{1, 2, 1, 2, 1});
  CHECK(b[0].second == Sequence{2, 1, 2});
  CHECK(b[1].coeff == 1);
  CHECK(b[1].first == Sequence{1, 2, 1, 2, 1, 2});
  CHECK(b[1].second == Sequence{1, 2});
}

TEST_CASE("PD surjections operad examples") {
  CHECK(terms(pd_differential({1, 2}, 2)) == decltype(terms({})){{-1, "(1,2,1)"}, {1, "(2,1,2)"}});
  CHECK(terms(pd_compose({1, 2}, 2, 2, {1, 2}, 2)) == decltype(terms({})){{1, "(1,2,3)"}});
  CHECK(terms(pd_compose({1, 2, 1}, 2, 2, {1, 2}, 2)) == decltype(terms({})){{1, "(1,2,1,3)"}, {1, "(1,2,3,1)"}});
}

TEST_CASE("surjections cooperad axioms in a small window") {
  SurjCooperad s;
  for (Ring ring : {Ring::integers(), Ring::prime_field(2)}) {
    auto rep = check_cooperad(s, {4, 0, 3}, ring);
    INFO(rep.summary());
    CHECK(rep.ok());
  }
}

TEST_CASE("Surj(r) is a resolution of the trivial representation") {
  SurjCooperad s;
  for (int r = 1; r <= 4; ++r) {
    GComplex x = component(s, r, 0, 4, Ring::integers());
    x.validate();
    auto hs = homology_range(x, 0, 3);
    CHECK(hs[0].rank == 1);
    CHECK(hs[0].torsion.empty());
    for (int d = 1; d <= 3; ++d) CHECK(hs[d].is_zero());
    if (r >= 2) CHECK(is_free_action(x));
  }
}

TEST_CASE("retraction data") {
  SurjCooperad s;
  for (int r = 2; r <= 4; ++r) {
    auto ret = retraction_homotopy(s, r, 3);
    std::string why;
    CHECK_MESSAGE(verify_retraction(s, ret, Ring::integers(), &why), why);
  }
  // ρ kills sequences with a second 1
  auto ret = retraction_homotopy(s, 2, 1);
  std::uint32_t idx = s.index(2, {1, 2, 1});
  CHECK(ret.rho[1].cols[idx].empty());
}

TEST_CASE("PD surjections operad is the transpose of the cooperad") {
  SurjCooperad s;
  PdSurjOperad pd;
  TransposeOperad t(s);
  for (int r = 1; r <= 3; ++r)
    for (int d = 0; d >= -3; --d) {
      REQUIRE(pd.dim(r, d) == t.dim(r, d));
      CHECK(diff_matrix(pd, r, d) == diff_matrix(t, r, d));
    }
  for (int r = 2; r <= 3; ++r)
    for (int s2 = 2; s2 + r - 1 <= 4; ++s2)
      for (int k = 1; k <= r; ++k)
        for (int d1 = 0; d1 >= -2; --d1)
          for (int d2 = 0; d2 >= -2; --d2) {
            ZMatrix a = composition_matrix(pd, r, d1, k, s2, d2), b = composition_matrix(t, r, d1, k, s2, d2);
            a.canonicalize();
            b.canonicalize();
            CHECK(a == b);
          }
  auto rep = check_operad(pd, {4, -3, 0}, Ring::integers());
  INFO(rep.summary());
  CHECK(rep.ok());
}
