#include "opcalc/acceptance.hpp"

#include <chrono>
#include <functional>
#include <sstream>

#include "opcalc/koszul.hpp"
#include "opcalc/lie.hpp"
#include "opcalc/partition.hpp"
#include "opcalc/surjections.hpp"
#include "opcalc/trees.hpp"

namespace opcalc {

namespace {

const Ring Z = Ring::integers();
const Ring Q = Ring::rationals();
const Ring F2 = Ring::prime_field(2);
const Ring F3 = Ring::prime_field(3);

// Collects the first failure and a running description of what passed.
struct Verdict {
  bool ok = true;
  std::ostringstream log;
  std::string first;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      first = what;
    }
  }
  std::string detail() const { return ok ? log.str() : "FAILED " + first + "; " + log.str(); }
};

std::string homology_list(const std::vector<HomologyGroup>& hs, int lo) {
  std::ostringstream os;
  for (std::size_t i = 0; i < hs.size(); ++i) os << (i ? " " : "") << "H" << lo + int(i) << "=" << hs[i].str();
  return os.str();
}

// H concentrated in degree `at` with the given free rank, zero elsewhere in hs.
bool concentrated(const std::vector<HomologyGroup>& hs, int lo, int at, std::size_t rank) {
  for (std::size_t i = 0; i < hs.size(); ++i) {
    bool here = lo + int(i) == at;
    if (hs[i].rank != (here ? rank : 0) || !hs[i].torsion.empty()) return false;
  }
  return true;
}

void check_report(Verdict& v, const CheckReport& rep, const std::string& where) {
  std::size_t n = 0;
  for (auto& [k, c] : rep.instances) n += c;
  v.require(rep.ok(), where + ": " + rep.summary());
  v.log << where << " " << n << " instances; ";
}

// Top degree of the Surj(r) homology window: the next cell must stay small enough
// for exact elimination.
int surj_window(int r) { return r <= 4 ? 3 : (r == 5 ? 2 : 1); }

Verdict surj_cooperad_axioms() {
  Verdict v;
  SurjCooperad s;
  // r + s ≤ 6 means cocompositions out of arities ≤ 5. Surj(5)_4 alone would take
  // over ten minutes, so arity 5 stops at degree 3 over Z and degree 2 over F2.
  check_report(v, check_cooperad(s, {4, 0, 4}, Z), "Surj z r<=4 d<=4");
  check_report(v, check_cooperad(s, {5, 0, 3}, Z), "Surj z r<=5 d<=3");
  check_report(v, check_cooperad(s, {5, 0, 2}, F2), "Surj fp:2 r<=5 d<=2");
  return v;
}

Verdict surj_homology() {
  Verdict v;
  SurjCooperad s;
  for (const Ring& ring : {Z, Q, F2, F3})
    for (int r = 1; r <= 6; ++r) {
      int top = surj_window(r);
      auto hs = component_homology(s, r, 0, top, ring);
      v.require(concentrated(hs, 0, 0, 1), "Surj(" + std::to_string(r) + ") over " + ring.name() + ": " + homology_list(hs, 0));
    }
  v.log << "H(Surj(r)) = R in degree 0 for r <= 6 over z, q, fp:2, fp:3 (degrees 0..3, 0..2 at r=5, 0..1 at r=6); ";
  for (int r = 2; r <= 6; ++r) {
    auto ret = retraction_homotopy(s, r, surj_window(r));
    std::string why;
    v.require(verify_retraction(s, ret, Z, &why), "retraction r=" + std::to_string(r) + ": " + why);
  }
  v.log << "dh + hd = id - i rho for r = 2..6";
  return v;
}

Verdict pd_transpose() {
  Verdict v;
  SurjCooperad s;
  PdSurjOperad pd;
  TransposeOperad t(s);
  std::size_t matrices = 0;
  for (int r = 1; r <= 5; ++r)
    for (int d = 0; d >= -4; --d) {
      v.require(pd.dim(r, d) == t.dim(r, d), "dimension mismatch");
      v.require(diff_matrix(pd, r, d) == diff_matrix(t, r, d), "differential r=" + std::to_string(r) + " d=" + std::to_string(d));
      ++matrices;
    }
  for (int r = 2; r <= 4; ++r)
    for (int s2 = 2; r + s2 <= 6; ++s2)
      for (int k = 1; k <= r; ++k)
        for (int d1 = 0; d1 >= -4; --d1)
          for (int d2 = 0; d1 + d2 >= -4; --d2) {
            ZMatrix a = composition_matrix(pd, r, d1, k, s2, d2), b = composition_matrix(t, r, d1, k, s2, d2);
            a.canonicalize();
            b.canonicalize();
            v.require(a == b, "o_" + std::to_string(k) + " r=" + std::to_string(r) + " s=" + std::to_string(s2));
            ++matrices;
          }
  v.log << matrices << " structure matrices equal to the transposes; ";
  for (const Ring& ring : {Z, F2}) check_report(v, check_operad(pd, {5, -4, 0}, ring), "Surj^dual " + ring.name());
  return v;
}

Verdict koszul_duals() {
  Verdict v;
  ComNu com;
  KoszulDualOperad kd(com, 0, 0);
  for (const Ring& ring : {Q, F2})
    for (int r = 2; r <= 5; ++r) {
      auto hs = component_homology(kd, r, 1 - r, 0, ring);
      v.require(concentrated(hs, 1 - r, 1 - r, factorial(r - 1)),
                "KD(Com^nu)(" + std::to_string(r) + ") over " + ring.name() + ": " + homology_list(hs, 1 - r));
    }
  v.log << "KD(Com^nu)(r) has rank (r-1)! in degree 1-r for r <= 5 over q, fp:2; ";
  PdSurjOperad pd;
  LieSOperad lies;
  KoszulDualOperad kds(pd, -kUnbounded, 0);
  for (const Ring& ring : {Z, Q, F2, F3})
    for (int r = 2; r <= 4; ++r) {
      int lo = 1 - r;
      auto hs = component_homology(kds, r, lo, lo + 2, ring);
      v.require(concentrated(hs, lo, lo, lies.dim(r, lo)),
                "KD(Surj^dual)(" + std::to_string(r) + ") over " + ring.name() + ": " + homology_list(hs, lo));
    }
  v.log << "H(KD(Surj^dual)(r)) matches Lie^s(r) for r <= 4 over z, q, fp:2, fp:3 (degrees 1-r..3-r)";
  return v;
}

Verdict partition_linfty() {
  Verdict v;
  PartitionLInfty p;
  const SurjCooperad& surj = p.pd_surj().cooperad();
  std::size_t gens = 0;
  for (int r = 2; r <= 4; ++r)
    for (int d = 0; d <= 3; ++d) {
      int w = -1 - d;
      for (std::uint32_t i = 0; i < surj.dim(r, d); ++i) {
        Vec c = p.from_tree(FreeOperad::corolla(r, w, i));
        v.require(diff_vec(p, r, w - 1, diff_vec(p, r, w, c)).empty(), "d^2 on " + seq_label(surj.sequence(r, d, i)));
        ++gens;
      }
    }
  v.log << "d^2 = 0 on " << gens << " generators; ";
  LieSOperad lies;
  auto hs = component_homology(p, 3, -5, -1, Q);
  v.require(hs[3].rank == lies.dim(3, -2) && concentrated(hs, -5, -2, 2), "arity 3 over q: " + homology_list(hs, -5));
  v.log << "arity 3 over q: " << homology_list(hs, -5);
  return v;
}

Verdict mixed_composition() {
  Verdict v;
  SpectralPartitionLie plie;
  std::size_t compared = 0;
  for (int r = 1; r <= 4; ++r)
    for (int s = 1; r + s <= 5; ++s)
      for (int du = 0; du <= 2; ++du)
        for (int dv = 0; dv <= 2; ++dv) {
          int d1 = (1 - r) - du, d2 = (1 - s) - dv;
          for (std::uint32_t a = 0; a < plie.dim(r, d1); ++a)
            for (std::uint32_t b = 0; b < plie.dim(s, d2); ++b)
              for (int k = 1; k <= r; ++k) {
                v.require(rule_c_compose(plie, r, d1, a, k, s, d2, b) == plie.compose(r, d1, a, k, s, d2, b),
                          plie.label(r, d1, a) + " o_" + std::to_string(k) + " " + plie.label(s, d2, b));
                ++compared;
              }
        }
  v.log << compared << " compositions agree (r+s <= 5, Surj degrees <= 2)";
  return v;
}

Verdict derived_side() {
  Verdict v;
  for (int r = 1; r <= 4; ++r) check_report(v, check_cocomposition(SdBarCom(r, 3)), "Delta_y r=" + std::to_string(r));
  for (int r = 1; r <= 4; ++r) {
    SdBarCom sd(r, r);
    GComplex x = sd.normalized(Z), b = bar_com_complex(r, Z);
    for (int d = 0; d <= r - 1; ++d)
      v.require(homology(x, d) == homology(b, d), "H(sdBar) vs H(Bar) r=" + std::to_string(r) + " d=" + std::to_string(d));
  }
  v.log << "H(sdBar(r)) = H(Bar(r)) over z for r <= 4; ";
  GComplex l2 = partition_lie_dual_normalized(2, 2, Z);
  v.require(l2.dim(0) == 1 && l2.dim(-1) == 2 && l2.dim(-2) == 0, "normalised Lie^pi_Delta(2) ranks");
  v.log << "normalised Lie^pi_Delta(2) ranks " << l2.dim(0) << " (degree 0), " << l2.dim(-1) << " (degree -1)";
  return v;
}

Verdict norm_and_tame() {
  Verdict v;
  for (Group g : {Group::cyclic(2), Group::cyclic(3), Group::symmetric(3)}) {
    for (const Ring& ring : {Z, F2, F3}) {
      NormMap n = norm(bar_resolution(ring, g, 2));
      for (auto& m : n.components) {
        bool iso = m.rows == m.ncols();
        if (ring == Z) {
          auto ir = integral_rank(m);
          iso = iso && ir.rank == m.rows && ir.torsion.empty();
        } else {
          iso = iso && rank_in(m, ring) == m.rows;
        }
        v.require(iso, "norm map on free " + ring.name() + "[" + g.name() + "]-modules");
      }
    }
  }
  v.log << "norm iso on free modules for C2, C3, S3 over z, fp:2, fp:3; ";

  Ring k = F2;
  EpsComplex y = eps_periodic(k, 0, 6, false, true);
  EpsComplex x = eps_periodic(k, -6, 0, true, false);
  EpsMap f{&y, &x, {}};
  for (int d = 0; d <= 6; ++d) {
    ZMatrix m(x.underlying.dim(d), 2);
    if (d == 0) m.cols[0].push_back({1, 1});  // 1 ↦ ε
    f.components.push_back(m);
  }
  auto ev = tame_equivalence_test_eps(f);
  v.require(ev.quasi_isomorphic && !ev.base_change.equivalence && ev.base_change.witness_degree.has_value(),
            "k[eps]/eps^2 pair");
  v.log << "k[eps]/eps^2 pair quasi-isomorphic, base change fails in degree "
        << ev.base_change.witness_degree.value_or(0) << "; ";

  GComplex p = periodic_resolution(F2, 2, 6);
  auto below = divided_orbits(p, OrbitDirection::BoundedBelowProjective, 5);
  for (auto& h : homology_range(below.complex, below.valid_min, below.valid_max)) v.require(h.rank == 1, "C_*(EC2) orbits");
  auto above = divided_orbits(dual(p), OrbitDirection::BoundedAboveFree, 0);
  for (auto& h : homology_range(above.complex, above.valid_min, above.valid_max)) v.require(h.rank == 1, "C^*(EC2) orbits");
  v.require(below.valid_max - below.valid_min >= 4 && above.valid_max - above.valid_min >= 4, "orbit windows too small");
  v.log << "orbits of C_*(EC2;F2) rank 1 in [" << below.valid_min << "," << below.valid_max << "], of C^*(EC2;F2) rank 1 in ["
        << above.valid_min << "," << above.valid_max << "]";
  return v;
}

Verdict restricted_algebras() {
  Verdict v;
  for (int n = 1; n <= 4; ++n)
    for (const Ring& ring : {Z, F2, F3})
      v.require(gamma2_rank(n, ring) == std::size_t(n * (n + 1) / 2), "Gamma^2 rank n=" + std::to_string(n));
  v.log << "Gamma^2 ranks n(n+1)/2 for n <= 4; ";
  for (const Ring& ring : {F2, F3})
    for (int level = 0; level <= 1; ++level) {
      RestrictedFreeAlgebra alg(ring, 2, level, 4);
      auto rep = check_restricted_relations(alg, 1000, 20261016 + std::uint64_t(level));
      v.require(rep.ok(), rep.summary());
      std::size_t total = 0;
      for (auto& [key, c] : rep.checked) total += c;
      v.log << ring.name() << " level " << level << ": " << total << " relation instances; ";
    }
  return v;
}

// Labelled binary trees with r leaves: (2r-3)!!, times 2^(r-1) for a free generator.
std::size_t binary_trees(int r, bool free_gen) {
  std::size_t n = 1;
  for (int k = 3; k <= 2 * r - 3; k += 2) n *= std::size_t(k);
  return free_gen ? n << (r - 1) : n;
}

Verdict free_operad() {
  Verdict v;
  TruncationPolicy pol{5, 0, 0, OverflowMode::Error};
  FreeSymSeqOperad triv(trivial_symseq(Z, pol, 2, 0));
  FreeSymSeqOperad reg(free_symseq(Z, pol, 2, 0));
  for (int r = 2; r <= 5; ++r) {
    v.require(triv.dim(r, 0) == binary_trees(r, false), "trivial generator rank r=" + std::to_string(r));
    v.require(reg.dim(r, 0) == binary_trees(r, true), "free generator rank r=" + std::to_string(r));
    for (int n = 0; n <= r + 1; ++n) {
      bool full = reg.filtration_dim(r, 0, n) == reg.dim(r, 0);
      v.require(full == (n >= r - 1), "T^(" + std::to_string(n) + ") in arity " + std::to_string(r));
    }
  }
  v.log << "arity 3 ranks " << triv.dim(3, 0) << " and " << reg.dim(3, 0) << ", tree counts agree for r <= 5, T^(n) stable for n >= r-1";
  return v;
}

struct Criterion {
  const char* title;
  Verdict (*run)();
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"surjections cooperad axioms", surj_cooperad_axioms},
      {"surjections homology and retraction", surj_homology},
      {"PD surjections operad is the transpose", pd_transpose},
      {"Koszul duals of Com^nu and Surj^dual", koszul_duals},
      {"partition L-infinity differential", partition_linfty},
      {"mixed composition rule", mixed_composition},
      {"subdivided bar construction", derived_side},
      {"norm and tame toolkit", norm_and_tame},
      {"restricted algebras", restricted_algebras},
      {"free operad filtration", free_operad},
  };
  return all;
}

}  // namespace

std::vector<int> acceptance_ids() {
  std::vector<int> ids;
  for (std::size_t i = 0; i < criteria().size(); ++i) ids.push_back(int(i) + 1);
  return ids;
}

std::string acceptance_title(int id) {
  if (id < 1 || id > int(criteria().size())) throw std::out_of_range("no acceptance criterion " + std::to_string(id));
  return criteria()[id - 1].title;
}

CriterionResult run_criterion(int id) {
  CriterionResult res{id, acceptance_title(id), false, "", 0};
  auto t0 = std::chrono::steady_clock::now();
  try {
    Verdict v = criteria()[id - 1].run();
    res.ok = v.ok;
    res.detail = v.detail();
  } catch (const std::exception& e) {
    res.ok = false;
    res.detail = std::string("exception: ") + e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::string result_line(const CriterionResult& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << (r.ok ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << " (" << r.seconds << " s): " << r.detail;
  return os.str();
}

}  // namespace opcalc
