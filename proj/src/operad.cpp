#include "opcalc/operad.hpp"

#include <algorithm>
#include <sstream>

#include "opcalc/parallel.hpp"

namespace opcalc {

Vec canonical(Vec v) {
  std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
  Vec out;
  for (auto& [i, c] : v) {
    if (!out.empty() && out.back().first == i)
      out.back().second += c;
    else
      out.push_back({i, c});
    if (out.back().second == 0) out.pop_back();
  }
  return out;
}

Vec scaled(const Vec& v, std::int64_t c) {
  if (c == 0) return {};
  Vec out = v;
  for (auto& t : out) t.second *= c;
  return out;
}

void axpy(Vec& acc, std::int64_t c, const Vec& v) {
  if (c == 0 || v.empty()) return;
  for (auto& [i, x] : v) acc.push_back({i, c * x});
  acc = canonical(std::move(acc));
}

bool equal_in(const Vec& a, const Vec& b, const Ring& ring) {
  Vec d = a;
  for (auto& [i, c] : b) d.push_back({i, -c});
  d = canonical(std::move(d));
  for (auto& t : d)
    if (ring.reduce(t.second) != 0) return false;
  return true;
}

int quotient_position(int n, const std::vector<int>& S, int p) {
  (void)n;
  int m = S.front();
  if (std::binary_search(S.begin(), S.end(), p)) return m;
  int below = 0;
  for (int q = 1; q <= p; ++q)
    if (!std::binary_search(S.begin(), S.end(), q)) ++below;
  return below + (m < p ? 1 : 0);
}

int block_position(const std::vector<int>& S, int p) {
  return int(std::lower_bound(S.begin(), S.end(), p) - S.begin()) + 1;
}

Perm block_perm(const Perm& sigma, int k, const Perm& tau) {
  int r = int(sigma.size()), s = int(tau.size());
  int sk = sigma[k - 1] + 1;
  auto shift = [&](int q) { return q < sk ? q : q + s - 1; };
  Perm out(r + s - 1);
  for (int p = 1; p <= r; ++p) {
    if (p == k) continue;
    int pos = p < k ? p : p + s - 1;
    out[pos - 1] = shift(sigma[p - 1] + 1) - 1;
  }
  for (int j = 1; j <= s; ++j) out[k + j - 2] = sk + tau[j - 1] - 1;
  return out;
}

Vec compose_vec(const DgOperad& p, int r, int d1, const Vec& a, int k, int s, int d2, const Vec& b) {
  Vec out;
  for (auto& [i, x] : a)
    for (auto& [j, y] : b)
      for (auto& [w, z] : p.compose(r, d1, i, k, s, d2, j)) out.push_back({w, x * y * z});
  return canonical(std::move(out));
}

Vec act_vec(const DgOperad& p, int r, int d, const Vec& a, const Perm& s) {
  Vec out;
  for (auto& [i, x] : a)
    for (auto& [j, y] : p.act(r, d, i, s)) out.push_back({j, x * y});
  return canonical(std::move(out));
}

Vec diff_vec(const DgOperad& p, int r, int d, const Vec& a) {
  Vec out;
  for (auto& [i, x] : a)
    for (auto& [j, y] : p.diff(r, d, i)) out.push_back({j, x * y});
  return canonical(std::move(out));
}

void CheckReport::fail(const std::string& axiom, const std::string& witness) {
  ++failure_count;
  if (failures.size() < max_failures) failures.push_back(axiom + ": " + witness);
}

void CheckReport::merge(const CheckReport& o) {
  for (auto& [k, v] : o.instances) instances[k] += v;
  failure_count += o.failure_count;
  for (auto& f : o.failures)
    if (failures.size() < max_failures) failures.push_back(f);
}

std::string CheckReport::summary() const {
  std::ostringstream os;
  os << object << ": " << (ok() ? "pass" : "FAIL");
  for (auto& [k, v] : instances) os << " " << k << "=" << v;
  if (!ok()) os << " failures=" << failure_count;
  for (auto& f : failures) os << "\n  " << f;
  return os.str();
}

namespace {

std::vector<Perm> adjacent_transpositions(int n) {
  std::vector<Perm> out;
  for (int i = 0; i + 1 < n; ++i) {
    Perm t = identity_perm(n);
    std::swap(t[i], t[i + 1]);
    out.push_back(t);
  }
  return out;
}

std::string vec_str(const DgOperad& p, int r, int d, const Vec& v) {
  if (v.empty()) return "0";
  std::string s;
  for (auto& [i, c] : v) s += (c < 0 ? " - " : " + ") + std::to_string(std::abs(c)) + "*" + p.label(r, d, i);
  return s;
}

struct OpCell {
  int r, d;
  std::size_t n;
};

}  // namespace

CheckReport check_operad(const DgOperad& p, const Window& w, const Ring& ring) {
  CheckReport rep;
  rep.object = p.name();
  auto unit = p.unit();
  std::vector<OpCell> cells;
  for (int r = 1; r <= w.r_max; ++r)
    for (int d = w.d_min; d <= w.d_max; ++d)
      if (std::size_t n = p.dim(r, d)) cells.push_back({r, d, n});

  // Unary checks: ∂² = 0, ∂ equivariant, units.
  for (auto& c : cells) {
    auto gens = adjacent_transpositions(c.r);
    for (std::uint32_t i = 0; i < c.n; ++i) {
      Vec a{{i, 1}};
      Vec da = p.diff(c.r, c.d, i);
      if (w.contains(c.d - 2)) {
        rep.count("d^2");
        if (!equal_in(diff_vec(p, c.r, c.d - 1, da), {}, ring)) rep.fail("d^2", p.label(c.r, c.d, i));
      }
      if (w.contains(c.d - 1))
        for (auto& g : gens) {
          rep.count("d-equivariance");
          if (!equal_in(diff_vec(p, c.r, c.d, p.act(c.r, c.d, i, g)), act_vec(p, c.r, c.d - 1, da, g), ring))
            rep.fail("d-equivariance", p.label(c.r, c.d, i));
        }
      if (unit) {
        rep.count("unit");
        Vec left = p.compose(1, 0, *unit, 1, c.r, c.d, i);
        if (!equal_in(left, a, ring)) rep.fail("unit", "1 o_1 " + p.label(c.r, c.d, i));
        for (int k = 1; k <= c.r; ++k) {
          Vec right = p.compose(c.r, c.d, i, k, 1, 0, *unit);
          if (!equal_in(right, a, ring)) rep.fail("unit", p.label(c.r, c.d, i) + " o_" + std::to_string(k) + " 1");
        }
      }
    }
  }

  // Binary checks: Leibniz and equivariance.
  std::vector<std::pair<OpCell, OpCell>> pairs;
  for (auto& a : cells)
    for (auto& b : cells)
      if (a.r >= 2 && b.r >= 2 && a.r + b.r - 1 <= w.r_max && w.contains(a.d + b.d)) pairs.push_back({a, b});
  std::vector<CheckReport> partial(thread_count());
  parallel_for(pairs.size(), [&](unsigned worker, std::size_t idx) {
    auto& rp = partial[worker];
    auto [ca, cb] = pairs[idx];
    int r = ca.r, s = cb.r, n = r + s - 1;
    auto gr = adjacent_transpositions(r), gs = adjacent_transpositions(s);
    for (std::uint32_t i = 0; i < ca.n; ++i)
      for (std::uint32_t j = 0; j < cb.n; ++j)
        for (int k = 1; k <= r; ++k) {
          Vec ab = p.compose(r, ca.d, i, k, s, cb.d, j);
          auto wit = [&] {
            return p.label(r, ca.d, i) + " o_" + std::to_string(k) + " " + p.label(s, cb.d, j) + " =" +
                   vec_str(p, n, ca.d + cb.d, ab);
          };
          if (w.contains(ca.d + cb.d - 1)) {
            rp.count("leibniz");
            Vec lhs = diff_vec(p, n, ca.d + cb.d, ab);
            Vec rhs = compose_vec(p, r, ca.d - 1, p.diff(r, ca.d, i), k, s, cb.d, {{j, 1}});
            axpy(rhs, (ca.d % 2 == 0) ? 1 : -1, compose_vec(p, r, ca.d, {{i, 1}}, k, s, cb.d - 1, p.diff(s, cb.d, j)));
            if (!equal_in(lhs, rhs, ring)) rp.fail("leibniz", wit());
          }
          Perm id_r = identity_perm(r), id_s = identity_perm(s);
          auto check_eq = [&](const Perm& sg, const Perm& tau) {
            rp.count("equivariance");
            Vec lhs = act_vec(p, n, ca.d + cb.d, ab, block_perm(sg, k, tau));
            Vec rhs = compose_vec(p, r, ca.d, p.act(r, ca.d, i, sg), sg[k - 1] + 1, s, cb.d, p.act(s, cb.d, j, tau));
            if (!equal_in(lhs, rhs, ring)) rp.fail("equivariance", wit());
          };
          for (auto& g : gr) check_eq(g, id_s);
          for (auto& g : gs) check_eq(id_r, g);
        }
  });
  for (auto& rp : partial) rep.merge(rp);

  // Ternary checks: sequential and parallel associativity.
  std::vector<std::tuple<OpCell, OpCell, OpCell>> triples;
  for (auto& a : cells)
    for (auto& b : cells)
      for (auto& c : cells)
        if (a.r >= 2 && b.r >= 2 && c.r >= 2 && a.r + b.r + c.r - 2 <= w.r_max && w.contains(a.d + b.d) &&
            w.contains(a.d + c.d) && w.contains(b.d + c.d) && w.contains(a.d + b.d + c.d))
          triples.push_back({a, b, c});
  std::vector<CheckReport> partial3(thread_count());
  parallel_for(triples.size(), [&](unsigned worker, std::size_t idx) {
    auto& rp = partial3[worker];
    auto [ca, cb, cc] = triples[idx];
    int r = ca.r, s = cb.r, t = cc.r;
    for (std::uint32_t i = 0; i < ca.n; ++i)
      for (std::uint32_t j = 0; j < cb.n; ++j)
        for (std::uint32_t l = 0; l < cc.n; ++l) {
          auto wit = [&](const std::string& tag) {
            return tag + " " + p.label(r, ca.d, i) + ", " + p.label(s, cb.d, j) + ", " + p.label(t, cc.d, l);
          };
          for (int k = 1; k <= r; ++k) {
            Vec ab = p.compose(r, ca.d, i, k, s, cb.d, j);
            for (int m = 1; m <= s; ++m) {
              rp.count("sequential");
              Vec lhs = compose_vec(p, r + s - 1, ca.d + cb.d, ab, k + m - 1, t, cc.d, {{l, 1}});
              Vec rhs = compose_vec(p, r, ca.d, {{i, 1}}, k, s + t - 1, cb.d + cc.d, p.compose(s, cb.d, j, m, t, cc.d, l));
              if (!equal_in(lhs, rhs, ring)) rp.fail("sequential", wit("k=" + std::to_string(k) + " j=" + std::to_string(m)));
            }
          }
          for (int k = 1; k <= r; ++k)
            for (int m = k + 1; m <= r; ++m) {
              rp.count("parallel");
              // (a ∘_m b) ∘_k c = (-1)^{|b||c|} (a ∘_k c) ∘_{m+t-1} b
              Vec lhs = compose_vec(p, r + s - 1, ca.d + cb.d, p.compose(r, ca.d, i, m, s, cb.d, j), k, t, cc.d, {{l, 1}});
              Vec rhs = compose_vec(p, r + t - 1, ca.d + cc.d, p.compose(r, ca.d, i, k, t, cc.d, l), m + t - 1, s, cb.d,
                                    {{j, 1}});
              if ((cb.d * cc.d) % 2 != 0) rhs = scaled(rhs, -1);
              if (!equal_in(lhs, rhs, ring)) rp.fail("parallel", wit("k=" + std::to_string(k) + " l=" + std::to_string(m)));
            }
        }
  });
  for (auto& rp : partial3) rep.merge(rp);
  return rep;
}

namespace {

using Tensor3 = std::map<std::tuple<int, std::uint32_t, int, std::uint32_t, int, std::uint32_t>, std::int64_t>;
using Tensor2 = std::map<std::tuple<int, std::uint32_t, int, std::uint32_t>, std::int64_t>;

template <class T>
bool tensor_equal(const T& a, const T& b, const Ring& ring) {
  T d = a;
  for (auto& [k, v] : b) d[k] -= v;
  for (auto& [k, v] : d)
    if (ring.reduce(v) != 0) return false;
  return true;
}

std::vector<int> subset(unsigned mask) {
  std::vector<int> s;
  for (int p = 0; mask >> p; ++p)
    if (mask >> p & 1) s.push_back(p + 1);
  return s;
}

Tensor2 as_tensor(const std::vector<DTerm>& ts) {
  Tensor2 out;
  for (auto& t : ts) out[{t.d1, t.a, t.d2, t.b}] += t.coeff;
  return out;
}

std::string tensor_str(const DgCooperad& c, int na, int nb, const Tensor2& t) {
  std::string s;
  for (auto& [k, v] : t) {
    if (v == 0) continue;
    auto [d1, a, d2, b] = k;
    s += (v < 0 ? " - " : " + ") + std::to_string(std::abs(v)) + "*" + c.label(na, d1, a) + "(x)" + c.label(nb, d2, b);
  }
  return s.empty() ? "0" : s;
}

}  // namespace

CheckReport check_cooperad(const DgCooperad& c, const Window& w, const Ring& ring) {
  CheckReport rep;
  rep.object = c.name();
  auto counit = c.counit();
  struct Item {
    int n, d;
    std::uint32_t u;
  };
  std::vector<Item> items;
  for (int n = 1; n <= w.r_max; ++n)
    for (int d = w.d_min; d <= w.d_max; ++d)
      for (std::uint32_t u = 0; u < c.dim(n, d); ++u) items.push_back({n, d, u});

  std::vector<CheckReport> partial(thread_count());
  parallel_for(items.size(), [&](unsigned worker, std::size_t idx) {
    auto& rp = partial[worker];
    auto [n, d, u] = items[idx];
    std::string lab = c.label(n, d, u);
    Vec du = c.diff(n, d, u);
    rp.count("d^2");
    {
      Vec dd;
      for (auto& [j, x] : du) axpy(dd, x, c.diff(n, d - 1, j));
      if (!equal_in(dd, {}, ring)) rp.fail("d^2", lab);
    }
    unsigned full = (1u << n) - 1;
    // counit
    if (counit) {
      for (int p = 1; p <= n; ++p) {
        rp.count("counit");
        Tensor2 got = as_tensor(c.decompose(n, d, u, {p}));
        Tensor2 want{{{d, u, 0, *counit}, 1}};
        if (!tensor_equal(got, want, ring)) rp.fail("counit", lab + " S={" + std::to_string(p) + "}");
      }
      if (n >= 2) {
        rp.count("counit");
        Tensor2 got = as_tensor(c.decompose(n, d, u, subset(full)));
        Tensor2 want{{{0, *counit, d, u}, 1}};
        if (!tensor_equal(got, want, ring)) rp.fail("counit", lab + " S=all");
      }
    }
    auto gens = adjacent_transpositions(n);
    for (unsigned ms = 1; ms < full; ++ms) {
      auto S = subset(ms);
      if (S.size() < 2) continue;
      int ns = int(S.size()), nq = n - ns + 1;
      auto terms = c.decompose(n, d, u, S);
      // co-Leibniz
      {
        rp.count("co-leibniz");
        Tensor2 lhs;
        for (auto& [j, x] : du)
          for (auto& t : c.decompose(n, d - 1, j, S)) lhs[{t.d1, t.a, t.d2, t.b}] += x * t.coeff;
        Tensor2 rhs;
        for (auto& t : terms) {
          for (auto& [a2, y] : c.diff(nq, t.d1, t.a)) rhs[{t.d1 - 1, a2, t.d2, t.b}] += t.coeff * y;
          std::int64_t sg = (t.d1 % 2 == 0) ? 1 : -1;
          for (auto& [b2, y] : c.diff(ns, t.d2, t.b)) rhs[{t.d1, t.a, t.d2 - 1, b2}] += sg * t.coeff * y;
        }
        if (!tensor_equal(lhs, rhs, ring)) rp.fail("co-leibniz", lab + " S=" + std::to_string(ms));
      }
      // equivariance
      for (auto& g : gens) {
        rp.count("co-equivariance");
        std::vector<int> gS;
        for (int p : S) gS.push_back(relabel(g, p));
        std::sort(gS.begin(), gS.end());
        Perm bar(nq), res(ns);
        for (int p = 1; p <= n; ++p) {
          int q = quotient_position(n, S, p), q2 = quotient_position(n, gS, relabel(g, p));
          bar[q - 1] = q2 - 1;
        }
        for (int p : S) res[block_position(S, p) - 1] = block_position(gS, relabel(g, p)) - 1;
        Tensor2 lhs;
        for (auto& [v, x] : c.act(n, d, u, g))
          for (auto& t : c.decompose(n, d, v, gS)) lhs[{t.d1, t.a, t.d2, t.b}] += x * t.coeff;
        Tensor2 rhs;
        for (auto& t : terms)
          for (auto& [a2, y] : c.act(nq, t.d1, t.a, bar))
            for (auto& [b2, z] : c.act(ns, t.d2, t.b, res)) rhs[{t.d1, a2, t.d2, b2}] += t.coeff * y * z;
        if (!tensor_equal(lhs, rhs, ring))
          rp.fail("co-equivariance", lab + " S=" + std::to_string(ms) + " got" + tensor_str(c, nq, ns, lhs) +
                                         " want" + tensor_str(c, nq, ns, rhs));
      }
      // sequential: T ⊊ S
      for (unsigned mt = (ms - 1) & ms; mt; mt = (mt - 1) & ms) {
        auto T = subset(mt);
        if (T.size() < 2 || ms == full) continue;
        rp.count("sequential");
        std::vector<int> T_in_S;
        for (int p : T) T_in_S.push_back(block_position(S, p));
        std::vector<int> S_mod_T;
        for (int p : S) {
          int q = quotient_position(n, T, p);
          if (S_mod_T.empty() || S_mod_T.back() != q) S_mod_T.push_back(q);
        }
        std::sort(S_mod_T.begin(), S_mod_T.end());
        S_mod_T.erase(std::unique(S_mod_T.begin(), S_mod_T.end()), S_mod_T.end());
        Tensor3 lhs, rhs;
        for (auto& t : terms)
          for (auto& t2 : c.decompose(ns, t.d2, t.b, T_in_S))
            lhs[{t.d1, t.a, t2.d1, t2.a, t2.d2, t2.b}] += t.coeff * t2.coeff;
        int nt = int(T.size()), nqt = n - nt + 1;
        for (auto& t : c.decompose(n, d, u, T))
          for (auto& t2 : c.decompose(nqt, t.d1, t.a, S_mod_T))
            rhs[{t2.d1, t2.a, t2.d2, t2.b, t.d2, t.b}] += t.coeff * t2.coeff;
        if (!tensor_equal(lhs, rhs, ring))
          rp.fail("sequential", lab + " S=" + std::to_string(ms) + " T=" + std::to_string(mt));
      }
      // parallel: T disjoint from S
      unsigned rest = full & ~ms;
      for (unsigned mt = rest; mt; mt = (mt - 1) & rest) {
        auto T = subset(mt);
        if (T.size() < 2) continue;
        rp.count("parallel");
        std::vector<int> T_mod_S, S_mod_T;
        for (int p : T) T_mod_S.push_back(quotient_position(n, S, p));
        for (int p : S) S_mod_T.push_back(quotient_position(n, T, p));
        Tensor3 lhs, rhs;
        for (auto& t : terms)
          for (auto& t2 : c.decompose(nq, t.d1, t.a, T_mod_S))
            lhs[{t2.d1, t2.a, t2.d2, t2.b, t.d2, t.b}] += t.coeff * t2.coeff;
        int nt = int(T.size());
        for (auto& t : c.decompose(n, d, u, T))
          for (auto& t2 : c.decompose(n - nt + 1, t.d1, t.a, S_mod_T)) {
            std::int64_t sg = ((t2.d2 * t.d2) % 2 == 0) ? 1 : -1;
            rhs[{t2.d1, t2.a, t.d2, t.b, t2.d2, t2.b}] += sg * t.coeff * t2.coeff;
          }
        if (!tensor_equal(lhs, rhs, ring))
          rp.fail("parallel", lab + " S=" + std::to_string(ms) + " T=" + std::to_string(mt));
      }
    }
  });
  for (auto& rp : partial) rep.merge(rp);
  return rep;
}

ZMatrix diff_matrix(const DgOperad& p, int r, int d) {
  ZMatrix m(p.dim(r, d - 1), p.dim(r, d));
  for (std::uint32_t i = 0; i < m.ncols(); ++i)
    for (auto& [j, c] : p.diff(r, d, i)) m.cols[i].push_back({std::int32_t(j), c});
  return m;
}

ZMatrix diff_matrix(const DgCooperad& c, int r, int d) {
  ZMatrix m(c.dim(r, d - 1), c.dim(r, d));
  for (std::uint32_t i = 0; i < m.ncols(); ++i)
    for (auto& [j, x] : c.diff(r, d, i)) m.cols[i].push_back({std::int32_t(j), x});
  return m;
}

namespace {

template <class Obj>
GComplex component_impl(const Obj& p, int r, int lo, int hi, const Ring& ring) {
  Group g = Group::symmetric(r);
  GComplex x(ring, g, lo, hi);
  for (int d = lo; d <= hi; ++d) {
    std::vector<std::string> labels;
    for (std::uint32_t i = 0; i < p.dim(r, d); ++i) labels.push_back(p.label(r, d, i));
    x.set_basis(d, std::move(labels));
  }
  for (int d = lo + 1; d <= hi; ++d) x.set_diff(d, diff_matrix(p, r, d));
  for (std::size_t gi = 0; gi < g.generators().size(); ++gi) {
    const Perm& s = g.perm(g.generators()[gi]);
    for (int d = lo; d <= hi; ++d) {
      ZMatrix m(x.dim(d), x.dim(d));
      for (std::uint32_t i = 0; i < m.ncols(); ++i)
        for (auto& [j, c] : p.act(r, d, i, s)) m.cols[i].push_back({std::int32_t(j), c});
      x.set_action(gi, d, std::move(m));
    }
  }
  return x;
}

}  // namespace

GComplex component(const DgOperad& p, int r, int lo, int hi, const Ring& ring) {
  return component_impl(p, r, lo, hi, ring);
}
GComplex component(const DgCooperad& c, int r, int lo, int hi, const Ring& ring) {
  return component_impl(c, r, lo, hi, ring);
}

namespace {

// Only the differentials matter here, so the Σ_r action is left out.
template <class Obj>
std::vector<HomologyGroup> component_homology_impl(const Obj& p, int r, int lo, int hi, const Ring& ring) {
  std::vector<ZMatrix> diffs;  // ∂_d for d = lo..hi+1
  for (int d = lo; d <= hi + 1; ++d) {
    diffs.push_back(diff_matrix(p, r, d));
    diffs.back().canonicalize();
  }
  std::vector<HomologyGroup> out;
  for (int d = lo; d <= hi; ++d) out.push_back(homology_of(ring, p.dim(r, d), &diffs[d - lo], &diffs[d - lo + 1]));
  return out;
}

}  // namespace

std::vector<HomologyGroup> component_homology(const DgOperad& p, int r, int lo, int hi, const Ring& ring) {
  return component_homology_impl(p, r, lo, hi, ring);
}
std::vector<HomologyGroup> component_homology(const DgCooperad& c, int r, int lo, int hi, const Ring& ring) {
  return component_homology_impl(c, r, lo, hi, ring);
}

ZMatrix composition_matrix(const DgOperad& p, int r, int d1, int k, int s, int d2) {
  std::size_t n1 = p.dim(r, d1), n2 = p.dim(s, d2);
  ZMatrix m(p.dim(r + s - 1, d1 + d2), n1 * n2);
  for (std::uint32_t a = 0; a < n1; ++a)
    for (std::uint32_t b = 0; b < n2; ++b)
      for (auto& [w, c] : p.compose(r, d1, a, k, s, d2, b)) m.cols[a * n2 + b].push_back({std::int32_t(w), c});
  return m;
}

ZMatrix decomposition_matrix(const DgCooperad& c, int n, const std::vector<int>& S, int d1, int d2) {
  int s = int(S.size());
  std::size_t n1 = c.dim(n - s + 1, d1), n2 = c.dim(s, d2);
  ZMatrix m(n1 * n2, c.dim(n, d1 + d2));
  for (std::uint32_t u = 0; u < m.ncols(); ++u) {
    for (auto& t : c.decompose(n, d1 + d2, u, S))
      if (t.d1 == d1 && t.d2 == d2) m.cols[u].push_back({std::int32_t(t.a * n2 + t.b), t.coeff});
    std::sort(m.cols[u].begin(), m.cols[u].end());
  }
  m.canonicalize();
  return m;
}

// ---- transposes -------------------------------------------------------------

namespace {

// π with π(block position k+j-1) = S_j, order preserving on the complement, so
// that Δ_S(w) = Δ_block(π⁻¹·w).
Perm block_to_subset(int n, const std::vector<int>& S) {
  int k = S.front(), s = int(S.size());
  std::vector<int> comp;
  for (int p = 1; p <= n; ++p)
    if (!std::binary_search(S.begin(), S.end(), p)) comp.push_back(p);
  Perm pi(n);
  for (int q = 1; q <= n; ++q) {
    int img;
    if (q >= k && q < k + s)
      img = S[q - k];
    else if (q < k)
      img = q;
    else
      img = comp[q - s - 1];
    pi[q - 1] = img - 1;
  }
  return pi;
}

// Map nodes are never erased, so the reference stays valid.
const ZMatrix& transposed_diff(std::mutex& mu, std::map<std::pair<int, int>, ZMatrix>& cache, int r, int d,
                               const std::function<ZMatrix()>& build) {
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({r, d});
    if (it != cache.end()) return it->second;
  }
  ZMatrix t = build().transpose();
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::pair{r, d}, std::move(t)).first->second;
}

}  // namespace

Vec TransposeOperad::diff(int r, int d, std::uint32_t i) const {
  // ∂ on P(r,d) = C(r,-d)^∨ is the transpose of ∂: C(r,-d+1) → C(r,-d).
  const ZMatrix& t = transposed_diff(mu_, diff_t_, r, d, [&] { return diff_matrix(c_, r, -d + 1); });
  Vec out;
  for (auto& [row, x] : t.cols[i]) out.push_back({std::uint32_t(row), x});
  return out;
}

Vec TransposeOperad::act(int r, int d, std::uint32_t i, const Perm& s) const {
  Vec img = c_.act(r, -d, i, s);
  if (img.size() == 1 && (img[0].second == 1 || img[0].second == -1)) return img;
  // general case: (σ·f)(w) = f(σ⁻¹·w)
  Perm inv = inverse(s);
  Vec out;
  for (std::uint32_t j = 0; j < c_.dim(r, -d); ++j)
    for (auto& [k, x] : c_.act(r, -d, j, inv))
      if (k == i) out.push_back({j, x});
  return canonical(out);
}

Vec TransposeOperad::compose(int r, int d1, std::uint32_t a, int k, int s, int d2, std::uint32_t b) const {
  int n = r + s - 1, D = -(d1 + d2);
  std::shared_ptr<Table> table;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = comp_t_.find({n, k, s, D});
    if (it != comp_t_.end()) table = it->second;
  }
  if (!table) {
    table = std::make_shared<Table>();
    std::vector<int> S;
    for (int j = 0; j < s; ++j) S.push_back(k + j);
    for (std::uint32_t w = 0; w < c_.dim(n, D); ++w)
      for (auto& t : c_.decompose(n, D, w, S)) (*table)[{t.d1, t.a, t.d2, t.b}].push_back({w, t.coeff});
    for (auto& [key, v] : *table) v = canonical(std::move(v));
    std::lock_guard<std::mutex> lock(mu_);
    comp_t_.emplace(std::tuple{n, k, s, D}, table);
  }
  auto it = table->find({-d1, a, -d2, b});
  return it == table->end() ? Vec{} : it->second;
}

Vec TransposeCooperad::diff(int n, int d, std::uint32_t i) const {
  const ZMatrix& t = transposed_diff(mu_, diff_t_, n, d, [&] { return diff_matrix(p_, n, -d + 1); });
  Vec out;
  for (auto& [row, x] : t.cols[i]) out.push_back({std::uint32_t(row), x});
  return out;
}

Vec TransposeCooperad::act(int n, int d, std::uint32_t i, const Perm& s) const {
  Vec img = p_.act(n, -d, i, s);
  if (img.size() == 1 && (img[0].second == 1 || img[0].second == -1)) return img;
  Perm inv = inverse(s);
  Vec out;
  for (std::uint32_t j = 0; j < p_.dim(n, -d); ++j)
    for (auto& [k, x] : p_.act(n, -d, j, inv))
      if (k == i) out.push_back({j, x});
  return canonical(out);
}

std::vector<DTerm> TransposeCooperad::decompose(int n, int d, std::uint32_t u, const std::vector<int>& S) const {
  int k = S.front(), s = int(S.size()), r = n - s + 1;
  std::shared_ptr<std::vector<std::vector<DTerm>>> table;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = comp_t_.find({n, k, s, d});
    if (it != comp_t_.end()) table = it->second;
  }
  if (!table) {
    table = std::make_shared<std::vector<std::vector<DTerm>>>(p_.dim(n, -d));
    for (int d1 = -hi_; d1 <= -lo_; ++d1) {
      int d2 = d - d1;
      if (-d2 < lo_ || -d2 > hi_) continue;
      for (std::uint32_t a = 0; a < p_.dim(r, -d1); ++a)
        for (std::uint32_t b = 0; b < p_.dim(s, -d2); ++b)
          for (auto& [w, x] : p_.compose(r, -d1, a, k, s, -d2, b)) (*table)[w].push_back({x, d1, a, d2, b});
    }
    std::lock_guard<std::mutex> lock(mu_);
    comp_t_.emplace(std::tuple{n, k, s, d}, table);
  }
  Vec src = act(n, d, u, inverse(block_to_subset(n, S)));
  std::vector<DTerm> out;
  for (auto& [w, x] : src)
    for (auto t : (*table)[w]) {
      t.coeff *= x;
      out.push_back(t);
    }
  return out;
}

// ---- levelwise tensor -------------------------------------------------------

std::size_t LevTensorOperad::dim(int r, int d) const {
  std::size_t n = 0;
  for (int dp = p_lo_; dp <= p_hi_; ++dp) n += p_.dim(r, dp) * q_.dim(r, d - dp);
  return n;
}

LevTensorOperad::Pair LevTensorOperad::split(int r, int d, std::uint32_t idx) const {
  std::size_t off = 0;
  for (int dp = p_lo_; dp <= p_hi_; ++dp) {
    std::size_t nq = q_.dim(r, d - dp), block = p_.dim(r, dp) * nq;
    if (idx < off + block) {
      std::size_t rel = idx - off;
      return {dp, std::uint32_t(rel / nq), std::uint32_t(rel % nq)};
    }
    off += block;
  }
  throw std::out_of_range("LevTensorOperad: index out of range");
}

std::uint32_t LevTensorOperad::join(int r, int d, const Pair& pr) const {
  std::size_t off = 0;
  for (int dp = p_lo_; dp < pr.dp; ++dp) off += p_.dim(r, dp) * q_.dim(r, d - dp);
  return std::uint32_t(off + pr.i * q_.dim(r, d - pr.dp) + pr.j);
}

std::string LevTensorOperad::label(int r, int d, std::uint32_t i) const {
  auto pr = split(r, d, i);
  return p_.label(r, pr.dp, pr.i) + "(x)" + q_.label(r, d - pr.dp, pr.j);
}

Vec LevTensorOperad::diff(int r, int d, std::uint32_t i) const {
  auto pr = split(r, d, i);
  int dq = d - pr.dp;
  Vec out;
  for (auto& [x, c] : p_.diff(r, pr.dp, pr.i)) out.push_back({join(r, d - 1, {pr.dp - 1, x, pr.j}), c});
  std::int64_t sg = (pr.dp % 2 == 0) ? 1 : -1;
  for (auto& [y, c] : q_.diff(r, dq, pr.j)) out.push_back({join(r, d - 1, {pr.dp, pr.i, y}), sg * c});
  return canonical(std::move(out));
}

Vec LevTensorOperad::act(int r, int d, std::uint32_t i, const Perm& s) const {
  auto pr = split(r, d, i);
  Vec out;
  for (auto& [x, c] : p_.act(r, pr.dp, pr.i, s))
    for (auto& [y, e] : q_.act(r, d - pr.dp, pr.j, s)) out.push_back({join(r, d, {pr.dp, x, y}), c * e});
  return canonical(std::move(out));
}

Vec LevTensorOperad::compose(int r, int d1, std::uint32_t a, int k, int s, int d2, std::uint32_t b) const {
  auto pa = split(r, d1, a), pb = split(s, d2, b);
  int qa = d1 - pa.dp;
  std::int64_t sg = ((qa * pb.dp) % 2 == 0) ? 1 : -1;
  int n = r + s - 1, dp = pa.dp + pb.dp;
  Vec px = p_.compose(r, pa.dp, pa.i, k, s, pb.dp, pb.i);
  if (px.empty()) return {};
  Vec qx = q_.compose(r, qa, pa.j, k, s, d2 - pb.dp, pb.j);
  Vec out;
  for (auto& [x, c] : px)
    for (auto& [y, e] : qx) out.push_back({join(n, d1 + d2, {dp, x, y}), sg * c * e});
  return canonical(std::move(out));
}

std::optional<std::uint32_t> LevTensorOperad::unit() const {
  auto up = p_.unit(), uq = q_.unit();
  if (!up || !uq) return std::nullopt;
  return join(1, 0, {0, *up, *uq});
}

// ---- Ass ---------------------------------------------------------------------

namespace {

std::uint32_t word_rank(const Perm& w) {
  std::uint32_t idx = 0;
  int n = int(w.size());
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (w[j] < w[i]) ++smaller;
    idx += std::uint32_t(smaller * factorial(n - 1 - i));
  }
  return idx;
}

Perm word_of(int r, std::uint32_t i) {
  std::vector<int> pool(r);
  for (int x = 0; x < r; ++x) pool[x] = x;
  Perm w;
  for (int pos = 0; pos < r; ++pos) {
    std::uint64_t f = factorial(r - 1 - pos);
    w.push_back(pool[i / f]);
    pool.erase(pool.begin() + long(i / f));
    i %= std::uint32_t(f);
  }
  return w;
}

}  // namespace

std::string AssOperad::label(int r, int, std::uint32_t i) const {
  std::string out;
  for (int x : word_of(r, i)) out += std::to_string(x + 1);
  return out;
}

Vec AssOperad::act(int r, int, std::uint32_t i, const Perm& s) const {
  Perm w = word_of(r, i);
  for (int& x : w) x = s[x];
  return {{word_rank(w), 1}};
}

Vec AssOperad::compose(int r, int, std::uint32_t a, int k, int s, int, std::uint32_t b) const {
  Perm wa = word_of(r, a), wb = word_of(s, b), out;
  for (int x : wa) {
    if (x < k - 1)
      out.push_back(x);
    else if (x > k - 1)
      out.push_back(x + s - 1);
    else
      for (int y : wb) out.push_back(y + k - 1);
  }
  return {{word_rank(out), 1}};
}

}  // namespace opcalc
