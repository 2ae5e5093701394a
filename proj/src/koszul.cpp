#include "opcalc/koszul.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "opcalc/parallel.hpp"

namespace opcalc {

namespace {

int sgn(long x) { return (x % 2 + 2) % 2 ? -1 : 1; }

// γ(x; q_1, …, q_k) by left-to-right partial compositions; the inputs of the result
// are those of q_1, then q_2, and so on.
struct Piece {
  int arity, deg;
  std::uint32_t idx;
};
Vec gamma(const DgOperad& p, int k, int xd, std::uint32_t x, const std::vector<Piece>& qs) {
  Vec cur{{x, 1}};
  int arity = k, deg = xd, pos = 1;
  for (const Piece& q : qs) {
    if (cur.empty()) return {};
    cur = compose_vec(p, arity, deg, cur, pos, q.arity, q.deg, Vec{{q.idx, 1}});
    pos += q.arity;
    arity += q.arity - 1;
    deg += q.deg;
  }
  return cur;
}

// Leaves of the top vertices of a tree (vertices with only leaves as inputs).
std::vector<std::vector<int>> top_vertex_leaves(const Tree& t) {
  std::vector<std::vector<int>> out;
  auto leaves = vertex_leaves(t);
  for (std::size_t v = 0; v < t.v.size(); ++v)
    if (std::all_of(t.v[v].in.begin(), t.v[v].in.end(), [](int c) { return c < 0; })) out.push_back(leaves[v]);
  return out;
}

// Koszul sign of x ⊗ f_1 ⊗ … ⊗ f_m ↦ (f_i, i < ℓ_1, i ∉ L) ⊗ x ⊗ (f_ℓ, ℓ ∈ L) ⊗ (rest).
int gather_sign(int xdeg, const std::vector<int>& fdeg, const std::vector<int>& L) {
  std::vector<int> deg{xdeg};
  deg.insert(deg.end(), fdeg.begin(), fdeg.end());
  std::vector<char> in(fdeg.size() + 1, 0);
  for (int l : L) in[l] = 1;
  std::vector<int> order;
  for (int i = 1; i < L.front(); ++i) order.push_back(i);
  order.push_back(0);
  for (int l : L) order.push_back(l);
  for (int i = L.front() + 1; i <= int(fdeg.size()); ++i)
    if (!in[i]) order.push_back(i);
  return koszul_sign(deg, order);
}

// Permutation taking the concatenation of the sorted blocks B_ℓ (ℓ ∈ L) to the
// sorted union.
Perm shuffle_to_union(const std::vector<std::vector<int>>& blocks) {
  std::vector<int> cat;
  for (auto& b : blocks) cat.insert(cat.end(), b.begin(), b.end());
  std::vector<int> sorted = cat;
  std::sort(sorted.begin(), sorted.end());
  Perm s(cat.size());
  for (std::size_t i = 0; i < cat.size(); ++i) s[i] = int(std::lower_bound(sorted.begin(), sorted.end(), cat[i]) - sorted.begin());
  return s;
}

}  // namespace

std::size_t IntVecHash::operator()(const std::vector<int>& v) const {
  std::size_t h = v.size();
  for (int x : v) h ^= std::size_t(x + 0x1000) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

// ---------------------------------------------------------------- K(P)

KoszulComplex::KoszulComplex(const DgOperad& p, int p_lo, int p_hi) : p_(p), lo_(p_lo), hi_(p_hi), bar_(p, p_lo, p_hi) {
  if (p_lo <= -kUnbounded || p_hi >= kUnbounded) throw InfiniteRankInWindow("the Koszul complex needs a finite degree window for P");
}

std::vector<int> KoszulComplex::encode(const Elem& e) {
  std::vector<int> k;
  k.push_back(int(e.block_of.size()));
  k.push_back(int(e.dec.size()));
  k.insert(k.end(), e.block_of.begin(), e.block_of.end());
  k.push_back(e.dt);
  k.push_back(int(e.t));
  for (auto& [d, i] : e.dec) {
    k.push_back(d);
    k.push_back(int(i));
  }
  return k;
}

KoszulComplex::Elem KoszulComplex::decode(const std::vector<int>& k) {
  Elem e;
  int n = k[0], m = k[1];
  e.block_of.assign(k.begin() + 2, k.begin() + 2 + n);
  e.dt = k[2 + n];
  e.t = std::uint32_t(k[3 + n]);
  for (int i = 0; i < m; ++i) e.dec.push_back({k[4 + n + 2 * i], std::uint32_t(k[5 + n + 2 * i])});
  return e;
}

std::pair<int, int> KoszulComplex::degree_bounds(int n) const {
  long lo = kUnbounded, hi = -kUnbounded;
  for (int m = 1; m <= n; ++m) {
    auto [bl, bh] = bar_.basis().weight_bounds(m);
    if (bl > bh) continue;
    // decorations contribute at most (n - m) · max(|lo|, |hi|)
    long span = long(n - m) * std::max(std::abs(lo_), std::abs(hi_));
    lo = std::min(lo, bl - span);
    hi = std::max(hi, bh + span);
  }
  return {int(lo), int(hi)};
}

const BasisCell<std::vector<int>, IntVecHash>& KoszulComplex::cell(int n, int d) const {
  return cache_.get(n, d, [this](int n0, int d0, BasisCell<std::vector<int>, IntVecHash>& out) {
    if (n0 < 1) return;
    std::uint32_t unit = *p_.unit();
    for (int m = 1; m <= n0; ++m) {
      auto [bl, bh] = bar_.basis().weight_bounds(m);
      for_each_set_partition(n0, m, [&](const std::vector<std::vector<int>>& blocks) {
        Elem e;
        e.block_of.assign(n0, 0);
        for (int b = 0; b < m; ++b)
          for (int x : blocks[b]) e.block_of[x - 1] = b;
        e.dec.assign(m, {0, 0});
        for (long dt = bl; dt <= bh; ++dt) {
          std::size_t nt = bar_.dim(m, int(dt));
          if (nt == 0) continue;
          e.dt = int(dt);
          std::function<void(int, int)> rec = [&](int b, int rest) {
            if (b == m) {
              if (rest != 0) return;
              for (std::uint32_t t = 0; t < nt; ++t) {
                e.t = t;
                out.add(encode(e));
              }
              return;
            }
            int sz = int(blocks[b].size());
            if (sz == 1) {
              e.dec[b] = {0, unit};
              rec(b + 1, rest);
              return;
            }
            for (int dd = lo_; dd <= hi_; ++dd)
              for (std::uint32_t q = 0; q < p_.dim(sz, dd); ++q) {
                e.dec[b] = {dd, q};
                rec(b + 1, rest - dd);
              }
          };
          rec(0, d0 - int(dt));
        }
      });
    }
  });
}

Vec KoszulComplex::canon(int n, const Elem& e) const {
  int m = int(e.dec.size());
  std::vector<int> mins(m, 1 << 30);
  for (int p = 0; p < n; ++p) mins[e.block_of[p]] = std::min(mins[e.block_of[p]], p + 1);
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return mins[a] < mins[b]; });
  Perm tau(m);
  for (int j = 0; j < m; ++j) tau[order[j]] = j;
  std::vector<int> degs(m);
  for (int b = 0; b < m; ++b) degs[b] = e.dec[b].first;
  int sign = koszul_sign(degs, order);
  Elem c;
  c.block_of.resize(n);
  for (int p = 0; p < n; ++p) c.block_of[p] = tau[e.block_of[p]];
  c.dt = e.dt;
  for (int j = 0; j < m; ++j) c.dec.push_back(e.dec[order[j]]);
  int total = e.dt;
  for (auto& [dd, q] : e.dec) total += dd;
  const auto& cl = cell(n, total);
  Vec out;
  for (auto& [t, coeff] : bar_.act(m, e.dt, e.t, tau)) {
    c.t = t;
    auto idx = cl.find(encode(c));
    if (!idx) throw std::logic_error("Koszul complex element missing from its cell");
    out.push_back({*idx, coeff * sign});
  }
  return canonical(std::move(out));
}

std::string KoszulComplex::label(int n, int d, std::uint32_t i) const {
  Elem e = elem(n, d, i);
  int m = int(e.dec.size());
  std::string s = bar_.label(m, e.dt, e.t) + " |";
  for (int b = 0; b < m; ++b) {
    s += " {";
    bool first = true;
    for (int p = 0; p < n; ++p)
      if (e.block_of[p] == b) {
        s += (first ? "" : ",") + std::to_string(p + 1);
        first = false;
      }
    int sz = 0;
    for (int x : e.block_of) sz += x == b;
    s += "}:" + p_.label(sz, e.dec[b].first, e.dec[b].second);
  }
  return s;
}

Vec KoszulComplex::diff(int n, int d, std::uint32_t i) const { return diff_impl(n, d, i, 0); }
Vec KoszulComplex::diff_avoiding(int n, int d, std::uint32_t i, int leaf) const { return diff_impl(n, d, i, leaf); }

Vec KoszulComplex::diff_impl(int n, int d, std::uint32_t i, int avoid) const {
  Elem e = elem(n, d, i);
  int m = int(e.dec.size());
  std::vector<std::vector<int>> blocks(m);
  for (int p = 0; p < n; ++p) blocks[e.block_of[p]].push_back(p + 1);
  std::vector<int> fdeg(m);
  for (int b = 0; b < m; ++b) fdeg[b] = e.dec[b].first;
  Vec out;
  // ∂_Bar
  for (auto& [t, c] : bar_.diff(m, e.dt, e.t)) {
    Elem f = e;
    f.t = t;
    f.dt -= 1;
    axpy(out, c, canon(n, f));
  }
  // ∂_P on the decorations
  int before = e.dt;
  for (int b = 0; b < m; ++b) {
    int sz = int(blocks[b].size());
    for (auto& [q, c] : p_.diff(sz, e.dec[b].first, e.dec[b].second)) {
      Elem f = e;
      f.dec[b] = {e.dec[b].first - 1, q};
      axpy(out, sgn(before) * c, canon(n, f));
    }
    before += e.dec[b].first;
  }
  // ∂_τ at each top vertex
  const Tree& tree = bar_.basis().tree(m, e.dt, e.t);
  int avoid_block = avoid > 0 ? e.block_of[avoid - 1] + 1 : 0;
  for (const auto& L : top_vertex_leaves(tree)) {
    if (avoid_block && std::binary_search(L.begin(), L.end(), avoid_block)) continue;
    for (const DTerm& cut : bar_.decompose(m, e.dt, e.t, L)) {
      const Tree& x = bar_.basis().tree(int(L.size()), cut.d2, cut.b);
      int xd = cut.d2 - 1;
      std::int64_t sign = cut.coeff * sgn(cut.d1) * gather_sign(xd, fdeg, L);
      std::vector<Piece> qs;
      std::vector<std::vector<int>> lb;
      for (int l : L) {
        qs.push_back({int(blocks[l - 1].size()), e.dec[l - 1].first, e.dec[l - 1].second});
        lb.push_back(blocks[l - 1]);
      }
      Vec g = gamma(p_, x.v[0].arity, xd, x.v[0].label, qs);
      if (g.empty()) continue;
      Perm sh = shuffle_to_union(lb);
      int gd = xd;
      for (auto& q : qs) gd += q.deg;
      int gsz = int(sh.size());
      Vec gs = act_vec(p_, gsz, gd, g, sh);
      Elem f;
      f.dt = cut.d1;
      f.t = cut.a;
      int m2 = m - int(L.size()) + 1;
      f.dec.assign(m2, {0, 0});
      std::vector<int> newb(m);
      for (int b = 1; b <= m; ++b) newb[b - 1] = quotient_position(m, L, b) - 1;
      f.block_of.resize(n);
      for (int p = 0; p < n; ++p) f.block_of[p] = newb[e.block_of[p]];
      for (int b = 1; b <= m; ++b)
        if (!std::binary_search(L.begin(), L.end(), b)) f.dec[newb[b - 1]] = e.dec[b - 1];
      int merged = newb[L.front() - 1];
      for (auto& [q, c] : gs) {
        f.dec[merged] = {gd, q};
        axpy(out, sign * c, canon(n, f));
      }
    }
  }
  return out;
}

Vec KoszulComplex::act(int n, int d, std::uint32_t i, const Perm& s) const {
  Elem e = elem(n, d, i);
  int m = int(e.dec.size());
  std::vector<std::vector<int>> blocks(m);
  for (int p = 0; p < n; ++p) blocks[e.block_of[p]].push_back(p + 1);
  Elem f = e;
  for (int p = 0; p < n; ++p) f.block_of[s[p]] = e.block_of[p];
  std::vector<Vec> decs(m);
  for (int b = 0; b < m; ++b) {
    const auto& B = blocks[b];
    std::vector<int> img;
    for (int x : B) img.push_back(s[x - 1] + 1);
    std::vector<int> sorted = img;
    std::sort(sorted.begin(), sorted.end());
    Perm rho(B.size());
    for (std::size_t j = 0; j < B.size(); ++j) rho[j] = int(std::lower_bound(sorted.begin(), sorted.end(), img[j]) - sorted.begin());
    decs[b] = p_.act(int(B.size()), e.dec[b].first, e.dec[b].second, rho);
  }
  Vec out;
  std::vector<std::size_t> pick(m, 0);
  for (auto& v : decs)
    if (v.empty()) return {};
  while (true) {
    std::int64_t c = 1;
    for (int b = 0; b < m; ++b) {
      f.dec[b].second = decs[b][pick[b]].first;
      c *= decs[b][pick[b]].second;
    }
    axpy(out, c, canon(n, f));
    int b = 0;
    for (; b < m; ++b) {
      if (++pick[b] < decs[b].size()) break;
      pick[b] = 0;
    }
    if (b == m) break;
  }
  return out;
}

Vec KoszulComplex::compose_right(int n, int d1, std::uint32_t k, int j, int s, int d2, std::uint32_t q) const {
  Elem e = elem(n, d1, k);
  int m = int(e.dec.size());
  int bi = e.block_of[j - 1];
  std::vector<int> B;
  for (int p = 1; p <= n; ++p)
    if (e.block_of[p - 1] == bi) B.push_back(p);
  int jp = block_position(B, j);
  int after = 0;
  for (int b = bi + 1; b < m; ++b) after += e.dec[b].first;
  std::int64_t sign = sgn(long(d2) * after);
  Vec nd = p_.compose(int(B.size()), e.dec[bi].first, e.dec[bi].second, jp, s, d2, q);
  Elem f = e;
  f.block_of.clear();
  for (int p = 1; p <= n + s - 1; ++p) {
    if (p < j) f.block_of.push_back(e.block_of[p - 1]);
    else if (p < j + s) f.block_of.push_back(bi);
    else f.block_of.push_back(e.block_of[p - s]);
  }
  Vec out;
  for (auto& [x, c] : nd) {
    f.dec[bi] = {e.dec[bi].first + d2, x};
    axpy(out, sign * c, canon(n + s - 1, f));
  }
  return out;
}

std::vector<DTerm> KoszulComplex::coact(int n, int d, std::uint32_t i, const std::vector<int>& S) const {
  Elem e = elem(n, d, i);
  int m = int(e.dec.size());
  std::vector<int> L;
  for (int p : S) L.push_back(e.block_of[p - 1] + 1);
  std::sort(L.begin(), L.end());
  L.erase(std::unique(L.begin(), L.end()), L.end());
  std::size_t covered = 0;
  for (int p = 1; p <= n; ++p)
    if (std::binary_search(L.begin(), L.end(), e.block_of[p - 1] + 1)) ++covered;
  if (covered != S.size()) return {};
  std::vector<int> fdeg(m);
  for (int b = 0; b < m; ++b) fdeg[b] = e.dec[b].first;
  std::uint32_t unit = *p_.unit();
  int n1 = n - int(S.size()) + 1, m1 = m - int(L.size()) + 1;
  std::vector<DTerm> out;
  for (const DTerm& cut : bar_.decompose(m, e.dt, e.t, L)) {
    // T1 ⊗ T2 ⊗ p_1 … p_m  ↦  T1 ⊗ (p_b, b ∉ L) ⊗ T2 ⊗ (p_ℓ, ℓ ∈ L)
    std::vector<int> deg{cut.d1, cut.d2};
    deg.insert(deg.end(), fdeg.begin(), fdeg.end());
    std::vector<int> order{0};
    for (int b = 1; b <= m; ++b)
      if (!std::binary_search(L.begin(), L.end(), b)) order.push_back(b + 1);
    order.push_back(1);
    for (int l : L) order.push_back(l + 1);
    std::int64_t sign = cut.coeff * koszul_sign(deg, order);

    Elem f;
    f.dt = cut.d1;
    f.t = cut.a;
    f.block_of.resize(n1);
    f.dec.assign(m1, {0, unit});
    int deg1 = cut.d1;
    for (int p = 1; p <= n; ++p) {
      int b = e.block_of[p - 1] + 1;
      f.block_of[quotient_position(n, S, p) - 1] = quotient_position(m, L, b) - 1;
    }
    for (int b = 1; b <= m; ++b)
      if (!std::binary_search(L.begin(), L.end(), b)) {
        f.dec[quotient_position(m, L, b) - 1] = e.dec[b - 1];
        deg1 += e.dec[b - 1].first;
      }
    Elem g;
    g.dt = cut.d2;
    g.t = cut.b;
    g.block_of.resize(S.size());
    int deg2 = cut.d2;
    for (int p : S) g.block_of[block_position(S, p) - 1] = block_position(L, e.block_of[p - 1] + 1) - 1;
    for (int l : L) {
      g.dec.push_back(e.dec[l - 1]);
      deg2 += e.dec[l - 1].first;
    }
    Vec a = canon(n1, f), b = canon(int(S.size()), g);
    for (auto& [ia, ca] : a)
      for (auto& [ib, cb] : b) out.push_back({sign * ca * cb, deg1, ia, deg2, ib});
  }
  return out;
}

GComplex KoszulComplex::component(int n, int lo, int hi, const Ring& ring) const {
  Group g = Group::symmetric(n);
  GComplex x(ring, g, lo, hi);
  for (int d = lo; d <= hi; ++d) {
    std::vector<std::string> labels;
    for (std::uint32_t i = 0; i < dim(n, d); ++i) labels.push_back(label(n, d, i));
    x.set_basis(d, std::move(labels));
  }
  for (int d = lo + 1; d <= hi; ++d) {
    ZMatrix m(dim(n, d - 1), dim(n, d));
    parallel_for(m.ncols(), [&](std::size_t, std::size_t i) {
      for (auto& [j, c] : diff(n, d, std::uint32_t(i))) m.cols[i].push_back({std::int32_t(j), c});
    });
    x.set_diff(d, std::move(m));
  }
  for (std::size_t gi = 0; gi < g.generators().size(); ++gi) {
    const Perm& s = g.perm(g.generators()[gi]);
    for (int d = lo; d <= hi; ++d) {
      ZMatrix m(dim(n, d), dim(n, d));
      for (std::uint32_t i = 0; i < m.ncols(); ++i)
        for (auto& [j, c] : act(n, d, i, s)) m.cols[i].push_back({std::int32_t(j), c});
      x.set_action(gi, d, std::move(m));
    }
  }
  return x;
}

// ---------------------------------------------------------------- algebras

namespace {

using Arg = std::pair<int, std::uint32_t>;

Vec alg_act(const PAlgebra& a, int r, int d, std::uint32_t x, const std::vector<Arg>& args) {
  if (r == 1) return {{args[0].second, 1}};
  return a.act(r, d, x, args);
}

std::string args_str(const PAlgebra& a, const std::vector<Arg>& args) {
  std::string s;
  for (auto& [d, i] : args) s += (s.empty() ? "" : ",") + a.a.basis(d).at(i);
  return s;
}

}  // namespace

void verify_algebra(const DgOperad& p, const PAlgebra& a, int r_max, int lo, int hi) {
  const GComplex& A = a.a;
  const Ring& ring = A.ring();
  std::vector<Arg> all;
  for (int d = A.d_min(); d <= A.d_max(); ++d)
    for (std::uint32_t i = 0; i < A.dim(d); ++i) all.push_back({d, i});
  auto fail = [&](const std::string& what, int r, int d, std::uint32_t x, const std::vector<Arg>& args) {
    throw StructureMapsNotAssociative(what + " fails at " + p.label(r, d, x) + "(" + args_str(a, args) + ")");
  };
  auto tuples = [&](int r, const std::function<void(const std::vector<Arg>&)>& f) {
    std::vector<Arg> cur(r);
    std::function<void(int)> rec = [&](int j) {
      if (j == r) return f(cur);
      for (auto& x : all) {
        cur[j] = x;
        rec(j + 1);
      }
    };
    rec(0);
  };
  auto dA = [&](int d, const Vec& v) {
    Vec out;
    if (d - 1 < A.d_min()) return out;
    for (auto& [i, c] : v)
      for (auto& [j, e] : A.diff(d).cols.at(i)) axpy(out, c * e, Vec{{std::uint32_t(j), 1}});
    return out;
  };
  for (int r = 2; r <= r_max; ++r)
    for (int d = lo; d <= hi; ++d)
      for (std::uint32_t x = 0; x < p.dim(r, d); ++x)
        tuples(r, [&](const std::vector<Arg>& args) {
          int ad = d;
          for (auto& g : args) ad += g.first;
          Vec val = alg_act(a, r, d, x, args);
          // ∂γ(x; a) = γ(∂x; a) + (-1)^{|x|} Σ ± γ(x; …, ∂a_i, …)
          Vec lhs = dA(ad, val), rhs;
          if (d - 1 >= lo)
            for (auto& [y, c] : p.diff(r, d, x)) axpy(rhs, c, alg_act(a, r, d - 1, y, args));
          int before = d;
          for (int i = 0; i < r; ++i) {
            if (args[i].first - 1 >= A.d_min())
              for (auto& [j, e] : A.diff(args[i].first).cols.at(args[i].second)) {
                auto b2 = args;
                b2[i] = {args[i].first - 1, std::uint32_t(j)};
                axpy(rhs, sgn(before) * e, alg_act(a, r, d, x, b2));
              }
            before += args[i].first;
          }
          if (!equal_in(lhs, rhs, ring)) fail("compatibility with the differential", r, d, x, args);
          // equivariance under adjacent transpositions
          for (int i = 0; i + 1 < r; ++i) {
            Perm s = identity_perm(r);
            std::swap(s[i], s[i + 1]);
            auto b2 = args;
            std::swap(b2[i], b2[i + 1]);
            Vec l2;
            for (auto& [y, c] : p.act(r, d, x, s)) axpy(l2, c, alg_act(a, r, d, y, b2));
            Vec r2 = scaled(val, sgn(long(args[i].first) * args[i + 1].first));
            if (!equal_in(l2, r2, ring)) fail("equivariance", r, d, x, args);
          }
        });
  // associativity: γ(x ∘_k y; b) = (-1)^{|y|Σ_{i<k}|b_i|} γ(x; b_<k, γ(y; b_k…), b_>)
  for (int r = 2; r <= r_max; ++r)
    for (int s = 2; r + s - 1 <= r_max; ++s)
      for (int k = 1; k <= r; ++k)
        for (int d1 = lo; d1 <= hi; ++d1)
          for (int d2 = lo; d2 <= hi; ++d2)
            for (std::uint32_t x = 0; x < p.dim(r, d1); ++x)
              for (std::uint32_t y = 0; y < p.dim(s, d2); ++y) {
                Vec xy = p.compose(r, d1, x, k, s, d2, y);
                tuples(r + s - 1, [&](const std::vector<Arg>& b) {
                  Vec lhs;
                  for (auto& [z, c] : xy) axpy(lhs, c, alg_act(a, r + s - 1, d1 + d2, z, b));
                  std::vector<Arg> inner(b.begin() + (k - 1), b.begin() + (k - 1 + s));
                  int ideg = d2, pre = 0;
                  for (auto& g : inner) ideg += g.first;
                  for (int i = 0; i < k - 1; ++i) pre += b[i].first;
                  Vec rhs;
                  for (auto& [v, c] : alg_act(a, s, d2, y, inner)) {
                    std::vector<Arg> outer(b.begin(), b.begin() + (k - 1));
                    outer.push_back({ideg, v});
                    outer.insert(outer.end(), b.begin() + (k - 1 + s), b.end());
                    axpy(rhs, c * sgn(long(d2) * pre), alg_act(a, r, d1, x, outer));
                  }
                  if (!equal_in(lhs, rhs, ring))
                    throw StructureMapsNotAssociative("associativity fails for " + p.label(r, d1, x) + " o_" +
                                                      std::to_string(k) + " " + p.label(s, d2, y) + " on (" +
                                                      args_str(a, b) + ")");
                });
              }
}

GComplex bar_algebra(const BarCooperad& bar, const PAlgebra& alg, int r_max, int lo, int hi) {
  const GComplex& A = alg.a;
  const Ring& ring = A.ring();
  if (!ring.is_field()) throw NotAField("bar_algebra is computed over a field");
  bool char2 = ring.characteristic() == 2;
  std::vector<Arg> all;
  for (int d = A.d_min(); d <= A.d_max(); ++d)
    for (std::uint32_t i = 0; i < A.dim(d); ++i) all.push_back({d, i});

  // unquotiented basis: key = [r, dt, t, (deg, idx)…]
  struct Level {
    std::vector<std::vector<int>> keys;
    std::unordered_map<std::vector<int>, std::uint32_t, IntVecHash> index;
    std::vector<std::int32_t> cls;   // orbit class, -1 if zero
    std::vector<std::int32_t> sign;  // element = sign · class representative
    std::vector<std::uint32_t> reps;
  };
  std::map<int, Level> levels;
  auto build = [&](int D) -> Level& {
    auto it = levels.find(D);
    if (it != levels.end()) return it->second;
    Level& L = levels[D];
    for (int r = 1; r <= r_max; ++r) {
      auto [bl, bh] = bar.basis().weight_bounds(r);
      for (long dt = bl; dt <= bh; ++dt) {
        std::size_t nt = bar.dim(r, int(dt));
        if (!nt) continue;
        std::vector<Arg> cur(r);
        std::function<void(int, int)> rec = [&](int j, int rest) {
          if (j == r) {
            if (rest != 0) return;
            for (std::uint32_t t = 0; t < nt; ++t) {
              std::vector<int> k{r, int(dt), int(t)};
              for (auto& [dd, i] : cur) {
                k.push_back(dd);
                k.push_back(int(i));
              }
              L.index.emplace(k, std::uint32_t(L.keys.size()));
              L.keys.push_back(std::move(k));
            }
            return;
          }
          for (auto& x : all) {
            cur[j] = x;
            rec(j + 1, rest - x.first);
          }
        };
        rec(0, D - int(dt));
      }
    }
    // orbits under adjacent transpositions
    std::size_t N = L.keys.size();
    L.cls.assign(N, -2);
    L.sign.assign(N, 1);
    for (std::size_t s0 = 0; s0 < N; ++s0) {
      if (L.cls[s0] != -2) continue;
      std::vector<std::size_t> orbit{s0};
      std::vector<int> sg{1};
      std::unordered_map<std::size_t, int> seen{{s0, 1}};
      bool killed = false;
      for (std::size_t q = 0; q < orbit.size(); ++q) {
        const auto& k = L.keys[orbit[q]];
        int r = k[0];
        for (int i = 0; i + 1 < r; ++i) {
          Perm s = identity_perm(r);
          std::swap(s[i], s[i + 1]);
          Vec tv = bar.act(r, k[1], std::uint32_t(k[2]), s);
          if (tv.size() != 1 || (tv[0].second != 1 && tv[0].second != -1))
            throw ShapeUnsupported("bar_algebra needs an action by signed permutations");
          std::vector<int> k2 = k;
          k2[2] = int(tv[0].first);
          std::swap(k2[3 + 2 * i], k2[3 + 2 * (i + 1)]);
          std::swap(k2[4 + 2 * i], k2[4 + 2 * (i + 1)]);
          int sgn2 = int(tv[0].second) * sgn(long(k[3 + 2 * i]) * k[3 + 2 * (i + 1)]) * sg[q];
          std::size_t j = L.index.at(k2);
          auto f = seen.find(j);
          if (f == seen.end()) {
            seen.emplace(j, sgn2);
            orbit.push_back(j);
            sg.push_back(sgn2);
          } else if (f->second != sgn2 && !char2) {
            killed = true;
          }
        }
      }
      std::int32_t c = killed ? -1 : std::int32_t(L.reps.size());
      if (!killed) L.reps.push_back(std::uint32_t(s0));
      for (std::size_t q = 0; q < orbit.size(); ++q) {
        L.cls[orbit[q]] = c;
        L.sign[orbit[q]] = sg[q];
      }
    }
    return L;
  };
  // class of an unquotiented key
  auto project = [&](int D, const std::vector<int>& k, std::int64_t c, Vec& acc) {
    Level& L = build(D);
    auto it = L.index.find(k);
    if (it == L.index.end()) return;  // outside the weight truncation
    std::int32_t cl = L.cls[it->second];
    if (cl < 0) return;
    axpy(acc, c * L.sign[it->second], Vec{{std::uint32_t(cl), 1}});
  };

  GComplex out(ring, Group::trivial(), lo, hi);
  for (int D = lo; D <= hi; ++D) {
    Level& L = build(D);
    std::vector<std::string> labels;
    for (auto rep : L.reps) {
      const auto& k = L.keys[rep];
      std::string s = bar.label(k[0], k[1], std::uint32_t(k[2])) + " <";
      for (int j = 0; j < k[0]; ++j) s += (j ? "," : "") + A.basis(k[3 + 2 * j]).at(std::uint32_t(k[4 + 2 * j]));
      labels.push_back(s + ">");
    }
    out.set_basis(D, std::move(labels));
  }
  for (int D = lo + 1; D <= hi; ++D) {
    Level& L = build(D);
    build(D - 1);
    ZMatrix m(levels.at(D - 1).reps.size(), L.reps.size());
    for (std::size_t col = 0; col < L.reps.size(); ++col) {
      const std::vector<int> k = L.keys[L.reps[col]];
      int r = k[0], dt = k[1];
      std::uint32_t t = std::uint32_t(k[2]);
      std::vector<Arg> args(r);
      for (int j = 0; j < r; ++j) args[j] = {k[3 + 2 * j], std::uint32_t(k[4 + 2 * j])};
      Vec acc;
      auto key_of = [&](int r2, int dt2, std::uint32_t t2, const std::vector<Arg>& a2) {
        std::vector<int> kk{r2, dt2, int(t2)};
        for (auto& [dd, i] : a2) {
          kk.push_back(dd);
          kk.push_back(int(i));
        }
        return kk;
      };
      for (auto& [t2, c] : bar.diff(r, dt, t)) project(D - 1, key_of(r, dt - 1, t2, args), c, acc);
      int before = dt;
      for (int j = 0; j < r; ++j) {
        if (args[j].first - 1 >= A.d_min())
          for (auto& [row, e] : A.diff(args[j].first).cols.at(args[j].second)) {
            auto a2 = args;
            a2[j] = {args[j].first - 1, std::uint32_t(row)};
            project(D - 1, key_of(r, dt, t, a2), sgn(before) * e, acc);
          }
        before += args[j].first;
      }
      const Tree& tree = bar.basis().tree(r, dt, t);
      std::vector<int> fdeg(r);
      for (int j = 0; j < r; ++j) fdeg[j] = args[j].first;
      for (const auto& Lv : top_vertex_leaves(tree)) {
        for (const DTerm& cut : bar.decompose(r, dt, t, Lv)) {
          const Tree& x = bar.basis().tree(int(Lv.size()), cut.d2, cut.b);
          int xd = cut.d2 - 1;
          std::int64_t sign = cut.coeff * sgn(cut.d1) * gather_sign(xd, fdeg, Lv);
          std::vector<Arg> inner;
          int gd = xd;
          for (int l : Lv) {
            inner.push_back(args[l - 1]);
            gd += args[l - 1].first;
          }
          Vec g = alg_act(alg, int(Lv.size()), xd, x.v[0].label, inner);
          int r2 = r - int(Lv.size()) + 1;
          std::vector<Arg> a2(r2);
          for (int j = 1; j <= r; ++j)
            if (!std::binary_search(Lv.begin(), Lv.end(), j)) a2[quotient_position(r, Lv, j) - 1] = args[j - 1];
          int merged = quotient_position(r, Lv, Lv.front()) - 1;
          for (auto& [v, c] : g) {
            a2[merged] = {gd, v};
            project(D - 1, key_of(r2, cut.d1, cut.a, a2), sign * c, acc);
          }
        }
      }
      for (auto& [row, c] : acc) m.cols[col].push_back({std::int32_t(row), c});
    }
    out.set_diff(D, std::move(m));
  }
  return out;
}

}  // namespace opcalc
