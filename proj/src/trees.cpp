#include "opcalc/trees.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace opcalc {

namespace {

constexpr long kInf = kUnbounded;

long clamp_inf(long x) { return x >= kInf ? kInf : (x <= -kInf ? -kInf : x); }
bool infinite(long x) { return x >= kInf || x <= -kInf; }

long add_sat(long a, long b) {
  if (a >= kInf || b >= kInf) return kInf;
  if (a <= -kInf || b <= -kInf) return -kInf;
  return clamp_inf(a + b);
}

Tree map_leaves(const Tree& t, const std::vector<int>& to) {
  Tree u = t;
  u.n = int(to.size());
  for (auto& x : u.v)
    for (auto& c : x.in)
      if (c < 0) c = -to[-c - 1];
  return u;
}

// W - s with s possibly infinite.
long sub_sat(long w, long s) {
  if (s >= kInf) return -kInf;
  if (s <= -kInf) return kInf;
  return clamp_inf(w - s);
}

int parity(long x) { return int(((x % 2) + 2) % 2); }

}  // namespace

// Set partitions of {1..k} into m blocks, blocks ordered by minimum.
void for_each_set_partition(int k, int m, const std::function<void(const std::vector<std::vector<int>>&)>& f) {
  std::vector<int> a(k, 0);
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (k - i < m - used) return;
    if (i == k) {
      if (used != m) return;
      std::vector<std::vector<int>> blocks(m);
      for (int j = 0; j < k; ++j) blocks[a[j]].push_back(j + 1);
      f(blocks);
      return;
    }
    for (int b = 0; b <= used && b < m; ++b) {
      a[i] = b;
      rec(i + 1, b == used ? used + 1 : used);
    }
  };
  if (k == 0) return;
  a[0] = 0;
  rec(1, 1);
}

// ---------------------------------------------------------------- label sets

std::size_t OperadLabels::dim(int r, int w) const {
  int d = w - shift_;
  if (r < 2 || d < lo_ || d > hi_) return 0;
  return p_.dim(r, d);
}

std::pair<int, int> OperadLabels::weights(int r) const {
  if (r < 2) return {1, 0};
  return {lo_ <= -kUnbounded ? -kUnbounded : lo_ + shift_, hi_ >= kUnbounded ? kUnbounded : hi_ + shift_};
}

std::size_t CooperadLabels::dim(int r, int w) const {
  int d = w - shift_;
  if (r < 2 || d < lo_ || d > hi_) return 0;
  return c_.dim(r, d);
}

std::pair<int, int> CooperadLabels::weights(int r) const {
  if (r < 2) return {1, 0};
  return {lo_ <= -kUnbounded ? -kUnbounded : lo_ + shift_, hi_ >= kUnbounded ? kUnbounded : hi_ + shift_};
}

std::string SymSeqLabels::label(int r, int w, std::uint32_t i) const { return x_.get(r)->basis(w).at(i); }

Vec SymSeqLabels::act(int r, int w, std::uint32_t i, const Perm& s) const {
  const GComplex* c = x_.get(r);
  ZMatrix m = c->element_action(perm_index(s), w);
  Vec out;
  for (auto& [row, v] : m.cols.at(i)) out.push_back({std::uint32_t(row), v});
  return canonical(out);
}

std::pair<int, int> SymSeqLabels::weights(int r) const {
  const GComplex* c = r >= 2 ? x_.get(r) : nullptr;
  if (!c) return {1, 0};
  return {c->d_min(), c->d_max()};
}

// ---------------------------------------------------------------- trees

int Tree::weight() const {
  int w = 0;
  for (auto& x : v) w += x.weight;
  return w;
}

std::size_t TreeHash::operator()(const Tree& t) const {
  std::size_t h = std::size_t(t.n) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&](std::size_t x) { h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (auto& x : t.v) {
    mix(std::size_t(x.arity));
    mix(std::size_t(x.weight + 4096));
    mix(x.label);
    for (int c : x.in) mix(std::size_t(c + 4096));
  }
  return h;
}

std::vector<std::vector<int>> vertex_leaves(const Tree& t) {
  std::vector<std::vector<int>> out(t.v.size());
  std::function<void(int)> rec = [&](int i) {
    for (int c : t.v[i].in) {
      if (c < 0) {
        out[i].push_back(-c);
      } else {
        rec(c);
        out[i].insert(out[i].end(), out[c].begin(), out[c].end());
      }
    }
    std::sort(out[i].begin(), out[i].end());
  };
  if (!t.v.empty()) rec(t.root);
  return out;
}

Tree relabel_leaves(const Tree& t, const Perm& s) {
  Tree u = t;
  for (auto& x : u.v)
    for (auto& c : x.in)
      if (c < 0) c = -(s[-c - 1] + 1);
  return u;
}

int TreeBasis::height(const Tree& t) {
  if (t.v.empty()) return 0;
  std::function<int(int)> rec = [&](int i) {
    int h = 0;
    for (int c : t.v[i].in)
      if (c >= 0) h = std::max(h, rec(c));
    return h + 1;
  };
  return rec(t.root);
}

std::pair<long, long> TreeBasis::weight_bounds(int n) const {
  // lo[k], hi[k]: bounds for trees on k leaves; empty sets get lo = +inf, hi = -inf
  std::vector<long> lo(n + 1, kInf), hi(n + 1, -kInf);
  lo[1] = hi[1] = 0;
  for (int k = 2; k <= n; ++k) {
    // fl[j][s]: extreme sums over j ordered parts of total size s
    std::vector<std::vector<long>> fl(k + 1, std::vector<long>(k + 1, kInf)), fh(k + 1, std::vector<long>(k + 1, -kInf));
    fl[0][0] = fh[0][0] = 0;
    for (int j = 1; j <= k; ++j)
      for (int s = j; s <= k; ++s)
        for (int part = 1; part < k && part <= s; ++part) {
          if (fl[j - 1][s - part] < kInf && lo[part] < kInf) fl[j][s] = std::min(fl[j][s], add_sat(fl[j - 1][s - part], lo[part]));
          if (fh[j - 1][s - part] > -kInf && hi[part] > -kInf) fh[j][s] = std::max(fh[j][s], add_sat(fh[j - 1][s - part], hi[part]));
        }
    for (int m = 2; m <= k; ++m) {
      auto [wl, wh] = labels_->weights(m);
      if (wl > wh) continue;
      if (fl[m][k] < kInf) lo[k] = std::min(lo[k], add_sat(wl, fl[m][k]));
      if (fh[m][k] > -kInf) hi[k] = std::max(hi[k], add_sat(wh, fh[m][k]));
    }
  }
  return {lo[n], hi[n]};
}

const BasisCell<Tree, TreeHash>& TreeBasis::cell(int n, int w) const {
  return cache_.get(n, w, [this](int n0, int w0, BasisCell<Tree, TreeHash>& out) {
    if (n0 < 1) return;
    std::vector<long> lo(n0 + 1), hi(n0 + 1);
    for (int k = 1; k <= n0; ++k) std::tie(lo[k], hi[k]) = weight_bounds(k);
    std::map<std::pair<int, int>, std::vector<Tree>> memo;
    std::function<const std::vector<Tree>&(int, int)> gen = [&](int k, int W) -> const std::vector<Tree>& {
      auto key = std::make_pair(k, W);
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      std::vector<Tree> res;
      if (k == 1) {
        if (W == 0) res.push_back(Tree{});
      } else if (W >= lo[k] && W <= hi[k]) {
        for (int m = 2; m <= k; ++m) {
          auto [wl, wh] = labels_->weights(m);
          if (wl > wh) continue;
          for_each_set_partition(k, m, [&](const std::vector<std::vector<int>>& blocks) {
            long smin = 0, smax = 0;
            for (auto& b : blocks) {
              smin = add_sat(smin, lo[b.size()]);
              smax = add_sat(smax, hi[b.size()]);
            }
            long a = std::max<long>(wl, sub_sat(W, smax)), z = std::min<long>(wh, sub_sat(W, smin));
            if (a > z) return;
            if (infinite(a) || infinite(z))
              throw InfiniteRankInWindow("trees of arity " + std::to_string(k) + " and weight " + std::to_string(W) +
                                         " are not finite in number");
            for (long w0 = a; w0 <= z; ++w0) {
              std::size_t nl = labels_->dim(m, int(w0));
              if (nl == 0) continue;
              // distribute W - w0 over the blocks
              std::vector<const Tree*> pick(m);
              std::function<void(int, long)> dist = [&](int j, long rest) {
                if (j == m) {
                  if (rest != 0) return;
                  for (std::uint32_t l = 0; l < nl; ++l) {
                    Tree t;
                    t.n = k;
                    t.v.push_back({m, int(w0), l, std::vector<int>(m)});
                    for (int b = 0; b < m; ++b) {
                      if (blocks[b].size() == 1) {
                        t.v[0].in[b] = -blocks[b][0];
                        continue;
                      }
                      int off = int(t.v.size());
                      t.v[0].in[b] = off;
                      Tree sub = map_leaves(*pick[b], blocks[b]);
                      for (auto x : sub.v) {
                        for (auto& c : x.in)
                          if (c >= 0) c += off;
                        t.v.push_back(std::move(x));
                      }
                    }
                    res.push_back(std::move(t));
                  }
                  return;
                }
                long rmin = 0, rmax = 0;
                for (int b = j + 1; b < m; ++b) {
                  rmin = add_sat(rmin, lo[blocks[b].size()]);
                  rmax = add_sat(rmax, hi[blocks[b].size()]);
                }
                int sz = int(blocks[j].size());
                long ba = std::max(lo[sz], sub_sat(rest, rmax)), bz = std::min(hi[sz], sub_sat(rest, rmin));
                if (infinite(ba) || infinite(bz)) throw InfiniteRankInWindow("unbounded subtree weights");
                for (long wb = ba; wb <= bz; ++wb)
                  for (const Tree& s : gen(sz, int(wb))) {
                    pick[j] = &s;
                    dist(j + 1, rest - wb);
                  }
              };
              dist(0, W - w0);
            }
          });
        }
      }
      return memo.emplace(key, std::move(res)).first->second;
    };
    if (n0 == 1) {
      if (w0 == 0) out.add(Tree{});
      return;
    }
    for (const Tree& t : gen(n0, w0)) out.add(t);
  });
}

Vec TreeBasis::canonicalize(const Tree& t) const {
  if (t.v.empty()) return {{0, 1}};
  std::size_t V = t.v.size();
  std::vector<int> ml(V, 0);
  std::function<int(int)> rec = [&](int i) {
    int m = 1 << 30;
    for (int c : t.v[i].in) m = std::min(m, c < 0 ? -c : rec(c));
    return ml[i] = m;
  };
  rec(t.root);
  std::vector<Vec> labs(V);
  std::vector<std::vector<int>> newin(V);
  for (std::size_t i = 0; i < V; ++i) {
    const auto& x = t.v[i];
    int a = x.arity;
    std::vector<int> slots(a);
    std::iota(slots.begin(), slots.end(), 0);
    auto key = [&](int p) { return x.in[p] < 0 ? -x.in[p] : ml[x.in[p]]; };
    std::sort(slots.begin(), slots.end(), [&](int p, int q) { return key(p) < key(q); });
    Perm s(a);
    for (int j = 0; j < a; ++j) s[slots[j]] = j;
    newin[i].resize(a);
    for (int p = 0; p < a; ++p) newin[i][s[p]] = x.in[p];
    bool id = true;
    for (int p = 0; p < a; ++p) id = id && s[p] == p;
    labs[i] = id ? Vec{{x.label, 1}} : labels_->act(a, x.weight, x.label, s);
    if (labs[i].empty()) return {};
  }
  std::vector<int> order;
  std::function<void(int)> pre = [&](int i) {
    order.push_back(i);
    for (int c : newin[i])
      if (c >= 0) pre(c);
  };
  pre(t.root);
  if (order.size() != V) throw std::logic_error("tree has unreachable vertices");
  std::vector<int> w(V), pos(V);
  for (std::size_t i = 0; i < V; ++i) w[i] = t.v[i].weight;
  for (std::size_t j = 0; j < V; ++j) pos[order[j]] = int(j);
  int sign = koszul_sign(w, order);

  Tree c;
  c.n = t.n;
  c.v.resize(V);
  for (std::size_t j = 0; j < V; ++j) {
    const auto& x = t.v[order[j]];
    c.v[j].arity = x.arity;
    c.v[j].weight = x.weight;
    c.v[j].in = newin[order[j]];
    for (auto& q : c.v[j].in)
      if (q >= 0) q = pos[q];
  }
  const auto& cl = cell(t.n, t.weight());
  Vec out;
  std::vector<std::size_t> pick(V, 0);
  while (true) {
    std::int64_t coeff = sign;
    for (std::size_t j = 0; j < V; ++j) {
      auto& term = labs[order[j]][pick[j]];
      c.v[j].label = term.first;
      coeff *= term.second;
    }
    auto idx = cl.find(c);
    if (!idx) throw std::logic_error("canonical tree missing from its cell: " + str(c));
    out.push_back({*idx, coeff});
    std::size_t j = 0;
    for (; j < V; ++j) {
      if (++pick[j] < labs[order[j]].size()) break;
      pick[j] = 0;
    }
    if (j == V) break;
  }
  return canonical(std::move(out));
}

std::string TreeBasis::str(const Tree& t) const {
  if (t.v.empty()) return "id";
  std::function<std::string(int)> rec = [&](int i) {
    const auto& x = t.v[i];
    std::string s = labels_->label(x.arity, x.weight, x.label) + "(";
    for (std::size_t p = 0; p < x.in.size(); ++p) {
      if (p) s += ",";
      s += x.in[p] < 0 ? std::to_string(-x.in[p]) : rec(x.in[p]);
    }
    return s + ")";
  };
  return rec(t.root);
}

// ---------------------------------------------------------------- free operad

FreeOperad::FreeOperad(std::shared_ptr<const LabelSet> gens, std::string name)
    : basis_(std::move(gens)), name_(std::move(name)) {}

Tree FreeOperad::corolla(int r, int w, std::uint32_t label) {
  Tree t;
  t.n = r;
  t.v.push_back({r, w, label, {}});
  for (int p = 1; p <= r; ++p) t.v[0].in.push_back(-p);
  return t;
}

Vec FreeOperad::generator_diff(int, int, std::uint32_t) const { return {}; }

namespace {

// Replaces vertex vi of t by the tree s (whose leaf q plugs into slot q of vi).
Tree substitute(const Tree& t, int vi, const Tree& s) {
  int ns = int(s.v.size());
  auto map_t = [&](int idx) { return idx == vi ? vi + s.root : (idx < vi ? idx : idx + ns - 1); };
  Tree u;
  u.n = t.n;
  u.root = map_t(t.root);
  for (int idx = 0; idx < int(t.v.size()); ++idx) {
    if (idx == vi) {
      for (const auto& sv : s.v) {
        TreeVertex x = sv;
        for (auto& c : x.in) {
          if (c >= 0) {
            c += vi;
          } else {
            int orig = t.v[vi].in[-c - 1];
            c = orig < 0 ? orig : map_t(orig);
          }
        }
        u.v.push_back(std::move(x));
      }
      continue;
    }
    TreeVertex x = t.v[idx];
    for (auto& c : x.in)
      if (c >= 0) c = map_t(c);
    u.v.push_back(std::move(x));
  }
  return u;
}

}  // namespace

Vec FreeOperad::diff(int r, int d, std::uint32_t i) const {
  const Tree& t = basis_.tree(r, d, i);
  Vec out;
  int before = 0;
  for (int vi = 0; vi < int(t.v.size()); ++vi) {
    const auto& x = t.v[vi];
    Vec g = generator_diff(x.arity, x.weight, x.label);
    std::int64_t sign = parity(before) ? -1 : 1;
    for (auto& [j, c] : g) {
      const Tree& s = basis_.tree(x.arity, x.weight - 1, j);
      axpy(out, sign * c, basis_.canonicalize(substitute(t, vi, s)));
    }
    before += x.weight;
  }
  return out;
}

Vec FreeOperad::act(int r, int d, std::uint32_t i, const Perm& s) const {
  return basis_.canonicalize(relabel_leaves(basis_.tree(r, d, i), s));
}

Vec FreeOperad::compose(int r, int d1, std::uint32_t ia, int k, int s, int d2, std::uint32_t ib) const {
  const Tree& a = basis_.tree(r, d1, ia);
  const Tree& b = basis_.tree(s, d2, ib);
  if (a.v.empty()) return {{ib, 1}};
  if (b.v.empty()) return {{ia, 1}};
  Tree u;
  u.n = r + s - 1;
  u.root = a.root;
  int na = int(a.v.size());
  for (auto x : a.v) {
    for (auto& c : x.in) {
      if (c >= 0) continue;
      int p = -c;
      c = p == k ? na + b.root : -(p < k ? p : p + s - 1);
    }
    u.v.push_back(std::move(x));
  }
  for (auto x : b.v) {
    for (auto& c : x.in) c = c >= 0 ? c + na : -(-c + k - 1);
    u.v.push_back(std::move(x));
  }
  return basis_.canonicalize(u);
}

std::size_t FreeOperad::filtration_dim(int r, int d, int n) const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < dim(r, d); ++i)
    if (TreeBasis::height(basis_.tree(r, d, std::uint32_t(i))) <= n) ++count;
  return count;
}

FreeSymSeqOperad::FreeSymSeqOperad(SymSeq x, std::string name)
    : FreeOperad(std::make_shared<SymSeqLabels>(std::move(x)), std::move(name)) {
  x_ = static_cast<const SymSeqLabels*>(&basis_.labels());
  for (int r : x_->symseq().arities())
    if (r < 2 && x_->symseq().get(r)) {
      auto* c = x_->symseq().get(r);
      for (int d = c->d_min(); d <= c->d_max(); ++d)
        if (c->dim(d)) throw NotReduced("free operad generators must sit in arities >= 2");
    }
}

Vec FreeSymSeqOperad::generator_diff(int r, int w, std::uint32_t label) const {
  const GComplex* c = x_->symseq().get(r);
  if (!c || !c->in_range(w - 1)) return {};
  Vec out;
  for (auto& [row, v] : c->diff(w).cols.at(label)) axpy(out, v, from_tree(corolla(r, w - 1, std::uint32_t(row))));
  return out;
}

// ---------------------------------------------------------------- bar

void require_reduced(const DgOperad& p, int lo, int hi) {
  for (int d = std::max(lo, -6); d <= std::min(hi, 6); ++d) {
    if (p.dim(0, d) != 0) throw NotReduced(p.name() + " has operations in arity 0");
    if (p.dim(1, d) != (d == 0 ? 1u : 0u)) throw NotReduced(p.name() + " is not spanned by the unit in arity 1");
  }
}

void require_coreduced(const DgCooperad& c, int lo, int hi) {
  for (int d = std::max(lo, -6); d <= std::min(hi, 6); ++d) {
    if (c.dim(0, d) != 0) throw NotCoreduced(c.name() + " has cooperations in arity 0");
    if (c.dim(1, d) != (d == 0 ? 1u : 0u)) throw NotCoreduced(c.name() + " is not spanned by the counit in arity 1");
  }
}

BarCooperad::BarCooperad(const DgOperad& p, int p_lo, int p_hi)
    : p_(p), basis_(std::make_shared<OperadLabels>(p, 1, p_lo, p_hi)) {
  require_reduced(p, p_lo, p_hi);
}

Vec BarCooperad::act(int n, int d, std::uint32_t i, const Perm& s) const {
  return basis_.canonicalize(relabel_leaves(basis_.tree(n, d, i), s));
}

Vec BarCooperad::diff(int n, int d, std::uint32_t i) const {
  const Tree& t = basis_.tree(n, d, i);
  Vec out;
  int before = 0;
  for (std::size_t vi = 0; vi < t.v.size(); ++vi) {
    const auto& x = t.v[vi];
    // ∂(sx) = -s∂x
    std::int64_t sign = parity(before) ? 1 : -1;
    for (auto& [j, c] : p_.diff(x.arity, x.weight - 1, x.label)) {
      Tree u = t;
      u.v[vi].label = j;
      u.v[vi].weight -= 1;
      axpy(out, sign * c, basis_.canonicalize(u));
    }
    before += x.weight;
  }
  axpy(out, 1, contraction(n, d, i));
  return out;
}

Vec BarCooperad::contraction(int n, int d, std::uint32_t i) const {
  const Tree& t = basis_.tree(n, d, i);
  int V = int(t.v.size());
  std::vector<int> w(V);
  for (int j = 0; j < V; ++j) w[j] = t.v[j].weight;
  Vec out;
  for (int u = 0; u < V; ++u)
    for (int slot = 0; slot < t.v[u].arity; ++slot) {
      int ci = t.v[u].in[slot];
      if (ci < 0) continue;
      // bring the child next to its parent
      std::vector<int> order;
      for (int j = 0; j <= u; ++j) order.push_back(j);
      order.push_back(ci);
      for (int j = u + 1; j < V; ++j)
        if (j != ci) order.push_back(j);
      int before = 0;
      for (int j = 0; j < u; ++j) before += w[j];
      std::int64_t sign = koszul_sign(w, order) * (parity(before + w[u] - 1) ? -1 : 1);
      const auto& pu = t.v[u];
      const auto& pc = t.v[ci];
      Vec m = p_.compose(pu.arity, pu.weight - 1, pu.label, slot + 1, pc.arity, pc.weight - 1, pc.label);
      if (m.empty()) continue;
      // new vertex list: order without ci, merged vertex at u
      std::vector<int> pos(V, -1);
      int next = 0;
      for (int j : order)
        if (j != ci) pos[j] = next++;
      Tree nt;
      nt.n = t.n;
      nt.root = pos[t.root];
      for (int j : order) {
        if (j == ci) continue;
        TreeVertex x = t.v[j];
        if (j == u) {
          x.arity = pu.arity + pc.arity - 1;
          x.weight = pu.weight + pc.weight - 1;
          x.in.clear();
          for (int q = 0; q < slot; ++q) x.in.push_back(pu.in[q]);
          for (int c : pc.in) x.in.push_back(c);
          for (int q = slot + 1; q < pu.arity; ++q) x.in.push_back(pu.in[q]);
        }
        for (auto& c : x.in)
          if (c >= 0) c = pos[c];
        nt.v.push_back(std::move(x));
      }
      int mu = pos[u];
      for (auto& [lab, c] : m) {
        nt.v[mu].label = lab;
        axpy(out, sign * c, basis_.canonicalize(nt));
      }
    }
  return out;
}

std::vector<DTerm> BarCooperad::decompose(int n, int d, std::uint32_t ui, const std::vector<int>& S) const {
  int k = int(S.size());
  if (k == 1) return {{1, d, ui, 0, 0}};
  if (k == n) return {{1, 0, 0, d, ui}};
  const Tree& t = basis_.tree(n, d, ui);
  auto leaves = vertex_leaves(t);
  int V = int(t.v.size());
  int wv = -1;
  for (int j = 0; j < V; ++j)
    if (leaves[j] == S) wv = j;
  if (wv < 0) return {};
  // the subtree at wv is the preorder block [wv, wv + size)
  std::function<int(int)> count = [&](int j) {
    int c = 1;
    for (int q : t.v[j].in)
      if (q >= 0) c += count(q);
    return c;
  };
  int size = count(wv);
  int end = wv + size;
  Tree t2;
  t2.n = k;
  for (int j = wv; j < end; ++j) {
    TreeVertex x = t.v[j];
    for (auto& c : x.in) c = c >= 0 ? c - wv : -block_position(S, -c);
    t2.v.push_back(std::move(x));
  }
  Tree t1;
  t1.n = n - k + 1;
  auto map1 = [&](int j) { return j < wv ? j : j - size; };
  int w2 = 0, after = 0;
  for (int j = wv; j < end; ++j) w2 += t.v[j].weight;
  for (int j = end; j < V; ++j) after += t.v[j].weight;
  for (int j = 0; j < V; ++j) {
    if (j >= wv && j < end) continue;
    TreeVertex x = t.v[j];
    for (auto& c : x.in) {
      if (c == wv) c = -quotient_position(n, S, S.front());
      else if (c >= 0) c = map1(c);
      else c = -quotient_position(n, S, -c);
    }
    t1.v.push_back(std::move(x));
  }
  std::int64_t sign = parity(long(w2) * after) ? -1 : 1;
  Vec a = basis_.canonicalize(t1), b = basis_.canonicalize(t2);
  std::vector<DTerm> out;
  for (auto& [ia, ca] : a)
    for (auto& [ib, cb] : b) out.push_back({sign * ca * cb, t1.weight(), ia, w2, ib});
  return out;
}

// ---------------------------------------------------------------- cobar

CobarOperad::CobarOperad(const DgCooperad& c, int c_lo, int c_hi)
    : FreeOperad(std::make_shared<CooperadLabels>(c, -1, c_lo, c_hi), "Cobar(" + c.name() + ")"), c_(c) {
  require_coreduced(c, c_lo, c_hi);
}

Vec CobarOperad::generator_diff(int r, int w, std::uint32_t label) const {
  int d = w + 1;
  Vec out;
  // ∂(s⁻¹c) = -s⁻¹∂c + Σ (-1)^{|c'|} s⁻¹c' ∘ s⁻¹c''
  for (auto& [j, c] : c_.diff(r, d, label)) axpy(out, -c, from_tree(corolla(r, w - 1, j)));
  for (unsigned mask = 1; mask + 1 < (1u << r); ++mask) {
    std::vector<int> S;
    for (int p = 1; p <= r; ++p)
      if (mask >> (p - 1) & 1) S.push_back(p);
    int k = int(S.size());
    if (k < 2) continue;
    for (const DTerm& t : c_.decompose(r, d, label, S)) {
      Tree u;
      u.n = r;
      int m = r - k + 1;
      u.v.push_back({m, t.d1 - 1, t.a, std::vector<int>(m)});
      u.v.push_back({k, t.d2 - 1, t.b, {}});
      int q0 = quotient_position(r, S, S.front());
      u.v[0].in[q0 - 1] = 1;
      for (int p = 1; p <= r; ++p) {
        if (std::binary_search(S.begin(), S.end(), p)) u.v[1].in.push_back(-p);
        else u.v[0].in[quotient_position(r, S, p) - 1] = -p;
      }
      std::int64_t sign = parity(t.d1) ? -1 : 1;
      axpy(out, sign * t.coeff, from_tree(u));
    }
  }
  return out;
}

KoszulDualOperad::KoszulDualOperad(const DgOperad& p, int p_lo, int p_hi)
    : BarHolder{BarCooperad(p, p_lo, p_hi)}, TransposeOperad(BarHolder::bar, "KD(" + p.name() + ")") {}

}  // namespace opcalc
