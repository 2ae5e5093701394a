#include "opcalc/partition.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace opcalc {

// ---- partitions -------------------------------------------------------------

Partition canonical_partition(const std::vector<int>& labels) {
  std::map<int, int> id;
  Partition out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, fresh] = id.emplace(labels[i], int(id.size()));
    out[i] = it->second;
  }
  return out;
}

Partition bottom_partition(int r) {
  Partition x(r);
  std::iota(x.begin(), x.end(), 0);
  return x;
}

Partition top_partition(int r) { return Partition(r, 0); }

int num_blocks(const Partition& x) { return x.empty() ? 0 : *std::max_element(x.begin(), x.end()) + 1; }

std::vector<std::vector<int>> blocks(const Partition& x) {
  std::vector<std::vector<int>> out(num_blocks(x));
  for (std::size_t i = 0; i < x.size(); ++i) out[x[i]].push_back(int(i) + 1);
  return out;
}

bool finer_or_equal(const Partition& x, const Partition& y) {
  std::vector<int> img(num_blocks(x), -1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (img[x[i]] == -1)
      img[x[i]] = y[i];
    else if (img[x[i]] != y[i])
      return false;
  }
  return true;
}

Partition join(const Partition& x, const Partition& y) {
  int n = int(x.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
  std::map<int, int> fx, fy;
  for (int i = 0; i < n; ++i) {
    for (auto [m, v] : {std::pair{&fx, x[i]}, std::pair{&fy, y[i]}}) {
      auto [it, fresh] = m->emplace(v, i);
      if (!fresh) parent[find(i)] = find(it->second);
    }
  }
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = find(i);
  return canonical_partition(labels);
}

Partition meet(const Partition& x, const Partition& y) {
  std::vector<int> labels(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) labels[i] = x[i] * int(y.size() + 1) + y[i];
  return canonical_partition(labels);
}

Partition restrict_to(const Partition& x, const std::vector<int>& B) {
  std::vector<int> labels;
  for (int b : B) labels.push_back(x[b - 1]);
  return canonical_partition(labels);
}

Partition quotient_partition(const Partition& x, const Partition& y) {
  std::vector<int> labels;
  for (auto& b : blocks(y)) labels.push_back(x[b.front() - 1]);
  return canonical_partition(labels);
}

bool is_union_of_blocks(const Partition& x, const std::vector<int>& B) {
  std::vector<char> in(x.size(), 0);
  for (int b : B) in[b - 1] = 1;
  std::set<int> ids;
  for (int b : B) ids.insert(x[b - 1]);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!in[i] && ids.count(x[i])) return false;
  return true;
}

bool has_block(const Partition& x, const std::vector<int>& B) {
  if (!is_union_of_blocks(x, B)) return false;
  for (int b : B)
    if (x[b - 1] != x[B.front() - 1]) return false;
  return true;
}

Partition relabel_partition(const Partition& x, const Perm& s) {
  std::vector<int> labels(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) labels[s[i]] = x[i];
  return canonical_partition(labels);
}

std::string partition_str(const Partition& x) {
  std::string out;
  for (auto& b : blocks(x)) {
    if (!out.empty()) out += '|';
    for (int e : b) out += (x.size() < 10 ? std::to_string(e) : std::to_string(e) + ",");
  }
  return out;
}

Partition parse_partition(const std::string& s, int r) {
  std::vector<int> labels(r, -1);
  int block = 0;
  for (char c : s) {
    if (c == '|') {
      ++block;
    } else if (c >= '1' && c <= '9') {
      int e = c - '0';
      if (e > r || labels[e - 1] != -1) throw std::invalid_argument("bad partition: " + s);
      labels[e - 1] = block;
    } else if (c != ' ') {
      throw std::invalid_argument("bad partition: " + s);
    }
  }
  for (int l : labels)
    if (l == -1) throw std::invalid_argument("partition misses an element: " + s);
  return canonical_partition(labels);
}

std::vector<Partition> all_partitions(int r) {
  std::vector<Partition> out;
  Partition cur(r, 0);
  std::function<void(int, int)> rec = [&](int i, int m) {
    if (i == r) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= m + 1; ++v) {
      cur[i] = v;
      rec(i + 1, std::max(m, v));
    }
  };
  if (r == 0) return {Partition{}};
  cur[0] = 0;
  rec(1, 0);
  return out;
}

PartitionPoset partition_poset(int r) {
  PartitionPoset p;
  p.r = r;
  p.elements = all_partitions(r);
  std::size_t n = p.elements.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (p.elements[i] == bottom_partition(r)) p.bottom = int(i);
    if (p.elements[i] == top_partition(r)) p.top = int(i);
  }
  // covers: merging exactly two blocks
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (num_blocks(p.elements[j]) + 1 == num_blocks(p.elements[i]) && finer_or_equal(p.elements[i], p.elements[j]))
        p.covers.push_back({int(i), int(j)});
  return p;
}

std::string chain_str(const PartitionChain& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? " < " : "") + partition_str(c[i]);
  return out + "]";
}

std::vector<PartitionChain> full_chains(int r) {
  std::vector<Partition> all = all_partitions(r);
  Partition top = top_partition(r);
  std::vector<PartitionChain> out;
  PartitionChain cur{bottom_partition(r)};
  std::function<void()> rec = [&] {
    if (cur.back() == top) {
      out.push_back(cur);
      return;
    }
    for (auto& z : all)
      if (z != cur.back() && finer_or_equal(cur.back(), z)) {
        cur.push_back(z);
        rec();
        cur.pop_back();
      }
  };
  rec();
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

template <class T, class Labeller>
GComplex build_symmetric_complex(const Ring& ring, int r, int lo, int hi, const std::vector<std::vector<T>>& basis,
                                 Labeller label) {
  GComplex x(ring, Group::symmetric(r), lo, hi);
  for (int d = lo; d <= hi; ++d) {
    std::vector<std::string> labels;
    for (auto& b : basis[d - lo]) labels.push_back(label(b));
    x.set_basis(d, std::move(labels));
  }
  return x;
}

}  // namespace

GComplex bar_com_complex(int r, const Ring& ring) {
  if (r == 1) {
    GComplex x(ring, Group::symmetric(1), 0, 0);
    x.set_basis(0, {"[1]"});
    return x;
  }
  // degree t holds the chains with t + 1 elements; degree 0 is empty
  std::vector<std::vector<PartitionChain>> basis(r);
  for (auto& c : full_chains(r)) basis[c.size() - 1].push_back(c);
  std::map<PartitionChain, std::int32_t> idx;
  for (auto& level : basis)
    for (std::size_t i = 0; i < level.size(); ++i) idx[level[i]] = std::int32_t(i);
  GComplex x = build_symmetric_complex(ring, r, 0, r - 1, basis, chain_str);
  for (int t = 1; t <= r - 1; ++t) {
    ZMatrix m(basis[t - 1].size(), basis[t].size());
    for (std::size_t j = 0; j < basis[t].size(); ++j) {
      const PartitionChain& c = basis[t][j];
      for (int i = 1; i < t; ++i) {
        PartitionChain f = c;
        f.erase(f.begin() + i);
        m.cols[j].push_back({idx.at(f), (i % 2) ? -1 : 1});
      }
    }
    m.canonicalize();
    x.set_diff(t, std::move(m));
  }
  const Group& g = x.group();
  for (std::size_t gi = 0; gi < g.generators().size(); ++gi) {
    const Perm& s = g.perm(g.generators()[gi]);
    for (int t = 0; t <= r - 1; ++t) {
      ZMatrix m(basis[t].size(), basis[t].size());
      for (std::size_t j = 0; j < basis[t].size(); ++j) {
        PartitionChain c = basis[t][j];
        for (auto& p : c) p = relabel_partition(p, s);
        m.cols[j].push_back({idx.at(c), 1});
      }
      x.set_action(gi, t, std::move(m));
    }
  }
  return x;
}

// ---- nested chains ----------------------------------------------------------

std::string nested_str(const NestedChain& s) {
  std::string out = chain_str(s.sigma) + " S=(";
  for (std::size_t a = 0; a < s.S.size(); ++a) {
    out += a ? "," : "";
    out += "{";
    bool first = true;
    for (std::size_t i = 0; i < s.sigma.size(); ++i)
      if (s.S[a] >> i & 1) {
        out += (first ? "" : " ") + std::to_string(i);
        first = false;
      }
    out += "}";
  }
  return out + ")";
}

bool is_degenerate(const NestedChain& s) {
  for (std::size_t a = 0; a + 1 < s.S.size(); ++a)
    if (s.S[a] == s.S[a + 1]) return true;
  return false;
}

NestedChain degeneracy(const NestedChain& s, int j) {
  NestedChain out = s;
  out.S.insert(out.S.begin() + j, s.S[j]);
  return out;
}

namespace {

// Keeps the bits of `mask` that lie in `keep`, renumbered in order.
std::uint32_t compress(std::uint32_t mask, std::uint32_t keep) {
  std::uint32_t out = 0;
  int k = 0;
  for (int i = 0; i < 32; ++i)
    if (keep >> i & 1) {
      if (mask >> i & 1) out |= 1u << k;
      ++k;
    }
  return out;
}

std::uint32_t full_mask(std::size_t n) { return n >= 32 ? ~0u : (1u << n) - 1; }

}  // namespace

std::optional<NestedChain> face(const NestedChain& s, int i) {
  int d = s.dim();
  if (d <= 0 || i < 0 || i > d) throw std::out_of_range("face index");
  NestedChain out = s;
  out.S.erase(out.S.begin() + i);
  if (i < d) return out;
  std::uint32_t keep = s.S[d - 1];
  PartitionChain sigma;
  for (std::size_t a = 0; a < s.sigma.size(); ++a)
    if (keep >> a & 1) sigma.push_back(s.sigma[a]);
  int r = int(s.sigma.front().size());
  if (sigma.front() != bottom_partition(r) || sigma.back() != top_partition(r)) return std::nullopt;
  for (auto& m : out.S) m = compress(m, keep);
  out.sigma = std::move(sigma);
  return out;
}

NestedChain act(const NestedChain& s, const Perm& p) {
  NestedChain out = s;
  for (auto& x : out.sigma) x = relabel_partition(x, p);
  return out;
}

// ---- ungrafting -------------------------------------------------------------

bool is_branched(const PartitionChain& sigma, const Partition& y) {
  for (auto& b : blocks(y)) {
    bool seen = false;
    for (auto& x : sigma) seen = seen || has_block(x, b);
    if (!seen) return false;
  }
  return true;
}

std::optional<Ungrafting> ungraft(const PartitionChain& sigma, const Partition& y) {
  if (!is_branched(sigma, y)) return std::nullopt;
  Ungrafting u;
  auto dedupe = [](const std::vector<Partition>& xs, PartitionChain& chain, std::vector<int>& to) {
    for (auto& x : xs) {
      if (chain.empty() || chain.back() != x) chain.push_back(x);
      to.push_back(int(chain.size()) - 1);
    }
  };
  std::vector<Partition> tr;
  for (auto& x : sigma) tr.push_back(quotient_partition(join(x, y), y));
  dedupe(tr, u.trunk, u.to_trunk);
  for (auto& b : blocks(y)) {
    std::vector<Partition> br;
    std::vector<bool> in;
    for (auto& x : sigma) {
      br.push_back(restrict_to(x, b));
      in.push_back(is_union_of_blocks(x, b));
    }
    u.branches.emplace_back();
    u.to_branch.emplace_back();
    dedupe(br, u.branches.back(), u.to_branch.back());
    u.inside.push_back(std::move(in));
  }
  return u;
}

std::optional<Cocomposition> cocompose(const NestedChain& s, const Partition& y) {
  auto u = ungraft(s.sigma, y);
  if (!u) return std::nullopt;
  Cocomposition c;
  c.trunk.sigma = u->trunk;
  for (std::uint32_t m : s.S) {
    std::uint32_t t = 0;
    for (std::size_t a = 0; a < s.sigma.size(); ++a)
      if (m >> a & 1) t |= 1u << u->to_trunk[a];
    c.trunk.S.push_back(t);
  }
  auto bs = blocks(y);
  for (std::size_t i = 0; i < bs.size(); ++i) {
    NestedChain b;
    if (bs[i].size() == 1) {
      b.sigma = {bottom_partition(1)};
      b.S.assign(s.S.size(), 1u);
    } else {
      b.sigma = u->branches[i];
      for (std::uint32_t m : s.S) {
        std::uint32_t t = 0;
        for (std::size_t a = 0; a < s.sigma.size(); ++a)
          if ((m >> a & 1) && u->inside[i][a]) t |= 1u << u->to_branch[i][a];
        // a marked set with no level inside the branch has no image
        if (t == 0) return std::nullopt;
        b.S.push_back(t);
      }
    }
    c.branches.push_back(std::move(b));
  }
  return c;
}

// ---- sdBar(Com^nu) ----------------------------------------------------------

namespace {

// All S_0 ⊆ … ⊆ S_d = full with S_0 ≠ ∅ (and containing `must` when nonzero).
void nested_sequences(std::uint32_t full, int d, std::uint32_t must, std::vector<std::vector<std::uint32_t>>& out) {
  std::vector<std::uint32_t> cur(d + 1);
  cur[d] = full;
  std::function<void(int)> rec = [&](int a) {
    if (a < 0) {
      out.push_back(cur);
      return;
    }
    std::uint32_t above = cur[a + 1];
    // every submask of `above`
    for (std::uint32_t m = above;; m = (m - 1) & above) {
      if (m != 0 && (m & must) == must) {
        cur[a] = m;
        rec(a - 1);
      }
      if (m == 0) break;
    }
  };
  rec(d - 1);
}

}  // namespace

SdBarCom::SdBarCom(int r, int d_max) : r_(r), d_max_(d_max), simp_(d_max + 1) {
  std::vector<PartitionChain> chains = r == 1 ? std::vector<PartitionChain>{{bottom_partition(1)}} : full_chains(r);
  for (auto& c : chains)
    for (int d = 0; d <= d_max; ++d) {
      std::vector<std::vector<std::uint32_t>> seqs;
      nested_sequences(full_mask(c.size()), d, 0, seqs);
      for (auto& S : seqs) simp_[d].push_back(NestedChain{c, S});
    }
  for (auto& level : simp_) {
    std::sort(level.begin(), level.end());
    for (std::size_t i = 0; i < level.size(); ++i) index_[level[i]] = std::uint32_t(i);
  }
}

std::optional<std::uint32_t> SdBarCom::index(const NestedChain& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

GComplex SdBarCom::normalized(const Ring& ring) const {
  std::vector<std::vector<NestedChain>> basis(d_max_ + 1);
  std::map<NestedChain, std::int32_t> idx;
  for (int d = 0; d <= d_max_; ++d)
    for (auto& s : simp_[d])
      if (!is_degenerate(s)) {
        idx[s] = std::int32_t(basis[d].size());
        basis[d].push_back(s);
      }
  GComplex x = build_symmetric_complex(ring, r_, 0, d_max_, basis, nested_str);
  for (int d = 1; d <= d_max_; ++d) {
    ZMatrix m(basis[d - 1].size(), basis[d].size());
    for (std::size_t j = 0; j < basis[d].size(); ++j)
      for (int i = 0; i <= d; ++i)
        if (auto f = face(basis[d][j], i)) m.cols[j].push_back({idx.at(*f), (i % 2) ? -1 : 1});
    m.canonicalize();
    x.set_diff(d, std::move(m));
  }
  const Group& g = x.group();
  for (std::size_t gi = 0; gi < g.generators().size(); ++gi) {
    const Perm& p = g.perm(g.generators()[gi]);
    for (int d = 0; d <= d_max_; ++d) {
      ZMatrix m(basis[d].size(), basis[d].size());
      for (std::size_t j = 0; j < basis[d].size(); ++j) m.cols[j].push_back({idx.at(act(basis[d][j], p)), 1});
      x.set_action(gi, d, std::move(m));
    }
  }
  return x;
}

SimplicialModule SdBarCom::simplicial_module(const Ring& ring) const {
  SimplicialModule m;
  m.ring = ring;
  int top = d_max_;
  for (int n = 0; n <= top; ++n) m.rank.push_back(simp_[n].size());
  m.face.resize(top + 1);
  m.degeneracy.resize(top + 1);
  for (int n = 1; n <= top; ++n)
    for (int i = 0; i <= n; ++i) {
      ZMatrix f(simp_[n - 1].size(), simp_[n].size());
      for (std::size_t j = 0; j < simp_[n].size(); ++j)
        if (auto t = face(simp_[n][j], i)) f.cols[j].push_back({std::int32_t(index_.at(*t)), 1});
      m.face[n].push_back(std::move(f));
    }
  for (int n = 0; n + 1 <= top; ++n)
    for (int j = 0; j <= n; ++j) {
      ZMatrix s(simp_[n + 1].size(), simp_[n].size());
      for (std::size_t k = 0; k < simp_[n].size(); ++k)
        s.cols[k].push_back({std::int32_t(index_.at(degeneracy(simp_[n][k], j))), 1});
      m.degeneracy[n].push_back(std::move(s));
    }
  return m;
}

CosimplicialModule partition_lie_dual(const SdBarCom& x, const Ring& ring) {
  SimplicialModule s = x.simplicial_module(ring);
  CosimplicialModule c;
  c.ring = ring;
  c.rank = s.rank;
  int top = int(s.rank.size()) - 1;
  c.coface.resize(top + 1);
  for (int n = 1; n <= top; ++n)
    for (auto& f : s.face[n]) c.coface[n].push_back(f.transpose());
  c.codegeneracy.resize(top);
  for (int n = 0; n < top; ++n)
    for (auto& g : s.degeneracy[n]) c.codegeneracy[n].push_back(g.transpose());
  return c;
}

GComplex partition_lie_dual_normalized(int r, int top, const Ring& ring) {
  return normalize(partition_lie_dual(SdBarCom(r, top), ring));
}

std::vector<NestedChain> restricted_compose(const Partition& y, const Cocomposition& c) {
  SdBarCom sd(int(y.size()), c.trunk.dim());
  std::vector<NestedChain> out;
  for (auto& s : sd.simplices(c.trunk.dim())) {
    auto cc = cocompose(s, y);
    if (cc && *cc == c) out.push_back(s);
  }
  return out;
}

namespace {

// Δ_z(s) followed by Δ_{y/z} on the trunk, against Δ_y(s) followed by Δ_{z|B} on each
// branch; nullopt when either side is the basepoint.
struct TwoStep {
  NestedChain trunk;
  std::vector<NestedChain> middle, leaves;
  friend bool operator==(const TwoStep&, const TwoStep&) = default;
};

std::optional<TwoStep> via_outer(const NestedChain& s, const Partition& y, const Partition& z) {
  auto a = cocompose(s, y);
  if (!a) return std::nullopt;
  TwoStep out{a->trunk, {}, std::vector<NestedChain>(num_blocks(z))};
  auto yb = blocks(y);
  for (std::size_t i = 0; i < yb.size(); ++i) {
    Partition zi = restrict_to(z, yb[i]);
    auto b = cocompose(a->branches[i], zi);
    if (!b) return std::nullopt;
    out.middle.push_back(b->trunk);
    auto zb = blocks(zi);
    for (std::size_t j = 0; j < zb.size(); ++j) out.leaves[z[yb[i][zb[j].front() - 1] - 1]] = b->branches[j];
  }
  return out;
}

std::optional<TwoStep> via_inner(const NestedChain& s, const Partition& y, const Partition& z) {
  auto a = cocompose(s, z);
  if (!a) return std::nullopt;
  auto b = cocompose(a->trunk, quotient_partition(y, z));
  if (!b) return std::nullopt;
  return TwoStep{b->trunk, b->branches, a->branches};
}

// The order-preserving identification of a block B with g(B), as a permutation of
// {0..|B|-1}.
Perm block_relabel(const std::vector<int>& B, const Perm& g) {
  std::vector<std::pair<int, int>> pos;
  for (std::size_t q = 0; q < B.size(); ++q) pos.push_back({g[B[q] - 1], int(q)});
  std::sort(pos.begin(), pos.end());
  Perm h(B.size());
  for (std::size_t q = 0; q < pos.size(); ++q) h[pos[q].second] = int(q);
  return h;
}

}  // namespace

CheckReport check_cocomposition(const SdBarCom& x) {
  CheckReport rep;
  int r = x.arity();
  rep.object = "sdBar(Com^nu)(" + std::to_string(r) + ")";
  auto parts = all_partitions(r);
  auto perms = all_perms(r);
  for (int d = 0; d <= x.d_max(); ++d)
    for (auto& s : x.simplices(d)) {
      std::string lab = nested_str(s);
      rep.count("counit", 2);
      auto c0 = cocompose(s, bottom_partition(r));
      if (!c0 || c0->trunk != s) rep.fail("counit", lab + " y=0");
      auto c1 = cocompose(s, top_partition(r));
      if (!c1 || c1->branches[0] != s) rep.fail("counit", lab + " y=1");
      for (auto& y : parts) {
        for (auto& z : parts) {
          if (!finer_or_equal(z, y)) continue;
          rep.count("coassociativity");
          if (via_outer(s, y, z) != via_inner(s, y, z))
            rep.fail("coassociativity", lab + " y=" + partition_str(y) + " z=" + partition_str(z));
        }
        auto base = cocompose(s, y);
        auto yb = blocks(y);
        for (auto& g : perms) {
          rep.count("equivariance");
          Partition gy = relabel_partition(y, g);
          auto moved = cocompose(act(s, g), gy);
          bool ok = base.has_value() == moved.has_value();
          if (ok && base) {
            auto gb = blocks(gy);
            for (std::size_t i = 0; i < yb.size() && ok; ++i) {
              std::vector<int> img;
              for (int e : yb[i]) img.push_back(g[e - 1] + 1);
              std::sort(img.begin(), img.end());
              std::size_t j = std::size_t(std::find(gb.begin(), gb.end(), img) - gb.begin());
              ok = act(base->branches[i], block_relabel(yb[i], g)) == moved->branches[j];
            }
          }
          if (!ok) rep.fail("equivariance", lab + " y=" + partition_str(y));
        }
      }
    }
  return rep;
}

// ---- labelled levelled trees ------------------------------------------------

std::vector<TreeVertexInfo> chain_vertices(const PartitionChain& c) {
  std::vector<TreeVertexInfo> out;
  for (std::size_t a = 1; a < c.size(); ++a) {
    auto lower = blocks(c[a - 1]);
    for (auto& b : blocks(c[a])) {
      TreeVertexInfo v{int(a), b, {}};
      for (auto& l : lower)
        if (std::includes(b.begin(), b.end(), l.begin(), l.end())) v.in.push_back(l);
      if (v.in.size() >= 2) out.push_back(std::move(v));
    }
  }
  return out;
}

namespace {

using LabelTensor = std::vector<std::pair<std::vector<std::uint32_t>, std::int64_t>>;

// Tensor product of one Vec per vertex.
LabelTensor tensor_labels(const std::vector<Vec>& parts) {
  LabelTensor acc{{{}, 1}};
  for (auto& v : parts) {
    LabelTensor next;
    for (auto& [ls, c] : acc)
      for (auto& [i, k] : v) {
        auto l2 = ls;
        l2.push_back(i);
        next.push_back({std::move(l2), c * k});
      }
    acc = std::move(next);
  }
  return acc;
}

int find_vertex(const std::vector<TreeVertexInfo>& vs, int level, const std::vector<int>& out) {
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (vs[i].level == level && vs[i].out == out) return int(i);
  return -1;
}

void add_to(LabelledVec& acc, const LabelledSimplex& x, std::int64_t c) {
  if (c == 0) return;
  auto it = acc.emplace(x, 0).first;
  it->second += c;
  if (it->second == 0) acc.erase(it);
}

}  // namespace

SdTreeComplex::SdTreeComplex(const DgOperad& p, int r, int d_max, bool koszul)
    : p_(p), r_(r), d_max_(d_max), koszul_(koszul), basis_(d_max + 1) {
  std::vector<PartitionChain> chains;
  Partition bot = bottom_partition(r), top = top_partition(r);
  if (!koszul) {
    chains = r == 1 ? std::vector<PartitionChain>{{bot}} : full_chains(r);
  } else {
    // x_{-1} = 0̂ is stored as level 0; x_0 < … < x_t = 1̂ follows and x_0 may be 0̂
    if (r == 1) chains.push_back({bot});
    for (auto& c : full_chains(r)) {
      PartitionChain a = c;
      a.insert(a.begin(), bot);
      chains.push_back(a);
      if (c.size() >= 2) chains.push_back(c);
    }
    std::sort(chains.begin(), chains.end());
  }
  for (auto& c : chains) {
    auto vs = chain_vertices(c);
    std::vector<Vec> choices;
    for (auto& v : vs) {
      Vec all;
      for (std::uint32_t i = 0; i < p_.dim(int(v.in.size()), 0); ++i) all.push_back({i, 1});
      choices.push_back(all);
    }
    LabelTensor labels = tensor_labels(choices);
    for (int d = 0; d <= d_max; ++d) {
      std::vector<std::vector<std::uint32_t>> seqs;
      nested_sequences(full_mask(c.size()), d, koszul ? 1u : 0u, seqs);
      for (auto& S : seqs)
        for (auto& [ls, k] : labels) basis_[d].push_back(LabelledSimplex{NestedChain{c, S}, ls});
    }
  }
  for (auto& level : basis_) {
    std::sort(level.begin(), level.end());
    for (std::size_t i = 0; i < level.size(); ++i) index_[level[i]] = std::uint32_t(i);
  }
}

std::optional<std::uint32_t> SdTreeComplex::index(const LabelledSimplex& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vec SdTreeComplex::composite(const PartitionChain& c, const std::vector<std::uint32_t>& labels, int hi,
                             const std::vector<int>& out, int lo) const {
  if (hi == lo) return {{*p_.unit(), 1}};
  auto vs = chain_vertices(c);
  std::vector<std::vector<int>> in;
  for (auto& l : blocks(c[hi - 1]))
    if (std::includes(out.begin(), out.end(), l.begin(), l.end())) in.push_back(l);
  if (in.size() == 1) return composite(c, labels, hi - 1, out, lo);
  int v = find_vertex(vs, hi, out);
  Vec acc{{labels.at(v), 1}};
  int arity = int(in.size());
  std::vector<std::vector<std::vector<int>>> leaves(in.size());
  for (auto& l : blocks(c[lo]))
    for (std::size_t j = 0; j < in.size(); ++j)
      if (std::includes(in[j].begin(), in[j].end(), l.begin(), l.end())) leaves[j].push_back(l);
  for (int j = int(in.size()); j >= 1; --j) {
    Vec child = composite(c, labels, hi - 1, in[j - 1], lo);
    int m = int(leaves[j - 1].size());
    acc = compose_vec(p_, arity, 0, acc, j, m, 0, child);
    arity += m - 1;
  }
  // inputs are now grouped by child; sort them by least element
  std::vector<std::vector<int>> order;
  for (auto& g : leaves)
    for (auto& l : g) order.push_back(l);
  std::vector<std::vector<int>> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  Perm s(order.size());
  for (std::size_t q = 0; q < order.size(); ++q)
    s[q] = int(std::lower_bound(sorted.begin(), sorted.end(), order[q]) - sorted.begin());
  return act_vec(p_, arity, 0, acc, s);
}

LabelledVec SdTreeComplex::face(const LabelledSimplex& x, int i) const {
  auto f = opcalc::face(x.simplex, i);
  LabelledVec out;
  if (!f) return out;
  int d = x.simplex.dim();
  if (i < d) {
    out[LabelledSimplex{*f, x.labels}] = 1;
    return out;
  }
  // levels were removed: compose the labels between consecutive kept levels
  std::vector<int> kept;
  for (std::size_t a = 0; a < x.simplex.sigma.size(); ++a)
    if (x.simplex.S[d - 1] >> a & 1) kept.push_back(int(a));
  std::vector<Vec> parts;
  for (auto& v : chain_vertices(f->sigma))
    parts.push_back(composite(x.simplex.sigma, x.labels, kept[v.level], v.out, kept[v.level - 1]));
  for (auto& [ls, c] : tensor_labels(parts)) add_to(out, LabelledSimplex{*f, ls}, c);
  return out;
}

LabelledVec SdTreeComplex::act(const LabelledSimplex& x, const Perm& s) const {
  NestedChain t = opcalc::act(x.simplex, s);
  auto old_vs = chain_vertices(x.simplex.sigma);
  auto new_vs = chain_vertices(t.sigma);
  auto image = [&](const std::vector<int>& b) {
    std::vector<int> out;
    for (int e : b) out.push_back(s[e - 1] + 1);
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<Vec> parts(new_vs.size());
  for (std::size_t v = 0; v < old_vs.size(); ++v) {
    auto& ov = old_vs[v];
    int nv = find_vertex(new_vs, ov.level, image(ov.out));
    std::vector<std::vector<int>> imgs;
    for (auto& b : ov.in) imgs.push_back(image(b));
    Perm q(imgs.size());
    for (std::size_t j = 0; j < imgs.size(); ++j)
      q[j] = int(std::find(new_vs[nv].in.begin(), new_vs[nv].in.end(), imgs[j]) - new_vs[nv].in.begin());
    parts[nv] = p_.act(int(q.size()), 0, x.labels[v], q);
  }
  LabelledVec out;
  for (auto& [ls, c] : tensor_labels(parts)) add_to(out, LabelledSimplex{t, ls}, c);
  return out;
}

GComplex SdTreeComplex::normalized(const Ring& ring) const {
  std::vector<std::vector<LabelledSimplex>> basis(d_max_ + 1);
  std::map<LabelledSimplex, std::int32_t> idx;
  for (int d = 0; d <= d_max_; ++d)
    for (auto& s : basis_[d])
      if (!is_degenerate(s.simplex)) {
        idx[s] = std::int32_t(basis[d].size());
        basis[d].push_back(s);
      }
  auto label = [&](const LabelledSimplex& s) {
    std::string out = nested_str(s.simplex);
    auto vs = chain_vertices(s.simplex.sigma);
    for (std::size_t v = 0; v < vs.size(); ++v) out += " " + p_.label(int(vs[v].in.size()), 0, s.labels[v]);
    return out;
  };
  GComplex x = build_symmetric_complex(ring, r_, 0, d_max_, basis, label);
  for (int d = 1; d <= d_max_; ++d) {
    ZMatrix m(basis[d - 1].size(), basis[d].size());
    for (std::size_t j = 0; j < basis[d].size(); ++j)
      for (int i = 0; i <= d; ++i)
        for (auto& [f, c] : face(basis[d][j], i)) m.cols[j].push_back({idx.at(f), (i % 2) ? -c : c});
    m.canonicalize();
    x.set_diff(d, std::move(m));
  }
  const Group& g = x.group();
  for (std::size_t gi = 0; gi < g.generators().size(); ++gi) {
    const Perm& p = g.perm(g.generators()[gi]);
    for (int d = 0; d <= d_max_; ++d) {
      ZMatrix m(basis[d].size(), basis[d].size());
      for (std::size_t j = 0; j < basis[d].size(); ++j)
        for (auto& [t, c] : act(basis[d][j], p)) m.cols[j].push_back({idx.at(t), c});
      m.canonicalize();
      x.set_action(gi, d, std::move(m));
    }
  }
  return x;
}

std::optional<SdTreeComplex::LabelledCocomposition> SdTreeComplex::cocompose(const LabelledSimplex& x,
                                                                              const Partition& y) const {
  if (koszul_) throw ShapeUnsupported("cocomposition is defined on sdBar(P) only");
  auto c = opcalc::cocompose(x.simplex, y);
  if (!c) return std::nullopt;
  auto vs = chain_vertices(x.simplex.sigma);
  auto label_of = [&](const std::vector<int>& out, const std::vector<std::vector<int>>& in) -> std::uint32_t {
    for (std::size_t v = 0; v < vs.size(); ++v)
      if (vs[v].out == out && vs[v].in == in) return x.labels[v];
    throw std::logic_error("ungrafting lost a vertex");
  };
  auto bs = blocks(y);
  LabelledCocomposition out;
  // trunk vertices: sets of blocks of y, mapped back to subsets of {1..r}
  auto expand = [&](const std::vector<int>& bl) {
    std::vector<int> s;
    for (int b : bl)
      for (int e : bs[b - 1]) s.push_back(e);
    std::sort(s.begin(), s.end());
    return s;
  };
  out.trunk.simplex = c->trunk;
  for (auto& v : chain_vertices(c->trunk.sigma)) {
    std::vector<std::vector<int>> in;
    for (auto& b : v.in) in.push_back(expand(b));
    std::sort(in.begin(), in.end());
    out.trunk.labels.push_back(label_of(expand(v.out), in));
  }
  for (std::size_t i = 0; i < bs.size(); ++i) {
    LabelledSimplex b{c->branches[i], {}};
    auto lift = [&](const std::vector<int>& s) {
      std::vector<int> o;
      for (int e : s) o.push_back(bs[i][e - 1]);
      return o;
    };
    for (auto& v : chain_vertices(b.simplex.sigma)) {
      std::vector<std::vector<int>> in;
      for (auto& l : v.in) in.push_back(lift(l));
      b.labels.push_back(label_of(lift(v.out), in));
    }
    out.branches.push_back(std::move(b));
  }
  return out;
}

LabelledVec SdTreeComplex::act_right(const LabelledSimplex& x, int k, int s, std::uint32_t mu) const {
  if (!koszul_) throw ShapeUnsupported("the right action is defined on sdK(P) only");
  int n = r_ + s - 1;
  auto pull = [&](const Partition& p) {
    std::vector<int> labels(n);
    for (int e = 1; e <= n; ++e) {
      int f = e < k ? e : (e < k + s ? k : e - s + 1);
      labels[e - 1] = p[f - 1];
    }
    return canonical_partition(labels);
  };
  NestedChain t = x.simplex;
  t.sigma[0] = bottom_partition(n);
  for (std::size_t a = 1; a < t.sigma.size(); ++a) t.sigma[a] = pull(x.simplex.sigma[a]);
  auto old_vs = chain_vertices(x.simplex.sigma);
  auto new_vs = chain_vertices(t.sigma);
  auto lift = [&](const std::vector<int>& b) {
    std::vector<int> out;
    for (int e : b) {
      if (e < k) out.push_back(e);
      else if (e > k) out.push_back(e + s - 1);
      else
        for (int q = 0; q < s; ++q) out.push_back(k + q);
    }
    return out;
  };
  std::vector<Vec> parts(new_vs.size());
  std::vector<char> set(new_vs.size(), 0);
  for (std::size_t v = 0; v < old_vs.size(); ++v) {
    auto& ov = old_vs[v];
    int nv = find_vertex(new_vs, ov.level, lift(ov.out));
    Vec lab{{x.labels[v], 1}};
    if (ov.level == 1 && std::binary_search(ov.out.begin(), ov.out.end(), k)) {
      int pos = int(std::lower_bound(ov.out.begin(), ov.out.end(), k) - ov.out.begin()) + 1;
      lab = compose_vec(p_, int(ov.in.size()), 0, lab, pos, s, 0, {{mu, 1}});
    }
    parts[nv] = lab;
    set[nv] = 1;
  }
  for (std::size_t v = 0; v < new_vs.size(); ++v)
    if (!set[v]) {
      // the leaf {k} had no vertex; it becomes μ
      if (new_vs[v].level != 1) throw std::logic_error("right action created an inner vertex");
      parts[v] = {{mu, 1}};
    }
  LabelledVec out;
  for (auto& [ls, c] : tensor_labels(parts)) add_to(out, LabelledSimplex{t, ls}, c);
  return out;
}

std::int64_t SdTreeComplex::augmentation(const LabelledSimplex&) const { return r_ == 1 ? 1 : 0; }

// ---- restricted algebras ----------------------------------------------------

RestrictedFreeAlgebra::RestrictedFreeAlgebra(const Ring& ring, int n, int level, int r_max)
    : ring_(ring), n_(n), level_(level), r_max_(r_max) {
  for (int r = 1; r <= r_max; ++r) sd_[r] = std::make_unique<SdBarCom>(r, level);
}

std::uint32_t RestrictedFreeAlgebra::act_simplex(int r, std::uint32_t s, const Perm& p) const {
  const SdBarCom& sd = *sd_.at(r);
  return *sd.index(opcalc::act(sd.simplices(level_)[s], p));
}

RestrictedFreeAlgebra::Elem RestrictedFreeAlgebra::reduce(Elem x) const {
  for (auto it = x.begin(); it != x.end();) {
    it->second = ring_.reduce(it->second);
    it = it->second == 0 ? x.erase(it) : std::next(it);
  }
  return x;
}

RestrictedFreeAlgebra::Elem RestrictedFreeAlgebra::generator(int i) const { return {{Key{1, 0, {i}}, 1}}; }

RestrictedFreeAlgebra::Elem RestrictedFreeAlgebra::vector(const std::vector<std::int64_t>& c) const {
  Elem out;
  for (int i = 0; i < int(c.size()); ++i)
    if (c[i]) out[Key{1, 0, {i}}] = c[i];
  return reduce(out);
}

RestrictedFreeAlgebra::Elem RestrictedFreeAlgebra::act(const Elem& x, const Perm& p) const {
  Elem out;
  for (auto& [k, c] : x) {
    if (k.arity != int(p.size())) throw std::invalid_argument("permutation of the wrong arity");
    Key t{k.arity, act_simplex(k.arity, k.simplex, p), std::vector<int>(k.arity)};
    for (int i = 0; i < k.arity; ++i) t.word[p[i]] = k.word[i];
    out[t] += c;
  }
  return reduce(out);
}

bool RestrictedFreeAlgebra::is_invariant(const Elem& x) const {
  std::map<int, Elem> parts;
  for (auto& [k, c] : x) parts[k.arity][k] = c;
  for (auto& [r, e] : parts) {
    Group g = Group::symmetric(r);
    for (int gen : g.generators())
      if (act(e, g.perm(gen)) != reduce(e)) return false;
  }
  return true;
}

RestrictedFreeAlgebra::Outer RestrictedFreeAlgebra::orbit_sum(std::uint32_t tau, const std::vector<Elem>& x,
                                                              bool full) const {
  int b = int(x.size());
  std::vector<std::pair<std::uint32_t, std::vector<Elem>>> terms;
  std::set<std::pair<std::uint32_t, std::vector<Elem>>> seen;
  for (auto& rho : all_perms(b)) {
    std::vector<Elem> y(b);
    for (int i = 0; i < b; ++i) y[rho[i]] = x[i];
    auto t = std::make_pair(act_simplex(b, tau, rho), y);
    if (full || seen.insert(t).second) terms.push_back(std::move(t));
  }
  Outer out;
  for (auto& [t, ys] : terms) {
    std::vector<std::pair<std::vector<Key>, std::int64_t>> acc{{{}, 1}};
    for (auto& e : ys) {
      std::vector<std::pair<std::vector<Key>, std::int64_t>> next;
      for (auto& [ks, c] : acc)
        for (auto& [k, v] : e) {
          auto k2 = ks;
          k2.push_back(k);
          next.push_back({std::move(k2), ring_.reduce(c * v)});
        }
      acc = std::move(next);
    }
    for (auto& [ks, c] : acc) {
      auto& slot = out[Term{t, ks}];
      slot = ring_.reduce(slot + c);
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

const std::vector<std::uint32_t>& RestrictedFreeAlgebra::composites(const Partition& y, const Cocomposition& c) const {
  auto it = comp_cache_.find(y);
  if (it == comp_cache_.end()) {
    std::map<Cocomposition, std::vector<std::uint32_t>> table;
    const auto& simp = sd_.at(int(y.size()))->simplices(level_);
    for (std::uint32_t i = 0; i < simp.size(); ++i)
      if (auto cc = cocompose(simp[i], y)) table[*cc].push_back(i);
    it = comp_cache_.emplace(y, std::move(table)).first;
  }
  static const std::vector<std::uint32_t> none;
  auto jt = it->second.find(c);
  return jt == it->second.end() ? none : jt->second;
}

RestrictedFreeAlgebra::Elem RestrictedFreeAlgebra::structure_map(int b, const Outer& w) const {
  Elem out;
  for (auto& [term, coeff] : w) {
    std::vector<int> n;
    for (auto& k : term.x) n.push_back(k.arity);
    // one representative per Σ_b-orbit of arity patterns
    if (!std::is_sorted(n.begin(), n.end())) continue;
    int total = std::accumulate(n.begin(), n.end(), 0);
    if (total > r_max_) throw std::out_of_range("composite above the arity bound");
    // ordered placements B_1..B_b with |B_i| = n_i; equal sizes ordered by least element
    std::vector<int> owner(total, -1);
    std::function<void(int)> place = [&](int i) {
      if (i == b) {
        Partition y = canonical_partition(owner);
        auto bs = blocks(y);
        Perm to_block(b);
        for (int j = 0; j < b; ++j) to_block[owner[bs[j].front() - 1]] = j;
        Cocomposition c;
        c.trunk = sd_.at(b)->simplices(level_)[act_simplex(b, term.tau, to_block)];
        for (int j = 0; j < b; ++j) {
          const Key& k = term.x[owner[bs[j].front() - 1]];
          c.branches.push_back(sd_.at(k.arity)->simplices(level_)[k.simplex]);
        }
        std::vector<int> word(total);
        for (int j = 0; j < b; ++j) {
          const Key& k = term.x[owner[bs[j].front() - 1]];
          for (std::size_t q = 0; q < bs[j].size(); ++q) word[bs[j][q] - 1] = k.word[q];
        }
        for (std::uint32_t s : composites(y, c)) {
          auto& slot = out[Key{total, s, word}];
          slot = ring_.reduce(slot + coeff);
        }
        return;
      }
      // choose the elements of B_i: the least free element must start it when n_i = n_{i-1}
      std::vector<int> free;
      for (int e = 0; e < total; ++e)
        if (owner[e] == -1) free.push_back(e);
      int lo_min = -1;
      if (i > 0 && n[i] == n[i - 1])
        for (int e = 0; e < total; ++e)
          if (owner[e] == i - 1) {
            lo_min = e;
            break;
          }
      std::vector<int> pick;
      std::function<void(std::size_t)> choose = [&](std::size_t from) {
        if (int(pick.size()) == n[i]) {
          if (pick.front() < lo_min) return;
          for (int e : pick) owner[e] = i;
          place(i + 1);
          for (int e : pick) owner[e] = -1;
          return;
        }
        for (std::size_t q = from; q < free.size(); ++q) {
          pick.push_back(free[q]);
          choose(q + 1);
          pick.pop_back();
        }
      };
      choose(0);
    };
    place(0);
  }
  return reduce(out);
}

RestrictedFreeAlgebra::Elem RestrictedFreeAlgebra::bracket(std::uint32_t sigma, const std::vector<Elem>& a) const {
  return structure_map(int(a.size()), orbit_sum(sigma, a, true));
}

RestrictedFreeAlgebra::Elem RestrictedFreeAlgebra::gamma(std::uint32_t sigma, const std::vector<Elem>& a) const {
  return structure_map(int(a.size()), orbit_sum(sigma, a, false));
}

std::size_t RestrictedFreeAlgebra::stabilizer_order(int r, std::uint32_t sigma,
                                                    const std::vector<std::vector<Elem>>& tuples) const {
  std::size_t count = 0;
  for (auto& rho : all_perms(r)) {
    if (act_simplex(r, sigma, rho) != sigma) continue;
    bool ok = true;
    for (auto& t : tuples)
      for (int i = 0; i < r && ok; ++i) ok = reduce(t[rho[i]]) == reduce(t[i]);
    if (ok) ++count;
  }
  return count;
}

std::size_t gamma2_rank(int n, const Ring& ring) {
  GComplex x(ring, Group::symmetric(2), 0, 0);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) labels.push_back("e" + std::to_string(i) + "e" + std::to_string(j));
  x.set_basis(0, labels);
  ZMatrix swap(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) swap.cols[i * n + j].push_back({j * n + i, 1});
  x.set_action(0, 0, swap);
  return fixed_points(x).dim(0);
}

// ---- relation checks --------------------------------------------------------

bool RelationReport::ok() const {
  for (auto& [k, v] : failed)
    if (v) return false;
  return true;
}

std::string RelationReport::summary() const {
  std::ostringstream os;
  for (auto& [k, v] : checked) {
    auto it = failed.find(k);
    std::size_t f = it == failed.end() ? 0 : it->second;
    os << "relation " << k << ": " << v << " checked, " << f << " failed\n";
  }
  for (auto& w : witnesses) os << "  " << w << "\n";
  return os.str();
}

namespace {

using Elem = RestrictedFreeAlgebra::Elem;

Elem scale(const RestrictedFreeAlgebra& alg, const Elem& x, std::int64_t c) {
  Elem out;
  for (auto& [k, v] : x) out[k] = v * c;
  return alg.reduce(out);
}

Elem add(const RestrictedFreeAlgebra& alg, Elem x, const Elem& y) {
  for (auto& [k, v] : y) x[k] += v;
  return alg.reduce(x);
}

}  // namespace

RelationReport check_restricted_relations(const RestrictedFreeAlgebra& alg, int samples, std::uint64_t seed) {
  RelationReport rep;
  std::mt19937_64 rng(seed);
  const Ring& ring = alg.ring();
  std::int64_t p = ring.characteristic() ? ring.characteristic() : 5;
  int n = alg.rank_v();
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  // small pool so that repeated entries (and nontrivial stabilisers) are common
  auto random_vec = [&] {
    std::vector<std::int64_t> c(n);
    for (auto& v : c) v = uni(0, int(p) - 1);
    return alg.vector(c);
  };
  std::vector<Elem> pool;
  for (int i = 0; i < 3; ++i) pool.push_back(random_vec());
  auto pick = [&] { return uni(0, 3) == 0 ? random_vec() : pool[uni(0, int(pool.size()) - 1)]; };
  auto random_tuple = [&](int r) {
    std::vector<Elem> a;
    for (int i = 0; i < r; ++i) a.push_back(pick());
    return a;
  };
  auto note = [&](const std::string& rel, bool ok, const std::string& what) {
    ++rep.checked[rel];
    if (!ok) {
      ++rep.failed[rel];
      if (rep.witnesses.size() < 10) rep.witnesses.push_back(rel + ": " + what);
    }
  };
  auto index = [](std::size_t big, std::size_t small) { return std::int64_t(big / small); };
  int rmax = alg.r_max();

  for (int t = 0; t < samples; ++t) {
    int r = uni(1, rmax);
    std::uint32_t sigma = std::uint32_t(uni(0, int(alg.operations(r)) - 1));
    std::vector<Elem> a = random_tuple(r);
    std::string tag = "sample " + std::to_string(t) + " r=" + std::to_string(r) + " σ=" + std::to_string(sigma);

    // (4) {a}_σ = |Σ_{a,σ}| γ_σ(a)
    Elem g = alg.gamma(sigma, a);
    note("4", alg.bracket(sigma, a) == scale(alg, g, std::int64_t(alg.stabilizer_order(r, sigma, {a}))), tag);
    note("4-invariant", alg.is_invariant(g), tag);

    // (5) γ_σ(a_ρ(1), …, a_ρ(r)) = γ_{ρσ}(a)
    Perm rho = all_perms(r)[uni(0, int(factorial(r)) - 1)];
    std::vector<Elem> ar(r);
    for (int i = 0; i < r; ++i) ar[i] = a[rho[i]];
    note("5", alg.gamma(sigma, ar) == alg.gamma(alg.act_simplex(r, sigma, rho), a), tag);

    // (6) scaling the copies of one entry
    {
      int i0 = uni(0, r - 1);
      std::int64_t lambda = uni(0, int(p) - 1);
      std::vector<Elem> al = a;
      int copies = 0;
      for (int i = 0; i < r; ++i)
        if (a[i] == a[i0]) {
          al[i] = scale(alg, a[i], lambda);
          ++copies;
        }
      std::size_t ga = alg.stabilizer_order(r, sigma, {a}), gl = alg.stabilizer_order(r, sigma, {al}),
                  gal = alg.stabilizer_order(r, sigma, {a, al});
      std::int64_t lp = 1;
      for (int c = 0; c < copies; ++c) lp *= lambda;
      Elem lhs = scale(alg, alg.gamma(sigma, al), index(gl, gal));
      Elem rhs = scale(alg, g, ring.reduce(lp * index(ga, gal)));
      note("6", lhs == rhs, tag);
    }

    // (7) additivity in the copies of one entry a = b + c
    {
      Elem bb = random_vec(), cc = random_vec();
      Elem sum = add(alg, bb, cc);
      std::vector<Elem> a7 = a;
      std::vector<int> I;
      for (int i = 0; i < r; ++i)
        if (uni(0, 1) || i == 0) {
          a7[i] = sum;
          I.push_back(i);
        }
      // tuples that are fixed exactly by the permutations preserving I (or T) setwise
      std::vector<Elem> marker(r);
      for (int i : I) marker[i] = alg.generator(0);
      auto tagged = [&](const std::vector<int>& T) {
        std::vector<Elem> m(r);
        for (int i : T) m[i] = alg.generator(0);
        return m;
      };
      std::size_t g7 = alg.stabilizer_order(r, sigma, {a7}), k = alg.stabilizer_order(r, sigma, {a7, marker});
      Elem lhs = scale(alg, alg.gamma(sigma, a7), index(g7, k));
      // K-orbits of subsets T ⊆ I, where T carries b and I \ T carries c
      Elem rhs;
      std::set<std::vector<int>> done;
      std::vector<Perm> kgroup;
      for (auto& q : all_perms(r)) {
        if (alg.act_simplex(r, sigma, q) != sigma) continue;
        bool ok = true;
        for (int i = 0; i < r && ok; ++i) ok = a7[q[i]] == a7[i] && marker[q[i]] == marker[i];
        if (ok) kgroup.push_back(q);
      }
      for (std::uint32_t m = 0; m < (1u << I.size()); ++m) {
        std::vector<int> T;
        for (std::size_t j = 0; j < I.size(); ++j)
          if (m >> j & 1) T.push_back(I[j]);
        if (done.count(T)) continue;
        for (auto& q : kgroup) {
          std::vector<int> qt;
          for (int i : T) qt.push_back(q[i]);
          std::sort(qt.begin(), qt.end());
          done.insert(qt);
        }
        std::vector<Elem> at = a7;
        for (int i : I) at[i] = cc;
        for (int i : T) at[i] = bb;
        std::size_t gt = alg.stabilizer_order(r, sigma, {at}), kt = alg.stabilizer_order(r, sigma, {a7, marker, tagged(T)});
        rhs = add(alg, rhs, scale(alg, alg.gamma(sigma, at), index(gt, kt)));
      }
      note("7", lhs == rhs, tag);
    }

    // (8) composition along the consecutive partition into blocks of sizes r_1..r_b
    if (r >= 2) {
      std::vector<int> sizes;
      int left = r;
      while (left > 0) {
        int s = uni(1, left);
        if (sizes.empty() && s == r) s = uni(1, r - 1);
        sizes.push_back(s);
        left -= s;
      }
      int b = int(sizes.size());
      std::uint32_t tau = std::uint32_t(uni(0, int(alg.operations(b)) - 1));
      std::vector<std::uint32_t> sig;
      std::vector<std::vector<Elem>> parts;
      std::vector<Elem> x, whole;
      for (int s : sizes) {
        sig.push_back(std::uint32_t(uni(0, int(alg.operations(s)) - 1)));
        parts.push_back(random_tuple(s));
        x.push_back(alg.gamma(sig.back(), parts.back()));
        for (auto& e : parts.back()) whole.push_back(e);
      }
      std::size_t gx = alg.stabilizer_order(b, tau, {x});
      Elem lhs = scale(alg, alg.gamma(tau, x), std::int64_t(gx));
      std::vector<int> labels;
      for (int j = 0; j < b; ++j)
        for (int q = 0; q < sizes[j]; ++q) labels.push_back(j);
      Partition y = canonical_partition(labels);
      Cocomposition c;
      c.trunk = alg.simplices(b).simplices(alg.level())[tau];
      for (int j = 0; j < b; ++j) c.branches.push_back(alg.simplices(sizes[j]).simplices(alg.level())[sig[j]]);
      const auto& comp = alg.composites(y, c);
      // Q = Π_j Σ_{a_j, σ_j} inside the Young subgroup
      std::vector<Perm> qgroup{Perm{}};
      int off = 0;
      for (int j = 0; j < b; ++j) {
        std::vector<Perm> next;
        for (auto& q : qgroup)
          for (auto& h : all_perms(sizes[j])) {
            if (alg.act_simplex(sizes[j], sig[j], h) != sig[j]) continue;
            bool ok = true;
            for (int i = 0; i < sizes[j] && ok; ++i) ok = parts[j][h[i]] == parts[j][i];
            if (!ok) continue;
            Perm q2 = q;
            for (int i = 0; i < sizes[j]; ++i) q2.push_back(off + h[i]);
            next.push_back(std::move(q2));
          }
        qgroup = std::move(next);
        off += sizes[j];
      }
      Elem rhs;
      std::set<std::uint32_t> done;
      bool closed = true;
      for (std::uint32_t s : comp) {
        if (done.count(s)) continue;
        std::size_t qs = 0;
        for (auto& q : qgroup) {
          std::uint32_t qsimp = alg.act_simplex(r, s, q);
          if (!std::binary_search(comp.begin(), comp.end(), qsimp)) closed = false;
          done.insert(qsimp);
          if (qsimp == s) ++qs;
        }
        std::size_t gs = alg.stabilizer_order(r, s, {whole});
        rhs = add(alg, rhs, scale(alg, alg.gamma(s, whole), index(gs, qs)));
      }
      note("8-equivariance", closed, tag);
      note("8", lhs == rhs, tag);
    }
  }
  return rep;
}

}  // namespace opcalc
