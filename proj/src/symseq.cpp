#include "opcalc/symseq.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <memory>

namespace opcalc {

void TruncationPolicy::validate() const {
  if (d_min > d_max) throw std::invalid_argument("truncation window has d_min > d_max");
  if (r_max < 0) throw std::invalid_argument("negative arity bound");
}

SymSeq::SymSeq(Ring ring, TruncationPolicy policy) : ring_(ring), policy_(policy) { policy_.validate(); }

void SymSeq::set(int r, GComplex c) {
  if (c.ring() != ring_) throw RingMismatch("component ring differs from the sequence ring");
  if (c.group().name() != "S" + std::to_string(r) || c.group().order() != factorial(r))
    throw GroupMismatch("arity " + std::to_string(r) + " needs group S" + std::to_string(r));
  bool outside = r > policy_.r_max;
  for (int d = c.d_min(); d <= c.d_max(); ++d)
    if (c.dim(d) && (d < policy_.d_min || d > policy_.d_max)) outside = true;
  if (outside) {
    if (policy_.on_overflow == OverflowMode::Error)
      throw Overflow("arity " + std::to_string(r) + " component leaves the truncation window");
    truncated_ = true;
    if (r > policy_.r_max) return;
    // keep the part inside the window; the boundary map out of d_min is dropped
    int lo = std::max(c.d_min(), policy_.d_min), hi = std::min(c.d_max(), policy_.d_max);
    if (lo > hi) return;
    GComplex t(ring_, c.group(), lo, hi);
    for (int d = lo; d <= hi; ++d) {
      t.set_basis(d, c.basis(d));
      if (d > lo) t.set_diff(d, c.diff(d));
      for (std::size_t g = 0; g < c.group().generators().size() && c.has_action(); ++g) t.set_action(g, d, c.action(g, d));
    }
    t.set_valid_window(std::max(lo + (lo > c.d_min() ? 1 : 0), c.valid_min()), std::min(hi - (hi < c.d_max() ? 1 : 0), c.valid_max()));
    comps_[r] = std::move(t);
    return;
  }
  comps_[r] = std::move(c);
}

const GComplex* SymSeq::get(int r) const {
  auto it = comps_.find(r);
  return it == comps_.end() ? nullptr : &it->second;
}

std::vector<int> SymSeq::arities() const {
  std::vector<int> out;
  for (auto& [r, c] : comps_) out.push_back(r);
  return out;
}

std::size_t SymSeq::dim(int r, int d) const {
  const GComplex* c = get(r);
  return c ? c->dim(d) : 0;
}

void SymSeq::validate() const {
  for (auto& [r, c] : comps_) {
    if (r > policy_.r_max) throw InvalidComplex("component beyond r_max");
    if (c.group().name() != "S" + std::to_string(r)) throw GroupMismatch("component group is not the symmetric group");
    c.validate();
  }
}

int perm_index(const Perm& p) {
  int n = int(p.size());
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (p[j] < p[i]) ++smaller;
    idx = idx * (n - i) + smaller;
  }
  return idx;
}

namespace {

// Σ_r acting on R[Σ_r]^copies by left multiplication.
GComplex regular(const Ring& ring, int r, int degree, std::size_t copies) {
  Group g = Group::symmetric(r);
  std::size_t n = g.order();
  GComplex c(ring, g, degree, degree);
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < copies; ++k)
    for (std::size_t e = 0; e < n; ++e) labels.push_back((copies > 1 ? "e" + std::to_string(k) + ":" : "") + g.label(int(e)));
  c.set_basis(degree, labels);
  for (std::size_t gi = 0; gi < g.generators().size(); ++gi) {
    ZMatrix m(n * copies, n * copies);
    for (std::size_t k = 0; k < copies; ++k)
      for (std::size_t e = 0; e < n; ++e) m.cols[k * n + e].push_back({std::int32_t(k * n + std::size_t(g.mul(g.generators()[gi], int(e)))), 1});
    c.set_action(gi, degree, std::move(m));
  }
  return c;
}

}  // namespace

SymSeq unit_symseq(const Ring& ring, const TruncationPolicy& policy) {
  SymSeq s(ring, policy);
  s.set(1, trivial_module_complex(ring, Group::symmetric(1), 0));
  return s;
}

SymSeq constant_symseq(const Ring& ring, const TruncationPolicy& policy, int r_min) {
  SymSeq s(ring, policy);
  for (int r = r_min; r <= policy.r_max; ++r) s.set(r, trivial_module_complex(ring, Group::symmetric(r), 0));
  return s;
}

SymSeq free_symseq(const Ring& ring, const TruncationPolicy& policy, int r, int degree, std::size_t copies) {
  SymSeq s(ring, policy);
  s.set(r, regular(ring, r, degree, copies));
  return s;
}

SymSeq trivial_symseq(const Ring& ring, const TruncationPolicy& policy, int r, int degree, std::size_t copies) {
  SymSeq s(ring, policy);
  Group g = Group::symmetric(r);
  GComplex c(ring, g, degree, degree);
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < copies; ++k) labels.push_back("t" + std::to_string(k));
  c.set_basis(degree, labels);
  for (std::size_t gi = 0; gi < g.generators().size(); ++gi) {
    ZMatrix m(copies, copies);
    for (std::size_t k = 0; k < copies; ++k) m.cols[k].push_back({std::int32_t(k), 1});
    c.set_action(gi, degree, std::move(m));
  }
  s.set(r, std::move(c));
  return s;
}

}  // namespace opcalc

namespace opcalc {

namespace {

using Key = std::vector<int>;
using KeyTerms = std::vector<std::pair<Key, std::int64_t>>;

// Signed images of every group element on a component, cached per degree.
class ActionTable {
 public:
  explicit ActionTable(const GComplex& c) : c_(c) {
    for (int d = c.d_min(); d <= c.d_max(); ++d) {
      std::vector<std::vector<SignedImage>> per;
      for (std::size_t e = 0; e < c.group().order(); ++e) per.push_back(c.signed_perm(int(e), d));
      img_.push_back(std::move(per));
    }
  }
  SignedImage at(const Perm& s, int d, int i) const { return img_[d - c_.d_min()][perm_index(s)][i]; }

 private:
  const GComplex& c_;
  std::vector<std::vector<std::vector<SignedImage>>> img_;
};

struct Factor {
  const GComplex* c = nullptr;
  std::unique_ptr<ActionTable> act;
};

std::map<int, Factor> factors(const SymSeq& x) {
  std::map<int, Factor> out;
  for (int r : x.arities()) {
    const GComplex* c = x.get(r);
    out[r] = Factor{c, std::make_unique<ActionTable>(*c)};
  }
  return out;
}

std::vector<int> mask_elems(unsigned mask) {
  std::vector<int> out;
  for (int p = 0; mask >> p; ++p)
    if (mask >> p & 1) out.push_back(p + 1);
  return out;
}

unsigned image_mask(const Perm& s, unsigned mask) {
  unsigned out = 0;
  for (int p : mask_elems(mask)) out |= 1u << s[p - 1];
  return out;
}

// The permutation of {0..|A|-1} induced by s between A and s(A), both in increasing order.
Perm induced(const Perm& s, unsigned mask) {
  std::vector<int> a = mask_elems(mask);
  std::vector<int> img = mask_elems(image_mask(s, mask));
  Perm t(a.size());
  for (std::size_t q = 0; q < a.size(); ++q)
    t[q] = int(std::lower_bound(img.begin(), img.end(), s[a[q] - 1] + 1) - img.begin());
  return t;
}

std::string mask_str(unsigned mask) {
  std::string s = "{";
  for (int p : mask_elems(mask)) s += (s.size() > 1 ? "," : "") + std::to_string(p);
  return s + "}";
}

// Σ_n-complex with a basis of keys; the action of each adjacent transposition and the
// differential are given on keys.
struct KeyComplex {
  int n = 0;
  std::map<int, std::vector<Key>> keys;  // degree → sorted keys
  std::function<KeyTerms(int d, const Key&)> diff;
  std::function<KeyTerms(const Perm& s, int d, const Key&)> act;
  std::function<std::string(const Key&)> label;
};

GComplex realize(const Ring& ring, const KeyComplex& k) {
  int lo = k.keys.begin()->first, hi = k.keys.rbegin()->first;
  Group g = Group::symmetric(k.n);
  GComplex c(ring, g, lo, hi);
  std::map<int, std::map<Key, std::int32_t>> index;
  for (auto& [d, ks] : k.keys) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      index[d][ks[i]] = std::int32_t(i);
      labels.push_back(k.label(ks[i]));
    }
    c.set_basis(d, labels);
  }
  auto column = [&](int d, const KeyTerms& ts) {
    ZMatrix::Column col;
    auto it = index.find(d);
    for (auto& [key, v] : ts) {
      if (it == index.end()) continue;
      auto j = it->second.find(key);
      if (j != it->second.end()) col.push_back({j->second, v});
    }
    return col;
  };
  for (int d = lo; d <= hi; ++d) {
    const auto& ks = k.keys.count(d) ? k.keys.at(d) : std::vector<Key>{};
    if (d > lo) {
      ZMatrix m(c.dim(d - 1), c.dim(d));
      for (std::size_t i = 0; i < ks.size(); ++i) m.cols[i] = column(d - 1, k.diff(d, ks[i]));
      m.canonicalize();
      c.set_diff(d, std::move(m));
    }
    for (std::size_t gi = 0; gi < g.generators().size(); ++gi) {
      const Perm& s = g.perm(g.generators()[gi]);
      ZMatrix m(c.dim(d), c.dim(d));
      for (std::size_t i = 0; i < ks.size(); ++i) m.cols[i] = column(d, k.act(s, d, ks[i]));
      m.canonicalize();
      c.set_action(gi, d, std::move(m));
    }
  }
  return c;
}

bool any_truncated(const SymSeq& x) {
  if (x.truncated()) return true;
  for (int r : x.arities())
    if (x.get(r)->truncated_below() || x.get(r)->truncated_above()) return true;
  return false;
}

TruncationPolicy joined(const SymSeq& x, const SymSeq& y) {
  TruncationPolicy p = x.policy();
  p.r_max = std::max(p.r_max, y.policy().r_max);
  p.d_min = std::min(p.d_min, y.policy().d_min);
  p.d_max = std::max(p.d_max, y.policy().d_max);
  return p;
}

void install(SymSeq& out, int n, const Ring& ring, const KeyComplex& k) {
  if (k.keys.empty()) return;
  if (n > out.policy().r_max) {
    if (out.policy().on_overflow == OverflowMode::Error)
      throw Overflow("arity " + std::to_string(n) + " exceeds r_max");
    out.mark_truncated();
    return;
  }
  out.set(n, realize(ring, k));
}

}  // namespace

SymSeq day_tensor(const SymSeq& x, const SymSeq& y) {
  if (x.ring() != y.ring()) throw RingMismatch("day tensor over different rings");
  const Ring& ring = x.ring();
  SymSeq out(ring, joined(x, y));
  auto fx = factors(x), fy = factors(y);
  int top = (x.arities().empty() ? 0 : x.arities().back()) + (y.arities().empty() ? 0 : y.arities().back());
  // key: (mask of the x-inputs, dx, i, dy, j)
  for (int n = 0; n <= top; ++n) {
    KeyComplex k;
    k.n = n;
    for (auto& [p, a] : fx) {
      auto jt = fy.find(n - p);
      if (jt == fy.end()) continue;
      const GComplex& b = *jt->second.c;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != p) continue;
        for (int dx = a.c->d_min(); dx <= a.c->d_max(); ++dx)
          for (int dy = b.d_min(); dy <= b.d_max(); ++dy)
            for (std::size_t i = 0; i < a.c->dim(dx); ++i)
              for (std::size_t j = 0; j < b.dim(dy); ++j) k.keys[dx + dy].push_back({int(mask), dx, int(i), dy, int(j)});
      }
    }
    for (auto& [d, ks] : k.keys) std::sort(ks.begin(), ks.end());
    auto part = [&, n](unsigned mask) { return std::pair<int, int>{std::popcount(mask), n - std::popcount(mask)}; };
    k.diff = [&, part](int, const Key& key) {
      auto [p, q] = part(unsigned(key[0]));
      const GComplex& a = *fx.at(p).c;
      const GComplex& b = *fy.at(q).c;
      KeyTerms out;
      if (key[1] > a.d_min())
        for (auto [r, v] : a.diff(key[1]).cols[key[2]]) out.push_back({{key[0], key[1] - 1, r, key[3], key[4]}, v});
      std::int64_t sg = key[1] % 2 ? -1 : 1;
      if (key[3] > b.d_min())
        for (auto [r, v] : b.diff(key[3]).cols[key[4]]) out.push_back({{key[0], key[1], key[2], key[3] - 1, r}, sg * v});
      return out;
    };
    k.act = [&, part, n](const Perm& s, int, const Key& key) {
      unsigned mask = unsigned(key[0]);
      unsigned rest = ((1u << n) - 1) & ~mask;
      auto [p, q] = part(mask);
      SignedImage u = fx.at(p).act->at(induced(s, mask), key[1], key[2]);
      SignedImage w = fy.at(q).act->at(induced(s, rest), key[3], key[4]);
      return KeyTerms{{{int(image_mask(s, mask)), key[1], u.index, key[3], w.index}, std::int64_t(u.sign) * w.sign}};
    };
    k.label = [&, part, n](const Key& key) {
      auto [p, q] = part(unsigned(key[0]));
      unsigned rest = ((1u << n) - 1) & ~unsigned(key[0]);
      return fx.at(p).c->basis(key[1])[key[2]] + mask_str(unsigned(key[0])) + "⊗" + fy.at(q).c->basis(key[3])[key[4]] + mask_str(rest);
    };
    install(out, n, ring, k);
  }
  if (any_truncated(x) || any_truncated(y)) out.mark_truncated();
  return out;
}

SymSeq lev_tensor(const SymSeq& x, const SymSeq& y) {
  if (x.ring() != y.ring()) throw RingMismatch("levelwise tensor over different rings");
  SymSeq out(x.ring(), joined(x, y));
  for (int r : x.arities())
    if (const GComplex* b = y.get(r)) {
      GComplex t = tensor(*x.get(r), *b);
      bool nonzero = false;
      for (int d = t.d_min(); d <= t.d_max(); ++d) nonzero = nonzero || t.dim(d) > 0;
      if (nonzero) out.set(r, std::move(t));
    }
  if (any_truncated(x) || any_truncated(y)) out.mark_truncated();
  return out;
}

namespace {

// X(r) ⊗ Y^{⊗r} summed over r, before dividing by Σ_r. Key: (r, dx, i, then per slot
// (mask, dy, j)); slot k of the X-operation receives the inputs in its mask.
class Composite {
 public:
  Composite(const SymSeq& x, const SymSeq& y) : fx_(factors(x)), fy_(factors(y)) {}

  std::map<int, std::vector<Key>> all_keys(int n) const {
    std::map<int, std::vector<Key>> out;
    for (auto& [r, a] : fx_) {
      Key key{r, 0, 0};
      assign(n, r, 0, (1u << n) - 1, key, a, out);
    }
    for (auto& [d, ks] : out) std::sort(ks.begin(), ks.end());
    return out;
  }

  // τ·key for τ ∈ Σ_r: the operation is relabelled and slot k's data moves to τ(k).
  std::pair<Key, std::int64_t> slot_act(const Perm& t, const Key& key) const {
    int r = key[0];
    SignedImage u = fx_.at(r).act->at(t, key[1], key[2]);
    Key out(key.size());
    out[0] = r;
    out[1] = key[1];
    out[2] = u.index;
    std::vector<int> degs(r), order(r);
    Perm ti = inverse(t);
    for (int k = 0; k < r; ++k) {
      degs[k] = key[4 + 3 * k];
      for (int c = 0; c < 3; ++c) out[3 + 3 * t[k] + c] = key[3 + 3 * k + c];
    }
    for (int m = 0; m < r; ++m) order[m] = ti[m];
    return {out, std::int64_t(u.sign) * koszul_sign(degs, order)};
  }

  KeyTerms diff(const Key& key) const {
    KeyTerms out;
    int r = key[0];
    const GComplex& a = *fx_.at(r).c;
    if (key[1] > a.d_min())
      for (auto [row, v] : a.diff(key[1]).cols[key[2]]) {
        Key k2 = key;
        k2[1] -= 1;
        k2[2] = row;
        out.push_back({k2, v});
      }
    int deg = key[1];
    for (int k = 0; k < r; ++k) {
      int mask = key[3 + 3 * k], dy = key[4 + 3 * k];
      const GComplex& b = *fy_.at(std::popcount(unsigned(mask))).c;
      std::int64_t sg = deg % 2 ? -1 : 1;
      if (dy > b.d_min())
        for (auto [row, v] : b.diff(dy).cols[key[5 + 3 * k]]) {
          Key k2 = key;
          k2[4 + 3 * k] -= 1;
          k2[5 + 3 * k] = row;
          out.push_back({k2, sg * v});
        }
      deg += dy;
    }
    return out;
  }

  std::pair<Key, std::int64_t> input_act(const Perm& s, const Key& key) const {
    Key out = key;
    std::int64_t sign = 1;
    for (int k = 0; k < key[0]; ++k) {
      unsigned mask = unsigned(key[3 + 3 * k]);
      SignedImage w = fy_.at(std::popcount(mask)).act->at(induced(s, mask), key[4 + 3 * k], key[5 + 3 * k]);
      out[3 + 3 * k] = int(image_mask(s, mask));
      out[5 + 3 * k] = w.index;
      sign *= w.sign;
    }
    return {out, sign};
  }

  std::string label(const Key& key) const {
    std::string s = fx_.at(key[0]).c->basis(key[1])[key[2]] + "(";
    for (int k = 0; k < key[0]; ++k) {
      unsigned mask = unsigned(key[3 + 3 * k]);
      s += (k ? "," : "") + fy_.at(std::popcount(mask)).c->basis(key[4 + 3 * k])[key[5 + 3 * k]] + mask_str(mask);
    }
    return s + ")";
  }

 private:
  void assign(int n, int r, int k, unsigned left, Key& key, const Factor& a, std::map<int, std::vector<Key>>& out) const {
    if (k == r) {
      if (left) return;
      for (int dx = a.c->d_min(); dx <= a.c->d_max(); ++dx)
        for (std::size_t i = 0; i < a.c->dim(dx); ++i) {
          key[1] = dx;
          key[2] = int(i);
          decorate(r, 0, dx, key, out);
        }
      return;
    }
    // masks of slot k: submasks of `left`, including the empty one
    for (unsigned sub = left;; sub = (sub - 1) & left) {
      if (fy_.count(std::popcount(sub))) {
        key.resize(3 + 3 * k);
        key.insert(key.end(), {int(sub), 0, 0});
        assign(n, r, k + 1, left & ~sub, key, a, out);
      }
      if (sub == 0) break;
    }
    key.resize(3 + 3 * k);
  }

  void decorate(int r, int k, int deg, Key& key, std::map<int, std::vector<Key>>& out) const {
    if (k == r) {
      out[deg].push_back(key);
      return;
    }
    const GComplex& b = *fy_.at(std::popcount(unsigned(key[3 + 3 * k]))).c;
    for (int dy = b.d_min(); dy <= b.d_max(); ++dy)
      for (std::size_t j = 0; j < b.dim(dy); ++j) {
        key[4 + 3 * k] = dy;
        key[5 + 3 * k] = int(j);
        decorate(r, k + 1, deg + dy, key, out);
      }
  }

  std::map<int, Factor> fx_, fy_;
};

struct OrbitInfo {
  Key rep;
  std::int64_t sign = 1;  // [key] = sign·[rep]
  bool consistent = true;
  std::size_t stabilizer = 0;
};

class Quotient {
 public:
  Quotient(const Composite& c, const Ring& ring) : c_(c), ring_(ring) {}

  const OrbitInfo& info(const Key& key) const {
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int r = key[0];
    OrbitInfo o;
    o.rep = key;
    std::vector<std::pair<Key, std::int64_t>> images;
    for (const Perm& t : perms(r)) {
      auto im = c_.slot_act(t, key);
      if (im.first < o.rep) o.rep = im.first;
      images.push_back(std::move(im));
    }
    bool first = true;
    for (auto& [k2, s] : images)
      if (k2 == o.rep) {
        if (first) o.sign = s, first = false;
        else if (ring_.reduce(s - o.sign) != 0) o.consistent = false;
      }
    for (auto& [k2, s] : images)
      if (k2 == key) ++o.stabilizer;
    return memo_.emplace(key, o).first->second;
  }

  // Orbit sum of a representative: member → coefficient.
  std::map<Key, std::int64_t> members(const Key& rep) const {
    std::map<Key, std::int64_t> out;
    for (const Perm& t : perms(rep[0])) {
      auto [k2, s] = c_.slot_act(t, rep);
      out.emplace(k2, s);
    }
    return out;
  }

  bool kept(const Key& rep) const {
    const OrbitInfo& o = info(rep);
    if (o.consistent) return true;
    if (ring_.kind() == RingKind::Integers)
      throw ShapeUnsupported("orbit has 2-torsion over Z (sign-inconsistent stabiliser)");
    return false;
  }

 private:
  const std::vector<Perm>& perms(int r) const {
    auto it = perms_.find(r);
    if (it == perms_.end()) it = perms_.emplace(r, all_perms(r)).first;
    return it->second;
  }
  const Composite& c_;
  Ring ring_;
  mutable std::map<Key, OrbitInfo> memo_;
  mutable std::map<int, std::vector<Perm>> perms_;
};

// Both quotients of arity n, on the kept orbit representatives.
void build_compose(const Composite& comp, const Quotient& quo, int n, KeyComplex& orb, KeyComplex& inv) {
  orb.n = inv.n = n;
  for (auto& [d, ks] : comp.all_keys(n))
    for (auto& k : ks)
      if (quo.info(k).rep == k && quo.kept(k)) {
        orb.keys[d].push_back(k);
        inv.keys[d].push_back(k);
      }
  auto to_class = [&quo](const KeyTerms& ts) {
    KeyTerms out;
    for (auto& [k, v] : ts) {
      const OrbitInfo& o = quo.info(k);
      if (quo.kept(o.rep)) out.push_back({o.rep, v * o.sign});
    }
    return out;
  };
  // coefficients of an invariant vector at representatives
  auto at_reps = [&quo](const KeyTerms& ts) {
    std::map<Key, std::int64_t> acc;
    for (auto& [k, v] : ts)
      if (quo.info(k).rep == k && quo.kept(k)) acc[k] += v;
    KeyTerms out(acc.begin(), acc.end());
    return out;
  };
  orb.diff = [&comp, to_class](int, const Key& k) { return to_class(comp.diff(k)); };
  orb.act = [&comp, to_class](const Perm& s, int, const Key& k) {
    auto [k2, sg] = comp.input_act(s, k);
    return to_class({{k2, sg}});
  };
  inv.diff = [&comp, &quo, at_reps](int, const Key& k) {
    KeyTerms all;
    for (auto& [m, c] : quo.members(k))
      for (auto& [t, v] : comp.diff(m)) all.push_back({t, c * v});
    return at_reps(all);
  };
  inv.act = [&comp, &quo, at_reps](const Perm& s, int, const Key& k) {
    KeyTerms all;
    for (auto& [m, c] : quo.members(k)) {
      auto [k2, sg] = comp.input_act(s, m);
      all.push_back({k2, c * sg});
    }
    return at_reps(all);
  };
  orb.label = [&comp](const Key& k) { return "[" + comp.label(k) + "]"; };
  inv.label = [&comp](const Key& k) { return "N" + comp.label(k); };
}

void guard(const SymSeq& x, const SymSeq& y, ComposeMode mode) {
  if (mode == ComposeMode::Invariants && y.get(0) && any_truncated(x))
    throw DivergenceGuard("restricted composition with arity-0 input needs all of X, which was truncated");
}

int compose_top(const SymSeq& x, const SymSeq& y, const TruncationPolicy& p) {
  int ymax = y.arities().empty() ? 0 : y.arities().back();
  int xmax = x.arities().empty() ? 0 : x.arities().back();
  return std::min(p.r_max, xmax * ymax);
}

}  // namespace

SymSeq compose(const SymSeq& x, const SymSeq& y, ComposeMode mode) {
  if (x.ring() != y.ring()) throw RingMismatch("composition over different rings");
  guard(x, y, mode);
  const Ring& ring = x.ring();
  SymSeq out(ring, joined(x, y));
  Composite comp(x, y);
  Quotient quo(comp, ring);
  int ymax = y.arities().empty() ? 0 : y.arities().back();
  int xmax = x.arities().empty() ? 0 : x.arities().back();
  if (xmax * ymax > out.policy().r_max) {
    if (out.policy().on_overflow == OverflowMode::Error) throw Overflow("composite reaches arities beyond r_max");
    out.mark_truncated();
  }
  for (int n = 0; n <= compose_top(x, y, out.policy()); ++n) {
    KeyComplex orb, inv;
    build_compose(comp, quo, n, orb, inv);
    install(out, n, ring, mode == ComposeMode::Orbits ? orb : inv);
  }
  if (any_truncated(x) || any_truncated(y)) out.mark_truncated();
  if (y.get(0) && any_truncated(x)) out.mark_truncated();
  return out;
}

bool NormData::is_iso(int r) const {
  auto it = map.components.find(r);
  if (it == map.components.end()) return orbits.get(r) == nullptr && invariants.get(r) == nullptr;
  for (const ZMatrix& m : it->second) {
    if (m.rows != m.ncols()) return false;
    if (orbits.ring().kind() == RingKind::Integers) {
      IntegralRank ir = integral_rank(m);
      if (ir.rank != m.rows || !ir.torsion.empty()) return false;
    } else if (rank_in(m, orbits.ring()) != m.rows) {
      return false;
    }
  }
  return true;
}

NormData norm_map(const SymSeq& x, const SymSeq& y) {
  if (x.ring() != y.ring()) throw RingMismatch("norm map over different rings");
  guard(x, y, ComposeMode::Invariants);
  NormData nd{compose(x, y, ComposeMode::Orbits), compose(x, y, ComposeMode::Invariants), {}};
  Composite comp(x, y);
  Quotient quo(comp, x.ring());
  for (int n : nd.orbits.arities()) {
    const GComplex& src = *nd.orbits.get(n);
    KeyComplex orb, inv;
    build_compose(comp, quo, n, orb, inv);
    std::vector<ZMatrix> mats;
    for (int d = src.d_min(); d <= src.d_max(); ++d) {
      std::size_t m = src.dim(d);
      ZMatrix z(m, m);
      auto reps = orb.keys.find(d);
      // [rep] ↦ Σ_τ τ·rep = |Stab(rep)|·N(rep)
      for (std::size_t i = 0; i < m; ++i) {
        std::int64_t stab = std::int64_t(quo.info(reps->second[i]).stabilizer);
        if (x.ring().reduce(stab) != 0) z.cols[i].push_back({std::int32_t(i), stab});
      }
      mats.push_back(std::move(z));
    }
    nd.map.components[n] = std::move(mats);
  }
  return nd;
}

}  // namespace opcalc
