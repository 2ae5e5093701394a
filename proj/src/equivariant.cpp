// Hom complexes, orbit/fixed-point functors, norm maps, resolutions and the tame test.
#include <algorithm>
#include <map>
#include <unordered_map>

#include "opcalc/complex.hpp"

namespace opcalc {
namespace {


// Signed permutations of every group element on every degree of x.
struct SignedAction {
  int lo = 0;
  std::vector<std::vector<std::vector<SignedImage>>> perms;  // [degree][element]
  const std::vector<SignedImage>& at(int d, int e) const { return perms[d - lo][e]; }
};

SignedAction signed_action(const GComplex& x) {
  SignedAction a;
  a.lo = x.d_min();
  for (int d = x.d_min(); d <= x.d_max(); ++d) {
    std::vector<std::vector<SignedImage>> per;
    for (std::size_t e = 0; e < x.group().order(); ++e) per.push_back(x.signed_perm(int(e), d));
    a.perms.push_back(std::move(per));
  }
  return a;
}

// Orbits of a signed permutation action on one degree.
struct OrbitData {
  std::vector<int> rep;                             // representative basis index
  std::vector<std::vector<std::pair<int, int>>> members;  // (index, sign relative to rep)
  std::vector<char> consistent;
  std::vector<int> orbit_of, sign_of;               // per basis element
};

OrbitData orbit_data(std::size_t n, const std::vector<std::vector<SignedImage>>& per_element) {
  OrbitData o;
  o.orbit_of.assign(n, -1);
  o.sign_of.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (o.orbit_of[i] >= 0) continue;
    int id = int(o.rep.size());
    o.rep.push_back(int(i));
    o.members.push_back({});
    bool ok = true;
    for (const auto& img : per_element) {
      auto [j, s] = img[i];
      if (o.orbit_of[j] < 0) {
        o.orbit_of[j] = id;
        o.sign_of[j] = s;
        o.members.back().push_back({j, s});
      } else if (o.sign_of[j] != s) {
        ok = false;
      }
    }
    o.consistent.push_back(ok);
  }
  return o;
}

bool keep_orbit(const OrbitData& o, std::size_t k, const Ring& ring) {
  return o.consistent[k] || ring.characteristic() == 2;
}

// Hom_{R[G]}(P, X) with its basis of invariant orbit sums of elementary maps.
struct HomData {
  GComplex complex;
  // per hom degree: orbit list; members are (p_degree, p_index, x_index, sign)
  struct Elt {
    int a;
    int i, j;
    int sign;
  };
  int lo = 0;
  std::vector<std::vector<std::vector<Elt>>> orbits;
  // elementary (a,i,j) → (orbit index in its degree, sign)
  std::vector<std::map<std::tuple<int, int, int>, std::pair<int, int>>> lookup;
};

HomData build_hom(const GComplex& p, const GComplex& x) {
  if (!(p.ring() == x.ring())) throw RingMismatch("hom_complex over different rings");
  if (!(p.group() == x.group())) throw GroupMismatch("hom_complex between different groups");
  const Ring& ring = p.ring();
  const Group& g = p.group();
  SignedAction pa = signed_action(p), xa = signed_action(x);
  int lo = x.d_min() - p.d_max(), hi = x.d_max() - p.d_min();
  HomData h;
  h.lo = lo;
  h.complex = GComplex(ring, Group::trivial(), lo, hi);
  h.orbits.resize(hi - lo + 1);
  h.lookup.resize(hi - lo + 1);
  for (int n = lo; n <= hi; ++n) {
    std::vector<std::string> labels;
    auto& orbs = h.orbits[n - lo];
    auto& look = h.lookup[n - lo];
    for (int a = p.d_min(); a <= p.d_max(); ++a) {
      int b = a + n;
      if (!x.in_range(b)) continue;
      std::size_t np = p.dim(a), nx = x.dim(b);
      for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < nx; ++j) {
          if (look.count({a, int(i), int(j)})) continue;
          std::vector<HomData::Elt> members;
          std::map<std::pair<int, int>, int> seen;
          bool ok = true;
          for (std::size_t e = 0; e < g.order(); ++e) {
            auto pi = pa.at(a, int(e))[i];
            auto xj = xa.at(b, int(e))[j];
            int s = pi.sign * xj.sign;
            auto key = std::make_pair(int(pi.index), int(xj.index));
            auto it = seen.find(key);
            if (it == seen.end()) {
              seen[key] = s;
              members.push_back({a, pi.index, xj.index, s});
            } else if (it->second != s) {
              ok = false;
            }
          }
          int id = -1;
          if (ok || ring.characteristic() == 2) {
            id = int(orbs.size());
            labels.push_back(x.basis(b)[j] + "<-" + p.basis(a)[i]);
            orbs.push_back(members);
          }
          for (auto& m : members) look[{m.a, m.i, m.j}] = {id, m.sign};
        }
    }
    h.complex.set_basis(n, labels);
  }
  // transposed P differentials for h∘∂
  std::map<int, ZMatrix> pt;
  for (int a = p.d_min(); a <= p.d_max(); ++a) pt[a] = p.diff(a).transpose();
  for (int n = lo; n <= hi; ++n) {
    ZMatrix m(h.complex.dim(n - 1), h.complex.dim(n));
    if (n > lo) {
      auto& look = h.lookup[n - 1 - lo];
      int sign_h = (n % 2 == 0) ? -1 : 1;  // -(-1)^n
      for (std::size_t k = 0; k < h.orbits[n - lo].size(); ++k) {
        std::map<std::tuple<int, int, int>, std::int64_t> acc;
        for (auto& e : h.orbits[n - lo][k]) {
          int b = e.a + n;
          if (b > x.d_min())
            for (auto [r, v] : x.diff(b).cols[e.j]) acc[{e.a, e.i, r}] += e.sign * v;
          if (e.a + 1 <= p.d_max())
            for (auto [l, v] : pt.at(e.a + 1).cols[e.i]) acc[{e.a + 1, l, e.j}] += sign_h * e.sign * v;
        }
        // read coefficients at orbit representatives
        for (auto& [key, v] : acc) {
          if (ring.reduce(v) == 0) continue;
          auto it = look.find(key);
          if (it == look.end() || it->second.first < 0) continue;
          const auto& rep = h.orbits[n - 1 - lo][it->second.first][0];
          if (rep.a == std::get<0>(key) && rep.i == std::get<1>(key) && rep.j == std::get<2>(key))
            m.cols[k].push_back({it->second.first, v});
        }
      }
    }
    h.complex.set_diff(n, std::move(m));
  }
  int vlo = lo, vhi = hi;
  if (x.truncated_below()) vlo = x.valid_min() - p.d_min() + 1;
  if (x.truncated_above()) vhi = x.valid_max() - p.d_max() - 1;
  h.complex.set_valid_window(vlo, vhi);
  return h;
}

// Induced map Hom(P, X) → Hom(P, Y), h ↦ f∘h.
ChainMap induced_hom_map(const HomData& hx, const HomData& hy, const ChainMap& f, const Ring& ring) {
  ChainMap out{&hx.complex, &hy.complex, {}};
  for (int n = hx.complex.d_min(); n <= hx.complex.d_max(); ++n) {
    ZMatrix m(hy.complex.dim(n), hx.complex.dim(n));
    if (hy.complex.in_range(n)) {
      auto& look = hy.lookup[n - hy.lo];
      for (std::size_t k = 0; k < hx.orbits[n - hx.lo].size(); ++k) {
        std::map<std::tuple<int, int, int>, std::int64_t> acc;
        for (auto& e : hx.orbits[n - hx.lo][k]) {
          int b = e.a + n;
          if (!f.target->in_range(b)) continue;
          for (auto [r, v] : f.at(b).cols[e.j]) acc[{e.a, e.i, r}] += e.sign * v;
        }
        for (auto& [key, v] : acc) {
          if (ring.reduce(v) == 0) continue;
          auto it = look.find(key);
          if (it == look.end() || it->second.first < 0) continue;
          const auto& rep = hy.orbits[n - hy.lo][it->second.first][0];
          if (rep.a == std::get<0>(key) && rep.i == std::get<1>(key) && rep.j == std::get<2>(key))
            m.cols[k].push_back({it->second.first, v});
        }
      }
    }
    m.canonicalize();
    out.components.push_back(std::move(m));
  }
  return out;
}

TameVerdict cone_verdict(const ChainMap& f) {
  GComplex c = mapping_cone(f);
  TameVerdict v;
  if (c.valid_min() > c.valid_max()) return v;
  auto hs = homology_range(c, c.valid_min(), c.valid_max());
  for (std::size_t k = 0; k < hs.size(); ++k)
    if (!hs[k].is_zero()) {
      v.equivalence = false;
      v.witness_degree = c.valid_min() + int(k);
      break;
    }
  return v;
}

}  // namespace

GComplex hom_complex(const GComplex& p, const GComplex& x) { return build_hom(p, x).complex; }

bool is_free_action(const GComplex& x) {
  if (!x.is_signed_permutation()) return false;
  SignedAction a = signed_action(x);
  for (int d = x.d_min(); d <= x.d_max(); ++d) {
    OrbitData o = orbit_data(x.dim(d), a.perms[d - a.lo]);
    for (std::size_t k = 0; k < o.rep.size(); ++k)
      if (!o.consistent[k] || o.members[k].size() != x.group().order()) return false;
  }
  return true;
}

std::vector<TameVerdict> tame_equivalence_test(const ChainMap& f, const std::vector<GComplex>& tests) {
  std::vector<TameVerdict> out;
  const Ring& ring = f.source->ring();
  for (const auto& t : tests) {
    if (!is_free_action(t)) throw TestNotQuasiprojective("test complex is not built from free signed-permutation modules");
    HomData hx = build_hom(t, *f.source), hy = build_hom(t, *f.target);
    ChainMap g = induced_hom_map(hx, hy, f, ring);
    out.push_back(cone_verdict(g));
  }
  return out;
}

static GComplex orbit_like(const GComplex& x, bool fixed) {
  const Ring& ring = x.ring();
  SignedAction a = signed_action(x);
  std::vector<OrbitData> od;
  for (int d = x.d_min(); d <= x.d_max(); ++d) od.push_back(orbit_data(x.dim(d), a.perms[d - a.lo]));
  // index of each kept orbit
  std::vector<std::vector<int>> kept_id;
  GComplex out(ring, Group::trivial(), x.d_min(), x.d_max());
  for (int d = x.d_min(); d <= x.d_max(); ++d) {
    const auto& o = od[d - x.d_min()];
    std::vector<int> ids(o.rep.size(), -1);
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < o.rep.size(); ++k) {
      if (!keep_orbit(o, k, ring)) {
        if (ring.kind() == RingKind::Integers && !fixed)
          throw ShapeUnsupported("orbit module has 2-torsion over Z (sign-inconsistent orbit)");
        continue;
      }
      ids[k] = int(labels.size());
      labels.push_back(x.basis(d)[o.rep[k]]);
    }
    kept_id.push_back(ids);
    out.set_basis(d, labels);
  }
  for (int d = x.d_min() + 1; d <= x.d_max(); ++d) {
    const auto& o = od[d - x.d_min()];
    const auto& lower = od[d - 1 - x.d_min()];
    const auto& ids = kept_id[d - x.d_min()];
    const auto& lower_ids = kept_id[d - 1 - x.d_min()];
    const ZMatrix& dm = x.diff(d);
    ZMatrix m(out.dim(d - 1), out.dim(d));
    for (std::size_t k = 0; k < o.rep.size(); ++k) {
      if (ids[k] < 0) continue;
      auto& col = m.cols[ids[k]];
      if (!fixed) {
        // [∂ rep] read in orbit classes
        for (auto [r, v] : dm.cols[o.rep[k]]) {
          int ok = lower.orbit_of[r];
          if (lower_ids[ok] >= 0) col.push_back({lower_ids[ok], v * lower.sign_of[r]});
        }
      } else {
        // ∂(orbit sum), read at representatives
        std::map<int, std::int64_t> acc;
        for (auto [i, s] : o.members[k])
          for (auto [r, v] : dm.cols[i]) acc[r] += s * v;
        for (auto& [r, v] : acc) {
          int ok = lower.orbit_of[r];
          if (lower.rep[ok] == r && lower_ids[ok] >= 0) col.push_back({lower_ids[ok], v});
        }
      }
    }
    out.set_diff(d, std::move(m));
  }
  out.set_valid_window(x.valid_min(), x.valid_max());
  return out;
}

GComplex orbits(const GComplex& x) { return orbit_like(x, false); }
GComplex fixed_points(const GComplex& x) { return orbit_like(x, true); }

NormMap norm(const GComplex& x) {
  NormMap n{orbits(x), fixed_points(x), {}};
  SignedAction a = signed_action(x);
  for (int d = x.d_min(); d <= x.d_max(); ++d) {
    OrbitData o = orbit_data(x.dim(d), a.perms[d - a.lo]);
    ZMatrix m(n.target.dim(d), n.source.dim(d));
    std::size_t id = 0;
    for (std::size_t k = 0; k < o.rep.size(); ++k) {
      if (!keep_orbit(o, k, x.ring())) continue;
      std::int64_t stab = std::int64_t(x.group().order() / o.members[k].size());
      if (o.consistent[k]) m.cols[id].push_back({std::int32_t(id), stab});
      ++id;
    }
    m.canonicalize();
    n.components.push_back(std::move(m));
  }
  return n;
}

GComplex bar_resolution(const Ring& ring, const Group& group, int length) {
  std::size_t g = group.order();
  GComplex b(ring, group, 0, length);
  auto decode = [&](std::size_t code, int n) {
    std::vector<int> t(n + 1);
    for (int i = n; i >= 0; --i) {
      t[i] = int(code % g);
      code /= g;
    }
    return t;
  };
  auto encode = [&](const std::vector<int>& t) {
    std::size_t c = 0;
    for (int v : t) c = c * g + std::size_t(v);
    return c;
  };
  std::size_t count = 1;
  for (int n = 0; n <= length; ++n) {
    count *= g;
    std::vector<std::string> labels;
    for (std::size_t c = 0; c < count; ++c) {
      auto t = decode(c, n);
      std::string s = "(";
      for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + group.label(t[i]);
      labels.push_back(s + ")");
    }
    b.set_basis(n, labels);
    for (std::size_t k = 0; k < group.generators().size(); ++k) {
      ZMatrix act(count, count);
      for (std::size_t c = 0; c < count; ++c) {
        auto t = decode(c, n);
        for (auto& v : t) v = group.mul(group.generators()[k], v);
        act.cols[c].push_back({std::int32_t(encode(t)), 1});
      }
      b.set_action(k, n, std::move(act));
    }
    if (n > 0) {
      ZMatrix m(count / g, count);
      for (std::size_t c = 0; c < count; ++c) {
        auto t = decode(c, n);
        for (int i = 0; i <= n; ++i) {
          std::vector<int> face = t;
          face.erase(face.begin() + i);
          m.cols[c].push_back({std::int32_t(encode(face)), (i % 2 == 0) ? 1 : -1});
        }
      }
      b.set_diff(n, std::move(m));
    }
  }
  b.set_valid_window(0, length - 1);
  return b;
}

GComplex periodic_resolution(const Ring& ring, int n, int length) {
  Group c = Group::cyclic(n);
  GComplex p(ring, c, 0, length);
  for (int k = 0; k <= length; ++k) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("e" + std::to_string(k) + "*" + c.label(i));
    p.set_basis(k, labels);
    if (n > 1) {
      ZMatrix act(n, n);
      for (int i = 0; i < n; ++i) act.cols[i].push_back({(i + 1) % n, 1});
      p.set_action(0, k, std::move(act));
    }
    if (k > 0) {
      ZMatrix m(n, n);
      for (int i = 0; i < n; ++i) {
        if (k % 2 == 1) {  // 1 - g
          m.cols[i].push_back({i, 1});
          m.cols[i].push_back({(i + 1) % n, -1});
        } else {  // norm element
          for (int j = 0; j < n; ++j) m.cols[i].push_back({j, 1});
        }
      }
      p.set_diff(k, std::move(m));
    }
  }
  p.set_valid_window(0, length - 1);
  return p;
}

GComplex dual(const GComplex& x) {
  GComplex d(x.ring(), x.group(), -x.d_max(), -x.d_min());
  for (int k = x.d_min(); k <= x.d_max(); ++k) {
    std::vector<std::string> labels;
    for (auto& l : x.basis(k)) labels.push_back(l + "^");
    d.set_basis(-k, labels);
  }
  for (int k = x.d_min(); k <= x.d_max(); ++k) {
    // C^∨_{-k} → C^∨_{-k-1} is the transpose of ∂_{k+1}
    if (k + 1 <= x.d_max()) d.set_diff(-k, x.diff(k + 1).transpose());
    for (std::size_t g = 0; g < x.group().generators().size(); ++g) {
      int e = x.group().generators()[g];
      d.set_action(g, -k, x.element_action(x.group().inv(e), k).transpose());
    }
  }
  d.set_valid_window(-x.valid_max(), -x.valid_min());
  if (!x.truncated_above()) d.set_valid_window(d.d_min(), d.valid_max());
  if (!x.truncated_below()) d.set_valid_window(d.valid_min(), d.d_max());
  return d;
}

DividedOrbits divided_orbits(const GComplex& x, OrbitDirection dir, int resolution_length) {
  if (!is_free_action(x)) throw ShapeUnsupported("divided orbits need free signed-permutation modules");
  DividedOrbits out;
  if (dir == OrbitDirection::BoundedAboveFree) {
    out.complex = orbits(x);
  } else {
    if (resolution_length < 1) throw std::invalid_argument("resolution length must be at least 1");
    GComplex b = bar_resolution(x.ring(), x.group(), resolution_length);
    GComplex t = tensor(b, x);
    out.complex = orbits(t);
    out.complex.set_valid_window(x.valid_min(), std::min(x.valid_max(), x.d_min() + resolution_length - 1));
  }
  out.valid_min = out.complex.valid_min();
  out.valid_max = out.complex.valid_max();
  return out;
}

// ---- k[ε]/ε² ----

EpsComplex eps_periodic(const Ring& k, int lo, int hi, bool truncated_below, bool truncated_above) {
  if (!k.is_field()) throw NotAField("k[ε]/ε² support needs a field k");
  EpsComplex e;
  e.underlying = GComplex(k, Group::trivial(), lo, hi);
  for (int d = lo; d <= hi; ++d) e.underlying.set_basis(d, {"1@" + std::to_string(d), "e@" + std::to_string(d)});
  ZMatrix eps(2, 2);
  eps.cols[0].push_back({1, 1});
  for (int d = lo; d <= hi; ++d) {
    if (d > lo) e.underlying.set_diff(d, eps);
    e.eps.push_back(eps);
    e.generators.push_back({0});
  }
  e.underlying.set_valid_window(truncated_below ? lo + 1 : lo, truncated_above ? hi - 1 : hi);
  return e;
}

GComplex base_change_eps(const EpsComplex& x) {
  const GComplex& u = x.underlying;
  GComplex b(u.ring(), Group::trivial(), u.d_min(), u.d_max());
  std::vector<std::vector<int>> pos;  // basis index → generator position or -1
  for (int d = u.d_min(); d <= u.d_max(); ++d) {
    const auto& gens = x.generators[d - u.d_min()];
    std::vector<std::string> labels;
    std::vector<int> p(u.dim(d), -1);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      p[gens[i]] = int(i);
      labels.push_back(u.basis(d)[gens[i]]);
    }
    pos.push_back(p);
    b.set_basis(d, labels);
  }
  for (int d = u.d_min() + 1; d <= u.d_max(); ++d) {
    const auto& gens = x.generators[d - u.d_min()];
    const auto& lower = pos[d - 1 - u.d_min()];
    ZMatrix m(b.dim(d - 1), b.dim(d));
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (auto [r, v] : u.diff(d).cols[gens[i]])
        if (lower[r] >= 0) m.cols[i].push_back({lower[r], v});
    b.set_diff(d, std::move(m));
  }
  b.set_valid_window(u.valid_min(), u.valid_max());
  return b;
}

ChainMap underlying_map(const EpsMap& f) {
  return ChainMap{&f.source->underlying, &f.target->underlying, f.components};
}

ChainMap base_change_eps(const EpsMap& f, const GComplex& src, const GComplex& tgt) {
  ChainMap out{&src, &tgt, {}};
  const GComplex& u = f.source->underlying;
  for (int d = u.d_min(); d <= u.d_max(); ++d) {
    const auto& gens = f.source->generators[d - u.d_min()];
    ZMatrix m(tgt.dim(d), src.dim(d));
    if (tgt.in_range(d)) {
      const auto& tg = f.target->generators[d - f.target->underlying.d_min()];
      std::vector<int> p(f.target->underlying.dim(d), -1);
      for (std::size_t i = 0; i < tg.size(); ++i) p[tg[i]] = int(i);
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (auto [r, v] : f.components[d - u.d_min()].cols[gens[i]])
          if (p[r] >= 0) m.cols[i].push_back({p[r], v});
    }
    out.components.push_back(std::move(m));
  }
  return out;
}

EpsVerdict tame_equivalence_test_eps(const EpsMap& f) {
  EpsVerdict v;
  v.quasi_isomorphic = cone_verdict(underlying_map(f)).equivalence;
  GComplex s = base_change_eps(*f.source), t = base_change_eps(*f.target);
  v.base_change = cone_verdict(base_change_eps(f, s, t));
  return v;
}

}  // namespace opcalc
