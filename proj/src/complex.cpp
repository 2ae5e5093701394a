#include "opcalc/complex.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace opcalc {

// ---- Group ----

Group Group::from_table(std::string name, std::vector<std::string> labels, std::vector<std::vector<int>> table,
                        std::vector<int> generators) {
  Group g;
  g.name_ = std::move(name);
  g.labels_ = std::move(labels);
  g.table_ = std::move(table);
  g.gens_ = std::move(generators);
  g.finish();
  return g;
}

void Group::finish() {
  std::size_t n = labels_.size();
  if (n == 0 || table_.size() != n) throw std::invalid_argument("group table has wrong size");
  for (std::size_t a = 0; a < n; ++a) {
    if (table_[a].size() != n) throw std::invalid_argument("group table has wrong size");
    if (table_[0][a] != int(a) || table_[a][0] != int(a)) throw std::invalid_argument("element 0 is not the identity");
  }
  inv_.assign(n, -1);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (table_[a][b] == 0) inv_[a] = int(b);
  for (std::size_t a = 0; a < n; ++a)
    if (inv_[a] < 0 || table_[inv_[a]][a] != 0) throw std::invalid_argument("group table lacks inverses");
  if (n <= 64) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) throw std::invalid_argument("group table is not associative");
  }
  words_.assign(n, {});
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int e = queue.front();
    queue.pop_front();
    for (std::size_t k = 0; k < gens_.size(); ++k) {
      int f = table_[e][gens_[k]];
      if (seen[f]) continue;
      seen[f] = 1;
      words_[f] = words_[e];
      words_[f].push_back(int(k));
      queue.push_back(f);
    }
  }
  for (std::size_t e = 0; e < n; ++e)
    if (!seen[e]) throw std::invalid_argument("generators do not generate the group");
}

Group Group::trivial() { return from_table("1", {"e"}, {{0}}, {}); }

Group Group::cyclic(int n) {
  if (n < 1) throw std::invalid_argument("cyclic group order must be positive");
  std::vector<std::string> labels;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    labels.push_back(a == 0 ? "e" : "g^" + std::to_string(a));
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  }
  std::vector<int> gens;
  if (n > 1) gens.push_back(1);
  return from_table("C" + std::to_string(n), labels, table, gens);
}

static std::string perm_label(const Perm& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i] + 1);
  return s + "]";
}

Group Group::symmetric(int n) {
  auto perms = all_perms(n);
  std::size_t m = perms.size();
  std::vector<std::string> labels;
  for (auto& p : perms) labels.push_back(perm_label(p));
  auto index = [&](const Perm& p) {
    return int(std::lower_bound(perms.begin(), perms.end(), p) - perms.begin());
  };
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) table[a][b] = index(compose(perms[a], perms[b]));
  std::vector<int> gens;
  for (int i = 0; i + 1 < n; ++i) {
    Perm t = identity_perm(n);
    std::swap(t[i], t[i + 1]);
    gens.push_back(index(t));
  }
  Group g = from_table("S" + std::to_string(n), labels, table, gens);
  g.perms_ = perms;
  return g;
}

Group Group::product(const Group& a, const Group& b) {
  std::size_t na = a.order(), nb = b.order();
  std::vector<std::string> labels;
  std::vector<std::vector<int>> table(na * nb, std::vector<int>(na * nb));
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) labels.push_back("(" + a.label(int(i)) + "," + b.label(int(j)) + ")");
  for (std::size_t x = 0; x < na * nb; ++x)
    for (std::size_t y = 0; y < na * nb; ++y)
      table[x][y] = int(a.mul(int(x / nb), int(y / nb)) * nb + b.mul(int(x % nb), int(y % nb)));
  std::vector<int> gens;
  for (int g : a.gens_) gens.push_back(int(g * nb));
  for (int h : b.gens_) gens.push_back(h);
  return from_table(a.name() + "x" + b.name(), labels, table, gens);
}

int Group::find(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return int(i);
  throw std::invalid_argument("no group element '" + label + "' in " + name_);
}

const Perm& Group::perm(int e) const {
  if (perms_.empty()) throw std::logic_error(name_ + " is not a symmetric group");
  return perms_.at(e);
}

// ---- HomologyGroup ----

std::string HomologyGroup::str() const {
  std::ostringstream os;
  os << rank;
  for (auto& t : torsion) os << "+Z/" << t;
  return os.str();
}

// ---- GComplex ----

GComplex::GComplex(Ring ring, Group group, int d_min, int d_max)
    : ring_(ring), group_(std::move(group)), d_min_(d_min), d_max_(d_max), valid_min_(d_min), valid_max_(d_max) {
  if (d_max < d_min - 1) throw std::invalid_argument("empty degree window");
  std::size_t n = std::size_t(d_max - d_min + 1);
  basis_.assign(n, {});
  diff_.assign(n, ZMatrix());
  if (!group_.generators().empty()) action_.assign(group_.generators().size(), std::vector<ZMatrix>(n));
}

void GComplex::set_valid_window(int lo, int hi) {
  valid_min_ = std::max(lo, d_min_);
  valid_max_ = std::min(hi, d_max_);
}

const std::vector<std::string>& GComplex::basis(int d) const {
  static const std::vector<std::string> empty;
  return in_range(d) ? basis_[d - d_min_] : empty;
}

void GComplex::set_basis(int d, std::vector<std::string> labels) {
  if (!in_range(d)) throw DegreeOutOfWindow("degree " + std::to_string(d) + " outside stored range");
  std::size_t i = d - d_min_;
  basis_[i] = std::move(labels);
  diff_[i] = ZMatrix(dim(d - 1), basis_[i].size());
  if (in_range(d + 1)) diff_[i + 1] = ZMatrix(basis_[i].size(), dim(d + 1));
  for (auto& per_gen : action_) {
    ZMatrix id(basis_[i].size(), basis_[i].size());
    for (std::size_t k = 0; k < basis_[i].size(); ++k) id.cols[k].push_back({std::int32_t(k), 1});
    per_gen[i] = std::move(id);
  }
}

const ZMatrix& GComplex::diff(int d) const {
  if (!in_range(d)) throw DegreeOutOfWindow("no differential out of degree " + std::to_string(d));
  return diff_[d - d_min_];
}

void GComplex::set_diff(int d, ZMatrix m) {
  if (!in_range(d)) throw DegreeOutOfWindow("degree " + std::to_string(d) + " outside stored range");
  if (m.rows != dim(d - 1) || m.ncols() != dim(d))
    throw InvalidComplex("differential out of degree " + std::to_string(d) + " has wrong shape");
  m.canonicalize();
  diff_[d - d_min_] = std::move(m);
}

const ZMatrix& GComplex::action(std::size_t gen, int d) const { return action_.at(gen).at(d - d_min_); }

void GComplex::set_action(std::size_t gen, int d, ZMatrix m) {
  if (m.rows != dim(d) || m.ncols() != dim(d)) throw InvalidComplex("action matrix has wrong shape");
  m.canonicalize();
  action_.at(gen).at(d - d_min_) = std::move(m);
}

ZMatrix GComplex::element_action(int e, int d) const {
  std::size_t n = dim(d);
  ZMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) out.cols[k].push_back({std::int32_t(k), 1});
  if (action_.empty()) return out;
  for (int g : group_.words().at(e)) out = multiply(out, action(g, d));
  return out;
}

std::vector<SignedImage> GComplex::signed_perm(int e, int d) const {
  ZMatrix m = element_action(e, d);
  std::vector<SignedImage> out(m.ncols());
  std::vector<char> hit(m.rows, 0);
  for (std::size_t c = 0; c < m.ncols(); ++c) {
    if (m.cols[c].size() != 1 || (m.cols[c][0].second != 1 && m.cols[c][0].second != -1) || hit[m.cols[c][0].first])
      throw ShapeUnsupported("action is not by signed permutations");
    hit[m.cols[c][0].first] = 1;
    out[c] = {m.cols[c][0].first, std::int32_t(m.cols[c][0].second)};
  }
  return out;
}

bool GComplex::is_signed_permutation() const {
  try {
    for (int d = d_min_; d <= d_max_; ++d)
      for (std::size_t g = 0; g < action_.size(); ++g) signed_perm(group_.generators()[g], d);
  } catch (const ShapeUnsupported&) {
    return false;
  }
  return true;
}

static bool equal_in(const ZMatrix& a, const ZMatrix& b, const Ring& ring) {
  if (a.rows != b.rows || a.ncols() != b.ncols()) return false;
  ZMatrix d = a;
  for (std::size_t c = 0; c < b.ncols(); ++c)
    for (auto [r, v] : b.cols[c]) d.cols[c].push_back({r, -v});
  d.canonicalize();
  return is_zero_in(d, ring);
}

void GComplex::validate() const {
  for (int d = d_min_; d <= d_max_; ++d) {
    const ZMatrix& m = diff(d);
    if (m.rows != dim(d - 1) || m.ncols() != dim(d)) throw InvalidComplex("bad differential shape in degree " + std::to_string(d));
    for (auto& col : m.cols)
      for (auto [r, v] : col)
        if (r < 0 || std::size_t(r) >= m.rows) throw InvalidComplex("row index out of range");
    if (d > d_min_ && !is_zero_in(multiply(diff(d - 1), m), ring_))
      throw InvalidComplex("∂∘∂ ≠ 0 out of degree " + std::to_string(d));
    for (std::size_t g = 0; g < action_.size(); ++g) {
      const ZMatrix& a = action(g, d);
      if (a.rows != dim(d) || a.ncols() != dim(d)) throw InvalidComplex("bad action shape");
      if (d > d_min_ && !equal_in(multiply(action(g, d - 1), m), multiply(m, a), ring_))
        throw InvalidComplex("action does not commute with ∂ in degree " + std::to_string(d));
    }
  }
}

// ---- homology ----

HomologyGroup homology_of(const Ring& ring, std::size_t dim, const ZMatrix* out_diff, const ZMatrix* in_diff) {
  HomologyGroup h;
  h.ring = ring;
  std::size_t r_out = 0, r_in = 0;
  if (ring.kind() == RingKind::Integers) {
    if (out_diff) r_out = integral_rank(*out_diff).rank;
    if (in_diff) {
      auto ir = integral_rank(*in_diff);
      r_in = ir.rank;
      h.torsion = ir.torsion;
    }
  } else {
    if (out_diff) r_out = rank_in(*out_diff, ring);
    if (in_diff) r_in = rank_in(*in_diff, ring);
  }
  h.rank = dim - r_out - r_in;
  return h;
}

static void check_window(const GComplex& x, int degree) {
  if (degree < x.valid_min() || degree > x.valid_max())
    throw DegreeOutOfWindow("degree " + std::to_string(degree) + " outside valid window [" + std::to_string(x.valid_min()) +
                            ", " + std::to_string(x.valid_max()) + "]");
}

HomologyGroup homology(const GComplex& x, int degree) {
  check_window(x, degree);
  const ZMatrix* out = (degree > x.d_min()) ? &x.diff(degree) : nullptr;
  const ZMatrix* in = (degree + 1 <= x.d_max()) ? &x.diff(degree + 1) : nullptr;
  return homology_of(x.ring(), x.dim(degree), out, in);
}

std::vector<HomologyGroup> homology_range(const GComplex& x, int lo, int hi) {
  for (int d = lo; d <= hi; ++d) check_window(x, d);
  std::vector<IntegralRank> ranks;  // ranks[d - lo] for ∂_d, d in [lo, hi+1]
  for (int d = lo; d <= hi + 1; ++d) {
    IntegralRank r;
    if (d > x.d_min() && d <= x.d_max()) {
      if (x.ring().kind() == RingKind::Integers)
        r = integral_rank(x.diff(d));
      else
        r.rank = rank_in(x.diff(d), x.ring());
    }
    ranks.push_back(r);
  }
  std::vector<HomologyGroup> out;
  for (int d = lo; d <= hi; ++d) {
    HomologyGroup h;
    h.ring = x.ring();
    h.rank = x.dim(d) - ranks[d - lo].rank - ranks[d - lo + 1].rank;
    h.torsion = ranks[d - lo + 1].torsion;
    out.push_back(h);
  }
  return out;
}

// ---- chain maps and basic constructions ----

bool ChainMap::is_chain_map() const {
  const Ring& ring = source->ring();
  for (int d = source->d_min(); d <= source->d_max(); ++d) {
    const ZMatrix& f = at(d);
    if (f.rows != target->dim(d) || f.ncols() != source->dim(d)) return false;
    ZMatrix lhs = (d > source->d_min()) ? multiply(at(d - 1), source->diff(d)) : ZMatrix(target->dim(d - 1), source->dim(d));
    ZMatrix rhs = target->in_range(d) ? multiply(target->diff(d), f) : ZMatrix(target->dim(d - 1), source->dim(d));
    if (!equal_in(lhs, rhs, ring)) return false;
  }
  return true;
}

ChainMap identity_map(const GComplex& x) {
  ChainMap f{&x, &x, {}};
  for (int d = x.d_min(); d <= x.d_max(); ++d) {
    ZMatrix id(x.dim(d), x.dim(d));
    for (std::size_t k = 0; k < x.dim(d); ++k) id.cols[k].push_back({std::int32_t(k), 1});
    f.components.push_back(std::move(id));
  }
  return f;
}

// Copies the block `src` into `dst` at the given offsets, scaled.
static void put_block(ZMatrix& dst, const ZMatrix& src, std::size_t row_off, std::size_t col_off, std::int64_t scale) {
  for (std::size_t c = 0; c < src.ncols(); ++c)
    for (auto [r, v] : src.cols[c]) dst.cols[col_off + c].push_back({std::int32_t(row_off + r), scale * v});
}

GComplex mapping_cone(const ChainMap& f) {
  const GComplex& x = *f.source;
  const GComplex& y = *f.target;
  int lo = std::min(x.d_min() + 1, y.d_min()), hi = std::max(x.d_max() + 1, y.d_max());
  GComplex c(x.ring(), Group::trivial(), lo, hi);
  for (int n = lo; n <= hi; ++n) {
    std::vector<std::string> labels;
    for (auto& l : x.basis(n - 1)) labels.push_back("s" + l);
    for (auto& l : y.basis(n)) labels.push_back(l);
    c.set_basis(n, labels);
  }
  for (int n = lo; n <= hi; ++n) {
    std::size_t xa = x.dim(n - 1), xb = x.dim(n - 2);
    ZMatrix m(c.dim(n - 1), c.dim(n));
    if (x.in_range(n - 1) && n - 1 > x.d_min()) put_block(m, x.diff(n - 1), 0, 0, -1);
    if (x.in_range(n - 1) && y.in_range(n - 1)) put_block(m, f.at(n - 1), xb, 0, 1);
    if (y.in_range(n) && n > y.d_min()) put_block(m, y.diff(n), xb, xa, 1);
    c.set_diff(n, std::move(m));
  }
  // H_n(cone) sits between H_n, H_{n-1} of both ends.
  int vlo = lo, vhi = hi;
  if (x.truncated_below()) vlo = std::max(vlo, x.valid_min() + 1);
  if (y.truncated_below()) vlo = std::max(vlo, y.valid_min() + 1);
  if (x.truncated_above()) vhi = std::min(vhi, x.valid_max());
  if (y.truncated_above()) vhi = std::min(vhi, y.valid_max());
  c.set_valid_window(vlo, vhi);
  return c;
}

GComplex shift(const GComplex& x, int k) {
  GComplex s(x.ring(), x.group(), x.d_min() + k, x.d_max() + k);
  int sign = (k % 2 == 0) ? 1 : -1;
  for (int d = x.d_min(); d <= x.d_max(); ++d) s.set_basis(d + k, x.basis(d));
  for (int d = x.d_min(); d <= x.d_max(); ++d) {
    ZMatrix m = x.diff(d);
    for (auto& col : m.cols)
      for (auto& e : col) e.second *= sign;
    s.set_diff(d + k, std::move(m));
    for (std::size_t g = 0; g < x.group().generators().size() && x.has_action(); ++g) s.set_action(g, d + k, x.action(g, d));
  }
  s.set_valid_window(x.valid_min() + k, x.valid_max() + k);
  return s;
}

GComplex direct_sum(const GComplex& a, const GComplex& b) {
  if (!(a.ring() == b.ring())) throw RingMismatch("direct sum over different rings");
  if (!(a.group() == b.group())) throw GroupMismatch("direct sum of complexes with different groups");
  int lo = std::min(a.d_min(), b.d_min()), hi = std::max(a.d_max(), b.d_max());
  GComplex s(a.ring(), a.group(), lo, hi);
  for (int d = lo; d <= hi; ++d) {
    std::vector<std::string> labels = a.basis(d);
    labels.insert(labels.end(), b.basis(d).begin(), b.basis(d).end());
    s.set_basis(d, labels);
  }
  for (int d = lo; d <= hi; ++d) {
    ZMatrix m(s.dim(d - 1), s.dim(d));
    if (a.in_range(d)) put_block(m, a.diff(d), 0, 0, 1);
    if (b.in_range(d)) put_block(m, b.diff(d), a.dim(d - 1), a.dim(d), 1);
    s.set_diff(d, std::move(m));
    for (std::size_t g = 0; g < a.group().generators().size(); ++g) {
      ZMatrix act(s.dim(d), s.dim(d));
      if (a.in_range(d)) put_block(act, a.has_action() ? a.action(g, d) : a.element_action(0, d), 0, 0, 1);
      if (b.in_range(d)) put_block(act, b.has_action() ? b.action(g, d) : b.element_action(0, d), a.dim(d), a.dim(d), 1);
      s.set_action(g, d, std::move(act));
    }
  }
  int vlo = lo, vhi = hi;
  if (a.truncated_below()) vlo = std::max(vlo, a.valid_min());
  if (b.truncated_below()) vlo = std::max(vlo, b.valid_min());
  if (a.truncated_above()) vhi = std::min(vhi, a.valid_max());
  if (b.truncated_above()) vhi = std::min(vhi, b.valid_max());
  s.set_valid_window(vlo, vhi);
  return s;
}

static ZMatrix kron(const ZMatrix& a, const ZMatrix& b) {
  ZMatrix out(a.rows * b.rows, a.ncols() * b.ncols());
  for (std::size_t i = 0; i < a.ncols(); ++i)
    for (std::size_t j = 0; j < b.ncols(); ++j) {
      auto& col = out.cols[i * b.ncols() + j];
      for (auto [r, v] : a.cols[i])
        for (auto [s, w] : b.cols[j]) col.push_back({std::int32_t(r * b.rows + s), v * w});
    }
  return out;
}

static ZMatrix identity_z(std::size_t n) {
  ZMatrix id(n, n);
  for (std::size_t k = 0; k < n; ++k) id.cols[k].push_back({std::int32_t(k), 1});
  return id;
}

GComplex tensor(const GComplex& a, const GComplex& b) {
  if (!(a.ring() == b.ring())) throw RingMismatch("tensor over different rings");
  if (!(a.group() == b.group())) throw GroupMismatch("tensor of complexes with different groups");
  int lo = a.d_min() + b.d_min(), hi = a.d_max() + b.d_max();
  GComplex t(a.ring(), a.group(), lo, hi);
  // degree n: blocks (p, n-p) in increasing p
  auto offset = [&](int n, int p) {
    std::size_t off = 0;
    for (int q = a.d_min(); q < p; ++q) off += a.dim(q) * b.dim(n - q);
    return off;
  };
  for (int n = lo; n <= hi; ++n) {
    std::vector<std::string> labels;
    for (int p = a.d_min(); p <= a.d_max(); ++p)
      for (auto& x : a.basis(p))
        for (auto& y : b.basis(n - p)) labels.push_back(x + "⊗" + y);
    t.set_basis(n, labels);
  }
  for (int n = lo; n <= hi; ++n) {
    ZMatrix m(t.dim(n - 1), t.dim(n));
    for (int p = a.d_min(); p <= a.d_max(); ++p) {
      int q = n - p;
      if (!b.in_range(q)) continue;
      std::size_t col_off = offset(n, p);
      if (p > a.d_min()) put_block(m, kron(a.diff(p), identity_z(b.dim(q))), offset(n - 1, p - 1), col_off, 1);
      if (q > b.d_min()) put_block(m, kron(identity_z(a.dim(p)), b.diff(q)), offset(n - 1, p), col_off, (p % 2 == 0) ? 1 : -1);
    }
    t.set_diff(n, std::move(m));
    for (std::size_t g = 0; g < a.group().generators().size(); ++g) {
      ZMatrix act(t.dim(n), t.dim(n));
      for (int p = a.d_min(); p <= a.d_max(); ++p) {
        int q = n - p;
        if (!b.in_range(q)) continue;
        std::size_t off = offset(n, p);
        put_block(act, kron(a.action(g, p), b.action(g, q)), off, off, 1);
      }
      t.set_action(g, n, std::move(act));
    }
  }
  int vlo = lo, vhi = hi;
  if (a.truncated_below()) vlo = std::max(vlo, a.valid_min() + b.d_max());
  if (b.truncated_below()) vlo = std::max(vlo, a.d_max() + b.valid_min());
  if (a.truncated_above()) vhi = std::min(vhi, a.valid_max() + b.d_min());
  if (b.truncated_above()) vhi = std::min(vhi, a.d_min() + b.valid_max());
  t.set_valid_window(vlo, vhi);
  return t;
}

GComplex free_module_complex(const Ring& ring, const Group& group, int degree, std::size_t copies) {
  GComplex x(ring, group, degree, degree);
  std::vector<std::string> labels;
  std::size_t n = group.order();
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t g = 0; g < n; ++g) labels.push_back("b" + std::to_string(c) + "*" + group.label(int(g)));
  x.set_basis(degree, labels);
  for (std::size_t k = 0; k < group.generators().size(); ++k) {
    ZMatrix act(copies * n, copies * n);
    for (std::size_t c = 0; c < copies; ++c)
      for (std::size_t h = 0; h < n; ++h)
        act.cols[c * n + h].push_back({std::int32_t(c * n + group.mul(group.generators()[k], int(h))), 1});
    x.set_action(k, degree, std::move(act));
  }
  return x;
}

GComplex trivial_module_complex(const Ring& ring, const Group& group, int degree) {
  GComplex x(ring, group, degree, degree);
  x.set_basis(degree, {"1"});
  return x;
}

}  // namespace opcalc
