#include "opcalc/lie.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <mutex>
#include <stdexcept>

#include "opcalc/symseq.hpp"

namespace opcalc {

namespace {

using AssocPoly = std::map<std::vector<int>, std::int64_t>;

int max_letter(const LieWord& w) {
  if (w.is_leaf()) return w.letter;
  return std::max(max_letter(w.kids[0]), max_letter(w.kids[1]));
}

bool contains(const LieWord& w, int x) {
  if (w.is_leaf()) return w.letter == x;
  return contains(w.kids[0], x) || contains(w.kids[1], x);
}

// Coefficients of ad_{σ1}…ad_{σj}(m) in w, where m is the largest letter of w.
LieComb ad_expand(const LieWord& w, int m) {
  if (w.is_leaf()) return {{{}, 1}};
  const LieWord& a = w.kids[0];
  const LieWord& b = w.kids[1];
  if (contains(a, m)) {
    LieComb out = ad_expand(lie_bracket(b, a), m);
    for (auto& [k, c] : out) c = -c;
    return out;
  }
  // [a, b] = ad_a(b) and ad is a map of Lie algebras into operators
  LieComb nb = ad_expand(b, m), out;
  for (auto& [mono, ca] : assoc_expand(a))
    for (auto& [tail, cb] : nb) {
      LieBasisElt key = mono;
      key.insert(key.end(), tail.begin(), tail.end());
      out[key] += ca * cb;
    }
  std::erase_if(out, [](auto& kv) { return kv.second == 0; });
  return out;
}

LieWord shift_letters(const LieWord& w, const std::function<int(int)>& f) {
  if (w.is_leaf()) return lie_letter(f(w.letter));
  return lie_bracket(shift_letters(w.kids[0], f), shift_letters(w.kids[1], f));
}

LieWord substitute(const LieWord& w, int k, const LieWord& x) {
  if (w.is_leaf()) return w.letter == k ? x : w;
  return lie_bracket(substitute(w.kids[0], k, x), substitute(w.kids[1], k, x));
}

struct Parser {
  const std::string& s;
  std::size_t p = 0;
  void skip() {
    while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
  }
  void expect(char c) {
    skip();
    if (p >= s.size() || s[p] != c) throw std::invalid_argument("bad Lie word: " + s);
    ++p;
  }
  LieWord word() {
    skip();
    if (p < s.size() && s[p] == '[') {
      ++p;
      LieWord a = word();
      expect(',');
      LieWord b = word();
      expect(']');
      return lie_bracket(std::move(a), std::move(b));
    }
    if (p < s.size() && (s[p] == 'x' || s[p] == 'c')) ++p;
    std::size_t q = p;
    while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
    if (q == p) throw std::invalid_argument("bad Lie word: " + s);
    return lie_letter(std::stoi(s.substr(q, p - q)));
  }
};

int parity(int x) { return ((x % 2) + 2) % 2; }

int cross_inversions(const std::vector<int>& A, const std::vector<int>& B) {
  int n = 0;
  for (int a : A)
    for (int b : B)
      if (a > b) ++n;
  return n;
}

std::vector<bool> caesura_mask(const Sequence& u) {
  std::vector<bool> m(u.size(), false);
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = a + 1; b < u.size(); ++b)
      if (u[b] == u[a]) {
        m[a] = true;
        break;
      }
  return m;
}

const std::vector<Sequence>& sequences_cached(int n, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<Sequence>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, d});
  if (it == cache.end()) it = cache.emplace(std::pair{n, d}, nondegenerate_sequences(n, d)).first;
  return it->second;
}

}  // namespace

// ---- words ------------------------------------------------------------------

LieWord lie_letter(int x) { return LieWord{x, {}}; }

LieWord lie_bracket(LieWord a, LieWord b) {
  LieWord w;
  w.kids.push_back(std::move(a));
  w.kids.push_back(std::move(b));
  return w;
}

LieWord parse_lie_word(const std::string& s) {
  Parser p{s};
  LieWord w = p.word();
  p.skip();
  if (p.p != s.size()) throw std::invalid_argument("bad Lie word: " + s);
  return w;
}

std::string lie_str(const LieWord& w) {
  if (w.is_leaf()) return std::to_string(w.letter);
  return "[" + lie_str(w.kids[0]) + "," + lie_str(w.kids[1]) + "]";
}

std::vector<int> lie_letters(const LieWord& w) {
  if (w.is_leaf()) return {w.letter};
  auto a = lie_letters(w.kids[0]);
  auto b = lie_letters(w.kids[1]);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

bool well_formed(const LieWord& w) {
  std::function<bool(const LieWord&)> shape = [&](const LieWord& x) {
    if (x.is_leaf()) return x.letter >= 1;
    return x.kids.size() == 2 && shape(x.kids[0]) && shape(x.kids[1]);
  };
  if (!shape(w)) return false;
  auto ls = lie_letters(w);
  std::sort(ls.begin(), ls.end());
  return std::adjacent_find(ls.begin(), ls.end()) == ls.end();
}

LieWord right_comb(const LieBasisElt& head, int last) {
  LieWord w = lie_letter(last);
  for (auto it = head.rbegin(); it != head.rend(); ++it) w = lie_bracket(lie_letter(*it), std::move(w));
  return w;
}

LieComb lie_normalize(const LieWord& w) {
  if (!well_formed(w)) throw std::invalid_argument("malformed Lie word " + lie_str(w));
  return ad_expand(w, max_letter(w));
}

std::map<std::vector<int>, std::int64_t> assoc_expand(const LieWord& w) {
  if (w.is_leaf()) return {{{w.letter}, 1}};
  auto a = assoc_expand(w.kids[0]);
  auto b = assoc_expand(w.kids[1]);
  AssocPoly out;
  for (auto& [x, c] : a)
    for (auto& [y, e] : b) {
      std::vector<int> xy = x, yx = y;
      xy.insert(xy.end(), y.begin(), y.end());
      yx.insert(yx.end(), x.begin(), x.end());
      out[xy] += c * e;
      out[yx] -= c * e;
    }
  std::erase_if(out, [](auto& kv) { return kv.second == 0; });
  return out;
}

std::map<std::vector<int>, std::int64_t> assoc_expand(const LieComb& c, int last) {
  AssocPoly out;
  for (auto& [head, k] : c)
    for (auto& [m, e] : assoc_expand(right_comb(head, last))) out[m] += k * e;
  std::erase_if(out, [](auto& kv) { return kv.second == 0; });
  return out;
}

// ---- Lie --------------------------------------------------------------------

LieWord LieOperad::word(int r, std::uint32_t i) const {
  Perm s = all_perms(r - 1).at(i);
  LieBasisElt head;
  for (int x : s) head.push_back(x + 1);
  return right_comb(head, r);
}

std::string LieOperad::label(int r, int, std::uint32_t i) const { return lie_str(word(r, i)); }

Vec LieOperad::from_comb(int r, const LieComb& c) const {
  Vec out;
  for (auto& [head, k] : c) {
    Perm s;
    for (int x : head) s.push_back(x - 1);
    if (int(s.size()) != r - 1) throw std::invalid_argument("Lie basis element of wrong arity");
    out.push_back({std::uint32_t(perm_index(s)), k});
  }
  return canonical(std::move(out));
}

Vec LieOperad::act(int r, int, std::uint32_t i, const Perm& s) const {
  LieWord w = shift_letters(word(r, i), [&](int x) { return relabel(s, x); });
  return from_comb(r, lie_normalize(w));
}

Vec LieOperad::compose(int r, int, std::uint32_t a, int k, int s, int, std::uint32_t b) const {
  LieWord inner = shift_letters(word(s, b), [&](int x) { return x + k - 1; });
  LieWord outer = shift_letters(word(r, a), [&](int x) { return x <= k ? x : x + s - 1; });
  return from_comb(r + s - 1, lie_normalize(substitute(outer, k, inner)));
}

// ---- Λ and Lie^s --------------------------------------------------------------

Vec LambdaOperad::compose(int, int, std::uint32_t, int k, int s, int, std::uint32_t) const {
  return {{0, parity((s - 1) * (k - 1)) ? -1 : 1}};
}

Vec LieSOperad::evaluate(const LieWord& w) const {
  if (!well_formed(w)) throw std::invalid_argument("malformed Lie word " + lie_str(w));
  if (w.is_leaf()) return {{*unit(), 1}};
  const LieWord& a = w.kids[0];
  const LieWord& b = w.kids[1];
  Vec ea = evaluate(a), eb = evaluate(b);
  int na = int(lie_letters(a).size()), nb = int(lie_letters(b).size());
  Vec beta{{index(2, 0), 1}};
  Vec x = compose_vec(*this, 2, -1, beta, 2, nb, 1 - nb, eb);
  Vec y = compose_vec(*this, 1 + nb, -nb, x, 1, na, 1 - na, ea);
  // positions 1..na carry a's letters in increasing order, then b's
  auto la = lie_letters(a), lb = lie_letters(b);
  std::sort(la.begin(), la.end());
  std::sort(lb.begin(), lb.end());
  std::vector<int> all = la;
  all.insert(all.end(), lb.begin(), lb.end());
  std::vector<int> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  Perm s;
  for (int x : all) s.push_back(int(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin()));
  int n = na + nb;
  return act_vec(*this, n, 1 - n, y, s);
}

// ---- mixed composition --------------------------------------------------------

Vec rule_c_compose(const SpectralPartitionLie& p, int r, int d1, std::uint32_t a, int k, int s, int d2, std::uint32_t b) {
  auto pa = p.split(r, d1, a), pb = p.split(s, d2, b);
  const SurjCooperad& surj = p.pd_surj().cooperad();
  int du = pa.dp - d1, dv = pb.dp - d2;  // Surj degrees
  Sequence u = surj.sequence(r, du, pa.j);
  Sequence v = surj.sequence(s, dv, pb.j);
  Vec lam = p.lie_s().compose(r, pa.dp, pa.i, k, s, pb.dp, pb.i);
  if (lam.empty()) return {};
  int n = r + s - 1, i = int(std::count(u.begin(), u.end(), k));
  std::size_t need = std::size_t(i - 1) + v.size();
  std::int64_t koszul = parity(du * pb.dp) ? -1 : 1;  // |u| = -du passes μ
  Vec out;
  for (const Sequence& w : sequences_cached(n, du + dv)) {
    std::vector<int> blk;  // positions of block values
    for (std::size_t q = 0; q < w.size(); ++q)
      if (w[q] >= k && w[q] < k + s) blk.push_back(int(q));
    if (blk.size() != need) continue;
    bool tail_ok = true;
    for (std::size_t j = 0; j < v.size() && tail_ok; ++j) tail_ok = w[blk[i - 1 + j]] == v[j] + k - 1;
    if (!tail_ok) continue;
    Sequence back;
    for (std::size_t q = 0, t = 0; q < w.size(); ++q) {
      if (t < blk.size() && blk[t] == int(q)) {
        if (int(t) < i) back.push_back(k);
        ++t;
      } else {
        back.push_back(w[q] < k ? w[q] : w[q] - s + 1);
      }
    }
    if (back != u) continue;
    auto wm = caesura_mask(w);
    std::vector<int> U, V;
    for (std::size_t q = 0; q < w.size(); ++q) {
      if (!wm[q]) continue;
      bool in_v = std::find(blk.begin() + (i - 1), blk.end(), int(q)) != blk.end();
      (in_v ? V : U).push_back(int(q));
    }
    std::int64_t sign = koszul * (parity(cross_inversions(U, V)) ? -1 : 1);
    std::uint32_t wi = surj.index(n, w);
    for (auto& [x, c] : lam) out.push_back({p.join(n, d1 + d2, {pa.dp + pb.dp, x, wi}), sign * c});
  }
  return canonical(std::move(out));
}

// ---- partition L∞ ---------------------------------------------------------------

std::vector<UnshuffleTerm> compatible_unshuffles(const Sequence& u, int r, int k) {
  std::vector<UnshuffleTerm> out;
  if (k < 2 || k > r - 1) return out;
  auto um = caesura_mask(u);
  for (unsigned mask = 0; mask < (1u << r); ++mask) {
    if (std::popcount(mask) != k) continue;
    auto in_a = [&](int x) { return (mask >> (x - 1)) & 1u; };
    std::vector<int> block, rest;
    for (int x = 1; x <= r; ++x) (in_a(x) ? block : rest).push_back(x);
    // maximal runs of A-values, as position lists
    std::vector<std::vector<int>> runs;
    for (std::size_t q = 0; q < u.size(); ++q) {
      if (!in_a(u[q])) continue;
      if (q == 0 || !in_a(u[q - 1])) runs.emplace_back();
      runs.back().push_back(int(q));
    }
    bool ok = true;
    for (std::size_t j = 0; j + 1 < runs.size() && ok; ++j) ok = u[runs[j].back()] == u[runs[j + 1].front()];
    if (!ok) continue;
    std::vector<int> kept;
    for (std::size_t j = 0; j < runs.size(); ++j)
      for (std::size_t t = 0; t < runs[j].size(); ++t)
        if (j + 1 == runs.size() || t + 1 < runs[j].size()) kept.push_back(runs[j][t]);
    auto rank_in = [](const std::vector<int>& xs, int x) { return int(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin()) + 1; };
    Sequence v, w;
    for (int q : kept) v.push_back(rank_in(block, u[q]));
    for (std::size_t q = 0; q < u.size(); ++q) {
      if (!in_a(u[q])) w.push_back(1 + rank_in(rest, u[q]));
      else if (q == 0 || !in_a(u[q - 1])) w.push_back(1);
    }
    if (v.size() <= 1 || w.size() <= 1) continue;
    if (!is_nondegenerate(v, k) || !is_nondegenerate(w, r - k + 1)) continue;
    auto vm = caesura_mask(v);
    std::vector<int> Vp, Wp;
    for (std::size_t q = 0; q < v.size(); ++q)
      if (vm[q]) Vp.push_back(kept[q]);
    for (std::size_t q = 0; q < u.size(); ++q)
      if (um[q] && !std::binary_search(Vp.begin(), Vp.end(), int(q))) Wp.push_back(int(q));
    int sign = parity(cross_inversions(Wp, Vp)) ? -1 : 1;
    out.push_back({block, std::move(v), std::move(w), sign});
  }
  return out;
}

PartitionLInfty::PartitionLInfty()
    : FreeOperad(std::make_shared<OperadLabels>(PdHolder::pd, -1, -kUnbounded, 0), "PartitionLinf") {}

Vec PartitionLInfty::generator_diff(int r, int w, std::uint32_t label) const {
  const SurjCooperad& surj = pd_surj().cooperad();
  int d = -1 - w;
  Sequence u = surj.sequence(r, d, label);
  Vec out;
  for (auto& t : pd_differential(u, r)) axpy(out, t.coeff, from_tree(corolla(r, w - 1, surj.index(r, t.seq))));
  for (int k = 2; k < r; ++k)
    for (auto& t : compatible_unshuffles(u, r, k)) {
      int m = r - k + 1;
      int dw = int(t.w.size()) - m, dv = int(t.v.size()) - k;
      Tree tr;
      tr.n = r;
      tr.v.push_back({m, -1 - dw, surj.index(m, t.w), std::vector<int>(m)});
      tr.v.push_back({k, -1 - dv, surj.index(k, t.v), {}});
      tr.v[0].in[0] = 1;
      int slot = 1;
      for (int x = 1; x <= r; ++x) {
        if (std::binary_search(t.block.begin(), t.block.end(), x)) tr.v[1].in.push_back(-x);
        else tr.v[0].in[slot++] = -x;
      }
      // ±_|| alone does not square to zero; the Koszul sign of the root label is needed
      axpy(out, t.sign * (parity(dw) ? -1 : 1), from_tree(tr));
    }
  return out;
}

ZMatrix lie3_basis_change() {
  LieOperad lie;
  ZMatrix m(2, 2);
  const char* words[] = {"[1,[2,3]]", "[3,[1,2]]"};
  for (int c = 0; c < 2; ++c)
    for (auto& [i, k] : lie.from_comb(3, lie_normalize(parse_lie_word(words[c])))) m.cols[c].push_back({std::int32_t(i), k});
  m.canonicalize();
  return m;
}

}  // namespace opcalc
