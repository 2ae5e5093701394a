#include "opcalc/surjections.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace opcalc {

namespace {

std::string key_of(const Sequence& u) { return std::string(u.begin(), u.end()); }

Sequence from_key(const std::string& k) { return Sequence(k.begin(), k.end()); }

int max_value(const Sequence& u) { return u.empty() ? 0 : *std::max_element(u.begin(), u.end()); }

// Number of pairs (a, b) with a ∈ A, b ∈ B and a > b.
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

}  // namespace

bool is_nondegenerate(const Sequence& u, int r) {
  std::vector<bool> seen(r + 1, false);
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (u[a] < 1 || u[a] > r) return false;
    if (a > 0 && u[a] == u[a - 1]) return false;
    seen[u[a]] = true;
  }
  for (int v = 1; v <= r; ++v)
    if (!seen[v]) return false;
  return true;
}

CaesuraData caesuras(const Sequence& u) {
  if (!is_nondegenerate(u, max_value(u))) throw Degenerate("degenerate sequence " + seq_label(u));
  CaesuraData c;
  auto mask = caesura_mask(u);
  c.signs.assign(u.size(), 0);
  int next = 1;
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (mask[a]) {
      c.positions.push_back(int(a) + 1);
      c.signs[a] = next;
      next = -next;
    } else {
      // last occurrence: opposite of the previous copy, 0 if unique
      for (std::size_t b = a; b-- > 0;)
        if (u[b] == u[a]) {
          c.signs[a] = -c.signs[b];
          break;
        }
    }
  }
  return c;
}

std::string seq_label(const Sequence& u) {
  std::string s = "(";
  for (std::size_t a = 0; a < u.size(); ++a) s += (a ? "," : "") + std::to_string(u[a]);
  return s + ")";
}

Sequence parse_sequence(const std::string& s) {
  Sequence u;
  std::string tok;
  for (char ch : s) {
    if (std::isdigit(static_cast<unsigned char>(ch)))
      tok += ch;
    else if (!tok.empty()) {
      u.push_back(std::stoi(tok));
      tok.clear();
    }
  }
  if (!tok.empty()) u.push_back(std::stoi(tok));
  return u;
}

std::vector<Sequence> nondegenerate_sequences(int r, int d) {
  std::vector<Sequence> out;
  if (r < 1 || d < 0 || (r == 1 && d > 0)) return out;
  int len = r + d;
  Sequence cur;
  std::vector<int> count(r + 1, 0);
  int missing = r;
  std::function<void()> rec = [&] {
    int left = len - int(cur.size());
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int v = 1; v <= r; ++v) {
      if (!cur.empty() && cur.back() == v) continue;
      int miss = missing - (count[v] == 0 ? 1 : 0);
      if (miss > left - 1) continue;
      cur.push_back(v);
      if (count[v]++ == 0) --missing;
      rec();
      if (--count[v] == 0) ++missing;
      cur.pop_back();
    }
  };
  rec();
  return out;
}

std::uint64_t surj_ranks(int r, int d) { return nondegenerate_sequences(r, d).size(); }

std::vector<SeqTerm> surj_differential(const Sequence& u) {
  auto c = caesuras(u);
  std::vector<SeqTerm> out;
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (c.signs[a] == 0) continue;
    if (a > 0 && a + 1 < u.size() && u[a - 1] == u[a + 1]) continue;
    Sequence v = u;
    v.erase(v.begin() + long(a));
    out.push_back({c.signs[a], std::move(v)});
  }
  return out;
}

std::vector<SeqPair> surj_decompose(const Sequence& u, int n, const std::vector<int>& S) {
  int s = int(S.size()), nq = n - s + 1;
  auto inS = [&](int x) { return std::binary_search(S.begin(), S.end(), x); };
  std::vector<int> alpha;
  for (std::size_t p = 0; p < u.size(); ++p)
    if (inS(u[p])) alpha.push_back(int(p));
  int k = int(alpha.size());
  std::vector<SeqPair> out;
  for (int i = 1; i <= k; ++i) {
    Sequence first;
    std::vector<int> origin;
    int seen = 0;
    for (std::size_t p = 0; p < u.size(); ++p) {
      if (!inS(u[p])) {
        first.push_back(quotient_position(n, S, u[p]));
        origin.push_back(int(p));
      } else if (++seen <= i) {
        first.push_back(S.front());
        origin.push_back(int(p));
      }
    }
    if (!is_nondegenerate(first, nq)) continue;
    Sequence second;
    for (int j = i - 1; j < k; ++j) second.push_back(block_position(S, u[alpha[j]]));
    if (!is_nondegenerate(second, s)) continue;
    std::vector<int> A, B;
    auto fm = caesura_mask(first), sm = caesura_mask(second);
    for (std::size_t q = 0; q < first.size(); ++q)
      if (fm[q]) A.push_back(origin[q]);
    for (std::size_t q = 0; q < second.size(); ++q)
      if (sm[q]) B.push_back(alpha[i - 1 + int(q)]);
    std::int64_t sign = (cross_inversions(A, B) % 2 == 0) ? 1 : -1;
    out.push_back({sign, std::move(first), std::move(second)});
  }
  return out;
}

std::vector<SeqTerm> pd_differential(const Sequence& u, int r) {
  std::vector<SeqTerm> out;
  for (std::size_t a = 0; a <= u.size(); ++a)
    for (int v = 1; v <= r; ++v) {
      if (a > 0 && u[a - 1] == v) continue;
      if (a < u.size() && u[a] == v) continue;
      Sequence w = u;
      w.insert(w.begin() + long(a), v);
      int sign = caesuras(w).signs[a];
      if (sign != 0) out.push_back({sign, std::move(w)});
    }
  return out;
}

std::vector<SeqTerm> pd_compose(const Sequence& u, int r, int k, const Sequence& v, int s) {
  int n = r + s - 1;
  auto lift_u = [&](int x) { return x < k ? x : x + s - 1; };
  auto lift_v = [&](int x) { return x + k - 1; };
  std::vector<int> alpha;
  for (std::size_t p = 0; p < u.size(); ++p)
    if (u[p] == k) alpha.push_back(int(p));
  int i = int(alpha.size());
  std::vector<SeqTerm> out;
  // tags: ≥ 0 is a position in u, < 0 is -(1 + position in v)
  std::vector<int> choice(i - 1, 1);
  int last = alpha.back();
  std::vector<int> tail_u;
  for (std::size_t p = last + 1; p < u.size(); ++p) tail_u.push_back(int(p));
  std::vector<int> tail_v;
  for (std::size_t q = 1; q < v.size(); ++q) tail_v.push_back(-1 - int(q));
  while (true) {
    Sequence head;
    std::vector<int> head_tag;
    int c = 0;
    for (int p = 0; p <= last; ++p) {
      if (p == last) {
        head.push_back(lift_v(v[0]));
        head_tag.push_back(-1);
      } else if (u[p] == k) {
        head.push_back(lift_v(choice[c++]));
        head_tag.push_back(p);
      } else {
        head.push_back(lift_u(u[p]));
        head_tag.push_back(p);
      }
    }
    // shuffles of tail_u and tail_v
    std::vector<int> tags = head_tag;
    Sequence w = head;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t a, std::size_t b) {
      if (a == tail_u.size() && b == tail_v.size()) {
        if (!is_nondegenerate(w, n)) return;
        auto wm = caesura_mask(w);
        std::vector<int> U, V;
        for (std::size_t q = 0; q < w.size(); ++q) {
          if (!wm[q]) continue;
          if (tags[q] >= 0)
            U.push_back(int(q));
          else
            V.push_back(int(q));
        }
        std::int64_t sign = (cross_inversions(U, V) % 2 == 0) ? 1 : -1;
        out.push_back({sign, w});
        return;
      }
      if (a < tail_u.size()) {
        w.push_back(lift_u(u[tail_u[a]]));
        tags.push_back(tail_u[a]);
        rec(a + 1, b);
        w.pop_back();
        tags.pop_back();
      }
      if (b < tail_v.size()) {
        w.push_back(lift_v(v[-1 - tail_v[b]]));
        tags.push_back(tail_v[b]);
        rec(a, b + 1);
        w.pop_back();
        tags.pop_back();
      }
    };
    rec(0, 0);
    // next choice of replacements for the caesura copies of k
    int j = 0;
    while (j < int(choice.size()) && choice[j] == s) choice[j++] = 1;
    if (j == int(choice.size())) break;
    ++choice[j];
  }
  return out;
}

// ---- cooperad ---------------------------------------------------------------

const BasisCell<std::string>& SurjCooperad::cell(int n, int d) const {
  return cache_.get(n, d, [](int r, int dd, BasisCell<std::string>& c) {
    for (auto& u : nondegenerate_sequences(r, dd)) c.add(key_of(u));
  });
}

std::size_t SurjCooperad::dim(int n, int d) const { return (n >= 1 && d >= 0) ? cell(n, d).size() : 0; }

const Sequence& SurjCooperad::sequence(int n, int d, std::uint32_t i) const {
  thread_local Sequence buf;
  buf = from_key(cell(n, d).keys.at(i));
  return buf;
}

std::uint32_t SurjCooperad::index(int n, const Sequence& u) const {
  int d = int(u.size()) - n;
  auto i = cell(n, d).find(key_of(u));
  if (!i) throw Degenerate("not a basis sequence: " + seq_label(u));
  return *i;
}

Vec SurjCooperad::diff(int n, int d, std::uint32_t i) const {
  Vec out;
  for (auto& t : surj_differential(sequence(n, d, i))) out.push_back({index(n, t.seq), t.coeff});
  return canonical(std::move(out));
}

Vec SurjCooperad::act(int n, int d, std::uint32_t i, const Perm& s) const {
  Sequence u = sequence(n, d, i);
  for (int& x : u) x = relabel(s, x);
  return {{index(n, u), 1}};
}

std::vector<DTerm> SurjCooperad::decompose(int n, int d, std::uint32_t u, const std::vector<int>& S) const {
  int s = int(S.size()), nq = n - s + 1;
  std::vector<DTerm> out;
  for (auto& t : surj_decompose(sequence(n, d, u), n, S)) {
    int d1 = int(t.first.size()) - nq, d2 = int(t.second.size()) - s;
    out.push_back({t.coeff, d1, index(nq, t.first), d2, index(s, t.second)});
  }
  return out;
}

Vec PdSurjOperad::diff(int r, int d, std::uint32_t i) const {
  Vec out;
  for (auto& t : pd_differential(base_.sequence(r, -d, i), r)) out.push_back({base_.index(r, t.seq), t.coeff});
  return canonical(std::move(out));
}

Vec PdSurjOperad::compose(int r, int d1, std::uint32_t a, int k, int s, int d2, std::uint32_t b) const {
  Sequence u = base_.sequence(r, -d1, a);
  Sequence v = base_.sequence(s, -d2, b);
  Vec out;
  for (auto& t : pd_compose(u, r, k, v, s)) out.push_back({base_.index(r + s - 1, t.seq), t.coeff});
  return canonical(std::move(out));
}

// ---- retraction -------------------------------------------------------------

Retraction retraction_homotopy(const SurjCooperad& c, int r, int d_max) {
  if (r < 2) throw std::invalid_argument("retraction_homotopy needs r >= 2");
  Retraction ret;
  ret.r = r;
  for (int d = 0; d <= d_max; ++d) {
    ZMatrix im(c.dim(r, d), c.dim(r - 1, d));
    for (std::uint32_t j = 0; j < im.ncols(); ++j) {
      Sequence u = c.sequence(r - 1, d, j);
      Sequence w{1};
      for (int x : u) w.push_back(x + 1);
      im.cols[j].push_back({std::int32_t(c.index(r, w)), 1});
    }
    ZMatrix rho(c.dim(r - 1, d), c.dim(r, d));
    ZMatrix h(c.dim(r, d + 1), c.dim(r, d));
    for (std::uint32_t j = 0; j < rho.ncols(); ++j) {
      Sequence u = c.sequence(r, d, j);
      // the single 1 is deleted wherever it sits; a literal "u_1 = 1" reading is not a chain map
      if (std::count(u.begin(), u.end(), 1) == 1) {
        Sequence t;
        for (int x : u)
          if (x != 1) t.push_back(x - 1);
        if (is_nondegenerate(t, r - 1)) rho.cols[j].push_back({std::int32_t(c.index(r - 1, t)), 1});
      }
      if (u[0] != 1) {
        Sequence w{1};
        w.insert(w.end(), u.begin(), u.end());
        h.cols[j].push_back({std::int32_t(c.index(r, w)), 1});
      }
    }
    ret.i.push_back(std::move(im));
    ret.rho.push_back(std::move(rho));
    ret.h.push_back(std::move(h));
  }
  return ret;
}

namespace {

ZMatrix add(const ZMatrix& a, const ZMatrix& b, std::int64_t sb) {
  ZMatrix m(a.rows, a.ncols());
  for (std::size_t j = 0; j < a.ncols(); ++j) {
    m.cols[j] = a.cols[j];
    for (auto [r, v] : b.cols[j]) m.cols[j].push_back({r, sb * v});
  }
  m.canonicalize();
  return m;
}

ZMatrix identity(std::size_t n) {
  ZMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) m.cols[k].push_back({std::int32_t(k), 1});
  return m;
}

}  // namespace

bool verify_retraction(const SurjCooperad& c, const Retraction& ret, const Ring& ring, std::string* why) {
  int r = ret.r, top = int(ret.h.size()) - 1;
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  for (int d = 0; d <= top; ++d) {
    ZMatrix ri = multiply(ret.rho[d], ret.i[d]);
    if (!is_zero_in(add(ri, identity(ri.rows), -1), ring)) return fail("rho i != id in degree " + std::to_string(d));
    if (d == top) break;  // ∂h needs h into degree d+1 only, but h∂ on degree top+1 is absent
    ZMatrix dh = multiply(diff_matrix(c, r, d + 1), ret.h[d]);
    ZMatrix lhs = dh;
    if (d > 0) lhs = add(lhs, multiply(ret.h[d - 1], diff_matrix(c, r, d)), 1);
    ZMatrix rhs = add(identity(c.dim(r, d)), multiply(ret.i[d], ret.rho[d]), -1);
    if (!is_zero_in(add(lhs, rhs, -1), ring)) return fail("dh + hd != id - i rho in degree " + std::to_string(d));
  }
  return true;
}

}  // namespace opcalc
