// Sparse elimination kernels: rank over F_p, rank and invariant factors over Z.
#include <algorithm>
#include <limits>
#include <queue>

#include "opcalc/coeff.hpp"

namespace opcalc {
namespace {

struct Overflow {};

struct ModP {
  std::int64_t p;
  using T = std::int64_t;
  bool unit(T v) const { return v != 0; }
  T inv(T v) const {
    T r = 1, b = v, e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  }
  // a - f*b
  T axpy(T a, T f, T b) const {
    T v = (a - f * b) % p;
    return v < 0 ? v + p : v;
  }
  T mul(T a, T b) const { return a * b % p; }
  bool zero(T v) const { return v == 0; }
};

struct ZSmall {
  using T = std::int64_t;
  bool unit(T v) const { return v == 1 || v == -1; }
  T inv(T v) const { return v; }
  T axpy(T a, T f, T b) const {
    T prod, out;
    if (__builtin_mul_overflow(f, b, &prod) || __builtin_sub_overflow(a, prod, &out)) throw Overflow{};
    return out;
  }
  T mul(T a, T b) const {
    T out;
    if (__builtin_mul_overflow(a, b, &out)) throw Overflow{};
    return out;
  }
  bool zero(T v) const { return v == 0; }
};

struct ZBig {
  using T = BigInt;
  bool unit(const T& v) const { return v == 1 || v == -1; }
  T inv(const T& v) const { return v; }
  T axpy(const T& a, const T& f, const T& b) const { return a - f * b; }
  T mul(const T& a, const T& b) const { return a * b; }
  bool zero(const T& v) const { return v == 0; }
};

// Right-looking sparse elimination with Markowitz-style pivot choice restricted to
// unit pivots. Columns left without a unit entry stay in the residual.
template <class A>
struct Eliminator {
  using T = typename A::T;
  using Col = std::vector<std::pair<std::int32_t, T>>;
  A ar;
  std::vector<Col> cols;
  std::vector<std::vector<std::int32_t>> rowcols;
  std::vector<char> col_done;
  std::size_t rank = 0;

  Eliminator(A a, const ZMatrix& m) : ar(a), cols(m.ncols()), rowcols(m.rows), col_done(m.ncols(), 0) {
    for (std::size_t c = 0; c < m.ncols(); ++c) {
      for (auto [r, v] : m.cols[c]) {
        T x;
        if constexpr (std::is_same_v<A, ModP>)
          x = ((v % ar.p) + ar.p) % ar.p;
        else
          x = T(v);
        if (!ar.zero(x)) cols[c].push_back({r, x});
      }
      for (auto& e : cols[c]) rowcols[e.first].push_back(std::int32_t(c));
    }
  }

  void run() {
    using Item = std::pair<std::size_t, std::int32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (std::size_t c = 0; c < cols.size(); ++c) pq.push({cols[c].size(), std::int32_t(c)});
    while (!pq.empty()) {
      auto [n, c] = pq.top();
      pq.pop();
      if (col_done[c] || cols[c].size() != n) continue;
      if (n == 0) {
        col_done[c] = 1;
        continue;
      }
      std::int32_t prow = -1;
      std::size_t best = std::numeric_limits<std::size_t>::max();
      T pval{};
      for (auto& [r, v] : cols[c]) {
        if (!ar.unit(v)) continue;
        if (rowcols[r].size() < best) {
          best = rowcols[r].size();
          prow = r;
          pval = v;
        }
      }
      if (prow < 0) continue;  // residual unless a later update creates a unit
      T inv = ar.inv(pval);
      const Col pc = std::move(cols[c]);
      cols[c].clear();
      col_done[c] = 1;
      ++rank;
      std::vector<std::int32_t> touched = std::move(rowcols[prow]);
      rowcols[prow].clear();
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (std::int32_t c2 : touched) {
        if (c2 == c || col_done[c2]) continue;
        auto& col = cols[c2];
        auto it = std::lower_bound(col.begin(), col.end(), prow, [](const auto& e, std::int32_t x) { return e.first < x; });
        if (it == col.end() || it->first != prow) continue;
        T f = ar.mul(it->second, inv);
        Col out;
        out.reserve(col.size() + pc.size());
        std::size_t i = 0, j = 0;
        while (i < col.size() || j < pc.size()) {
          if (j == pc.size() || (i < col.size() && col[i].first < pc[j].first)) {
            out.push_back(std::move(col[i++]));
          } else if (i == col.size() || pc[j].first < col[i].first) {
            T v = ar.axpy(T(0), f, pc[j].second);
            if (!ar.zero(v)) {
              out.push_back({pc[j].first, v});
              rowcols[pc[j].first].push_back(c2);
            }
            ++j;
          } else {
            T v = ar.axpy(col[i].second, f, pc[j].second);
            if (!ar.zero(v)) out.push_back({col[i].first, v});
            ++i;
            ++j;
          }
        }
        col = std::move(out);
        pq.push({col.size(), c2});
      }
    }
  }
};

std::vector<BigInt> dense_diagonal(std::vector<std::vector<BigInt>> a) {
  std::size_t m = a.size(), n = m ? a[0].size() : 0;
  std::vector<BigInt> diag;
  std::size_t t = 0;
  while (t < m && t < n) {
    // smallest nonzero entry in the remaining block
    std::size_t pi = m, pj = n;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (a[i][j] != 0 && (pi == m || abs(a[i][j]) < abs(a[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi == m) break;
    std::swap(a[t], a[pi]);
    for (auto& row : a) std::swap(row[t], row[pj]);
    for (;;) {
      bool changed = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        BigInt q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < n; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          changed = true;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        BigInt q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < m; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) {
          for (auto& row : a) std::swap(row[t], row[j]);
          changed = true;
        }
      }
      if (!changed) break;
    }
    diag.push_back(abs(a[t][t]));
    ++t;
  }
  return diag;
}

// Turns any diagonal into the divisibility chain with the same cokernel.
std::vector<BigInt> to_chain(std::vector<BigInt> d) {
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      BigInt g = gcd(d[i], d[j]);
      if (g == d[i]) continue;
      BigInt l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  std::sort(d.begin(), d.end());
  return d;
}

template <class A>
IntegralRank integral_with(const ZMatrix& m, A a) {
  Eliminator<A> e(a, m);
  e.run();
  IntegralRank out;
  out.rank = e.rank;
  std::vector<std::int32_t> live_cols;
  std::vector<std::int32_t> row_id(m.rows, -1);
  std::int32_t nrows = 0;
  for (std::size_t c = 0; c < e.cols.size(); ++c) {
    if (e.col_done[c] || e.cols[c].empty()) continue;
    live_cols.push_back(std::int32_t(c));
    for (auto& [r, v] : e.cols[c])
      if (row_id[r] < 0) row_id[r] = nrows++;
  }
  if (live_cols.empty()) return out;
  std::vector<std::vector<BigInt>> dense(nrows, std::vector<BigInt>(live_cols.size(), 0));
  for (std::size_t j = 0; j < live_cols.size(); ++j)
    for (auto& [r, v] : e.cols[live_cols[j]]) dense[row_id[r]][j] = BigInt(v);
  auto diag = to_chain(dense_diagonal(std::move(dense)));
  out.rank += diag.size();
  for (auto& d : diag)
    if (d != 1) out.torsion.push_back(d);
  return out;
}

}  // namespace

IntegralRank integral_rank(const ZMatrix& m) {
  try {
    return integral_with(m, ZSmall{});
  } catch (const Overflow&) {
    return integral_with(m, ZBig{});
  }
}

std::size_t rank_in(const ZMatrix& m, const Ring& ring) {
  if (ring.kind() == RingKind::PrimeField) {
    Eliminator<ModP> e(ModP{ring.characteristic()}, m);
    e.run();
    return e.rank;
  }
  return integral_rank(m).rank;
}

SmithForm smith_normal_form(const SparseMatrix& m) {
  if (m.ring().kind() != RingKind::Integers) throw RingMismatch("smith_normal_form expects a matrix over Z");
  std::vector<std::vector<BigInt>> dense(m.rows(), std::vector<BigInt>(m.cols(), 0));
  bool small = true;
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (const auto& [r, s] : m.column(c)) {
      dense[r][c] = numerator(s.value());
      if (abs(dense[r][c]) > BigInt(std::numeric_limits<std::int32_t>::max())) small = false;
    }
  SmithForm out;
  if (small) {
    ZMatrix z = clear_denominators(m);
    auto ir = integral_rank(z);
    out.rank = ir.rank;
    out.diagonal.assign(ir.rank - ir.torsion.size(), BigInt(1));
    out.diagonal.insert(out.diagonal.end(), ir.torsion.begin(), ir.torsion.end());
    return out;
  }
  out.diagonal = to_chain(dense_diagonal(std::move(dense)));
  out.rank = out.diagonal.size();
  return out;
}

RowReduction row_reduce(const SparseMatrix& m) {
  const Ring& ring = m.ring();
  if (!ring.is_field()) throw NotAField("row_reduce needs a field; use smith_normal_form over Z");
  std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::vector<Scalar>> a(rows, std::vector<Scalar>(cols, Scalar(ring, 0)));
  for (std::size_t c = 0; c < cols; ++c)
    for (const auto& [r, s] : m.column(c)) a[r][c] = s;
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[r], a[p]);
    Scalar inv = a[r][c].inverse();
    for (auto& x : a[r]) x = x * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Scalar f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] = a[i][j] - f * a[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  RowReduction out;
  out.rank = pivot_cols.size();
  std::vector<char> is_pivot(cols, 0);
  for (auto c : pivot_cols) is_pivot[c] = 1;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Scalar> v(cols, Scalar(ring, 0));
    v[f] = Scalar(ring, 1);
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -a[i][f];
    out.kernel_basis.push_back(std::move(v));
  }
  return out;
}

}  // namespace opcalc
