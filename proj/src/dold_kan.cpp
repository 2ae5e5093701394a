// Dold–Kan normalisation, direct-sum totalisation and simplicial-set chains.
#include <algorithm>
#include <set>

#include "opcalc/simplicial.hpp"

namespace opcalc {
namespace {

ZMatrix identity_z(std::size_t n) {
  ZMatrix id(n, n);
  for (std::size_t k = 0; k < n; ++k) id.cols[k].push_back({std::int32_t(k), 1});
  return id;
}

bool same_in(const ZMatrix& a, const ZMatrix& b, const Ring& ring) {
  if (a.rows != b.rows || a.ncols() != b.ncols()) return false;
  ZMatrix d = a;
  for (std::size_t c = 0; c < b.ncols(); ++c)
    for (auto [r, v] : b.cols[c]) d.cols[c].push_back({r, -v});
  d.canonicalize();
  return is_zero_in(d, ring);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidComplex("identity fails: " + what);
}


}  // namespace

void CosimplicialModule::validate() const {
  int top = int(rank.size()) - 1;
  auto d = [&](int n, int i) -> const ZMatrix& { return coface.at(n).at(i); };
  auto s = [&](int n, int j) -> const ZMatrix& { return codegeneracy.at(n).at(j); };
  for (int n = 1; n <= top; ++n)
    for (int i = 0; i <= n; ++i)
      require(d(n, i).rows == rank[n] && d(n, i).ncols() == rank[n - 1], "coface shape");
  // d^j d^i = d^i d^{j-1}, i < j
  for (int n = 2; n <= top; ++n)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i < j; ++i)
        require(same_in(multiply(d(n, j), d(n - 1, i)), multiply(d(n, i), d(n - 1, j - 1)), ring), "d^j d^i");
  // s^j d^i
  for (int n = 0; n + 1 <= top; ++n)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n + 1; ++i) {
        ZMatrix lhs = multiply(s(n, j), d(n + 1, i));
        if (i == j || i == j + 1)
          require(same_in(lhs, identity_z(rank[n]), ring), "s^j d^j");
        else if (i < j)
          require(same_in(lhs, multiply(d(n, i), s(n - 1, j - 1)), ring), "s^j d^i, i<j");
        else
          require(same_in(lhs, multiply(d(n, i - 1), s(n - 1, j)), ring), "s^j d^i, i>j+1");
      }
  // s^j s^i = s^i s^{j+1}, i ≤ j
  for (int n = 0; n + 2 <= top; ++n)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= j; ++i)
        require(same_in(multiply(s(n, j), s(n + 1, i)), multiply(s(n, i), s(n + 1, j + 1)), ring), "s^j s^i");
}

void SimplicialModule::validate() const {
  int top = int(rank.size()) - 1;
  auto d = [&](int n, int i) -> const ZMatrix& { return face.at(n).at(i); };
  auto s = [&](int n, int j) -> const ZMatrix& { return degeneracy.at(n).at(j); };
  // d_i d_j = d_{j-1} d_i, i < j
  for (int n = 2; n <= top; ++n)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i < j; ++i)
        require(same_in(multiply(d(n - 1, i), d(n, j)), multiply(d(n - 1, j - 1), d(n, i)), ring), "d_i d_j");
  for (int n = 0; n + 1 <= top; ++n)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n + 1; ++i) {
        ZMatrix lhs = multiply(d(n + 1, i), s(n, j));
        if (i == j || i == j + 1)
          require(same_in(lhs, identity_z(rank[n]), ring), "d_j s_j");
        else if (i < j)
          require(same_in(lhs, multiply(s(n - 1, j - 1), d(n, i)), ring), "d_i s_j, i<j");
        else
          require(same_in(lhs, multiply(s(n - 1, j), d(n, i - 1)), ring), "d_i s_j, i>j+1");
      }
  for (int n = 0; n + 2 <= top; ++n)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= j; ++i)
        require(same_in(multiply(s(n + 1, i), s(n, j)), multiply(s(n + 1, j + 1), s(n, i)), ring), "s_i s_j");
}

GComplex normalize(const CosimplicialModule& c) {
  int top = int(c.rank.size()) - 1;
  // N^n: coordinates killed by every codegeneracy
  std::vector<std::vector<int>> keep(top + 1), pos(top + 1);
  for (int n = 0; n <= top; ++n) {
    std::vector<char> hit(c.rank[n], 0);
    std::size_t stacked_rows = 0;
    for (int j = 0; j < n; ++j) {
      const ZMatrix& s = c.codegeneracy.at(n - 1).at(j);
      stacked_rows += s.rows;
      for (std::size_t col = 0; col < s.ncols(); ++col)
        for (auto [r, v] : s.cols[col])
          if (c.ring.reduce(v) != 0) hit[col] = 1;
    }
    pos[n].assign(c.rank[n], -1);
    ZMatrix rest(stacked_rows, 0);
    for (std::size_t k = 0; k < c.rank[n]; ++k) {
      if (!hit[k]) {
        pos[n][k] = int(keep[n].size());
        keep[n].push_back(int(k));
        continue;
      }
      ZMatrix::Column col;
      std::size_t off = 0;
      for (int j = 0; j < n; ++j) {
        const ZMatrix& s = c.codegeneracy[n - 1][j];
        for (auto [r, v] : s.cols[k]) col.push_back({std::int32_t(off + r), v});
        off += s.rows;
      }
      rest.cols.push_back(col);
    }
    if (rank_in(rest, c.ring) != rest.ncols())
      throw ShapeUnsupported("codegeneracies are not of coordinate type; normalisation not supported");
  }
  GComplex out(c.ring, Group::trivial(), -top, 0);
  for (int n = 0; n <= top; ++n) {
    std::vector<std::string> labels;
    for (int k : keep[n]) labels.push_back("n" + std::to_string(n) + ":" + std::to_string(k));
    out.set_basis(-n, labels);
  }
  for (int n = 0; n < top; ++n) {
    ZMatrix m(keep[n + 1].size(), keep[n].size());
    for (std::size_t a = 0; a < keep[n].size(); ++a) {
      auto& col = m.cols[a];
      for (int i = 0; i <= n + 1; ++i)
        for (auto [r, v] : c.coface[n + 1][i].cols[keep[n][a]]) {
          std::int64_t w = (i % 2 == 0) ? v : -v;
          if (pos[n + 1][r] >= 0)
            col.push_back({pos[n + 1][r], w});
          else if (c.ring.reduce(w) != 0)
            col.push_back({-1, w});
        }
    }
    m.canonicalize();
    for (auto& col : m.cols)
      if (!col.empty() && col.front().first < 0 && c.ring.reduce(col.front().second) != 0)
        throw ShapeUnsupported("coface image leaves the normalised part");
    for (auto& col : m.cols)
      if (!col.empty() && col.front().first < 0) col.erase(col.begin());
    out.set_diff(-n, std::move(m));
  }
  out.set_valid_window(keep[top].empty() ? -top : -top + 1, 0);
  return out;
}

GComplex normalize(const SimplicialModule& s) {
  int top = int(s.rank.size()) - 1;
  std::vector<std::vector<int>> keep(top + 1), pos(top + 1);
  for (int n = 0; n <= top; ++n) {
    std::vector<char> degenerate(s.rank[n], 0);
    for (int j = 0; j < n; ++j) {
      const ZMatrix& m = s.degeneracy.at(n - 1).at(j);
      for (auto& col : m.cols) {
        if (col.size() != 1 || (col[0].second != 1 && col[0].second != -1))
          throw ShapeUnsupported("degeneracies are not of coordinate type; normalisation not supported");
        degenerate[col[0].first] = 1;
      }
    }
    pos[n].assign(s.rank[n], -1);
    for (std::size_t k = 0; k < s.rank[n]; ++k)
      if (!degenerate[k]) {
        pos[n][k] = int(keep[n].size());
        keep[n].push_back(int(k));
      }
  }
  GComplex out(s.ring, Group::trivial(), 0, top);
  for (int n = 0; n <= top; ++n) {
    std::vector<std::string> labels;
    for (int k : keep[n]) labels.push_back("n" + std::to_string(n) + ":" + std::to_string(k));
    out.set_basis(n, labels);
  }
  for (int n = 1; n <= top; ++n) {
    ZMatrix m(keep[n - 1].size(), keep[n].size());
    for (std::size_t a = 0; a < keep[n].size(); ++a)
      for (int i = 0; i <= n; ++i)
        for (auto [r, v] : s.face[n][i].cols[keep[n][a]])
          if (pos[n - 1][r] >= 0) m.cols[a].push_back({pos[n - 1][r], (i % 2 == 0) ? v : -v});
    out.set_diff(n, std::move(m));
  }
  out.set_valid_window(0, keep[top].empty() ? top : top - 1);
  return out;
}

GComplex tot_sum(const Bicomplex& b) {
  int P = int(b.rank.size()) - 1;
  int Q = P >= 0 ? int(b.rank[0].size()) - 1 : -1;
  GComplex out(b.ring, Group::trivial(), -Q, P);
  auto offset = [&](int n, int p) {  // position of block (p, p-n) inside degree n
    std::size_t off = 0;
    for (int pp = 0; pp < p; ++pp) {
      int q = pp - n;
      if (q >= 0 && q <= Q) off += b.rank[pp][q];
    }
    return off;
  };
  for (int n = -Q; n <= P; ++n) {
    std::vector<std::string> labels;
    for (int p = 0; p <= P; ++p) {
      int q = p - n;
      if (q < 0 || q > Q) continue;
      for (std::size_t k = 0; k < b.rank[p][q]; ++k)
        labels.push_back(std::to_string(p) + "," + std::to_string(q) + ":" + std::to_string(k));
    }
    out.set_basis(n, labels);
  }
  for (int n = -Q; n <= P; ++n) {
    ZMatrix m(out.dim(n - 1), out.dim(n));
    for (int p = 0; p <= P; ++p) {
      int q = p - n;
      if (q < 0 || q > Q) continue;
      std::size_t col_off = offset(n, p);
      if (p > 0) {
        const ZMatrix& h = b.dh[p][q];
        std::size_t row_off = offset(n - 1, p - 1);
        for (std::size_t c = 0; c < h.ncols(); ++c)
          for (auto [r, v] : h.cols[c]) m.cols[col_off + c].push_back({std::int32_t(row_off + r), v});
      }
      if (q < Q) {
        const ZMatrix& v = b.dv[p][q];
        std::size_t row_off = offset(n - 1, p);
        std::int64_t sign = (p % 2 == 0) ? 1 : -1;
        for (std::size_t c = 0; c < v.ncols(); ++c)
          for (auto [r, w] : v.cols[c]) m.cols[col_off + c].push_back({std::int32_t(row_off + r), sign * w});
      }
    }
    out.set_diff(n, std::move(m));
  }
  return out;
}

// ---- simplicial sets ----

bool SimplicialSet::is_degenerate(int n, int s) const {
  if (n == 0) return false;
  for (const auto& dj : degeneracy[n - 1])
    for (int x : dj)
      if (x == s) return true;
  return false;
}

void SimplicialSet::validate() const {
  reduced_chains(*this, Ring::integers()).validate();
}

SimplicialModule reduced_chains(const SimplicialSet& x, const Ring& ring) {
  int top = x.top();
  SimplicialModule m;
  m.ring = ring;
  // reindex without the basepoint
  std::vector<std::vector<int>> idx(top + 1);
  for (int n = 0; n <= top; ++n) {
    int bp = n < int(x.basepoint.size()) ? x.basepoint[n] : -1;
    idx[n].assign(x.simplices[n].size(), -1);
    std::size_t k = 0;
    for (std::size_t s = 0; s < x.simplices[n].size(); ++s)
      if (int(s) != bp) idx[n][s] = int(k++);
    m.rank.push_back(k);
  }
  auto remap = [&](int from, int to, const std::vector<int>& f) {
    ZMatrix z(m.rank[to], m.rank[from]);
    for (std::size_t s = 0; s < f.size(); ++s)
      if (idx[from][s] >= 0 && idx[to][f[s]] >= 0) z.cols[idx[from][s]].push_back({idx[to][f[s]], 1});
    return z;
  };
  m.face.resize(top + 1);
  m.degeneracy.resize(top + 1);
  for (int n = 1; n <= top; ++n)
    for (int i = 0; i <= n; ++i) m.face[n].push_back(remap(n, n - 1, x.face[n][i]));
  for (int n = 0; n < top; ++n)
    for (int j = 0; j <= n; ++j) m.degeneracy[n].push_back(remap(n, n + 1, x.degeneracy[n][j]));
  return m;
}

CosimplicialModule reduced_cochains(const SimplicialSet& x, const Ring& ring) {
  SimplicialModule s = reduced_chains(x, ring);
  CosimplicialModule c;
  c.ring = ring;
  c.rank = s.rank;
  int top = x.top();
  c.coface.resize(top + 1);
  c.codegeneracy.resize(top + 1);
  for (int n = 1; n <= top; ++n)
    for (auto& f : s.face[n]) c.coface[n].push_back(f.transpose());
  for (int n = 0; n < top; ++n)
    for (auto& d : s.degeneracy[n]) c.codegeneracy[n].push_back(d.transpose());
  return c;
}

GComplex normalized_chains(const SimplicialSet& x, const Ring& ring) { return normalize(reduced_chains(x, ring)); }

}  // namespace opcalc
