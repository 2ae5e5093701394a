#include "opcalc/coeff.hpp"

#include <algorithm>

namespace opcalc {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Ring Ring::prime_field(std::int64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("not a prime: " + std::to_string(p));
  if (p > (std::int64_t(1) << 31)) throw std::invalid_argument("prime too large for residue arithmetic");
  return Ring(RingKind::PrimeField, p);
}

Ring Ring::parse(const std::string& s) {
  if (s == "z" || s == "Z") return integers();
  if (s == "q" || s == "Q") return rationals();
  if (s.rfind("fp:", 0) == 0) return prime_field(std::stoll(s.substr(3)));
  throw std::invalid_argument("unknown ring '" + s + "' (expected z, q or fp:<p>)");
}

std::string Ring::name() const {
  switch (kind_) {
    case RingKind::Integers: return "z";
    case RingKind::Rationals: return "q";
    case RingKind::PrimeField: return "fp:" + std::to_string(p_);
  }
  return "?";
}

Scalar::Scalar(const Ring& r, std::int64_t v) : ring_(r), v_(r.reduce(v)) {}

Scalar::Scalar(const Ring& r, const BigRat& v) : ring_(r), v_(v) { normalize(); }

void Scalar::normalize() {
  switch (ring_.kind()) {
    case RingKind::Integers:
      if (denominator(v_) != 1) throw std::domain_error("non-integral value in Z");
      break;
    case RingKind::Rationals:
      break;
    case RingKind::PrimeField: {
      BigInt p = ring_.characteristic();
      BigInt num = numerator(v_) % p, den = denominator(v_) % p;
      if (num < 0) num += p;
      if (den < 0) den += p;
      if (den == 0) throw std::domain_error("denominator divisible by the characteristic");
      // den^{-1} = den^{p-2}
      BigInt inv = powm(den, p - 2, p);
      v_ = BigRat((num * inv) % p);
      break;
    }
  }
}

Scalar Scalar::parse(const Ring& r, const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Scalar(r, BigRat(BigInt(s)));
  BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
  if (den == 0) throw std::domain_error("zero denominator in '" + s + "'");
  return Scalar(r, BigRat(num, den));
}

bool Scalar::is_integral() const { return denominator(v_) == 1; }

std::string Scalar::str() const {
  if (denominator(v_) == 1) return numerator(v_).str();
  return numerator(v_).str() + "/" + denominator(v_).str();
}

static void same_ring(const Scalar& a, const Scalar& b) {
  if (!(a.ring() == b.ring())) throw RingMismatch("scalars from different rings");
}

Scalar Scalar::operator+(const Scalar& o) const {
  same_ring(*this, o);
  return Scalar(ring_, v_ + o.v_);
}
Scalar Scalar::operator-(const Scalar& o) const {
  same_ring(*this, o);
  return Scalar(ring_, v_ - o.v_);
}
Scalar Scalar::operator*(const Scalar& o) const {
  same_ring(*this, o);
  return Scalar(ring_, v_ * o.v_);
}
Scalar Scalar::operator-() const { return Scalar(ring_, BigRat(-v_)); }

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  if (ring_.kind() == RingKind::Integers) {
    if (v_ != 1 && v_ != -1) throw std::domain_error("not a unit in Z: " + str());
    return *this;
  }
  return Scalar(ring_, BigRat(1) / v_);
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

SparseMatrix::SparseMatrix(const Ring& r, std::size_t rows, std::size_t cols) : ring_(r), rows_(rows), cols_(cols) {}

SparseMatrix SparseMatrix::from_dense(const Ring& r, const std::vector<std::vector<std::int64_t>>& rows) {
  std::size_t nc = rows.empty() ? 0 : rows[0].size();
  SparseMatrix m(r, rows.size(), nc);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != nc) throw std::invalid_argument("ragged dense matrix");
    for (std::size_t j = 0; j < nc; ++j) m.set(i, j, Scalar(r, rows[i][j]));
  }
  return m;
}

Scalar SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto& col = cols_.at(c);
  auto it = std::lower_bound(col.begin(), col.end(), r, [](const auto& e, std::size_t x) { return e.first < x; });
  if (it != col.end() && it->first == r) return it->second;
  return Scalar(ring_, 0);
}

void SparseMatrix::set(std::size_t r, std::size_t c, const Scalar& v) {
  if (r >= rows_ || c >= cols_.size()) throw std::out_of_range("matrix index out of range");
  if (!(v.ring() == ring_)) throw RingMismatch("entry ring differs from matrix ring");
  auto& col = cols_[c];
  auto it = std::lower_bound(col.begin(), col.end(), r, [](const auto& e, std::size_t x) { return e.first < x; });
  bool present = it != col.end() && it->first == r;
  if (v.is_zero()) {
    if (present) col.erase(it);
  } else if (present) {
    it->second = v;
  } else {
    col.insert(it, {r, v});
  }
}

void SparseMatrix::add(std::size_t r, std::size_t c, const Scalar& v) { set(r, c, at(r, c) + v); }

std::size_t SparseMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto& c : cols_) n += c.size();
  return n;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
  return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_.size() == b.cols_.size() && a.cols_ == b.cols_;
}

std::int64_t ZMatrix::at(std::size_t r, std::size_t c) const {
  const auto& col = cols.at(c);
  auto it = std::lower_bound(col.begin(), col.end(), std::int32_t(r),
                             [](const auto& e, std::int32_t x) { return e.first < x; });
  return (it != col.end() && it->first == std::int32_t(r)) ? it->second : 0;
}

std::size_t ZMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto& c : cols) n += c.size();
  return n;
}

void ZMatrix::canonicalize() {
  for (auto& col : cols) {
    std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t w = 0;
    for (std::size_t i = 0; i < col.size();) {
      auto row = col[i].first;
      std::int64_t v = 0;
      while (i < col.size() && col[i].first == row) v += col[i++].second;
      if (v != 0) col[w++] = {row, v};
    }
    col.resize(w);
  }
}

ZMatrix ZMatrix::transpose() const {
  ZMatrix t(ncols(), rows);
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (auto [r, v] : cols[c]) t.cols[r].push_back({std::int32_t(c), v});
  return t;
}

ZMatrix multiply(const ZMatrix& a, const ZMatrix& b) {
  if (a.ncols() != b.rows) throw std::invalid_argument("matrix shapes do not compose");
  ZMatrix out(a.rows, b.ncols());
  for (std::size_t c = 0; c < b.ncols(); ++c) {
    auto& oc = out.cols[c];
    for (auto [k, v] : b.cols[c])
      for (auto [r, w] : a.cols[k]) oc.push_back({r, v * w});
  }
  out.canonicalize();
  return out;
}

bool is_zero_in(const ZMatrix& m, const Ring& ring) {
  for (const auto& col : m.cols)
    for (auto [r, v] : col)
      if (ring.reduce(v) != 0) return false;
  return true;
}

ZMatrix clear_denominators(const SparseMatrix& m) {
  ZMatrix z(m.rows(), m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    BigInt l = 1;
    for (const auto& [r, s] : m.column(c)) l = boost::multiprecision::lcm(l, BigInt(denominator(s.value())));
    for (const auto& [r, s] : m.column(c)) {
      BigInt v = numerator(s.value()) * (l / denominator(s.value()));
      if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("matrix entry exceeds 64-bit range");
      z.cols[c].push_back({std::int32_t(r), static_cast<std::int64_t>(v)});
    }
  }
  return z;
}

SparseMatrix to_sparse(const ZMatrix& m, const Ring& ring) {
  SparseMatrix s(ring, m.rows, m.ncols());
  for (std::size_t c = 0; c < m.ncols(); ++c)
    for (auto [r, v] : m.cols[c])
      if (ring.reduce(v) != 0) s.set(r, c, Scalar(ring, v));
  return s;
}

}  // namespace opcalc
