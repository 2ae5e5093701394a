#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace opcalc {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

struct RingMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotAField : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RingKind { Integers, Rationals, PrimeField };

class Ring {
 public:
  Ring() = default;
  static Ring integers() { return Ring(RingKind::Integers, 0); }
  static Ring rationals() { return Ring(RingKind::Rationals, 0); }
  static Ring prime_field(std::int64_t p);
  // "z", "q", "fp:<p>"
  static Ring parse(const std::string& s);

  RingKind kind() const { return kind_; }
  std::int64_t characteristic() const { return p_; }
  bool is_field() const { return kind_ != RingKind::Integers; }
  std::string name() const;

  // Image of an integer in the ring; residues land in [0, p).
  std::int64_t reduce(std::int64_t v) const {
    if (kind_ != RingKind::PrimeField) return v;
    v %= p_;
    return v < 0 ? v + p_ : v;
  }

  friend bool operator==(const Ring& a, const Ring& b) { return a.kind_ == b.kind_ && a.p_ == b.p_; }

 private:
  Ring(RingKind k, std::int64_t p) : kind_(k), p_(p) {}
  RingKind kind_ = RingKind::Integers;
  std::int64_t p_ = 0;
};

bool is_prime(std::int64_t n);

class Scalar {
 public:
  Scalar() = default;
  Scalar(const Ring& r, std::int64_t v);
  Scalar(const Ring& r, const BigRat& v);
  static Scalar parse(const Ring& r, const std::string& s);

  const Ring& ring() const { return ring_; }
  const BigRat& value() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  bool is_integral() const;
  std::string str() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar inverse() const;
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.ring_ == b.ring_ && a.v_ == b.v_; }

 private:
  void normalize();
  Ring ring_;
  BigRat v_ = 0;
};

// Public sparse matrix: column-major, no stored zeros.
class SparseMatrix {
 public:
  using Column = std::vector<std::pair<std::size_t, Scalar>>;

  SparseMatrix() = default;
  SparseMatrix(const Ring& r, std::size_t rows, std::size_t cols);
  static SparseMatrix from_dense(const Ring& r, const std::vector<std::vector<std::int64_t>>& rows);

  const Ring& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_.size(); }
  const Column& column(std::size_t c) const { return cols_.at(c); }
  Scalar at(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const Scalar& v);
  void add(std::size_t r, std::size_t c, const Scalar& v);
  std::size_t nnz() const;

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

 private:
  Ring ring_;
  std::size_t rows_ = 0;
  std::vector<Column> cols_;
};

struct SmithForm {
  std::vector<BigInt> diagonal;  // nonzero invariant factors d_1 | d_2 | ...
  std::size_t rank = 0;
};

struct RowReduction {
  std::size_t rank = 0;
  std::vector<std::vector<Scalar>> kernel_basis;
};

SmithForm smith_normal_form(const SparseMatrix& m);
RowReduction row_reduce(const SparseMatrix& m);

// Integer matrix used for generated structure maps; entries are read in a ring at
// linear-algebra time.
struct ZMatrix {
  using Column = std::vector<std::pair<std::int32_t, std::int64_t>>;
  std::size_t rows = 0;
  std::vector<Column> cols;

  ZMatrix() = default;
  ZMatrix(std::size_t r, std::size_t c) : rows(r), cols(c) {}
  std::size_t ncols() const { return cols.size(); }
  std::int64_t at(std::size_t r, std::size_t c) const;
  std::size_t nnz() const;
  ZMatrix transpose() const;
  // Sorts rows in each column, merges duplicates, drops zeros.
  void canonicalize();
  friend bool operator==(const ZMatrix& a, const ZMatrix& b) { return a.rows == b.rows && a.cols == b.cols; }
};

ZMatrix multiply(const ZMatrix& a, const ZMatrix& b);
bool is_zero_in(const ZMatrix& m, const Ring& ring);

struct IntegralRank {
  std::size_t rank = 0;
  std::vector<BigInt> torsion;  // invariant factors > 1
};

std::size_t rank_in(const ZMatrix& m, const Ring& ring);
IntegralRank integral_rank(const ZMatrix& m);

// Converts a matrix with rational entries into an integer one with the same rank by
// clearing denominators column by column.
ZMatrix clear_denominators(const SparseMatrix& m);
SparseMatrix to_sparse(const ZMatrix& m, const Ring& ring);

}  // namespace opcalc
