#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace homalg {

using Int = std::int64_t;
using Row = std::vector<Int>;

inline constexpr Int kMaxModulus = 2147483647;  // 2^31 - 1

// Least nonnegative residue of a mod n.
inline Int mod(Int a, Int n) {
  Int r = a % n;
  return r < 0 ? r + n : r;
}

// Residues are < 2^31 so products fit in 64 bits.
inline Int mulmod(Int a, Int b, Int n) { return mod(a * b, n); }

Int gcd(Int a, Int b);

// Extended gcd on nonnegative integers: returns g with s*a + t*b = g.
Int xgcd(Int a, Int b, Int& s, Int& t);

// Unit w mod n with w*a = gcd(a, n) mod n.
Int normalizing_unit(Int a, Int n);

// Inverse of a unit mod n; throws if a is not a unit.
Int inverse_mod(Int a, Int n);

// Dense matrix over Z/N, row-major, entries in [0, N).
class MatZN {
 public:
  MatZN() = default;
  MatZN(Int n, std::size_t rows, std::size_t cols);
  MatZN(Int n, std::size_t rows, std::size_t cols, const std::vector<Int>& entries);

  static MatZN zero(Int n, std::size_t rows, std::size_t cols) { return MatZN(n, rows, cols); }
  static MatZN identity(Int n, std::size_t size);
  static MatZN from_rows(Int n, std::size_t cols, const std::vector<Row>& rows);

  Int modulus() const { return n_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Int v) { data_[r * cols_ + c] = mod(v, n_); }

  Row row(std::size_t r) const;
  void set_row(std::size_t r, const Row& v);
  std::vector<Row> row_list() const;
  const std::vector<Int>& entries() const { return data_; }

  bool is_zero() const;

  MatZN transpose() const;
  MatZN operator*(const MatZN& o) const;
  MatZN operator+(const MatZN& o) const;
  MatZN operator-(const MatZN& o) const;
  MatZN operator-() const;
  MatZN scaled(Int k) const;
  bool operator==(const MatZN& o) const = default;

  // Submatrix of rows [r0, r0+nr) and cols [c0, c0+nc).
  MatZN block(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const;
  MatZN select_rows(const std::vector<std::size_t>& idx) const;
  MatZN select_cols(const std::vector<std::size_t>& idx) const;

  std::string to_string() const;

 private:
  Int n_ = 2;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

MatZN hstack(const MatZN& a, const MatZN& b);
MatZN vstack(const MatZN& a, const MatZN& b);
MatZN block_diag(const MatZN& a, const MatZN& b);

// Row vector times matrix.
Row vec_mul(const Row& x, const MatZN& m);
Row vec_add(const Row& a, const Row& b, Int n);
Row vec_sub(const Row& a, const Row& b, Int n);
Row vec_scale(const Row& a, Int k, Int n);
bool vec_is_zero(const Row& a);

struct HowellResult {
  MatZN H;  // Howell normal form of the row span
  MatZN T;  // H = T * m
};

// Canonical generating set of the row span.  Rows are sorted by pivot column,
// each pivot divides N, entries above a pivot lie in [0, pivot), and for each
// row r with pivot p the row (N/p)*r lies in the span of the rows below.
MatZN howell_form(const MatZN& m);
HowellResult howell_form_with_transform(const MatZN& m);

// Pivot column of each row of a matrix in Howell form.
std::vector<std::size_t> pivot_columns(const MatZN& h);

// Reduce v modulo the row span of a Howell-form matrix h.  The result is the
// canonical coset representative; coeffs (if given) receive y with v - y*h = result.
Row howell_reduce(const MatZN& h, const Row& v, Row* coeffs = nullptr);

// Some x with x*m = b, or nullopt.  Canonical: free coordinates are zero.
std::optional<Row> solve(const MatZN& m, const Row& b);

// Generators of {x : x*m = 0}, in Howell form.
MatZN kernel(const MatZN& m);

bool row_span_contains(const MatZN& m, const Row& v);

// Same row span (compared via Howell forms).
bool same_row_span(const MatZN& a, const MatZN& b);

// Order of the row span (the submodule of (Z/N)^cols generated by the rows).
Int row_span_order(const MatZN& m);

}  // namespace homalg
