#include "homalg/zn_matrix.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace homalg {

Int gcd(Int a, Int b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Int xgcd(Int a, Int b, Int& s, Int& t) {
  Int s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (b != 0) {
    Int q = a / b;
    Int r = a - q * b;
    a = b;
    b = r;
    Int ns = s0 - q * s1;
    s0 = s1;
    s1 = ns;
    Int nt = t0 - q * t1;
    t0 = t1;
    t1 = nt;
  }
  s = s0;
  t = t0;
  return a;
}

Int inverse_mod(Int a, Int n) {
  Int s, t;
  if (xgcd(mod(a, n), n, s, t) != 1) throw std::invalid_argument("inverse_mod: not a unit");
  return mod(s, n);
}

Int normalizing_unit(Int a, Int n) {
  a = mod(a, n);
  if (a == 0) return 1;
  Int g = gcd(a, n);
  Int m = n / g;
  if (m == 1) return 1;
  // a = g*k with gcd(k, m) = 1; lift k^{-1} mod m to a unit mod n.
  Int w = inverse_mod((a / g) % m, m);
  while (gcd(w, n) != 1) w += m;
  return w % n;
}

MatZN::MatZN(Int n, std::size_t rows, std::size_t cols)
    : n_(n), rows_(rows), cols_(cols), data_(rows * cols, 0) {
  if (n < 1 || n > kMaxModulus) throw std::invalid_argument("MatZN: modulus out of range");
}

MatZN::MatZN(Int n, std::size_t rows, std::size_t cols, const std::vector<Int>& entries)
    : MatZN(n, rows, cols) {
  if (entries.size() != rows * cols) throw std::invalid_argument("MatZN: entry count mismatch");
  for (std::size_t i = 0; i < entries.size(); ++i) data_[i] = mod(entries[i], n);
}

MatZN MatZN::identity(Int n, std::size_t size) {
  MatZN m(n, size, size);
  for (std::size_t i = 0; i < size; ++i) m.set(i, i, 1);
  return m;
}

MatZN MatZN::from_rows(Int n, std::size_t cols, const std::vector<Row>& rows) {
  MatZN m(n, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
  return m;
}

Row MatZN::row(std::size_t r) const {
  return Row(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
             data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

void MatZN::set_row(std::size_t r, const Row& v) {
  if (v.size() != cols_) throw std::invalid_argument("set_row: length mismatch");
  for (std::size_t c = 0; c < cols_; ++c) set(r, c, v[c]);
}

std::vector<Row> MatZN::row_list() const {
  std::vector<Row> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

bool MatZN::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Int v) { return v == 0; });
}

MatZN MatZN::transpose() const {
  MatZN t(n_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.data_[c * rows_ + r] = at(r, c);
  return t;
}

MatZN MatZN::operator*(const MatZN& o) const {
  if (n_ != o.n_) throw std::invalid_argument("matmul: modulus mismatch");
  if (cols_ != o.rows_) throw std::invalid_argument("matmul: dimension mismatch");
  MatZN p(n_, rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      Int a = at(r, k);
      if (a == 0) continue;
      for (std::size_t c = 0; c < o.cols_; ++c)
        p.data_[r * o.cols_ + c] = (p.data_[r * o.cols_ + c] + a * o.at(k, c)) % n_;
    }
  return p;
}

MatZN MatZN::operator+(const MatZN& o) const {
  if (n_ != o.n_ || rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("matadd: shape mismatch");
  MatZN s(n_, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = (data_[i] + o.data_[i]) % n_;
  return s;
}

MatZN MatZN::operator-(const MatZN& o) const { return *this + (-o); }

MatZN MatZN::operator-() const { return scaled(-1); }

MatZN MatZN::scaled(Int k) const {
  MatZN s(n_, rows_, cols_);
  Int kk = mod(k, n_);
  for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = mulmod(data_[i], kk, n_);
  return s;
}

MatZN MatZN::block(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("block: out of range");
  MatZN b(n_, nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) b.data_[r * nc + c] = at(r0 + r, c0 + c);
  return b;
}

MatZN MatZN::select_rows(const std::vector<std::size_t>& idx) const {
  MatZN b(n_, idx.size(), cols_);
  for (std::size_t r = 0; r < idx.size(); ++r) b.set_row(r, row(idx[r]));
  return b;
}

MatZN MatZN::select_cols(const std::vector<std::size_t>& idx) const {
  MatZN b(n_, rows_, idx.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) b.set(r, c, at(r, idx[c]));
  return b;
}

std::string MatZN::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? ",[" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? "," : "") << at(r, c);
    os << "]";
  }
  os << "] mod " << n_;
  return os.str();
}

MatZN hstack(const MatZN& a, const MatZN& b) {
  if (a.modulus() != b.modulus() || a.rows() != b.rows())
    throw std::invalid_argument("hstack: shape mismatch");
  MatZN s(a.modulus(), a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) s.set(r, c, a.at(r, c));
    for (std::size_t c = 0; c < b.cols(); ++c) s.set(r, a.cols() + c, b.at(r, c));
  }
  return s;
}

MatZN vstack(const MatZN& a, const MatZN& b) {
  if (a.modulus() != b.modulus() || a.cols() != b.cols())
    throw std::invalid_argument("vstack: shape mismatch");
  MatZN s(a.modulus(), a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) s.set_row(r, a.row(r));
  for (std::size_t r = 0; r < b.rows(); ++r) s.set_row(a.rows() + r, b.row(r));
  return s;
}

MatZN block_diag(const MatZN& a, const MatZN& b) {
  if (a.modulus() != b.modulus()) throw std::invalid_argument("block_diag: modulus mismatch");
  MatZN s(a.modulus(), a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) s.set(r, c, a.at(r, c));
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) s.set(a.rows() + r, a.cols() + c, b.at(r, c));
  return s;
}

Row vec_mul(const Row& x, const MatZN& m) {
  if (x.size() != m.rows()) throw std::invalid_argument("vec_mul: dimension mismatch");
  Int n = m.modulus();
  Row out(m.cols(), 0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    Int a = mod(x[k], n);
    if (a == 0) continue;
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] = (out[c] + a * m.at(k, c)) % n;
  }
  return out;
}

Row vec_add(const Row& a, const Row& b, Int n) {
  if (a.size() != b.size()) throw std::invalid_argument("vec_add: length mismatch");
  Row out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = mod(a[i] + b[i], n);
  return out;
}

Row vec_sub(const Row& a, const Row& b, Int n) {
  if (a.size() != b.size()) throw std::invalid_argument("vec_sub: length mismatch");
  Row out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = mod(a[i] - b[i], n);
  return out;
}

Row vec_scale(const Row& a, Int k, Int n) {
  Row out(a.size());
  Int kk = mod(k, n);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = mulmod(mod(a[i], n), kk, n);
  return out;
}

bool vec_is_zero(const Row& a) {
  return std::all_of(a.begin(), a.end(), [](Int v) { return v == 0; });
}

namespace {

// A working row: the vector and its coefficients against the input rows.
struct WorkRow {
  Row v;
  Row t;
};

void axpy(WorkRow& dst, const WorkRow& src, Int k, Int n) {
  if (mod(k, n) == 0) return;
  for (std::size_t i = 0; i < dst.v.size(); ++i) dst.v[i] = mod(dst.v[i] + k * src.v[i] % n, n);
  for (std::size_t i = 0; i < dst.t.size(); ++i) dst.t[i] = mod(dst.t[i] + k * src.t[i] % n, n);
}

// Replace (a, b) by (s*a + t*b, u*a + v*b) with a unimodular 2x2 matrix.
void combine(WorkRow& a, WorkRow& b, Int s, Int t, Int u, Int v, Int n) {
  WorkRow na = a, nb = b;
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    na.v[i] = mod(mod(s, n) * a.v[i] % n + mod(t, n) * b.v[i] % n, n);
    nb.v[i] = mod(mod(u, n) * a.v[i] % n + mod(v, n) * b.v[i] % n, n);
  }
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    na.t[i] = mod(mod(s, n) * a.t[i] % n + mod(t, n) * b.t[i] % n, n);
    nb.t[i] = mod(mod(u, n) * a.t[i] % n + mod(v, n) * b.t[i] % n, n);
  }
  a = std::move(na);
  b = std::move(nb);
}

void scale(WorkRow& r, Int k, Int n) {
  for (auto& x : r.v) x = mulmod(x, k, n);
  for (auto& x : r.t) x = mulmod(x, k, n);
}

std::vector<WorkRow> howell_rows(const MatZN& m, bool track) {
  const Int n = m.modulus();
  const std::size_t cols = m.cols();
  std::vector<WorkRow> pending;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    WorkRow w{m.row(r), {}};
    if (track) {
      w.t.assign(m.rows(), 0);
      w.t[r] = 1 % n;
    }
    pending.push_back(std::move(w));
  }
  std::vector<WorkRow> pivots;
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<WorkRow> rest;
    std::optional<WorkRow> piv;
    for (auto& w : pending) {
      if (w.v[c] == 0) {
        rest.push_back(std::move(w));
      } else if (!piv) {
        piv = std::move(w);
      } else {
        Int a = piv->v[c], b = w.v[c], s, t;
        Int g = xgcd(a, b, s, t);
        combine(*piv, w, s, t, -(b / g), a / g, n);
        rest.push_back(std::move(w));
      }
    }
    pending = std::move(rest);
    if (!piv) continue;
    scale(*piv, normalizing_unit(piv->v[c], n), n);
    const Int p = piv->v[c];
    // Annihilator multiple keeps the span saturated in later columns.
    WorkRow ann = *piv;
    scale(ann, n / p, n);
    if (!vec_is_zero(ann.v)) pending.push_back(std::move(ann));
    for (auto& q : pivots) axpy(q, *piv, -(q.v[c] / p), n);
    pivots.push_back(std::move(*piv));
  }
  return pivots;
}

}  // namespace

MatZN howell_form(const MatZN& m) {
  auto rows = howell_rows(m, false);
  MatZN h(m.modulus(), rows.size(), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) h.set_row(r, rows[r].v);
  return h;
}

HowellResult howell_form_with_transform(const MatZN& m) {
  auto rows = howell_rows(m, true);
  MatZN h(m.modulus(), rows.size(), m.cols());
  MatZN t(m.modulus(), rows.size(), m.rows());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    h.set_row(r, rows[r].v);
    t.set_row(r, rows[r].t);
  }
  return {h, t};
}

std::vector<std::size_t> pivot_columns(const MatZN& h) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    std::size_t c = 0;
    while (c < h.cols() && h.at(r, c) == 0) ++c;
    out.push_back(c);
  }
  return out;
}

Row howell_reduce(const MatZN& h, const Row& v, Row* coeffs) {
  if (v.size() != h.cols()) throw std::invalid_argument("howell_reduce: length mismatch");
  const Int n = h.modulus();
  Row x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) x[i] = mod(v[i], n);
  if (coeffs) coeffs->assign(h.rows(), 0);
  auto piv = pivot_columns(h);
  for (std::size_t r = 0; r < h.rows(); ++r) {
    std::size_t c = piv[r];
    Int q = x[c] / h.at(r, c);
    if (q == 0) continue;
    for (std::size_t j = c; j < x.size(); ++j) x[j] = mod(x[j] - q * h.at(r, j), n);
    if (coeffs) (*coeffs)[r] = q;
  }
  return x;
}

std::optional<Row> solve(const MatZN& m, const Row& b) {
  if (b.size() != m.cols()) throw std::invalid_argument("solve: dimension mismatch");
  auto hr = howell_form_with_transform(m);
  Row y;
  Row rem = howell_reduce(hr.H, b, &y);
  if (!vec_is_zero(rem)) return std::nullopt;
  if (m.rows() == 0) return Row{};
  return vec_mul(y, hr.T);
}

MatZN kernel(const MatZN& m) {
  const Int n = m.modulus();
  MatZN aug = hstack(m, MatZN::identity(n, m.rows()));
  MatZN h = howell_form(aug);
  auto piv = pivot_columns(h);
  std::vector<Row> ker;
  for (std::size_t r = 0; r < h.rows(); ++r)
    if (piv[r] >= m.cols()) ker.push_back(h.block(r, 1, m.cols(), m.rows()).row(0));
  return howell_form(MatZN::from_rows(n, m.rows(), ker));
}

bool row_span_contains(const MatZN& m, const Row& v) {
  if (v.size() != m.cols()) throw std::invalid_argument("row_span_contains: dimension mismatch");
  return vec_is_zero(howell_reduce(howell_form(m), v));
}

bool same_row_span(const MatZN& a, const MatZN& b) {
  if (a.modulus() != b.modulus() || a.cols() != b.cols()) return false;
  return howell_form(a) == howell_form(b);
}

Int row_span_order(const MatZN& m) {
  MatZN h = howell_form(m);
  Int order = 1;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    std::size_t c = pivot_columns(h)[r];
    order *= h.modulus() / h.at(r, c);
  }
  return order;
}

}  // namespace homalg
