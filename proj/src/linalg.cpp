#include "azu/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace azu {

CoeffMatrix::CoeffMatrix(int rows, int cols, Backend b)
    : rows_(rows), cols_(cols), backend_(b) {
  if (rows < 0 || cols < 0) fail(ErrorCode::input, "negative matrix dimension");
  a_.assign(static_cast<size_t>(rows) * cols, Coefficient::zero(b));
}

CoeffMatrix CoeffMatrix::identity(int n, Backend b) {
  CoeffMatrix m(n, n, b);
  for (int i = 0; i < n; ++i) m.at(i, i) = Coefficient::one(b);
  return m;
}

static void require_shape(bool ok) {
  if (!ok) fail(ErrorCode::shape_mismatch, "matrix shape mismatch");
}

CoeffMatrix CoeffMatrix::operator-() const {
  CoeffMatrix r = *this;
  for (auto& c : r.a_) c = -c;
  return r;
}

CoeffMatrix operator+(const CoeffMatrix& a, const CoeffMatrix& b) {
  require_shape(a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.backend_ == b.backend_);
  CoeffMatrix r = a;
  for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
  return r;
}

CoeffMatrix operator-(const CoeffMatrix& a, const CoeffMatrix& b) { return a + (-b); }

CoeffMatrix operator*(const CoeffMatrix& a, const CoeffMatrix& b) {
  require_shape(a.cols_ == b.rows_ && a.backend_ == b.backend_);
  CoeffMatrix r(a.rows_, b.cols_, a.backend_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      if (a.at(i, k).is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) r.at(i, j) += a.at(i, k) * b.at(k, j);
    }
  return r;
}

CoeffMatrix operator*(const Coefficient& c, const CoeffMatrix& m) {
  CoeffMatrix r = m;
  for (auto& x : r.a_) x *= c;
  return r;
}

bool operator==(const CoeffMatrix& a, const CoeffMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.backend_ == b.backend_ && a.a_ == b.a_;
}

bool CoeffMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Coefficient& c) { return c.is_zero(); });
}

Coefficient CoeffMatrix::trace() const {
  require_shape(rows_ == cols_);
  Coefficient t = Coefficient::zero(backend_);
  for (int i = 0; i < rows_; ++i) t += at(i, i);
  return t;
}

CoeffMatrix CoeffMatrix::pow(unsigned n) const {
  require_shape(rows_ == cols_);
  CoeffMatrix r = identity(rows_, backend_);
  for (unsigned i = 0; i < n; ++i) r = r * *this;
  return r;
}

namespace {

// Fraction-free Bareiss over any entry type with exact division.
// Ops must provide: is_zero, better_pivot (for numeric pivoting), mul, div.
template <class T, class Ops>
T bareiss_determinant(std::vector<T> m, int n, const T& one, Ops ops) {
  if (n == 0) return one;
  auto at = [&](int i, int j) -> T& { return m[static_cast<size_t>(i) * n + j]; };
  T prev = one;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    int pivot = -1;
    for (int i = k; i < n; ++i) {
      if (ops.is_zero(at(i, k))) continue;
      if (pivot < 0 || ops.better_pivot(at(i, k), at(pivot, k))) pivot = i;
    }
    if (pivot < 0) return ops.zero();
    if (pivot != k) {
      for (int j = 0; j < n; ++j) std::swap(at(pivot, j), at(k, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        T num = ops.sub(ops.mul(at(k, k), at(i, j)), ops.mul(at(i, k), at(k, j)));
        at(i, j) = ops.div(num, prev);
      }
      at(i, k) = ops.zero();
    }
    prev = at(k, k);
  }
  T det = at(n - 1, n - 1);
  return sign < 0 ? ops.neg(det) : det;
}

struct CoeffOps {
  Backend backend;
  bool is_zero(const Coefficient& c) const { return c.is_zero(); }
  bool better_pivot(const Coefficient& a, const Coefficient& b) const {
    return backend == Backend::numeric && a.abs() > b.abs();
  }
  Coefficient zero() const { return Coefficient::zero(backend); }
  Coefficient neg(const Coefficient& c) const { return -c; }
  Coefficient sub(const Coefficient& a, const Coefficient& b) const { return a - b; }
  Coefficient mul(const Coefficient& a, const Coefficient& b) const { return a * b; }
  Coefficient div(const Coefficient& a, const Coefficient& b) const { return a / b; }
};

struct PolyOps {
  Backend backend;
  bool is_zero(const Poly& p) const { return p.is_zero(); }
  bool better_pivot(const Poly& a, const Poly& b) const {
    if (a.degree() != b.degree()) return a.degree() > b.degree();
    return backend == Backend::numeric && a.lead().abs() > b.lead().abs();
  }
  Poly zero() const { return Poly::zero(backend); }
  Poly neg(const Poly& p) const { return -p; }
  Poly sub(const Poly& a, const Poly& b) const { return a - b; }
  Poly mul(const Poly& a, const Poly& b) const { return a * b; }
  Poly div(const Poly& a, const Poly& b) const { return Poly::exact_div(a, b); }
};

}  // namespace

Coefficient CoeffMatrix::determinant() const {
  require_shape(rows_ == cols_);
  return bareiss_determinant<Coefficient>(a_, rows_, Coefficient::one(backend_),
                                          CoeffOps{backend_});
}

CoeffMatrix CoeffMatrix::inverse() const {
  require_shape(rows_ == cols_);
  int n = rows_;
  CoeffMatrix work = *this;
  CoeffMatrix inv = identity(n, backend_);
  for (int k = 0; k < n; ++k) {
    int pivot = -1;
    for (int i = k; i < n; ++i) {
      if (work.at(i, k).is_zero()) continue;
      if (pivot < 0 ||
          (backend_ == Backend::numeric && work.at(i, k).abs() > work.at(pivot, k).abs()))
        pivot = i;
    }
    if (pivot < 0)
      fail(ErrorCode::not_invertible,
           "matrix is singular (determinant = " + determinant().to_string() + ")");
    if (pivot != k)
      for (int j = 0; j < n; ++j) {
        std::swap(work.at(pivot, j), work.at(k, j));
        std::swap(inv.at(pivot, j), inv.at(k, j));
      }
    Coefficient d = work.at(k, k);
    for (int j = 0; j < n; ++j) {
      work.at(k, j) /= d;
      inv.at(k, j) /= d;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || work.at(i, k).is_zero()) continue;
      Coefficient f = work.at(i, k);
      for (int j = 0; j < n; ++j) {
        work.at(i, j) -= f * work.at(k, j);
        inv.at(i, j) -= f * inv.at(k, j);
      }
    }
  }
  return inv;
}

Poly CoeffMatrix::charpoly() const {
  require_shape(rows_ == cols_);
  std::vector<Poly> m;
  m.reserve(a_.size());
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      Poly p = Poly::constant(-at(i, j));
      if (i == j) p += Poly::t(backend_);
      m.push_back(std::move(p));
    }
  return bareiss_determinant<Poly>(std::move(m), rows_, Poly::one(backend_), PolyOps{backend_});
}

CoeffMatrix CoeffMatrix::nullspace(double tol) const {
  // reduced row echelon form, then one basis vector per free column
  CoeffMatrix work = *this;
  int n = rows_, m = cols_;
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < m && row < n; ++col) {
    int pivot = -1;
    double best = 0.0;
    for (int i = row; i < n; ++i) {
      const Coefficient& c = work.at(i, col);
      if (backend_ == Backend::exact) {
        if (!c.is_zero()) {
          pivot = i;
          break;
        }
      } else if (c.abs() > std::max(best, tol)) {
        best = c.abs();
        pivot = i;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row)
      for (int j = 0; j < m; ++j) std::swap(work.at(pivot, j), work.at(row, j));
    Coefficient d = work.at(row, col);
    for (int j = 0; j < m; ++j) work.at(row, j) /= d;
    for (int i = 0; i < n; ++i) {
      if (i == row || work.at(i, col).is_zero()) continue;
      Coefficient f = work.at(i, col);
      for (int j = 0; j < m; ++j) work.at(i, j) -= f * work.at(row, j);
    }
    pivot_col.push_back(col);
    ++row;
  }
  std::vector<int> free_cols;
  for (int col = 0, k = 0; col < m; ++col) {
    if (k < static_cast<int>(pivot_col.size()) && pivot_col[k] == col)
      ++k;
    else
      free_cols.push_back(col);
  }
  CoeffMatrix basis(m, static_cast<int>(free_cols.size()), backend_);
  for (size_t v = 0; v < free_cols.size(); ++v) {
    int fc = free_cols[v];
    basis.at(fc, static_cast<int>(v)) = Coefficient::one(backend_);
    for (size_t r = 0; r < pivot_col.size(); ++r)
      basis.at(pivot_col[r], static_cast<int>(v)) = -work.at(static_cast<int>(r), fc);
  }
  return basis;
}

int CoeffMatrix::rank(double tol) const {
  return cols_ - nullspace(tol).cols();
}

CoeffMatrix CoeffMatrix::stacked(const CoeffMatrix& other) const {
  require_shape(cols_ == other.cols_ && backend_ == other.backend_);
  CoeffMatrix r(rows_ + other.rows_, cols_, backend_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
  for (int i = 0; i < other.rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(rows_ + i, j) = other.at(i, j);
  return r;
}

}  // namespace azu
