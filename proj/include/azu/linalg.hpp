#pragma once

#include <vector>

#include "azu/coefficient.hpp"
#include "azu/poly.hpp"

namespace azu {

/// Dense matrix over scalar coefficients; the body algebra of a SuperMatrix
/// and all spectral bookkeeping live here.
class CoeffMatrix {
 public:
  CoeffMatrix(int rows, int cols, Backend b);

  static CoeffMatrix identity(int n, Backend b);
  static CoeffMatrix zero(int rows, int cols, Backend b) { return CoeffMatrix(rows, cols, b); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Backend backend() const { return backend_; }

  Coefficient& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Coefficient& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  CoeffMatrix operator-() const;
  friend CoeffMatrix operator+(const CoeffMatrix& a, const CoeffMatrix& b);
  friend CoeffMatrix operator-(const CoeffMatrix& a, const CoeffMatrix& b);
  friend CoeffMatrix operator*(const CoeffMatrix& a, const CoeffMatrix& b);
  friend CoeffMatrix operator*(const Coefficient& c, const CoeffMatrix& m);
  friend bool operator==(const CoeffMatrix& a, const CoeffMatrix& b);

  bool is_zero() const;
  Coefficient trace() const;
  CoeffMatrix pow(unsigned n) const;

  /// Fraction-free Bareiss elimination with row pivoting; exact on the
  /// exact backend.
  Coefficient determinant() const;
  /// Gauss-Jordan; raises not-invertible naming the determinant.
  CoeffMatrix inverse() const;
  /// Monic char poly det(t*I - A).
  Poly charpoly() const;
  /// Basis of the right nullspace as columns; `tol` applies on the numeric
  /// backend only.
  CoeffMatrix nullspace(double tol = 1e-9) const;
  int rank(double tol = 1e-9) const;

  /// Rows of `other` appended below.
  CoeffMatrix stacked(const CoeffMatrix& other) const;

 private:
  int rows_, cols_;
  Backend backend_;
  std::vector<Coefficient> a_;
};

}  // namespace azu
