#pragma once

#include <optional>
#include <span>
#include <vector>

#include "azu/grassmann.hpp"
#include "azu/linalg.hpp"
#include "azu/poly.hpp"

namespace azu {

enum class CommutatorClass { commute, anticommute, neither };

const char* commutator_class_name(CommutatorClass c);

/// r x r matrix over one Grassmann algebra; the endomorphism ring of the
/// free module of rank r.
class SuperMatrix {
 public:
  SuperMatrix(int r, AlgebraSignature sig);

  static SuperMatrix identity(int r, AlgebraSignature sig);
  static SuperMatrix zero(int r, AlgebraSignature sig) { return SuperMatrix(r, sig); }
  static SuperMatrix scalar(int r, AlgebraSignature sig, const GrassmannElement& x);
  static SuperMatrix from_body(const CoeffMatrix& body, AlgebraSignature sig);

  int rank() const { return r_; }
  const AlgebraSignature& signature() const { return sig_; }
  Backend backend() const { return sig_.backend; }

  GrassmannElement& at(int i, int j) { return e_[static_cast<size_t>(i) * r_ + j]; }
  const GrassmannElement& at(int i, int j) const { return e_[static_cast<size_t>(i) * r_ + j]; }

  CoeffMatrix body() const;
  SuperMatrix soul() const;
  Parity parity() const;
  bool is_zero() const;
  GrassmannElement trace() const;
  double max_abs_coefficient() const;

  SuperMatrix operator-() const;
  SuperMatrix& operator+=(const SuperMatrix& o);
  SuperMatrix& operator-=(const SuperMatrix& o);
  friend SuperMatrix operator+(SuperMatrix a, const SuperMatrix& b) { return a += b; }
  friend SuperMatrix operator-(SuperMatrix a, const SuperMatrix& b) { return a -= b; }
  friend SuperMatrix operator*(const SuperMatrix& a, const SuperMatrix& b);
  friend SuperMatrix operator*(const GrassmannElement& x, const SuperMatrix& m);
  friend SuperMatrix operator*(const Coefficient& c, const SuperMatrix& m);
  friend bool operator==(const SuperMatrix& a, const SuperMatrix& b);
  friend bool operator!=(const SuperMatrix& a, const SuperMatrix& b) { return !(a == b); }

  SuperMatrix pow(unsigned n) const;
  SuperMatrix to_backend(Backend b) const;

  /// Two-sided inverse; exists iff the body is invertible.
  SuperMatrix inverse() const;

 private:
  int r_;
  AlgebraSignature sig_;
  std::vector<GrassmannElement> e_;
};

/// chi_m = (chi_body)^(s+1); monic of degree r(s+1), annihilates the matrix.
struct CharPoly {
  Poly full;
  Poly body;
  int soul_exponent = 0;  // s+1
  /// (eigenvalue, multiplicity in chi_full) when the spectrum is known.
  std::optional<std::vector<std::pair<Coefficient, int>>> factored;
};

CharPoly sm_charpoly(const SuperMatrix& m);
/// As above with the factored form filled in from known distinct eigenvalues
/// and body multiplicities; the factorization is verified against chi_body.
CharPoly sm_charpoly(const SuperMatrix& m, std::span<const Coefficient> eigenvalues,
                     std::span<const int> multiplicities);

/// Horner substitution of a scalar polynomial.
SuperMatrix poly_at_matrix(const Poly& p, const SuperMatrix& m);

CommutatorClass commutator_class(const SuperMatrix& a, const SuperMatrix& b);

}  // namespace azu
