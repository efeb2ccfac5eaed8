#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "azu/coefficient.hpp"

namespace azu {

/// Univariate polynomial over one coefficient backend, coefficients stored
/// ascending with no trailing zeros (zero polynomial = empty vector).
class Poly {
 public:
  explicit Poly(Backend b) : backend_(b) {}
  Poly(Backend b, std::vector<Coefficient> coeffs);

  static Poly zero(Backend b) { return Poly(b); }
  static Poly constant(Coefficient c);
  static Poly one(Backend b) { return constant(Coefficient::one(b)); }
  /// The variable t.
  static Poly t(Backend b);
  /// t - root
  static Poly linear_from_root(const Coefficient& root);

  Backend backend() const { return backend_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  const std::vector<Coefficient>& coeffs() const { return coeffs_; }
  Coefficient coeff(int k) const;
  Coefficient lead() const;

  Coefficient operator()(const Coefficient& x) const;
  Poly derivative() const;
  Poly monic() const;
  Poly pow(unsigned n) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Coefficient& c, const Poly& p);
  friend bool operator==(const Poly& a, const Poly& b);

  /// Euclidean division; requires nonzero divisor.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
  /// Quotient of an exact division; raises internal error on the exact
  /// backend if a remainder survives.
  static Poly exact_div(const Poly& a, const Poly& b);

  double max_abs_coefficient() const;
  std::string to_string() const;

 private:
  void trim();

  Backend backend_;
  std::vector<Coefficient> coeffs_;
};

struct XgcdResult {
  Poly g;  // monic gcd (or 1)
  Poly u;
  Poly v;  // u*a + v*b = g
};

/// Extended Euclid with monic normalization at every remainder step.
XgcdResult poly_xgcd(const Poly& a, const Poly& b);

Poly poly_gcd(const Poly& a, const Poly& b);

/// Given pairwise relatively prime g_1..g_l, returns h_1..h_l with
/// sum h_i g_i = 1 exactly; raises not-coprime when a common root exists.
std::vector<Poly> poly_bezout(std::span<const Poly> gs);

/// Yun square-free decomposition: p ~ prod factors[i].first ^ factors[i].second
/// with distinct exponents? No: returns the standard sequence a_i with
/// p = lead * prod a_i^i (a_i square-free, pairwise coprime, possibly 1).
std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p);

/// Number of distinct real roots of a real-coefficient exact polynomial.
int sturm_distinct_real_roots(const Poly& p);

/// True when all complex roots of the exact polynomial are real.
bool all_roots_real(const Poly& p);

/// Durand-Kerner in double precision; returns all complex roots.
std::vector<std::complex<double>> numeric_roots(const Poly& p);

/// Best rational approximation with bounded denominator (continued fractions).
Rational snap_to_rational(double x, unsigned long max_denominator = 1ul << 31);

struct RationalRoots {
  // (root, multiplicity), sorted ascending
  std::vector<std::pair<Rational, int>> roots;
  bool complete = false;  // true when the roots account for the whole degree
};

/// Exact rational roots of an exact-backend polynomial, with multiplicities:
/// square-free decomposition, numeric localization, continued-fraction snap,
/// exact verification.
RationalRoots rational_roots(const Poly& p);

}  // namespace azu
