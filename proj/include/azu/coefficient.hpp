#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <variant>

#include "azu/errors.hpp"

namespace azu {

enum class Backend { exact, numeric };

const char* backend_name(Backend b);
Backend backend_from_name(const std::string& name);

using Rational = mpq_class;

/// num/den in canonical form (mpq_class's two-argument constructor does not
/// canonicalize on its own).
inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "p/q", integer, and decimal ("-1.25", "3e2") literals exactly.
Rational rational_from_string(const std::string& text);
std::string rational_to_string(const Rational& q);

/// a + b*i with exact rational components.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational conj() const { return {re, -im}; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b);
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// Scalar of the algebra: exactly one backend per value. Arithmetic between
/// different backends is a structural error, never a silent promotion.
class Coefficient {
 public:
  Coefficient() : v_(GaussianRational{}) {}

  static Coefficient exact(Rational re, Rational im = Rational(0)) {
    return Coefficient(GaussianRational{std::move(re), std::move(im)});
  }
  static Coefficient exact(const GaussianRational& g) { return Coefficient(g); }
  static Coefficient exact(long n) { return exact(Rational(n)); }
  static Coefficient numeric(std::complex<double> z) { return Coefficient(z); }
  static Coefficient numeric(double x) { return Coefficient(std::complex<double>(x, 0.0)); }
  static Coefficient zero(Backend b) {
    return b == Backend::exact ? exact(0) : numeric(0.0);
  }
  static Coefficient one(Backend b) {
    return b == Backend::exact ? exact(1) : numeric(1.0);
  }
  static Coefficient of_rational(const Rational& q, Backend b) {
    return b == Backend::exact ? exact(q) : numeric(q.get_d());
  }

  Backend backend() const {
    return std::holds_alternative<GaussianRational>(v_) ? Backend::exact : Backend::numeric;
  }
  bool is_exact() const { return backend() == Backend::exact; }

  const GaussianRational& exact_value() const;
  std::complex<double> numeric_value() const;

  /// Always available; lossy on the exact backend.
  std::complex<double> to_complex() const;
  double abs() const { return std::abs(to_complex()); }
  Coefficient to_backend(Backend b) const;

  bool is_zero() const;
  bool is_real() const;
  bool is_rational_integer() const;

  Coefficient operator-() const;
  Coefficient conj() const;
  Coefficient& operator+=(const Coefficient& o);
  Coefficient& operator-=(const Coefficient& o);
  Coefficient& operator*=(const Coefficient& o);
  Coefficient& operator/=(const Coefficient& o);

  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
  friend Coefficient operator*(Coefficient a, const Coefficient& b) { return a *= b; }
  friend Coefficient operator/(Coefficient a, const Coefficient& b) { return a /= b; }
  friend bool operator==(const Coefficient& a, const Coefficient& b);
  friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }

  std::string re_string() const;
  std::string im_string() const;
  std::string to_string() const;

 private:
  explicit Coefficient(GaussianRational g) : v_(std::move(g)) {}
  explicit Coefficient(std::complex<double> z) : v_(z) {}

  std::variant<GaussianRational, std::complex<double>> v_;
};

void require_same_backend(const Coefficient& a, const Coefficient& b, const char* where);

/// d! as an exact integer, usable on both backends.
Rational factorial(unsigned n);

std::string double_to_string(double x);

}  // namespace azu
