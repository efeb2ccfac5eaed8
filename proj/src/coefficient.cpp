#include "azu/coefficient.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace azu {

const char* backend_name(Backend b) {
  return b == Backend::exact ? "exact" : "numeric";
}

Backend backend_from_name(const std::string& name) {
  if (name == "exact") return Backend::exact;
  if (name == "numeric") return Backend::numeric;
  fail(ErrorCode::input, "unknown backend '" + name + "' (expected exact|numeric)");
}

Rational rational_from_string(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail(ErrorCode::parse, "empty rational literal");

  auto is_plain = [](const std::string& t) {
    bool digit = false;
    for (size_t i = 0; i < t.size(); ++i) {
      char c = t[i];
      if (c == '+' || c == '-') {
        if (i != 0 && t[i - 1] != '/') return false;
      } else if (c == '/') {
        if (!digit) return false;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        digit = true;
      } else {
        return false;
      }
    }
    return digit;
  };

  if (is_plain(s)) {
    Rational q;
    if (q.set_str(s, 10) != 0) fail(ErrorCode::parse, "bad rational literal '" + text + "'");
    if (q.get_den() == 0) fail(ErrorCode::parse, "zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
  }

  // Decimal form, optionally with exponent: [-]ddd[.ddd][e[-]dd]
  bool neg = false;
  size_t i = 0;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long frac_digits = 0;
  long exponent = 0;
  bool seen_dot = false, seen_digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      exponent = std::strtol(s.c_str() + i + 1, nullptr, 10);
      if (s.substr(i + 1).empty()) fail(ErrorCode::parse, "bad exponent in '" + text + "'");
      break;
    } else {
      fail(ErrorCode::parse, "bad numeric literal '" + text + "'");
    }
  }
  if (!seen_digit) fail(ErrorCode::parse, "bad numeric literal '" + text + "'");
  mpz_class num(digits.empty() ? "0" : digits, 10);  // base 0 would read "025" as octal
  if (neg) num = -num;
  mpz_class den(1);
  long net = exponent - frac_digits;
  mpz_class ten(10);
  if (net >= 0) {
    mpz_class scale;
    mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(net));
    num *= scale;
  } else {
    mpz_pow_ui(den.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(-net));
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

std::string double_to_string(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
  Rational n = b.re * b.re + b.im * b.im;
  if (n == 0) fail(ErrorCode::domain, "division by zero coefficient");
  GaussianRational p = a * b.conj();
  return {p.re / n, p.im / n};
}

const GaussianRational& Coefficient::exact_value() const {
  if (!is_exact()) fail(ErrorCode::backend_mismatch, "numeric coefficient where exact expected");
  return std::get<GaussianRational>(v_);
}

std::complex<double> Coefficient::numeric_value() const {
  if (is_exact()) fail(ErrorCode::backend_mismatch, "exact coefficient where numeric expected");
  return std::get<std::complex<double>>(v_);
}

std::complex<double> Coefficient::to_complex() const {
  if (is_exact()) {
    const auto& g = std::get<GaussianRational>(v_);
    return {g.re.get_d(), g.im.get_d()};
  }
  return std::get<std::complex<double>>(v_);
}

Coefficient Coefficient::to_backend(Backend b) const {
  if (b == backend()) return *this;
  if (b == Backend::numeric) return numeric(to_complex());
  fail(ErrorCode::backend_mismatch, "cannot promote a numeric coefficient to the exact backend");
}

bool Coefficient::is_zero() const {
  if (is_exact()) return std::get<GaussianRational>(v_).is_zero();
  return std::get<std::complex<double>>(v_) == std::complex<double>(0.0, 0.0);
}

bool Coefficient::is_real() const {
  if (is_exact()) return std::get<GaussianRational>(v_).is_real();
  return std::get<std::complex<double>>(v_).imag() == 0.0;
}

bool Coefficient::is_rational_integer() const {
  if (!is_exact()) return false;
  const auto& g = std::get<GaussianRational>(v_);
  return g.im == 0 && g.re.get_den() == 1;
}

Coefficient Coefficient::operator-() const {
  if (is_exact()) return Coefficient(-std::get<GaussianRational>(v_));
  return Coefficient(-std::get<std::complex<double>>(v_));
}

Coefficient Coefficient::conj() const {
  if (is_exact()) return Coefficient(std::get<GaussianRational>(v_).conj());
  return Coefficient(std::conj(std::get<std::complex<double>>(v_)));
}

void require_same_backend(const Coefficient& a, const Coefficient& b, const char* where) {
  if (a.backend() != b.backend())
    fail(ErrorCode::backend_mismatch, std::string("mixed coefficient backends in ") + where);
}

Coefficient& Coefficient::operator+=(const Coefficient& o) {
  require_same_backend(*this, o, "+");
  if (is_exact())
    v_ = std::get<GaussianRational>(v_) + std::get<GaussianRational>(o.v_);
  else
    v_ = std::get<std::complex<double>>(v_) + std::get<std::complex<double>>(o.v_);
  return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& o) {
  require_same_backend(*this, o, "-");
  if (is_exact())
    v_ = std::get<GaussianRational>(v_) - std::get<GaussianRational>(o.v_);
  else
    v_ = std::get<std::complex<double>>(v_) - std::get<std::complex<double>>(o.v_);
  return *this;
}

Coefficient& Coefficient::operator*=(const Coefficient& o) {
  require_same_backend(*this, o, "*");
  if (is_exact())
    v_ = std::get<GaussianRational>(v_) * std::get<GaussianRational>(o.v_);
  else
    v_ = std::get<std::complex<double>>(v_) * std::get<std::complex<double>>(o.v_);
  return *this;
}

Coefficient& Coefficient::operator/=(const Coefficient& o) {
  require_same_backend(*this, o, "/");
  if (is_exact()) {
    v_ = std::get<GaussianRational>(v_) / std::get<GaussianRational>(o.v_);
  } else {
    auto d = std::get<std::complex<double>>(o.v_);
    if (d == std::complex<double>(0.0, 0.0))
      fail(ErrorCode::domain, "division by zero coefficient");
    v_ = std::get<std::complex<double>>(v_) / d;
  }
  return *this;
}

bool operator==(const Coefficient& a, const Coefficient& b) {
  if (a.backend() != b.backend()) return false;
  if (a.is_exact()) return std::get<GaussianRational>(a.v_) == std::get<GaussianRational>(b.v_);
  return std::get<std::complex<double>>(a.v_) == std::get<std::complex<double>>(b.v_);
}

std::string Coefficient::re_string() const {
  if (is_exact()) return rational_to_string(std::get<GaussianRational>(v_).re);
  return double_to_string(std::get<std::complex<double>>(v_).real());
}

std::string Coefficient::im_string() const {
  if (is_exact()) return rational_to_string(std::get<GaussianRational>(v_).im);
  return double_to_string(std::get<std::complex<double>>(v_).imag());
}

std::string Coefficient::to_string() const {
  if (is_real()) return re_string();
  return re_string() + (im_string()[0] == '-' ? "" : "+") + im_string() + "i";
}

Rational factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

}  // namespace azu
