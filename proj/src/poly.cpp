#include "azu/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace azu {

Poly::Poly(Backend b, std::vector<Coefficient> coeffs)
    : backend_(b), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_)
    if (c.backend() != backend_)
      fail(ErrorCode::backend_mismatch, "polynomial coefficient backend mismatch");
  trim();
}

Poly Poly::constant(Coefficient c) {
  Poly p(c.backend());
  if (!c.is_zero()) p.coeffs_ = {std::move(c)};
  return p;
}

Poly Poly::t(Backend b) {
  Poly p(b);
  p.coeffs_ = {Coefficient::zero(b), Coefficient::one(b)};
  return p;
}

Poly Poly::linear_from_root(const Coefficient& root) {
  Poly p(root.backend());
  p.coeffs_ = {-root, Coefficient::one(root.backend())};
  return p;
}

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Coefficient Poly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Coefficient::zero(backend_);
  return coeffs_[k];
}

Coefficient Poly::lead() const {
  if (coeffs_.empty()) return Coefficient::zero(backend_);
  return coeffs_.back();
}

Coefficient Poly::operator()(const Coefficient& x) const {
  Coefficient acc = Coefficient::zero(backend_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly Poly::derivative() const {
  Poly d(backend_);
  for (size_t k = 1; k < coeffs_.size(); ++k)
    d.coeffs_.push_back(coeffs_[k] *
                        Coefficient::of_rational(Rational(static_cast<long>(k)), backend_));
  d.trim();
  return d;
}

Poly Poly::monic() const {
  if (is_zero()) fail(ErrorCode::domain, "monic of zero polynomial");
  Poly m = *this;
  Coefficient l = lead();
  for (auto& c : m.coeffs_) c /= l;
  return m;
}

Poly Poly::pow(unsigned n) const {
  Poly r = one(backend_);
  for (unsigned i = 0; i < n; ++i) r = r * *this;
  return r;
}

Poly Poly::operator-() const {
  Poly r(backend_);
  for (const auto& c : coeffs_) r.coeffs_.push_back(-c);
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (backend_ != o.backend_)
    fail(ErrorCode::backend_mismatch, "polynomial backend mismatch in +");
  if (o.coeffs_.size() > coeffs_.size())
    coeffs_.resize(o.coeffs_.size(), Coefficient::zero(backend_));
  for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.backend_ != b.backend_)
    fail(ErrorCode::backend_mismatch, "polynomial backend mismatch in *");
  Poly r(a.backend_);
  if (a.is_zero() || b.is_zero()) return r;
  r.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, Coefficient::zero(a.backend_));
  for (size_t i = 0; i < a.coeffs_.size(); ++i)
    for (size_t j = 0; j < b.coeffs_.size(); ++j)
      r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
  r.trim();
  return r;
}

Poly operator*(const Coefficient& c, const Poly& p) {
  Poly r(p.backend_);
  for (const auto& x : p.coeffs_) r.coeffs_.push_back(c * x);
  r.trim();
  return r;
}

bool operator==(const Poly& a, const Poly& b) {
  return a.backend_ == b.backend_ && a.coeffs_ == b.coeffs_;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) fail(ErrorCode::domain, "polynomial division by zero");
  Poly q(a.backend_), r = a;
  int db = b.degree();
  Coefficient lb = b.lead();
  if (r.degree() >= db) q.coeffs_.assign(r.degree() - db + 1, Coefficient::zero(a.backend_));
  while (!r.is_zero() && r.degree() >= db) {
    int k = r.degree() - db;
    Coefficient f = r.lead() / lb;
    q.coeffs_[k] = f;
    for (int i = 0; i <= db; ++i) r.coeffs_[k + i] -= f * b.coeffs_[i];
    r.trim();
  }
  q.trim();
  return {q, r};
}

Poly Poly::exact_div(const Poly& a, const Poly& b) {
  auto [q, r] = divmod(a, b);
  if (a.backend() == Backend::exact && !r.is_zero())
    fail(ErrorCode::internal, "expected exact polynomial division left a remainder");
  return q;
}

double Poly::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, c.abs());
  return m;
}

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  for (int k = degree(); k >= 0; --k) {
    if (coeffs_[k].is_zero()) continue;
    if (k != degree()) out << " + ";
    out << "(" << coeffs_[k].to_string() << ")";
    if (k >= 1) out << "*t";
    if (k >= 2) out << "^" << k;
  }
  return out.str();
}

static bool numerically_negligible(const Poly& r, double scale) {
  return r.max_abs_coefficient() <= 1e-10 * std::max(1.0, scale);
}

XgcdResult poly_xgcd(const Poly& a, const Poly& b) {
  Backend bk = a.backend();
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::one(bk), s1 = Poly::zero(bk);
  Poly t0 = Poly::zero(bk), t1 = Poly::one(bk);
  double scale = std::max(a.max_abs_coefficient(), b.max_abs_coefficient());
  while (!r1.is_zero() && !(bk == Backend::numeric && numerically_negligible(r1, scale))) {
    auto [q, r2] = Poly::divmod(r0, r1);
    Poly s2 = s0 - q * s1;
    Poly t2 = t0 - q * t1;
    if (!r2.is_zero() && !(bk == Backend::numeric && numerically_negligible(r2, scale))) {
      // monic normalization keeps coefficient growth under control
      Coefficient l = r2.lead();
      Coefficient inv = Coefficient::one(bk) / l;
      r2 = inv * r2;
      s2 = inv * s2;
      t2 = inv * t2;
    }
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
    t0 = t1; t1 = t2;
  }
  if (r0.is_zero()) return {r0, s0, t0};
  Coefficient inv = Coefficient::one(bk) / r0.lead();
  return {inv * r0, inv * s0, inv * t0};
}

Poly poly_gcd(const Poly& a, const Poly& b) { return poly_xgcd(a, b).g; }

std::vector<Poly> poly_bezout(std::span<const Poly> gs) {
  if (gs.empty()) fail(ErrorCode::input, "poly_bezout needs at least one polynomial");
  Backend bk = gs[0].backend();
  for (const auto& g : gs)
    if (g.is_zero()) fail(ErrorCode::not_coprime, "zero polynomial in Bezout system");

  // The g_i need only be coprime as a set (quotients chi/f_i share every
  // pairwise factor once three or more primary factors exist); a root common
  // to all of them is the error condition.
  Poly acc = gs[0];
  std::vector<Poly> hs = {Poly::one(bk)};
  for (size_t i = 1; i < gs.size(); ++i) {
    XgcdResult x = poly_xgcd(acc, gs[i]);  // x.u*acc + x.v*gs[i] = x.g
    for (auto& h : hs) h = x.u * h;
    hs.push_back(x.v);
    acc = x.g;
  }
  if (acc.degree() != 0)
    fail(ErrorCode::not_coprime,
         "Bezout system shares a common root (gcd " + acc.to_string() + ")");
  Coefficient inv = Coefficient::one(bk) / acc.coeff(0);
  for (auto& h : hs) h = inv * h;

  if (bk == Backend::exact) {
    Poly check = Poly::zero(bk);
    for (size_t i = 0; i < gs.size(); ++i) check += hs[i] * gs[i];
    if (!(check == Poly::one(bk)))
      fail(ErrorCode::internal, "Bezout identity failed to verify");
  }
  return hs;
}

std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p) {
  // Yun's algorithm over a field of characteristic zero
  if (p.is_zero()) fail(ErrorCode::domain, "square-free decomposition of zero");
  std::vector<std::pair<Poly, int>> out;
  Poly f = p.monic();
  if (f.degree() == 0) return out;
  Poly fp = f.derivative();
  Poly a = poly_gcd(f, fp);
  Poly b = Poly::exact_div(f, a);
  Poly c = Poly::exact_div(fp, a);
  Poly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    Poly g = poly_gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g.monic(), i);
    b = Poly::exact_div(b, g);
    Poly quot = Poly::exact_div(d, g);
    d = quot - b.derivative();
    ++i;
  }
  return out;
}

namespace {

int sign_of(const Rational& q) { return sgn(q); }

// Sturm chain sign-variation count at +/- infinity for real exact polys.
int sturm_variations(const std::vector<Poly>& chain, bool at_plus_infinity) {
  int variations = 0, prev = 0;
  for (const auto& p : chain) {
    if (p.is_zero()) continue;
    Rational lead = p.lead().exact_value().re;
    int s = sign_of(lead);
    if (!at_plus_infinity && p.degree() % 2 == 1) s = -s;
    if (prev != 0 && s != 0 && s != prev) ++variations;
    if (s != 0) prev = s;
  }
  return variations;
}

}  // namespace

int sturm_distinct_real_roots(const Poly& p) {
  if (p.backend() != Backend::exact)
    fail(ErrorCode::input, "Sturm counting requires the exact backend");
  for (const auto& c : p.coeffs())
    if (!c.is_real()) fail(ErrorCode::input, "Sturm counting requires real coefficients");
  if (p.degree() <= 0) return 0;
  Poly f = Poly::exact_div(p, poly_gcd(p, p.derivative()));  // square-free part
  std::vector<Poly> chain = {f, f.derivative()};
  while (!chain.back().is_zero() && chain.back().degree() > 0) {
    auto [q, r] = Poly::divmod(chain[chain.size() - 2], chain.back());
    chain.push_back(-r);
  }
  return sturm_variations(chain, false) - sturm_variations(chain, true);
}

bool all_roots_real(const Poly& p) {
  for (const auto& c : p.coeffs())
    if (!c.is_real()) return false;  // real-rooted monic polys have real coefficients
  if (p.degree() <= 0) return true;
  Poly f = Poly::exact_div(p, poly_gcd(p, p.derivative()));
  return sturm_distinct_real_roots(f) == f.degree();
}

std::vector<std::complex<double>> numeric_roots(const Poly& p) {
  int n = p.degree();
  if (n <= 0) return {};
  std::vector<std::complex<double>> c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = p.coeff(k).to_complex();
  for (int k = 0; k <= n; ++k) c[k] /= c[n];

  double radius = 0.0;
  for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(c[k]));
  radius = 1.0 + radius;

  std::vector<std::complex<double>> z(n);
  std::complex<double> seed(0.4, 0.9);
  std::complex<double> acc = seed;
  for (int k = 0; k < n; ++k, acc *= seed) z[k] = radius * acc;
  auto eval = [&](std::complex<double> x) {
    std::complex<double> acc = 0.0;
    for (int k = n; k >= 0; --k) acc = acc * x + c[k];
    return acc;
  };
  for (int iter = 0; iter < 500; ++iter) {
    double moved = 0.0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> denom = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      if (denom == std::complex<double>(0.0, 0.0)) {
        z[i] += std::complex<double>(1e-6, 1e-6);
        continue;
      }
      std::complex<double> delta = eval(z[i]) / denom;
      z[i] -= delta;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved < 1e-14 * std::max(1.0, radius)) break;
  }
  return z;
}

Rational snap_to_rational(double x, unsigned long max_denominator) {
  if (!std::isfinite(x)) fail(ErrorCode::domain, "cannot snap a non-finite value");
  bool neg = x < 0;
  double v = std::abs(x);
  // continued fraction convergents
  unsigned long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int iter = 0; iter < 64; ++iter) {
    double fl = std::floor(frac);
    if (fl > 9e18) break;
    unsigned long a = static_cast<unsigned long>(fl);
    if (q0 != 0 && a != 0 && q1 > (max_denominator - q0) / a) break;
    unsigned long p2 = a * p1 + p0;
    unsigned long q2 = a * q1 + q0;
    if (q2 > max_denominator) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double rem = frac - fl;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) return Rational(0);
  Rational r(static_cast<long>(p1), static_cast<long>(q1));
  r.canonicalize();
  if (neg) r = -r;
  return r;
}

RationalRoots rational_roots(const Poly& p) {
  if (p.backend() != Backend::exact)
    fail(ErrorCode::input, "rational root extraction requires the exact backend");
  RationalRoots out;
  if (p.degree() <= 0) {
    out.complete = true;
    return out;
  }
  for (const auto& [factor, mult] : squarefree_decomposition(p)) {
    Poly rem = factor;
    for (const auto& z : numeric_roots(factor)) {
      if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z))) continue;
      Rational cand = snap_to_rational(z.real());
      Coefficient c = Coefficient::exact(cand);
      if (!rem.is_zero() && rem(c).is_zero()) {
        out.roots.emplace_back(cand, mult);
        rem = Poly::exact_div(rem, Poly::linear_from_root(c));
      }
    }
    if (rem.degree() > 0) {
      out.complete = false;
      std::sort(out.roots.begin(), out.roots.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      return out;
    }
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  int total = 0;
  for (const auto& [r, m] : out.roots) total += m;
  out.complete = (total == p.degree());
  return out;
}

}  // namespace azu
