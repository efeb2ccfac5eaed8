#include "azu/supermatrix.hpp"

#include <algorithm>

namespace azu {

const char* commutator_class_name(CommutatorClass c) {
  switch (c) {
    case CommutatorClass::commute: return "commute";
    case CommutatorClass::anticommute: return "anticommute";
    case CommutatorClass::neither: return "neither";
  }
  return "?";
}

SuperMatrix::SuperMatrix(int r, AlgebraSignature sig) : r_(r), sig_(sig) {
  if (r < 0) fail(ErrorCode::input, "negative matrix rank");
  e_.assign(static_cast<size_t>(r) * r, GrassmannElement::zero(sig));
}

SuperMatrix SuperMatrix::identity(int r, AlgebraSignature sig) {
  SuperMatrix m(r, sig);
  for (int i = 0; i < r; ++i) m.at(i, i) = GrassmannElement::one(sig);
  return m;
}

SuperMatrix SuperMatrix::scalar(int r, AlgebraSignature sig, const GrassmannElement& x) {
  SuperMatrix m(r, sig);
  for (int i = 0; i < r; ++i) m.at(i, i) = x;
  return m;
}

SuperMatrix SuperMatrix::from_body(const CoeffMatrix& body, AlgebraSignature sig) {
  if (body.rows() != body.cols()) fail(ErrorCode::shape_mismatch, "body must be square");
  if (body.backend() != sig.backend)
    fail(ErrorCode::backend_mismatch, "body backend differs from algebra backend");
  SuperMatrix m(body.rows(), sig);
  for (int i = 0; i < body.rows(); ++i)
    for (int j = 0; j < body.cols(); ++j)
      m.at(i, j) = GrassmannElement::scalar(sig, body.at(i, j));
  return m;
}

CoeffMatrix SuperMatrix::body() const {
  CoeffMatrix b(r_, r_, sig_.backend);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j) b.at(i, j) = at(i, j).body();
  return b;
}

SuperMatrix SuperMatrix::soul() const {
  SuperMatrix s(r_, sig_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j) s.at(i, j) = at(i, j).soul();
  return s;
}

Parity SuperMatrix::parity() const {
  bool even = false, odd = false;
  for (const auto& x : e_) {
    if (x.is_zero()) continue;
    switch (x.parity()) {
      case Parity::even: even = true; break;
      case Parity::odd: odd = true; break;
      case Parity::mixed: return Parity::mixed;
    }
  }
  if (even && odd) return Parity::mixed;
  if (odd) return Parity::odd;
  return Parity::even;
}

bool SuperMatrix::is_zero() const {
  return std::all_of(e_.begin(), e_.end(),
                     [](const GrassmannElement& x) { return x.is_zero(); });
}

GrassmannElement SuperMatrix::trace() const {
  GrassmannElement t = GrassmannElement::zero(sig_);
  for (int i = 0; i < r_; ++i) t += at(i, i);
  return t;
}

double SuperMatrix::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& x : e_) m = std::max(m, x.max_abs_coefficient());
  return m;
}

SuperMatrix SuperMatrix::operator-() const {
  SuperMatrix r = *this;
  for (auto& x : r.e_) x = -x;
  return r;
}

static void require_compatible(const SuperMatrix& a, const SuperMatrix& b) {
  if (a.rank() != b.rank()) fail(ErrorCode::shape_mismatch, "matrix rank mismatch");
  if (!(a.signature() == b.signature()))
    fail(ErrorCode::signature_mismatch, "matrices over different algebras");
}

SuperMatrix& SuperMatrix::operator+=(const SuperMatrix& o) {
  require_compatible(*this, o);
  for (size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
  return *this;
}

SuperMatrix& SuperMatrix::operator-=(const SuperMatrix& o) {
  require_compatible(*this, o);
  for (size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
  return *this;
}

SuperMatrix operator*(const SuperMatrix& a, const SuperMatrix& b) {
  require_compatible(a, b);
  int r = a.r_;
  SuperMatrix out(r, a.sig_);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < r; ++k) {
      const GrassmannElement& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < r; ++j) {
        if (b.at(k, j).is_zero()) continue;
        out.at(i, j) += aik * b.at(k, j);
      }
    }
  return out;
}

SuperMatrix operator*(const GrassmannElement& x, const SuperMatrix& m) {
  SuperMatrix out = m;
  for (auto& e : out.e_) e = x * e;
  return out;
}

SuperMatrix operator*(const Coefficient& c, const SuperMatrix& m) {
  SuperMatrix out = m;
  for (auto& e : out.e_) e *= c;
  return out;
}

bool operator==(const SuperMatrix& a, const SuperMatrix& b) {
  return a.r_ == b.r_ && a.sig_ == b.sig_ && a.e_ == b.e_;
}

SuperMatrix SuperMatrix::pow(unsigned n) const {
  SuperMatrix r = identity(r_, sig_);
  for (unsigned i = 0; i < n; ++i) {
    r = r * *this;
    if (r.is_zero()) break;
  }
  return r;
}

SuperMatrix SuperMatrix::to_backend(Backend b) const {
  if (b == sig_.backend) return *this;
  AlgebraSignature sig = sig_;
  sig.backend = b;
  SuperMatrix m(r_, sig);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j) m.at(i, j) = at(i, j).to_backend(b);
  return m;
}

SuperMatrix SuperMatrix::inverse() const {
  CoeffMatrix b = body();
  CoeffMatrix binv_c = [&] {
    try {
      return b.inverse();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::not_invertible)
        fail(ErrorCode::not_invertible,
             std::string("matrix has no inverse: body determinant = ") +
                 b.determinant().to_string());
      throw;
    }
  }();
  SuperMatrix binv = from_body(binv_c, sig_);
  SuperMatrix n = soul();
  // m^-1 = b^-1 - b^-1 n b^-1 (1 - n b^-1 + (n b^-1)^2 - ... +- (n b^-1)^s)
  SuperMatrix nb = n * binv;
  SuperMatrix series = identity(r_, sig_);
  SuperMatrix term = identity(r_, sig_);
  for (int k = 1; k <= sig_.generators; ++k) {
    term = term * nb;
    if (term.is_zero()) break;
    series += (k % 2 == 1) ? -term : term;
  }
  return binv - binv * n * binv * series;
}

CharPoly sm_charpoly(const SuperMatrix& m) {
  Poly body = m.body().charpoly();
  int e = m.signature().generators + 1;
  return CharPoly{body.pow(static_cast<unsigned>(e)), std::move(body), e, std::nullopt};
}

CharPoly sm_charpoly(const SuperMatrix& m, std::span<const Coefficient> eigenvalues,
                     std::span<const int> multiplicities) {
  if (eigenvalues.size() != multiplicities.size())
    fail(ErrorCode::input, "one multiplicity per eigenvalue expected");
  CharPoly cp = sm_charpoly(m);
  Poly product = Poly::one(m.backend());
  std::vector<std::pair<Coefficient, int>> factored;
  for (size_t i = 0; i < eigenvalues.size(); ++i) {
    product = product * Poly::linear_from_root(eigenvalues[i].to_backend(m.backend()))
                            .pow(static_cast<unsigned>(multiplicities[i]));
    factored.emplace_back(eigenvalues[i], cp.soul_exponent * multiplicities[i]);
  }
  bool matches = m.backend() == Backend::exact
                     ? product == cp.body
                     : (product - cp.body).max_abs_coefficient() <=
                           1e-8 * std::max(1.0, cp.body.max_abs_coefficient());
  if (!matches)
    fail(ErrorCode::input, "eigenvalues do not factor the body char poly");
  cp.factored = std::move(factored);
  return cp;
}

SuperMatrix poly_at_matrix(const Poly& p, const SuperMatrix& m) {
  if (p.backend() != m.backend())
    fail(ErrorCode::backend_mismatch, "polynomial and matrix backend mismatch");
  SuperMatrix acc = SuperMatrix::zero(m.rank(), m.signature());
  for (int k = p.degree(); k >= 0; --k) {
    acc = acc * m;
    Coefficient c = p.coeff(k);
    if (!c.is_zero())
      acc += SuperMatrix::scalar(m.rank(), m.signature(),
                                 GrassmannElement::scalar(m.signature(), c));
  }
  return acc;
}

CommutatorClass commutator_class(const SuperMatrix& a, const SuperMatrix& b) {
  require_compatible(a, b);
  SuperMatrix ab = a * b;
  SuperMatrix ba = b * a;
  if ((ab - ba).is_zero()) return CommutatorClass::commute;
  if ((ab + ba).is_zero()) return CommutatorClass::anticommute;
  return CommutatorClass::neither;
}

}  // namespace azu
