#include "azu/grassmann.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace azu {

const char* parity_name(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::mixed: return "mixed";
  }
  return "?";
}

const char* merge_convention_name(MergeConvention c) {
  return c == MergeConvention::anticommute ? "anticommute" : "commute";
}

MergeConvention merge_convention_from_name(const std::string& name) {
  if (name == "anticommute") return MergeConvention::anticommute;
  if (name == "commute") return MergeConvention::commute;
  fail(ErrorCode::input, "unknown merge convention '" + name + "'");
}

AlgebraSignature AlgebraSignature::plain(int s, Backend b) {
  if (s < 0 || s > 63) fail(ErrorCode::input, "generator count must be in [0,63]");
  return AlgebraSignature{s, s, MergeConvention::anticommute, b};
}

AlgebraSignature AlgebraSignature::merged(int s1, int s2, MergeConvention c, Backend b) {
  if (s1 < 0 || s2 < 0 || s1 + s2 > 63)
    fail(ErrorCode::input, "merged generator count must be in [0,63]");
  return AlgebraSignature{s1 + s2, s1, c, b};
}

GrassmannElement GrassmannElement::scalar(AlgebraSignature sig, Coefficient c) {
  GrassmannElement e(sig);
  e.set_term(0, std::move(c));
  return e;
}

GrassmannElement GrassmannElement::generator(AlgebraSignature sig, int index) {
  if (index < 1 || index > sig.generators)
    fail(ErrorCode::input, "generator index " + std::to_string(index) + " out of range");
  GrassmannElement e(sig);
  e.set_term(std::uint64_t(1) << (index - 1), Coefficient::one(sig.backend));
  return e;
}

GrassmannElement GrassmannElement::monomial(AlgebraSignature sig, std::uint64_t mask,
                                            Coefficient c) {
  if (sig.generators < 64 && (mask >> sig.generators) != 0)
    fail(ErrorCode::input, "monomial mask uses generators beyond the signature");
  GrassmannElement e(sig);
  e.set_term(mask, std::move(c));
  return e;
}

void GrassmannElement::set_term(std::uint64_t mask, Coefficient c) {
  if (c.backend() != sig_.backend)
    fail(ErrorCode::backend_mismatch, "coefficient backend differs from algebra backend");
  if (c.is_zero())
    terms_.erase(mask);
  else
    terms_[mask] = std::move(c);
}

bool GrassmannElement::is_scalar() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

Coefficient GrassmannElement::coefficient(std::uint64_t mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? Coefficient::zero(sig_.backend) : it->second;
}

Coefficient GrassmannElement::body() const { return coefficient(0); }

GrassmannElement GrassmannElement::soul() const {
  GrassmannElement s = *this;
  s.terms_.erase(0);
  return s;
}

std::pair<Coefficient, GrassmannElement> GrassmannElement::body_soul() const {
  return {body(), soul()};
}

Parity GrassmannElement::parity() const {
  bool even = false, odd = false;
  for (const auto& [mask, c] : terms_)
    (std::popcount(mask) % 2 == 0 ? even : odd) = true;
  if (even && odd) return Parity::mixed;
  if (odd) return Parity::odd;
  return Parity::even;  // zero counts as even
}

int GrassmannElement::degree() const {
  int d = 0;
  for (const auto& [mask, c] : terms_) d = std::max(d, std::popcount(mask));
  return d;
}

GrassmannElement GrassmannElement::operator-() const {
  GrassmannElement r(sig_);
  for (const auto& [mask, c] : terms_) r.terms_.emplace(mask, -c);
  return r;
}

static void require_same_signature(const AlgebraSignature& a, const AlgebraSignature& b) {
  if (!(a == b))
    fail(ErrorCode::signature_mismatch,
         "operands live in different Grassmann algebras or backends");
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& o) {
  require_same_signature(sig_, o.sig_);
  for (const auto& [mask, c] : o.terms_) {
    auto it = terms_.find(mask);
    if (it == terms_.end()) {
      terms_.emplace(mask, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& o) {
  return *this += -o;
}

GrassmannElement& GrassmannElement::operator*=(const Coefficient& c) {
  if (c.backend() != sig_.backend)
    fail(ErrorCode::backend_mismatch, "scalar backend differs from algebra backend");
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [mask, coeff] : terms_) coeff *= c;
  // exact arithmetic cannot create zeros here; numeric could via overflow, not handled
  return *this;
}

static int inversion_parity(std::uint64_t a, std::uint64_t b) {
  // pairs (i in a, j in b) with i > j
  int count = 0;
  while (b) {
    int j = std::countr_zero(b);
    count += std::popcount(a >> (j + 1));
    b &= b - 1;
  }
  return count & 1;
}

int monomial_sort_parity(std::uint64_t left, std::uint64_t right, const AlgebraSignature& sig) {
  if (sig.convention == MergeConvention::anticommute || sig.is_plain())
    return inversion_parity(left, right);
  // Cross-factor generators commute: only within-factor inversions count.
  std::uint64_t low = (sig.first_factor >= 64)
                          ? ~std::uint64_t(0)
                          : ((std::uint64_t(1) << sig.first_factor) - 1);
  return inversion_parity(left & low, right & low) ^
         inversion_parity(left & ~low, right & ~low);
}

GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
  require_same_signature(a.sig_, b.sig_);
  GrassmannElement r(a.sig_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      if (ma & mb) continue;  // a generator squared
      Coefficient c = ca * cb;
      if (monomial_sort_parity(ma, mb, a.sig_)) c = -c;
      std::uint64_t mask = ma | mb;
      auto it = r.terms_.find(mask);
      if (it == r.terms_.end()) {
        if (!c.is_zero()) r.terms_.emplace(mask, std::move(c));
      } else {
        it->second += c;
        if (it->second.is_zero()) r.terms_.erase(it);
      }
    }
  }
  return r;
}

bool operator==(const GrassmannElement& a, const GrassmannElement& b) {
  return a.sig_ == b.sig_ && a.terms_ == b.terms_;
}

GrassmannElement GrassmannElement::pow(unsigned n) const {
  GrassmannElement r = one(sig_);
  for (unsigned i = 0; i < n; ++i) {
    r = r * *this;
    if (r.is_zero()) break;
  }
  return r;
}

GrassmannElement GrassmannElement::to_backend(Backend b) const {
  if (b == sig_.backend) return *this;
  AlgebraSignature sig = sig_;
  sig.backend = b;
  GrassmannElement r(sig);
  for (const auto& [mask, c] : terms_) r.set_term(mask, c.to_backend(b));
  return r;
}

double GrassmannElement::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [mask, c] : terms_) m = std::max(m, c.abs());
  return m;
}

std::string GrassmannElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [mask, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << "(" << c.to_string() << ")";
    for (int i = 0; i < 64; ++i)
      if (mask & (std::uint64_t(1) << i)) out << "*t" << (i + 1);
  }
  return out.str();
}

GrassmannElement gr_embed(const GrassmannElement& x, const AlgebraSignature& merged, int factor) {
  if (factor != 0 && factor != 1) fail(ErrorCode::input, "factor must be 0 or 1");
  GrassmannElement r(merged);
  int shift = factor == 0 ? 0 : merged.first_factor;
  for (const auto& [mask, c] : x.terms()) {
    GrassmannElement t = GrassmannElement::monomial(merged, mask << shift, c);
    r += t;
  }
  return r;
}

GrassmannElement gr_merge(const GrassmannElement& a, const GrassmannElement& b,
                          MergeConvention convention) {
  if (!a.signature().is_plain() || !b.signature().is_plain())
    fail(ErrorCode::signature_mismatch, "gr_merge expects plain (unmerged) operands");
  if (a.backend() != b.backend())
    fail(ErrorCode::backend_mismatch, "gr_merge operands use different backends");
  AlgebraSignature merged = AlgebraSignature::merged(
      a.signature().generators, b.signature().generators, convention, a.backend());
  return gr_embed(a, merged, 0) * gr_embed(b, merged, 1);
}

}  // namespace azu
