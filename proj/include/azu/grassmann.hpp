#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "azu/coefficient.hpp"

namespace azu {

enum class Parity { even, odd, mixed };
enum class MergeConvention { anticommute, commute };

const char* parity_name(Parity p);
const char* merge_convention_name(MergeConvention c);
MergeConvention merge_convention_from_name(const std::string& name);

/// Identity of a Grassmann algebra instance. Values from different
/// signatures never mix. A merged (product) algebra remembers where the
/// first factor ends and which cross-factor commutation rule is in force;
/// for a plain algebra first_factor == generators and the convention is
/// irrelevant.
struct AlgebraSignature {
  int generators = 0;
  int first_factor = 0;
  MergeConvention convention = MergeConvention::anticommute;
  Backend backend = Backend::exact;

  static AlgebraSignature plain(int s, Backend b);
  static AlgebraSignature merged(int s1, int s2, MergeConvention c, Backend b);

  bool is_plain() const { return first_factor == generators; }
  friend bool operator==(const AlgebraSignature&, const AlgebraSignature&) = default;
};

/// Element of the Grassmann algebra with `s` anticommuting generators,
/// stored as bitmask-indexed monomials in canonical form (no zero terms,
/// generator indices ascending within each monomial).
class GrassmannElement {
 public:
  using TermMap = std::map<std::uint64_t, Coefficient>;

  explicit GrassmannElement(AlgebraSignature sig) : sig_(sig) {}

  static GrassmannElement zero(AlgebraSignature sig) { return GrassmannElement(sig); }
  static GrassmannElement scalar(AlgebraSignature sig, Coefficient c);
  static GrassmannElement one(AlgebraSignature sig) {
    return scalar(sig, Coefficient::one(sig.backend));
  }
  /// θ^index, 1-based.
  static GrassmannElement generator(AlgebraSignature sig, int index);
  static GrassmannElement monomial(AlgebraSignature sig, std::uint64_t mask, Coefficient c);

  const AlgebraSignature& signature() const { return sig_; }
  Backend backend() const { return sig_.backend; }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_scalar() const;
  Coefficient coefficient(std::uint64_t mask) const;

  Coefficient body() const;
  GrassmannElement soul() const;
  std::pair<Coefficient, GrassmannElement> body_soul() const;
  Parity parity() const;
  /// Largest monomial cardinality present (0 for zero).
  int degree() const;

  GrassmannElement operator-() const;
  GrassmannElement& operator+=(const GrassmannElement& o);
  GrassmannElement& operator-=(const GrassmannElement& o);
  GrassmannElement& operator*=(const GrassmannElement& o) { return *this = *this * o; }
  GrassmannElement& operator*=(const Coefficient& c);

  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
  friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b);
  friend GrassmannElement operator*(GrassmannElement a, const Coefficient& c) { return a *= c; }
  friend GrassmannElement operator*(const Coefficient& c, GrassmannElement a) { return a *= c; }
  friend bool operator==(const GrassmannElement& a, const GrassmannElement& b);
  friend bool operator!=(const GrassmannElement& a, const GrassmannElement& b) { return !(a == b); }

  GrassmannElement pow(unsigned n) const;
  GrassmannElement to_backend(Backend b) const;
  double max_abs_coefficient() const;
  std::string to_string() const;

 private:
  void set_term(std::uint64_t mask, Coefficient c);

  AlgebraSignature sig_;
  TermMap terms_;
};

/// Embeds `a` and `b` into the product algebra on s1+s2 generators (the
/// second factor's generators are shifted past the first) and multiplies
/// there under the requested cross-factor convention.
GrassmannElement gr_merge(const GrassmannElement& a, const GrassmannElement& b,
                          MergeConvention convention);

/// Embedding into the merged algebra without multiplying: factor 0 keeps
/// generator indices, factor 1 shifts them by s1.
GrassmannElement gr_embed(const GrassmannElement& x, const AlgebraSignature& merged, int factor);

/// Sign incurred by sorting the concatenation of two disjoint monomials,
/// as a parity bit (0 = +1, 1 = -1).
int monomial_sort_parity(std::uint64_t left, std::uint64_t right, const AlgebraSignature& sig);

}  // namespace azu
