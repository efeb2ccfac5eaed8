#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "azu/coefficient.hpp"
#include "azu/grassmann.hpp"

namespace azu {

/// Differentiation orders (d_1,...,d_k).
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<int> d);
  static MultiIndex zeros(int k) { return MultiIndex(std::vector<int>(k, 0)); }

  int arity() const { return static_cast<int>(d_.size()); }
  int total() const;
  int operator[](int i) const { return d_[i]; }
  const std::vector<int>& values() const { return d_; }
  MultiIndex bumped(int i) const;
  /// 1/(d_1! ... d_k!), exact.
  Rational inverse_factorial_weight() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> d_;
};

/// Walks all multi-indices of the given arity and total degree.
void for_each_multi_index(int arity, int total,
                          const std::function<void(const MultiIndex&)>& visit);

enum class FnKind { polynomial, elementary, oracle };

namespace detail {
struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;
struct DiffMemo;
}  // namespace detail

/// Exponent vector -> coefficient; the sparse multivariate polynomial store.
using PolyTerms = std::map<std::vector<int>, Coefficient>;

/// A jet oracle for an element of C^inf(R^n): any partial derivative at any
/// point. Polynomial instances answer exactly; elementary composites
/// differentiate an expression tree symbolically and evaluate in doubles;
/// external oracles are trusted callbacks.
class SmoothFunction {
 public:
  using JetOracle =
      std::function<Coefficient(const MultiIndex&, std::span<const Coefficient>)>;

  static SmoothFunction constant(int arity, Coefficient c);
  static SmoothFunction variable(int arity, int index, Backend b = Backend::exact);
  static SmoothFunction polynomial(int arity, PolyTerms terms, Backend b = Backend::exact);
  static SmoothFunction oracle(int arity, JetOracle fn, Backend b = Backend::numeric);
  static SmoothFunction compose(const SmoothFunction& outer,
                                std::vector<SmoothFunction> inner);
  /// Infix expression over y1..yn (x1..xn accepted as synonyms).
  static SmoothFunction parse(const std::string& text, int arity, Backend b);

  int arity() const { return arity_; }
  FnKind kind() const { return kind_; }
  Backend backend() const { return backend_; }
  bool is_polynomial() const { return kind_ == FnKind::polynomial; }
  /// Elementary and oracle functions evaluate over the reals only;
  /// polynomials accept Gaussian-rational arguments.
  bool real_domain() const { return kind_ != FnKind::polynomial; }
  const PolyTerms& poly_terms() const;
  bool is_zero_polynomial() const { return is_polynomial() && poly_terms().empty(); }

  Coefficient jet(const MultiIndex& idx, std::span<const Coefficient> point) const;
  Coefficient value(std::span<const Coefficient> point) const;
  SmoothFunction derivative(int var) const;
  /// Taylor polynomial at q of total degree <= N; exact for exact
  /// polynomials at rational points.
  SmoothFunction taylor_polynomial(std::span<const Coefficient> q, int degree) const;

  SmoothFunction operator-() const;
  friend SmoothFunction operator+(const SmoothFunction& a, const SmoothFunction& b);
  friend SmoothFunction operator-(const SmoothFunction& a, const SmoothFunction& b);
  friend SmoothFunction operator*(const SmoothFunction& a, const SmoothFunction& b);
  friend SmoothFunction operator*(const Coefficient& c, const SmoothFunction& f);

  friend SmoothFunction exp_of(const SmoothFunction& f);
  friend SmoothFunction sin_of(const SmoothFunction& f);
  friend SmoothFunction cos_of(const SmoothFunction& f);
  friend SmoothFunction log_of(const SmoothFunction& f);
  friend SmoothFunction pow_int(const SmoothFunction& f, long n);
  friend SmoothFunction pow_rat(const SmoothFunction& f, const Rational& c);

  /// Structural equality for polynomial kind only.
  bool poly_equal(const SmoothFunction& o) const;

  std::string to_string() const;

 private:
  SmoothFunction() = default;
  static SmoothFunction from_expr(int arity, detail::ExprPtr root);
  detail::ExprPtr as_expr() const;

  int arity_ = 0;
  FnKind kind_ = FnKind::polynomial;
  Backend backend_ = Backend::exact;
  PolyTerms terms_;                          // polynomial kind
  detail::ExprPtr root_;                     // elementary kind
  std::shared_ptr<detail::DiffMemo> memo_;   // elementary kind
  JetOracle oracle_;                         // oracle kind
};

SmoothFunction exp_of(const SmoothFunction& f);
SmoothFunction sin_of(const SmoothFunction& f);
SmoothFunction cos_of(const SmoothFunction& f);
SmoothFunction log_of(const SmoothFunction& f);
SmoothFunction pow_int(const SmoothFunction& f, long n);
SmoothFunction pow_rat(const SmoothFunction& f, const Rational& c);

/// f = sum_I f_I theta^I over C^inf(R^{n|s2}); components keyed by the
/// odd-monomial bitmask, absent components are zero.
class SuperFunction {
 public:
  SuperFunction(int n, int s2) : n_(n), s2_(s2) {}

  static SuperFunction even(SmoothFunction f, int s2);
  /// The coordinate function vartheta^l (1-based).
  static SuperFunction odd_generator(int n, int s2, int l, Backend b = Backend::exact);
  static SuperFunction coordinate(int n, int s2, int i, Backend b = Backend::exact);

  int base_arity() const { return n_; }
  int odd_count() const { return s2_; }
  const std::map<std::uint64_t, SmoothFunction>& components() const { return comps_; }
  void set_component(std::uint64_t mask, SmoothFunction f);
  std::optional<SmoothFunction> component(std::uint64_t mask) const;

  bool all_polynomial() const;
  bool any_numeric() const;

  SuperFunction even_part() const;
  SuperFunction odd_part() const;

  SuperFunction operator-() const;
  friend SuperFunction operator+(const SuperFunction& a, const SuperFunction& b);
  friend SuperFunction operator-(const SuperFunction& a, const SuperFunction& b);
  /// Component product with the anticommutation sign of the odd monomials.
  friend SuperFunction operator*(const SuperFunction& a, const SuperFunction& b);

 private:
  int n_, s2_;
  std::map<std::uint64_t, SmoothFunction> comps_;
};

}  // namespace azu
