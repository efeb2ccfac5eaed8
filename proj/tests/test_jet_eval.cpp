#include "doctest.h"

#include <bit>
#include <functional>
#include <random>

#include "azu/jet_eval.hpp"

using namespace azu;

namespace {

AlgebraSignature sig(int s) { return AlgebraSignature::plain(s, Backend::exact); }

Coefficient q(long num, long den = 1) { return Coefficient::exact(make_rational(num, den)); }

GrassmannElement mono(int s, std::uint64_t mask, long c) {
  return GrassmannElement::monomial(sig(s), mask, q(c));
}

// independent oracle: substitute Grassmann arguments into the polynomial
// directly, using only algebra arithmetic (no Taylor machinery)
GrassmannElement substitute_poly(const SmoothFunction& h,
                                 std::span<const GrassmannElement> args) {
  REQUIRE(h.is_polynomial());
  AlgebraSignature s = args[0].signature();
  GrassmannElement acc = GrassmannElement::zero(s);
  for (const auto& [e, c] : h.poly_terms()) {
    GrassmannElement term = GrassmannElement::scalar(s, c);
    for (size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) term = term * args[i];
    acc += term;
  }
  return acc;
}

GrassmannElement random_even(std::mt19937_64& rng, int s) {
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> den(1, 2);
  GrassmannElement x = GrassmannElement::zero(sig(s));
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << s); ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    if ((rng() & 1) == 0) continue;
    x += GrassmannElement::monomial(sig(s), mask,
                                    Coefficient::exact(make_rational(num(rng), den(rng))));
  }
  return x;
}

SmoothFunction random_poly(std::mt19937_64& rng, int k, int degree) {
  std::uniform_int_distribution<int> c(-3, 3);
  PolyTerms terms;
  std::function<void(std::vector<int>&, int, int)> rec = [&](std::vector<int>& e, int pos,
                                                             int remaining) {
    if (pos == k) {
      if ((rng() % 3) != 0) terms[e] = Coefficient::exact(c(rng));
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      e[static_cast<size_t>(pos)] = v;
      rec(e, pos + 1, remaining - v);
    }
  };
  std::vector<int> e(static_cast<size_t>(k), 0);
  rec(e, 0, degree);
  return SmoothFunction::polynomial(k, terms);
}

}  // namespace

TEST_SUITE_BEGIN("jet_eval");

TEST_CASE("square of 3 + t1t2") {
  SmoothFunction h = SmoothFunction::parse("y1^2", 1, Backend::exact);
  std::vector<GrassmannElement> args = {
      GrassmannElement::scalar(sig(2), q(3)) + mono(2, 0b11, 1)};
  GrassmannElement out = eval_even(h, args);
  GrassmannElement expected = GrassmannElement::scalar(sig(2), q(9)) + mono(2, 0b11, 6);
  CHECK(out == expected);
}

TEST_CASE("projection returns its argument exactly") {
  SmoothFunction pi2 = SmoothFunction::variable(2, 1);
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<GrassmannElement> args = {random_even(rng, 3), random_even(rng, 3)};
    CHECK(eval_even(pi2, args) == args[1]);
  }
}

TEST_CASE("exp of a pure soul with two 2-blades") {
  // exp(t1t2 + t3t4) = 1 + t1t2 + t3t4 + t1t2t3t4, by expanding the series:
  // soul^2 = 2*t1t2t3t4 and the 1/2! weight cancels the 2
  SmoothFunction h = exp_of(SmoothFunction::variable(1, 0));
  std::vector<GrassmannElement> args = {mono(4, 0b0011, 1) + mono(4, 0b1100, 1)};
  GrassmannElement out = eval_even(h, args);
  CHECK(out.backend() == Backend::numeric);
  auto coeff_at = [&](std::uint64_t mask) { return out.coefficient(mask).to_complex().real(); };
  CHECK(coeff_at(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coeff_at(0b0011) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coeff_at(0b1100) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coeff_at(0b1111) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.terms().size() == 4);
}

TEST_CASE("parity and domain preconditions") {
  SmoothFunction h = SmoothFunction::parse("y1^2", 1, Backend::exact);
  std::vector<GrassmannElement> odd = {GrassmannElement::generator(sig(2), 1)};
  CHECK_THROWS_AS(eval_even(h, odd), Error);
  std::vector<GrassmannElement> mixed = {GrassmannElement::one(sig(2)) +
                                         GrassmannElement::generator(sig(2), 1)};
  CHECK_THROWS_AS(eval_even(h, mixed), Error);

  // Gaussian body is fine for polynomials, rejected for elementary kind
  std::vector<GrassmannElement> gauss = {
      GrassmannElement::scalar(sig(2), Coefficient::exact(Rational(0), Rational(1)))};
  CHECK(eval_even(h, gauss) == GrassmannElement::scalar(sig(2), q(-1)));
  SmoothFunction e = exp_of(SmoothFunction::variable(1, 0));
  CHECK_THROWS_AS(eval_even(e, gauss), Error);
}

TEST_CASE("polynomial consistency against direct substitution") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 60; ++trial) {
    int k = 1 + static_cast<int>(rng() % 3);
    int s = 1 + static_cast<int>(rng() % 4);
    SmoothFunction h = random_poly(rng, k, 3);
    std::vector<GrassmannElement> args;
    for (int i = 0; i < k; ++i) args.push_back(random_even(rng, s));
    CHECK(eval_even(h, args) == substitute_poly(h, args));
  }
}

TEST_CASE("zero souls reduce to plain evaluation") {
  SmoothFunction h = SmoothFunction::parse("y1^3 - 2*y1*y2", 2, Backend::exact);
  std::vector<GrassmannElement> args = {GrassmannElement::scalar(sig(3), q(2)),
                                        GrassmannElement::scalar(sig(3), q(5, 2))};
  std::vector<Coefficient> bodies = {q(2), q(5, 2)};
  CHECK(eval_even(h, args) ==
        GrassmannElement::scalar(sig(3), h.value(bodies)));
}

TEST_CASE("evaluation is a ring homomorphism on polynomials") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 25; ++trial) {
    int k = 1 + static_cast<int>(rng() % 2);
    SmoothFunction h1 = random_poly(rng, k, 3);
    SmoothFunction h2 = random_poly(rng, k, 3);
    std::vector<GrassmannElement> args;
    for (int i = 0; i < k; ++i) args.push_back(random_even(rng, 4));
    CHECK(eval_even(h1 * h2, args) == eval_even(h1, args) * eval_even(h2, args));
    CHECK(eval_even(h1 + h2, args) == eval_even(h1, args) + eval_even(h2, args));
  }
}

TEST_CASE("no term has soul degree beyond k*s") {
  std::mt19937_64 rng(61);
  SmoothFunction h = random_poly(rng, 2, 5);
  std::vector<GrassmannElement> args = {random_even(rng, 3), random_even(rng, 3)};
  GrassmannElement out = eval_even(h, args);
  // trivially bounded by the algebra dimension; the sharper check is that
  // evaluation with souls removed matches degree-0 content
  CHECK(out.degree() <= 2 * 3);
}

TEST_CASE("composition residual is exactly zero on polynomials") {
  SmoothFunction g = SmoothFunction::parse("y1^2", 1, Backend::exact);
  std::vector<SmoothFunction> inner = {SmoothFunction::parse("y1 + 1", 1, Backend::exact)};
  std::vector<GrassmannElement> args = {mono(2, 0b11, 1)};
  CHECK(eval_even_composition_check(g, inner, args).is_zero());

  std::vector<SmoothFunction> id = {SmoothFunction::variable(1, 0)};
  SmoothFunction gid = SmoothFunction::variable(1, 0);
  CHECK(eval_even_composition_check(gid, id, args).is_zero());
}

TEST_CASE("composition residual is tiny for elementary functions") {
  SmoothFunction g = exp_of(SmoothFunction::variable(1, 0));
  std::vector<SmoothFunction> inner = {
      Coefficient::exact(2) * SmoothFunction::variable(1, 0)};
  std::vector<GrassmannElement> args = {GrassmannElement::scalar(sig(2), q(1)) +
                                        mono(2, 0b11, 1)};
  GrassmannElement residual = eval_even_composition_check(g, inner, args);
  CHECK(residual.max_abs_coefficient() <= 1e-10);
}

TEST_SUITE_END();
