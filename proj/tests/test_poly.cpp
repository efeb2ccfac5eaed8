#include "doctest.h"

#include <random>

#include "azu/poly.hpp"

using namespace azu;

namespace {

Poly from_ints(std::initializer_list<long> coeffs) {
  std::vector<Coefficient> c;
  for (long v : coeffs) c.push_back(Coefficient::exact(v));
  return Poly(Backend::exact, std::move(c));
}

Poly random_poly(std::mt19937_64& rng, int max_deg) {
  std::uniform_int_distribution<int> coeff(-5, 5);
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::vector<Coefficient> c;
  int d = deg(rng);
  for (int i = 0; i < d; ++i) c.push_back(Coefficient::exact(coeff(rng)));
  c.push_back(Coefficient::exact(coeff(rng) * 2 + 1));  // nonzero lead
  return Poly(Backend::exact, std::move(c));
}

}  // namespace

TEST_SUITE_BEGIN("poly");

TEST_CASE("division invariant a = qb + r") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    Poly a = random_poly(rng, 6), b = random_poly(rng, 4);
    auto [q, r] = Poly::divmod(a, b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());
  }
}

TEST_CASE("bezout pair from the worked derivation") {
  // g1 = t, g2 = t-1: extended Euclid by hand gives 1*t + (-1)*(t-1) = 1
  Poly g1 = Poly::t(Backend::exact);
  Poly g2 = from_ints({-1, 1});
  std::vector<Poly> gs = {g1, g2};
  std::vector<Poly> hs = poly_bezout(gs);
  CHECK(hs[0] * g1 + hs[1] * g2 == Poly::one(Backend::exact));
  CHECK(hs[0] == Poly::one(Backend::exact));
  CHECK(hs[1] == from_ints({-1}));
}

TEST_CASE("bezout edge cases") {
  std::vector<Poly> single = {Poly::one(Backend::exact)};
  auto hs = poly_bezout(single);
  CHECK(hs[0] == Poly::one(Backend::exact));

  std::vector<Poly> repeated = {Poly::t(Backend::exact), Poly::t(Backend::exact)};
  CHECK_THROWS_AS(poly_bezout(repeated), Error);

  // only setwise coprimality is required: t and t share a root but t-1 rescues
  std::vector<Poly> setwise = {Poly::t(Backend::exact), Poly::t(Backend::exact),
                               from_ints({-1, 1})};
  auto hs3 = poly_bezout(setwise);
  Poly sum = Poly::zero(Backend::exact);
  for (size_t i = 0; i < setwise.size(); ++i) sum += hs3[i] * setwise[i];
  CHECK(sum == Poly::one(Backend::exact));
}

TEST_CASE("bezout handles the quotient system of three primary factors") {
  // g_i = chi/(t - l_i)^2 for chi = (t(t-1)(t+2))^2: pairwise entangled
  std::vector<Coefficient> roots = {Coefficient::exact(0), Coefficient::exact(1),
                                    Coefficient::exact(-2)};
  std::vector<Poly> gs;
  for (size_t i = 0; i < roots.size(); ++i) {
    Poly g = Poly::one(Backend::exact);
    for (size_t j = 0; j < roots.size(); ++j)
      if (j != i) g = g * Poly::linear_from_root(roots[j]).pow(2);
    gs.push_back(g);
  }
  auto hs = poly_bezout(gs);
  Poly sum = Poly::zero(Backend::exact);
  for (size_t i = 0; i < gs.size(); ++i) sum += hs[i] * gs[i];
  CHECK(sum == Poly::one(Backend::exact));
}

TEST_CASE("bezout identity on random coprime families") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> root(-4, 4);
  for (int trial = 0; trial < 25; ++trial) {
    // distinct roots guarantee pairwise coprime linear-power factors
    std::vector<int> roots;
    while (roots.size() < 3) {
      int x = root(rng);
      if (std::find(roots.begin(), roots.end(), x) == roots.end()) roots.push_back(x);
    }
    std::vector<Poly> gs;
    for (int x : roots)
      gs.push_back(
          Poly::linear_from_root(Coefficient::exact(x)).pow(1 + (rng() % 3)));
    auto hs = poly_bezout(gs);
    Poly sum = Poly::zero(Backend::exact);
    for (size_t i = 0; i < gs.size(); ++i) sum += hs[i] * gs[i];
    CHECK(sum == Poly::one(Backend::exact));
  }
}

TEST_CASE("square-free decomposition reassembles the polynomial") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Poly p = Poly::one(Backend::exact);
    for (int k = 0; k < 3; ++k)
      p = p * Poly::linear_from_root(Coefficient::exact(static_cast<long>(rng() % 5) - 2))
                  .pow(1 + (rng() % 2));
    Poly rebuilt = Poly::one(Backend::exact);
    for (const auto& [factor, mult] : squarefree_decomposition(p))
      rebuilt = rebuilt * factor.pow(static_cast<unsigned>(mult));
    CHECK(rebuilt == p.monic());
  }
}

TEST_CASE("sturm separates real from complex spectra") {
  CHECK(all_roots_real(from_ints({-2, 0, 1})));        // t^2 - 2 (irrational, real)
  CHECK_FALSE(all_roots_real(from_ints({1, 0, 1})));   // t^2 + 1
  CHECK(all_roots_real(from_ints({1, -2, 1})));        // (t-1)^2
  CHECK(sturm_distinct_real_roots(from_ints({0, -1, 0, 1})) == 3);  // t^3 - t
  CHECK(sturm_distinct_real_roots(from_ints({1, 0, 1})) == 0);
}

TEST_CASE("rational roots with multiplicities") {
  // (t-1)^2 (t+2) (2t-1)
  Poly p = Poly::linear_from_root(Coefficient::exact(1)).pow(2) *
           Poly::linear_from_root(Coefficient::exact(-2)) *
           Poly::linear_from_root(Coefficient::exact(Rational(1, 2)));
  RationalRoots roots = rational_roots(p);
  REQUIRE(roots.complete);
  REQUIRE(roots.roots.size() == 3);
  CHECK(roots.roots[0] == std::make_pair(Rational(-2), 1));
  CHECK(roots.roots[1] == std::make_pair(Rational(1, 2), 1));
  CHECK(roots.roots[2] == std::make_pair(Rational(1), 2));

  RationalRoots irr = rational_roots(from_ints({-2, 0, 1}));
  CHECK_FALSE(irr.complete);
}

TEST_CASE("numeric roots cover the spectrum") {
  Poly p = from_ints({-6, 11, -6, 1});  // (t-1)(t-2)(t-3)
  auto roots = numeric_roots(p);
  REQUIRE(roots.size() == 3);
  std::vector<double> re;
  for (auto z : roots) {
    CHECK(std::abs(z.imag()) < 1e-9);
    re.push_back(z.real());
  }
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(re[1] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(re[2] == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("snap to rational recovers small fractions") {
  CHECK(snap_to_rational(0.5) == Rational(1, 2));
  CHECK(snap_to_rational(-2.0 / 3.0) == Rational(-2, 3));
  CHECK(snap_to_rational(3.0) == Rational(3));
  CHECK(snap_to_rational(0.0) == Rational(0));
}

TEST_SUITE_END();
