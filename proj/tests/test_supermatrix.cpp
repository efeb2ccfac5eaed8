#include "doctest.h"

#include <random>

#include "azu/supermatrix.hpp"

using namespace azu;

namespace {

AlgebraSignature sig(int s) { return AlgebraSignature::plain(s, Backend::exact); }

Coefficient q(long num, long den = 1) { return Coefficient::exact(make_rational(num, den)); }

SuperMatrix diag(AlgebraSignature s, std::initializer_list<long> values) {
  SuperMatrix m(static_cast<int>(values.size()), s);
  int i = 0;
  for (long v : values) {
    m.at(i, i) = GrassmannElement::scalar(s, q(v));
    ++i;
  }
  return m;
}

SuperMatrix random_invertible(std::mt19937_64& rng, int r, int s) {
  // triangular body with odd (hence nonzero) diagonal, plus random souls
  std::uniform_int_distribution<int> v(-3, 3);
  SuperMatrix m(r, sig(s));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      GrassmannElement x = GrassmannElement::zero(sig(s));
      if (i == j)
        x += GrassmannElement::scalar(sig(s), q(v(rng) * 2 + 1));
      else if (j > i)
        x += GrassmannElement::scalar(sig(s), q(v(rng)));
      for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << s); ++mask)
        if ((rng() & 3) == 0)
          x += GrassmannElement::monomial(sig(s), mask, q(v(rng)));
      m.at(i, j) = x;
    }
  return m;
}

SuperMatrix random_matrix(std::mt19937_64& rng, int r, int s) {
  std::uniform_int_distribution<int> v(-2, 2);
  SuperMatrix m(r, sig(s));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      GrassmannElement x = GrassmannElement::scalar(sig(s), q(v(rng)));
      for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << s); ++mask)
        if ((rng() & 3) == 0)
          x += GrassmannElement::monomial(sig(s), mask, q(v(rng)));
      m.at(i, j) = x;
    }
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("supermatrix");

TEST_CASE("ring basics") {
  std::mt19937_64 rng(3);
  auto s2 = sig(2);
  SuperMatrix a = random_matrix(rng, 3, 2);
  CHECK(SuperMatrix::identity(3, s2) * a == a);
  CHECK(a * SuperMatrix::identity(3, s2) == a);

  SuperMatrix t1 = SuperMatrix::scalar(2, s2, GrassmannElement::generator(s2, 1));
  CHECK((t1 * t1).is_zero());

  SuperMatrix u(2, s2), v(2, s2);
  u.at(0, 1) = GrassmannElement::generator(s2, 1);
  v.at(0, 1) = GrassmannElement::generator(s2, 2);
  CHECK((u * v).is_zero());
}

TEST_CASE("inverse of the upper unitriangular example") {
  auto s1 = sig(1);
  SuperMatrix m(2, s1);
  m.at(0, 0) = GrassmannElement::one(s1);
  m.at(0, 1) = GrassmannElement::generator(s1, 1);
  m.at(1, 1) = GrassmannElement::one(s1);
  SuperMatrix inv = m.inverse();
  SuperMatrix expected(2, s1);
  expected.at(0, 0) = GrassmannElement::one(s1);
  expected.at(0, 1) = -GrassmannElement::generator(s1, 1);
  expected.at(1, 1) = GrassmannElement::one(s1);
  CHECK(inv == expected);
  CHECK(m * inv == SuperMatrix::identity(2, s1));
  CHECK(inv * m == SuperMatrix::identity(2, s1));
  CHECK(SuperMatrix::identity(2, s1).inverse() == SuperMatrix::identity(2, s1));
}

TEST_CASE("singular body reports the determinant") {
  auto s1 = sig(1);
  SuperMatrix m(2, s1);
  m.at(0, 0) = GrassmannElement::generator(s1, 1);  // body zero
  m.at(1, 1) = GrassmannElement::one(s1);
  try {
    m.inverse();
    FAIL("expected not-invertible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_invertible);
    CHECK(std::string(e.what()).find("determinant") != std::string::npos);
  }
}

TEST_CASE("inverse identity on random invertible matrices") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    int r = 1 + static_cast<int>(rng() % 4);
    int s = static_cast<int>(rng() % 4);
    SuperMatrix m = random_invertible(rng, r, s);
    SuperMatrix inv = m.inverse();
    CHECK(m * inv == SuperMatrix::identity(r, sig(s)));
    CHECK(inv * m == SuperMatrix::identity(r, sig(s)));
  }
}

TEST_CASE("invertibility tracks the body determinant") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    int r = 1 + static_cast<int>(rng() % 3);
    int s = static_cast<int>(rng() % 3);
    SuperMatrix m = random_matrix(rng, r, s);
    bool body_invertible = !m.body().determinant().is_zero();
    bool inverted = true;
    try {
      SuperMatrix inv = m.inverse();
      CHECK(m * inv == SuperMatrix::identity(r, sig(s)));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::not_invertible);
      inverted = false;
    }
    CHECK(inverted == body_invertible);
  }
}

TEST_CASE("charpoly of diag(1,2) with one generator") {
  SuperMatrix m = diag(sig(1), {1, 2});
  CharPoly cp = sm_charpoly(m);
  Poly expected = Poly::linear_from_root(q(1)) * Poly::linear_from_root(q(2));
  expected = expected * expected;  // ((t-1)(t-2))^2
  CHECK(cp.full == expected);
  CHECK(cp.full.degree() == 2 * (1 + 1));
  CHECK(poly_at_matrix(cp.full, m).is_zero());
}

TEST_CASE("charpoly factored form from known eigenvalues") {
  SuperMatrix m = diag(sig(1), {1, 2});
  std::vector<Coefficient> values = {q(1), q(2)};
  std::vector<int> mults = {1, 1};
  CharPoly cp = sm_charpoly(m, values, mults);
  REQUIRE(cp.factored);
  CHECK(cp.factored->size() == 2);
  CHECK((*cp.factored)[0] == std::make_pair(q(1), 2));  // (s+1)*d = 2
  CHECK((*cp.factored)[1] == std::make_pair(q(2), 2));
  std::vector<Coefficient> wrong = {q(1), q(3)};
  CHECK_THROWS_AS(static_cast<void>(sm_charpoly(m, wrong, mults)), Error);
}

TEST_CASE("charpoly of a scalar soul") {
  auto s2 = sig(2);
  SuperMatrix m(1, s2);
  m.at(0, 0) = GrassmannElement::generator(s2, 1) * GrassmannElement::generator(s2, 2);
  CharPoly cp = sm_charpoly(m);
  CHECK(cp.full == Poly::t(Backend::exact).pow(3));  // t^(s+1)
  CHECK(m.pow(3).is_zero());
  CHECK((m * m).is_zero());  // a 2-blade squares to zero already
}

TEST_CASE("charpoly of a nilpotent body at s=0") {
  auto s0 = sig(0);
  SuperMatrix m(2, s0);
  m.at(0, 1) = GrassmannElement::one(s0);
  CharPoly cp = sm_charpoly(m);
  CHECK(cp.full == Poly::t(Backend::exact).pow(2));
  CHECK((m * m).is_zero());
}

TEST_CASE("charpoly annihilation and body homomorphism on random matrices") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 30; ++trial) {
    int r = 1 + static_cast<int>(rng() % 3);
    int s = static_cast<int>(rng() % 3);
    SuperMatrix m = random_matrix(rng, r, s);
    CHECK(poly_at_matrix(sm_charpoly(m).full, m).is_zero());
    SuperMatrix n = random_matrix(rng, r, s);
    CHECK((m * n).body() == m.body() * n.body());
  }
}

TEST_CASE("commutator classification") {
  auto s2 = sig(2);
  CHECK(commutator_class(diag(s2, {1, 2}), diag(s2, {3, 4})) == CommutatorClass::commute);

  SuperMatrix t1 = SuperMatrix::scalar(2, s2, GrassmannElement::generator(s2, 1));
  SuperMatrix t2 = SuperMatrix::scalar(2, s2, GrassmannElement::generator(s2, 2));
  CHECK(commutator_class(t1, t2) == CommutatorClass::anticommute);

  SuperMatrix u(2, s2), v(2, s2);
  u.at(0, 1) = GrassmannElement::one(s2);
  v.at(1, 0) = GrassmannElement::one(s2);
  CHECK(commutator_class(u, v) == CommutatorClass::neither);
}

TEST_SUITE_END();
