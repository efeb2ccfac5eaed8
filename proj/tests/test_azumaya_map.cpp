#include "doctest.h"

#include <bit>
#include <random>

#include "azu/azumaya_map.hpp"
#include "azu/jet_eval.hpp"

using namespace azu;

namespace {

AlgebraSignature sig(int s) { return AlgebraSignature::plain(s, Backend::exact); }

Coefficient q(long num, long den = 1) { return Coefficient::exact(make_rational(num, den)); }

SuperMatrix diag(AlgebraSignature s, std::initializer_list<long> values) {
  SuperMatrix m(static_cast<int>(values.size()), s);
  int i = 0;
  for (long v : values) m.at(i, i) = GrassmannElement::scalar(s, q(v)), ++i;
  return m;
}

AssignmentEta scalar_eta(const GrassmannElement& x) {
  AssignmentEta eta;
  eta.n = 1;
  eta.s1 = x.signature().generators;
  eta.s2 = 0;
  eta.r = 1;
  eta.backend = x.backend();
  SuperMatrix m(1, x.signature());
  m.at(0, 0) = x;
  eta.even = {m};
  return eta;
}

}  // namespace

TEST_SUITE_BEGIN("azumaya_map");

TEST_CASE("validate: diagonal assignment passes") {
  AssignmentEta eta;
  eta.n = 1, eta.s1 = 0, eta.s2 = 0, eta.r = 2;
  eta.even = {diag(sig(0), {1, 2})};
  ValidationReport report = validate(eta);
  CHECK(report.passed);
  CHECK(report.issues.empty());
}

TEST_CASE("validate: even Theta fails anticommutation") {
  AssignmentEta eta;
  eta.n = 1, eta.s1 = 0, eta.s2 = 1, eta.r = 2;
  eta.even = {diag(sig(0), {1, 2})};
  eta.odd = {SuperMatrix::identity(2, sig(0))};
  ValidationReport report = validate(eta);
  CHECK_FALSE(report.passed);
  REQUIRE(report.issues.size() == 1);
  CHECK(report.issues[0].relation.find("Theta1*Theta1") != std::string::npos);
}

TEST_CASE("validate: rotation body fails condition (2)") {
  AssignmentEta eta;
  eta.n = 1, eta.s1 = 0, eta.s2 = 0, eta.r = 2;
  SuperMatrix rot(2, sig(0));
  rot.at(0, 1) = GrassmannElement::one(sig(0));
  rot.at(1, 0) = -GrassmannElement::one(sig(0));
  eta.even = {rot};
  ValidationReport report = validate(eta);
  CHECK_FALSE(report.passed);
  REQUIRE(report.issues.size() == 1);
  CHECK(report.issues[0].relation.find("spectrum") != std::string::npos);
}

TEST_CASE("validate: non-commuting even images are flagged with the pair") {
  AssignmentEta eta;
  eta.n = 2, eta.s1 = 0, eta.s2 = 0, eta.r = 2;
  SuperMatrix u(2, sig(0)), v(2, sig(0));
  u.at(0, 1) = GrassmannElement::one(sig(0));
  v.at(1, 0) = GrassmannElement::one(sig(0));
  eta.even = {u, v};
  ValidationReport report = validate(eta);
  CHECK_FALSE(report.passed);
  bool found = false;
  for (const auto& issue : report.issues)
    if (issue.relation.find("m1*m2") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("build: diagonal assignment yields one block per distinct tuple") {
  AssignmentEta eta;
  eta.n = 2, eta.s1 = 0, eta.s2 = 0, eta.r = 3;
  eta.even = {diag(sig(0), {1, 1, 2}), diag(sig(0), {3, 4, 4})};
  MapHandle handle = MapHandle::build(eta);
  CHECK(handle.system().entries.size() == 3);
}

TEST_CASE("build: scalar assignment has a single block at the body") {
  auto x = GrassmannElement::scalar(sig(2), q(3)) +
           GrassmannElement::generator(sig(2), 1) * GrassmannElement::generator(sig(2), 2);
  MapHandle handle = MapHandle::build(scalar_eta(x));
  SpectralLocusReport locus = handle.spectral_locus();
  REQUIRE(locus.blocks.size() == 1);
  CHECK(locus.blocks[0].point[0] == q(3));
  CHECK(locus.blocks[0].rank == 1);
  CHECK(locus.blocks[0].nilpotency == std::vector<int>{2});
}

TEST_CASE("build: nilpotent 2x2 body gives one fat point") {
  AssignmentEta eta;
  eta.n = 1, eta.s1 = 0, eta.s2 = 0, eta.r = 2;
  SuperMatrix m(2, sig(0));
  m.at(0, 1) = GrassmannElement::one(sig(0));
  eta.even = {m};
  MapHandle handle = MapHandle::build(eta);
  SpectralLocusReport locus = handle.spectral_locus();
  REQUIRE(locus.blocks.size() == 1);
  CHECK(locus.blocks[0].point[0] == q(0));
  CHECK(locus.blocks[0].rank == 2);
  CHECK(locus.blocks[0].nilpotency == std::vector<int>{2});
  CHECK(locus.total_rank == 2);
  // nu = 2 exceeds (r-1)(s1+1) = 1; the report records the observation
  CHECK(locus.figure_bound == 1);
  CHECK_FALSE(locus.figure_bound_holds);
  CHECK(locus.charpoly_bound == 2);
}

TEST_CASE("build rejects invalid assignments with the issue list") {
  AssignmentEta eta;
  eta.n = 1, eta.s1 = 0, eta.s2 = 1, eta.r = 2;
  eta.even = {diag(sig(0), {1, 2})};
  eta.odd = {SuperMatrix::identity(2, sig(0))};
  CHECK_THROWS_WITH_AS(static_cast<void>(MapHandle::build(eta)),
                       doctest::Contains("Theta1"), Error);
}

TEST_CASE("apply: generator fidelity") {
  AssignmentEta eta;
  eta.n = 2, eta.s1 = 1, eta.s2 = 2, eta.r = 2;
  SuperMatrix m2 = diag(sig(1), {3, 3});
  m2.at(0, 1) = GrassmannElement::generator(sig(1), 1) * q(2);
  SuperMatrix t1(2, sig(1)), t2(2, sig(1));
  t1.at(0, 1) = GrassmannElement::generator(sig(1), 1);
  t2.at(0, 1) = q(2) * GrassmannElement::generator(sig(1), 1);
  t2.at(0, 0) = GrassmannElement::generator(sig(1), 1);
  t2.at(1, 1) = GrassmannElement::generator(sig(1), 1);
  eta.even = {SuperMatrix::identity(2, sig(1)), m2};
  eta.odd = {t1, t2};
  REQUIRE(validate(eta).passed);
  MapHandle handle = MapHandle::build(eta);
  CHECK(handle.apply(SuperFunction::coordinate(2, 2, 1)) == eta.even[0]);
  CHECK(handle.apply(SuperFunction::coordinate(2, 2, 2)) == eta.even[1]);
  CHECK(handle.apply(SuperFunction::odd_generator(2, 2, 1)) == eta.odd[0]);
  CHECK(handle.apply(SuperFunction::odd_generator(2, 2, 2)) == eta.odd[1]);
}

TEST_CASE("apply: scalar square with soul matches the hand expansion") {
  auto x = GrassmannElement::scalar(sig(2), q(3)) +
           GrassmannElement::generator(sig(2), 1) * GrassmannElement::generator(sig(2), 2);
  MapHandle handle = MapHandle::build(scalar_eta(x));
  SuperFunction f =
      SuperFunction::even(SmoothFunction::parse("y1^2", 1, Backend::exact), 0);
  SuperMatrix image = handle.apply(f);
  GrassmannElement expected =
      GrassmannElement::scalar(sig(2), q(9)) +
      q(6) * (GrassmannElement::generator(sig(2), 1) * GrassmannElement::generator(sig(2), 2));
  CHECK(image.at(0, 0) == expected);
}

TEST_CASE("apply: exp of the nilpotent 2x2 is I + m") {
  AssignmentEta eta;
  eta.n = 1, eta.s1 = 0, eta.s2 = 0, eta.r = 2;
  SuperMatrix m(2, sig(0));
  m.at(0, 1) = GrassmannElement::one(sig(0));
  eta.even = {m};
  MapHandle handle = MapHandle::build(eta);
  SuperFunction f = SuperFunction::even(exp_of(SmoothFunction::variable(1, 0)), 0);
  SuperMatrix image = handle.apply(f);
  CHECK(image.backend() == Backend::numeric);
  CHECK(image.at(0, 0).body().to_complex().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(image.at(0, 1).body().to_complex().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(image.at(1, 0).body().to_complex().real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(image.at(1, 1).body().to_complex().real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("apply agrees with eval_even on the scalar path") {
  std::mt19937_64 rng(97);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int trial = 0; trial < 25; ++trial) {
    int s = 2 + static_cast<int>(rng() % 2) * 2;  // 2 or 4
    GrassmannElement x = GrassmannElement::scalar(sig(s), q(c(rng)));
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << s); ++mask)
      if (std::popcount(mask) % 2 == 0 && (rng() & 1))
        x += GrassmannElement::monomial(sig(s), mask, q(c(rng)));
    PolyTerms terms;
    for (int e = 0; e <= 4; ++e) terms[{e}] = q(c(rng));
    SmoothFunction f = SmoothFunction::polynomial(1, terms);

    MapHandle handle = MapHandle::build(scalar_eta(x));
    SuperMatrix image = handle.apply(SuperFunction::even(f, 0));
    std::vector<GrassmannElement> args = {x};
    CHECK(image.at(0, 0) == eval_even(f, args));
  }
}

TEST_CASE("apply agrees with eval_even on elementary scalar inputs") {
  auto x = GrassmannElement::scalar(sig(2), q(1, 2)) +
           GrassmannElement::monomial(sig(2), 0b11, q(1));
  MapHandle handle = MapHandle::build(scalar_eta(x));
  for (const SmoothFunction& f :
       {exp_of(SmoothFunction::variable(1, 0)), sin_of(SmoothFunction::variable(1, 0))}) {
    SuperMatrix image = handle.apply(SuperFunction::even(f, 0));
    std::vector<GrassmannElement> args = {x};
    GrassmannElement direct = eval_even(f, args);
    CHECK((image.at(0, 0) - direct).max_abs_coefficient() <= 1e-10);
  }
}

// independent oracle for polynomial super functions: substitute the matrices
// into each component and multiply by the ordered Theta monomial
static SuperMatrix substitute_assignment(const SuperFunction& f, const AssignmentEta& eta) {
  AlgebraSignature sg = eta.signature();
  SuperMatrix acc = SuperMatrix::zero(eta.r, sg);
  for (const auto& [mask, component] : f.components()) {
    SuperMatrix value = SuperMatrix::zero(eta.r, sg);
    for (const auto& [e, c] : component.poly_terms()) {
      SuperMatrix term = c * SuperMatrix::identity(eta.r, sg);
      for (size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) term = term * eta.even[i];
      value += term;
    }
    for (int l = 0; l < eta.s2; ++l)
      if (mask & (std::uint64_t(1) << l)) value = value * eta.odd[static_cast<size_t>(l)];
    acc += value;
  }
  return acc;
}

TEST_CASE("apply equals direct substitution on polynomial super functions") {
  std::mt19937_64 rng(113);
  std::uniform_int_distribution<int> c(-2, 2);
  AssignmentEta eta;
  eta.n = 1, eta.s1 = 2, eta.s2 = 2, eta.r = 2;
  SuperMatrix m = diag(sig(2), {1, 2});
  m.at(0, 1) = GrassmannElement::monomial(sig(2), 0b11, q(1));
  SuperMatrix t1(2, sig(2)), t2(2, sig(2));
  t1.at(0, 0) = GrassmannElement::generator(sig(2), 1);
  t1.at(1, 1) = GrassmannElement::generator(sig(2), 1);
  t2.at(0, 0) = GrassmannElement::generator(sig(2), 2);
  t2.at(1, 1) = q(3) * GrassmannElement::generator(sig(2), 2);
  eta.even = {m};
  eta.odd = {t1, t2};
  REQUIRE(validate(eta).passed);
  MapHandle handle = MapHandle::build(eta);
  for (int trial = 0; trial < 20; ++trial) {
    SuperFunction f(1, 2);
    for (std::uint64_t mask = 0; mask < 4; ++mask) {
      PolyTerms terms;
      for (int e = 0; e <= 3; ++e) terms[{e}] = q(c(rng));
      f.set_component(mask, SmoothFunction::polynomial(1, terms));
    }
    CHECK(handle.apply(f) == substitute_assignment(f, eta));
  }
}

TEST_CASE("verify_homomorphism: polynomial samples are exactly multiplicative") {
  AssignmentEta eta;
  eta.n = 1, eta.s1 = 1, eta.s2 = 2, eta.r = 2;
  SuperMatrix m = diag(sig(1), {1, 2});
  SuperMatrix t1(2, sig(1)), t2(2, sig(1));
  t1.at(0, 0) = GrassmannElement::generator(sig(1), 1);
  t1.at(1, 1) = GrassmannElement::generator(sig(1), 1);
  t2.at(0, 0) = q(2) * GrassmannElement::generator(sig(1), 1);
  t2.at(1, 1) = q(-1) * GrassmannElement::generator(sig(1), 1);
  eta.even = {m};
  eta.odd = {t1, t2};
  REQUIRE(validate(eta).passed);
  MapHandle handle = MapHandle::build(eta);

  SuperFunction y = SuperFunction::coordinate(1, 2, 1);
  std::vector<std::pair<SuperFunction, SuperFunction>> samples = {
      {y, y},
      {y * y + SuperFunction::odd_generator(1, 2, 1), y},
      {SuperFunction::odd_generator(1, 2, 1), SuperFunction::odd_generator(1, 2, 2)},
  };
  HomomorphismReport report = handle.verify_homomorphism(samples);
  CHECK(report.all_exact_zero);
  CHECK(report.max_mult_residual == 0.0);

  // anticommutation transported: phi(th1 th2) = Theta1 Theta2 = -phi(th2 th1)
  SuperFunction t12 =
      SuperFunction::odd_generator(1, 2, 1) * SuperFunction::odd_generator(1, 2, 2);
  SuperFunction t21 =
      SuperFunction::odd_generator(1, 2, 2) * SuperFunction::odd_generator(1, 2, 1);
  CHECK(handle.apply(t12) == eta.odd[0] * eta.odd[1]);
  CHECK(handle.apply(t12) == -handle.apply(t21));
}

TEST_CASE("verify_homomorphism: elementary pair within tolerance") {
  AssignmentEta eta;
  eta.n = 1, eta.s1 = 0, eta.s2 = 0, eta.r = 2;
  SuperMatrix m = diag(sig(0), {1, 1});
  m.at(0, 1) = GrassmannElement::one(sig(0));
  eta.even = {m};
  MapHandle handle = MapHandle::build(eta);
  SmoothFunction x = SmoothFunction::variable(1, 0);
  SuperFunction f = SuperFunction::even(exp_of(x), 0);
  SuperFunction g = SuperFunction::even(exp_of(-x), 0);
  std::vector<std::pair<SuperFunction, SuperFunction>> samples = {{f, g}};
  HomomorphismReport report = handle.verify_homomorphism(samples);
  CHECK(report.max_mult_residual <= 1e-9);
  CHECK(report.max_add_residual <= 1e-9);
  // f*g = 1 analytically, so phi(f)phi(g) is close to the identity
  SuperMatrix prod = handle.apply(f) * handle.apply(g);
  SuperMatrix residual = prod - SuperMatrix::identity(2, prod.signature());
  CHECK(residual.max_abs_coefficient() <= 1e-9);
}

TEST_CASE("spectral locus report for diag(1,2)") {
  AssignmentEta eta;
  eta.n = 1, eta.s1 = 1, eta.s2 = 0, eta.r = 2;
  eta.even = {diag(sig(1), {1, 2})};
  MapHandle handle = MapHandle::build(eta);
  SpectralLocusReport locus = handle.spectral_locus();
  REQUIRE(locus.blocks.size() == 2);
  CHECK(locus.blocks[0].point[0] == q(1));
  CHECK(locus.blocks[0].rank == 1);
  CHECK(locus.blocks[0].nilpotency == std::vector<int>{1});
  CHECK(locus.blocks[1].point[0] == q(2));
  CHECK(locus.blocks[1].rank == 1);
  CHECK(locus.blocks[1].nilpotency == std::vector<int>{1});
  CHECK(locus.total_rank == 2);
}

TEST_CASE("block locality: images commute with the block idempotents") {
  AssignmentEta eta;
  eta.n = 1, eta.s1 = 1, eta.s2 = 0, eta.r = 3;
  SuperMatrix m = diag(sig(1), {1, 1, 2});
  m.at(0, 1) = GrassmannElement::generator(sig(1), 1);
  eta.even = {m};
  MapHandle handle = MapHandle::build(eta);
  SuperFunction f =
      SuperFunction::even(SmoothFunction::parse("y1^3 - 2*y1", 1, Backend::exact), 0);
  SuperMatrix image = handle.apply(f);
  for (const auto& entry : handle.system().entries)
    CHECK(image * entry.idempotent == entry.idempotent * image);
}

TEST_CASE("hull: projections, constants, composition") {
  std::vector<SuperMatrix> lambda = {diag(sig(1), {1, 2}), diag(sig(1), {3, 3})};
  // projection normalization
  CHECK(cinfty_hull_eval(lambda, SmoothFunction::variable(2, 0)) == lambda[0]);
  CHECK(cinfty_hull_eval(lambda, SmoothFunction::variable(2, 1)) == lambda[1]);
  // constants
  CHECK(cinfty_hull_eval(lambda, SmoothFunction::constant(2, q(7))) ==
        q(7) * SuperMatrix::identity(2, sig(1)));
  // nested composition vs direct evaluation, exact on polynomials
  SmoothFunction f1 = SmoothFunction::parse("y1 + y2", 2, Backend::exact);
  SmoothFunction f2 = SmoothFunction::parse("y1*y2", 2, Backend::exact);
  SmoothFunction g = SmoothFunction::parse("y1^2 - y2", 2, Backend::exact);
  SmoothFunction h = SmoothFunction::compose(g, {f1, f2});
  SuperMatrix direct = cinfty_hull_eval(lambda, h);
  std::vector<SuperMatrix> mid = {cinfty_hull_eval(lambda, f1),
                                  cinfty_hull_eval(lambda, f2)};
  SuperMatrix nested = cinfty_hull_eval(mid, g);
  CHECK(direct == nested);
  // results commute with the inputs
  for (const auto& l : lambda)
    CHECK(commutator_class(direct, l) == CommutatorClass::commute);
}

TEST_CASE("hull rejects non-commuting input") {
  SuperMatrix u(2, sig(0)), v(2, sig(0));
  u.at(0, 1) = GrassmannElement::one(sig(0));
  v.at(1, 0) = GrassmannElement::one(sig(0));
  std::vector<SuperMatrix> lambda = {u, v};
  CHECK_THROWS_AS(
      static_cast<void>(cinfty_hull_eval(lambda, SmoothFunction::variable(2, 0))), Error);
  std::vector<SmoothFunction> fs = {SmoothFunction::variable(2, 0)};
  CHECK_THROWS_AS(static_cast<void>(check_admissibility_axioms(lambda, fs)), Error);
}

TEST_CASE("admissibility axioms on a polynomial family") {
  std::vector<SuperMatrix> lambda = {diag(sig(1), {1, 2})};
  std::vector<SmoothFunction> fs = {
      SmoothFunction::parse("y1", 1, Backend::exact),
      SmoothFunction::parse("y1^2", 1, Backend::exact),
      SmoothFunction::parse("y1^3", 1, Backend::exact),
  };
  AdmissibilityReport report = check_admissibility_axioms(lambda, fs);
  CHECK(report.passed);
  CHECK(report.commutes_with_inputs.passed);
  CHECK(report.outputs_commute.passed);
  CHECK(report.composition.passed);
  CHECK(report.projection.passed);
  CHECK(report.projection.max_residual == 0.0);
}

TEST_SUITE_END();
