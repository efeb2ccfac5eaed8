#include "azu/azumaya_map.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace azu {

namespace {

void check_shapes(const AssignmentEta& eta) {
  if (eta.n < 0 || eta.s1 < 0 || eta.s2 < 0 || eta.r < 1)
    fail(ErrorCode::input, "assignment dimensions must be nonnegative (r >= 1)");
  if (static_cast<int>(eta.even.size()) != eta.n)
    fail(ErrorCode::input, "assignment needs exactly n even matrices");
  if (static_cast<int>(eta.odd.size()) != eta.s2)
    fail(ErrorCode::input, "assignment needs exactly s2 odd matrices");
  if (!eta.eigen_hints.empty() && static_cast<int>(eta.eigen_hints.size()) != eta.n)
    fail(ErrorCode::input, "eigen hints must align with the even matrices");
  AlgebraSignature sig = eta.signature();
  for (const auto& m : eta.even)
    if (m.rank() != eta.r || !(m.signature() == sig))
      fail(ErrorCode::input, "even matrix has the wrong rank or algebra");
  for (const auto& m : eta.odd)
    if (m.rank() != eta.r || !(m.signature() == sig))
      fail(ErrorCode::input, "odd matrix has the wrong rank or algebra");
  if (eta.n == 0) fail(ErrorCode::input, "assignment needs at least one even coordinate");
}

bool matrix_negligible(const SuperMatrix& m, double tol, double scale) {
  if (m.backend() == Backend::exact) return m.is_zero();
  return m.max_abs_coefficient() <= tol * std::max(1.0, scale);
}

}  // namespace

ValidationReport validate(const AssignmentEta& eta) {
  check_shapes(eta);
  ValidationReport report;
  auto flag = [&](std::string relation, std::string detail) {
    report.passed = false;
    report.issues.push_back({std::move(relation), std::move(detail)});
  };

  // condition (1): commutation pattern
  for (int i = 0; i < eta.n; ++i)
    for (int j = i + 1; j < eta.n; ++j)
      if (commutator_class(eta.even[i], eta.even[j]) != CommutatorClass::commute)
        flag("m" + std::to_string(i + 1) + "*m" + std::to_string(j + 1) + " = m" +
                 std::to_string(j + 1) + "*m" + std::to_string(i + 1),
             "even images fail to commute");
  for (int i = 0; i < eta.n; ++i)
    for (int l = 0; l < eta.s2; ++l)
      if (commutator_class(eta.even[i], eta.odd[l]) != CommutatorClass::commute)
        flag("m" + std::to_string(i + 1) + "*Theta" + std::to_string(l + 1) + " = Theta" +
                 std::to_string(l + 1) + "*m" + std::to_string(i + 1),
             "even image fails to commute with an odd image");
  for (int l = 0; l < eta.s2; ++l)
    for (int lp = l; lp < eta.s2; ++lp) {
      SuperMatrix anti = eta.odd[l] * eta.odd[lp] + eta.odd[lp] * eta.odd[l];
      double scale = eta.odd[l].max_abs_coefficient() * eta.odd[lp].max_abs_coefficient();
      if (!matrix_negligible(anti, eta.tolerance, scale))
        flag("Theta" + std::to_string(l + 1) + "*Theta" + std::to_string(lp + 1) + " = -Theta" +
                 std::to_string(lp + 1) + "*Theta" + std::to_string(l + 1),
             l == lp ? "odd image does not square to zero"
                     : "odd images fail to anticommute");
    }

  // condition (2): real body spectra
  for (int i = 0; i < eta.n; ++i) {
    const SuperMatrix& m = eta.even[i];
    std::string who = "spectrum(m" + std::to_string(i + 1) + ") real";
    if (!eta.eigen_hints.empty() && eta.eigen_hints[static_cast<size_t>(i)]) {
      try {
        eigen_extract(m, eta.eigen_hints[static_cast<size_t>(i)],
                      {true, eta.tolerance});
      } catch (const Error& e) {
        flag(who, e.what());
      }
      continue;
    }
    if (eta.backend == Backend::exact) {
      Poly chi = m.body().charpoly();
      bool real = true;
      for (const auto& c : chi.coeffs())
        if (!c.is_real()) real = false;
      if (real) real = all_roots_real(chi);
      if (!real) flag(who, "body characteristic polynomial has non-real roots");
    } else {
      try {
        eigen_extract(m, std::nullopt, {true, eta.tolerance});
      } catch (const Error& e) {
        flag(who, e.what());
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// BlockTaylorEngine
// ---------------------------------------------------------------------------

BlockTaylorEngine::BlockTaylorEngine(std::vector<SuperMatrix> ms, std::vector<EigenData> es)
    : ms_(std::move(ms)), es_(std::move(es)) {
  system_ = joint_system(ms_, es_);
  int s = ms_[0].signature().generators;
  for (const auto& entry : system_.entries) {
    Block block;
    block.point = entry.label;
    block.rank = entry.block_rank;
    int hard_cap = entry.block_rank * (s + 1);
    for (size_t i = 0; i < ms_.size(); ++i) {
      // N = (m_i - lambda_i) e, annihilated by t^(r_j(s+1)) via the char poly
      SuperMatrix offset =
          ms_[i] * entry.idempotent -
          entry.label[i] * entry.idempotent;
      std::vector<SuperMatrix> powers = {entry.idempotent};
      double scale = std::max(1.0, offset.max_abs_coefficient());
      int nu = hard_cap;
      double power_scale = 1.0;
      bool annihilated = false;
      for (int k = 1; k <= hard_cap; ++k) {
        SuperMatrix next = powers.back() * offset;
        power_scale *= scale;
        if (matrix_negligible(next, 1e-12, power_scale)) {
          nu = k;
          annihilated = true;
          break;
        }
        powers.push_back(std::move(next));
      }
      if (!annihilated) {
        // the block char poly (t - lambda)^(r_j(s+1)) annihilates the offset,
        // so only numeric roundoff can keep the last power alive
        if (offset.backend() == Backend::exact)
          fail(ErrorCode::internal, "nilpotent offset exceeded its char poly bound");
        powers.erase(powers.begin() + hard_cap, powers.end());
      }
      block.nilpotency.push_back(nu);
      block.offset_powers.push_back(std::move(powers));
    }
    block.cap = 1;
    for (int nu : block.nilpotency) block.cap += nu - 1;
    blocks_.push_back(std::move(block));
  }
}

SuperMatrix BlockTaylorEngine::evaluate(const SmoothFunction& f, Backend wb) const {
  if (f.arity() != static_cast<int>(ms_.size()))
    fail(ErrorCode::shape_mismatch, "function arity does not match the matrix family");
  AlgebraSignature sig = ms_[0].signature();
  Backend native = sig.backend;
  if (native == Backend::numeric) wb = Backend::numeric;
  sig.backend = wb;
  int r = ms_[0].rank();
  int k = static_cast<int>(ms_.size());

  SuperMatrix result = SuperMatrix::zero(r, sig);
  for (const auto& block : blocks_) {
    std::vector<Coefficient> q;
    q.reserve(block.point.size());
    for (const auto& c : block.point) q.push_back(c.to_backend(wb));
    if (f.real_domain())
      for (const auto& c : q)
        if (!c.is_real())
          fail(ErrorCode::domain, "spectral point is not real for a real-domain function");

    auto power = [&](int i, int p) -> SuperMatrix {
      const auto& cached = block.offset_powers[static_cast<size_t>(i)][static_cast<size_t>(p)];
      return wb == native ? cached : cached.to_backend(wb);
    };

    Coefficient f0 = [&] {
      try {
        return f.value(q);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::domain) {
          std::string pt;
          for (const auto& c : q) pt += (pt.empty() ? "" : ", ") + c.to_string();
          fail(ErrorCode::domain,
               std::string(e.what()) + " at spectral point q = (" + pt + ")");
        }
        throw;
      }
    }();
    result += f0.to_backend(wb) * power(0, 0);  // f(q_j) e_j

    for (int d = 1; d <= block.cap; ++d) {
      bool any = false;
      for_each_multi_index(k, d, [&](const MultiIndex& idx) {
        for (int i = 0; i < k; ++i)
          if (idx[i] >= block.nilpotency[static_cast<size_t>(i)]) return;
        SuperMatrix mono = SuperMatrix::identity(r, sig);
        bool started = false;
        for (int i = 0; i < k; ++i) {
          if (idx[i] == 0) continue;
          mono = started ? mono * power(i, idx[i]) : power(i, idx[i]);
          started = true;
        }
        if (mono.is_zero()) return;
        any = true;
        Coefficient w = f.jet(idx, q).to_backend(wb) *
                        Coefficient::of_rational(idx.inverse_factorial_weight(), wb);
        result += w * mono;
      });
      if (!any) break;
    }
  }
  return result;
}

SpectralLocusReport BlockTaylorEngine::locus() const {
  SpectralLocusReport report;
  int r = ms_[0].rank();
  int s = ms_[0].signature().generators;
  int max_nu = 0;
  for (const auto& block : blocks_) {
    SpectralBlock sb;
    sb.point = block.point;
    sb.rank = block.rank;
    sb.nilpotency = block.nilpotency;
    sb.truncation_degree = block.cap;
    for (int nu : block.nilpotency) max_nu = std::max(max_nu, nu);
    report.total_rank += block.rank;
    report.blocks.push_back(std::move(sb));
  }
  report.charpoly_bound = r * (s + 1);
  report.figure_bound = (r - 1) * (s + 1);
  report.figure_bound_holds = max_nu <= report.figure_bound;
  return report;
}

// ---------------------------------------------------------------------------
// MapHandle
// ---------------------------------------------------------------------------

MapHandle MapHandle::build(AssignmentEta eta) {
  ValidationReport report = validate(eta);
  if (!report.passed) {
    std::string msg = "assignment fails its validity conditions:";
    for (const auto& issue : report.issues)
      msg += "\n  " + issue.relation + ": " + issue.detail;
    fail(ErrorCode::precondition, msg);
  }
  std::vector<EigenData> eigen;
  eigen.reserve(eta.even.size());
  for (int i = 0; i < eta.n; ++i) {
    std::optional<EigenData> hint;
    if (!eta.eigen_hints.empty()) hint = eta.eigen_hints[static_cast<size_t>(i)];
    eigen.push_back(eigen_extract(eta.even[i], hint, {true, eta.tolerance}));
  }
  BlockTaylorEngine engine(eta.even, eigen);
  PrimaryDecomposition decomposition =
      primary_decomposition(engine.system(), eta.even, eta.tolerance);
  return MapHandle(std::move(eta), std::move(engine), std::move(decomposition));
}

SuperMatrix MapHandle::theta_monomial(std::uint64_t mask, Backend wb) const {
  AlgebraSignature sig = eta_.signature();
  sig.backend = wb;
  SuperMatrix acc = SuperMatrix::identity(eta_.r, sig);
  for (int l = 0; l < eta_.s2; ++l)
    if (mask & (std::uint64_t(1) << l)) acc = acc * eta_.odd[static_cast<size_t>(l)].to_backend(wb);
  return acc;
}

SuperMatrix MapHandle::apply(const SuperFunction& f) const {
  if (f.base_arity() != eta_.n || f.odd_count() != eta_.s2)
    fail(ErrorCode::shape_mismatch, "super function shape does not match the assignment");
  Backend wb = eta_.backend;
  if (!f.all_polynomial() || f.any_numeric()) wb = Backend::numeric;
  AlgebraSignature sig = eta_.signature();
  sig.backend = wb;
  SuperMatrix result = SuperMatrix::zero(eta_.r, sig);
  for (const auto& [mask, component] : f.components())
    result += engine_.evaluate(component, wb) * theta_monomial(mask, wb);
  return result;
}

SuperMatrix MapHandle::apply_even(const SmoothFunction& f) const {
  Backend wb = eta_.backend;
  if (!f.is_polynomial() || f.backend() == Backend::numeric) wb = Backend::numeric;
  return engine_.evaluate(f, wb);
}

HomomorphismReport MapHandle::verify_homomorphism(
    std::span<const std::pair<SuperFunction, SuperFunction>> samples) const {
  HomomorphismReport report;
  for (const auto& [f, g] : samples) {
    SuperMatrix pf = apply(f), pg = apply(g);
    SuperMatrix mult = apply(f * g) - pf * pg;
    SuperMatrix add = apply(f + g) - (pf + pg);
    HomomorphismSample sample;
    sample.mult_residual = mult.max_abs_coefficient();
    sample.add_residual = add.max_abs_coefficient();
    sample.exact_zero =
        mult.backend() == Backend::exact && mult.is_zero() && add.is_zero();
    report.max_mult_residual = std::max(report.max_mult_residual, sample.mult_residual);
    report.max_add_residual = std::max(report.max_add_residual, sample.add_residual);
    report.all_exact_zero = report.all_exact_zero && sample.exact_zero;
    report.samples.push_back(sample);
  }
  return report;
}

// ---------------------------------------------------------------------------
// C-infinity hull
// ---------------------------------------------------------------------------

namespace {

BlockTaylorEngine hull_engine(std::span<const SuperMatrix> lambda,
                              std::span<const std::optional<EigenData>> hints,
                              double tolerance) {
  if (lambda.empty()) fail(ErrorCode::input, "hull needs at least one matrix");
  for (size_t i = 0; i < lambda.size(); ++i)
    for (size_t j = i + 1; j < lambda.size(); ++j)
      if (commutator_class(lambda[i], lambda[j]) != CommutatorClass::commute)
        fail(ErrorCode::precondition, "hull inputs " + std::to_string(i + 1) + " and " +
                                          std::to_string(j + 1) + " do not commute");
  std::vector<EigenData> eigen;
  for (size_t i = 0; i < lambda.size(); ++i) {
    std::optional<EigenData> hint;
    if (!hints.empty() && i < hints.size()) hint = hints[i];
    eigen.push_back(eigen_extract(lambda[i], hint, {true, tolerance}));
  }
  return BlockTaylorEngine(std::vector<SuperMatrix>(lambda.begin(), lambda.end()),
                           std::move(eigen));
}

}  // namespace

SuperMatrix cinfty_hull_eval(std::span<const SuperMatrix> lambda, const SmoothFunction& f,
                             std::span<const std::optional<EigenData>> hints,
                             double tolerance) {
  BlockTaylorEngine engine = hull_engine(lambda, hints, tolerance);
  Backend wb = lambda[0].backend();
  if (!f.is_polynomial() || f.backend() == Backend::numeric) wb = Backend::numeric;
  return engine.evaluate(f, wb);
}

AdmissibilityReport check_admissibility_axioms(std::span<const SuperMatrix> lambda,
                                               std::span<const SmoothFunction> samples,
                                               double tolerance) {
  BlockTaylorEngine engine = hull_engine(lambda, {}, tolerance);
  Backend native = lambda[0].backend();
  auto working = [&](const SmoothFunction& f) {
    return (!f.is_polynomial() || f.backend() == Backend::numeric) ? Backend::numeric : native;
  };

  AdmissibilityReport report;
  auto register_residual = [&](AxiomResult& axiom, const SuperMatrix& residual,
                               const std::string& note) {
    double value = residual.max_abs_coefficient();
    axiom.max_residual = std::max(axiom.max_residual, value);
    bool ok = residual.backend() == Backend::exact
                  ? residual.is_zero()
                  : value <= tolerance;
    if (!ok) {
      axiom.passed = false;
      axiom.notes.push_back(note);
    }
  };

  std::vector<SuperMatrix> outputs;
  for (const auto& f : samples) outputs.push_back(engine.evaluate(f, working(f)));

  // (1) outputs commute with the inputs
  for (size_t a = 0; a < outputs.size(); ++a)
    for (size_t i = 0; i < lambda.size(); ++i) {
      Backend wb = outputs[a].backend();
      SuperMatrix li = lambda[i].to_backend(wb);
      register_residual(report.commutes_with_inputs, outputs[a] * li - li * outputs[a],
                        "[f" + std::to_string(a + 1) + "(L), L" + std::to_string(i + 1) + "]");
    }

  // (2) outputs commute with each other
  for (size_t a = 0; a < outputs.size(); ++a)
    for (size_t b = a + 1; b < outputs.size(); ++b) {
      Backend wb = (outputs[a].backend() == outputs[b].backend()) ? outputs[a].backend()
                                                                  : Backend::numeric;
      SuperMatrix x = outputs[a].to_backend(wb), y = outputs[b].to_backend(wb);
      register_residual(report.outputs_commute, x * y - y * x,
                        "[f" + std::to_string(a + 1) + "(L), f" + std::to_string(b + 1) + "(L)]");
    }

  // (3) composition coherence: h = g o (f_a, f_b) evaluated directly equals
  // g evaluated on the outputs
  auto composition_case = [&](const std::vector<size_t>& pick, const SmoothFunction& g,
                              const std::string& note) {
    std::vector<SmoothFunction> inner;
    std::vector<SuperMatrix> mid;
    for (size_t idx : pick) {
      inner.push_back(samples[idx]);
      mid.push_back(outputs[idx]);
    }
    Backend wb = native;
    for (const auto& m : mid)
      if (m.backend() == Backend::numeric) wb = Backend::numeric;
    for (auto& m : mid) m = m.to_backend(wb);
    SmoothFunction h = SmoothFunction::compose(g, inner);
    SuperMatrix direct = engine.evaluate(h, working(h));
    SuperMatrix nested = cinfty_hull_eval(mid, g, {}, tolerance);
    Backend rb = (direct.backend() == nested.backend()) ? direct.backend() : Backend::numeric;
    register_residual(report.composition, direct.to_backend(rb) - nested.to_backend(rb), note);
  };
  if (!samples.empty()) {
    Backend gb = native == Backend::numeric ? Backend::numeric : Backend::exact;
    SmoothFunction square = pow_int(SmoothFunction::variable(1, 0, gb), 2);
    composition_case({0}, square, "g=x^2 with f1");
    if (samples.size() >= 2) {
      SmoothFunction u = SmoothFunction::variable(2, 0, gb);
      SmoothFunction v = SmoothFunction::variable(2, 1, gb);
      composition_case({0, 1}, u * v, "g=x*y with (f1,f2)");
      composition_case({0, 1}, u + v, "g=x+y with (f1,f2)");
    }
  }

  // (4) projection normalization pi_j(L) = L_j
  for (size_t j = 0; j < lambda.size(); ++j) {
    SmoothFunction pj = SmoothFunction::variable(static_cast<int>(lambda.size()),
                                                 static_cast<int>(j),
                                                 native == Backend::numeric
                                                     ? Backend::numeric
                                                     : Backend::exact);
    SuperMatrix image = engine.evaluate(pj, native);
    register_residual(report.projection, image - lambda[j],
                      "pi_" + std::to_string(j + 1));
  }

  report.passed = report.commutes_with_inputs.passed && report.outputs_commute.passed &&
                  report.composition.passed && report.projection.passed;
  return report;
}

}  // namespace azu
