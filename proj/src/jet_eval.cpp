#include "azu/jet_eval.hpp"

#include <vector>

namespace azu {

GrassmannElement eval_even(const SmoothFunction& h, std::span<const GrassmannElement> args) {
  int k = h.arity();
  if (static_cast<int>(args.size()) != k)
    fail(ErrorCode::shape_mismatch, "eval_even needs one argument per variable of h");
  if (k == 0) fail(ErrorCode::input, "eval_even needs at least one argument");

  AlgebraSignature sig = args[0].signature();
  for (const auto& a : args) {
    if (!(a.signature() == sig))
      fail(ErrorCode::signature_mismatch, "eval_even arguments live in different algebras");
    if (a.parity() != Parity::even)
      fail(ErrorCode::parity, "eval_even argument is not even");
  }

  // Numeric jets force the whole evaluation onto the numeric backend.
  Backend wb = sig.backend;
  if (h.backend() == Backend::numeric || !h.is_polynomial()) wb = Backend::numeric;
  if (wb != sig.backend) {
    sig.backend = wb;
  }

  std::vector<Coefficient> bodies;
  std::vector<GrassmannElement> souls;
  bodies.reserve(args.size());
  souls.reserve(args.size());
  for (const auto& a : args) {
    Coefficient b = a.body().to_backend(wb);
    if (h.real_domain() && !b.is_real())
      fail(ErrorCode::domain, "non-real body for a real-domain smooth function");
    bodies.push_back(std::move(b));
    souls.push_back(a.soul().to_backend(wb));
  }

  // soul powers, grown on demand; soul^0 = 1
  std::vector<std::vector<GrassmannElement>> powers(souls.size());
  auto soul_power = [&](int i, int p) -> const GrassmannElement& {
    auto& cache = powers[static_cast<size_t>(i)];
    if (cache.empty()) cache.push_back(GrassmannElement::one(sig));
    while (static_cast<int>(cache.size()) <= p)
      cache.push_back(cache.back() * souls[static_cast<size_t>(i)]);
    return cache[static_cast<size_t>(p)];
  };

  GrassmannElement result =
      GrassmannElement::scalar(sig, h.jet(MultiIndex::zeros(k), bodies));
  int cap = k * sig.generators;
  for (int d = 1; d <= cap; ++d) {
    bool any_monomial = false;
    for_each_multi_index(k, d, [&](const MultiIndex& idx) {
      GrassmannElement mono = GrassmannElement::one(sig);
      for (int i = 0; i < k && !mono.is_zero(); ++i)
        if (idx[i] > 0) mono = mono * soul_power(i, idx[i]);
      if (mono.is_zero()) return;
      any_monomial = true;
      Coefficient w = h.jet(idx, bodies) *
                      Coefficient::of_rational(idx.inverse_factorial_weight(), wb);
      result += mono * w;
    });
    if (!any_monomial) break;  // every higher monomial is a multiple of one of these
  }
  return result;
}

GrassmannElement eval_even_composition_check(const SmoothFunction& g,
                                             std::span<const SmoothFunction> inner,
                                             std::span<const GrassmannElement> args) {
  std::vector<SmoothFunction> fs(inner.begin(), inner.end());
  SmoothFunction h = SmoothFunction::compose(g, fs);
  GrassmannElement direct = eval_even(h, args);

  std::vector<GrassmannElement> mid;
  mid.reserve(fs.size());
  for (const auto& f : fs) mid.push_back(eval_even(f, args));
  GrassmannElement nested = eval_even(g, mid);
  if (!(direct.signature() == nested.signature()))
    nested = nested.to_backend(direct.backend());
  return direct - nested;
}

}  // namespace azu
