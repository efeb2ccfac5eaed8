#pragma once

#include <span>

#include "azu/grassmann.hpp"
#include "azu/smoothfn.hpp"

namespace azu {

/// Evaluates h at even Grassmann arguments body_i + soul_i as the finite
/// Taylor sum over soul monomials; the sum stops at the first total degree
/// whose soul monomials all vanish. Arguments must be even; elementary and
/// oracle h additionally require real bodies.
GrassmannElement eval_even(const SmoothFunction& h, std::span<const GrassmannElement> args);

/// eval_even(g o (f_1..f_m), args) - eval_even(g, [eval_even(f_i, args)]).
/// Exact zero on the polynomial backend.
GrassmannElement eval_even_composition_check(const SmoothFunction& g,
                                             std::span<const SmoothFunction> inner,
                                             std::span<const GrassmannElement> args);

}  // namespace azu
