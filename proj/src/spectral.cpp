#include "azu/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>

namespace azu {

const char* eigen_provenance_name(EigenProvenance p) {
  switch (p) {
    case EigenProvenance::user_supplied: return "user-supplied";
    case EigenProvenance::rational_roots: return "rational-roots";
    case EigenProvenance::numeric_clustered: return "numeric-clustered";
  }
  return "?";
}

int EigenData::total_multiplicity() const {
  int t = 0;
  for (int d : multiplicities) t += d;
  return t;
}

int IdempotentSystem::total_rank() const {
  int t = 0;
  for (const auto& e : entries) t += e.block_rank;
  return t;
}

namespace {

void sort_eigen(EigenData& e) {
  std::vector<size_t> order(e.values.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto key = [&](size_t i) {
    auto z = e.values[i].to_complex();
    return std::make_pair(z.real(), z.imag());
  };
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return key(a) < key(b); });
  EigenData sorted = e;
  for (size_t i = 0; i < order.size(); ++i) {
    sorted.values[i] = e.values[order[i]];
    sorted.multiplicities[i] = e.multiplicities[order[i]];
  }
  e = std::move(sorted);
}

void verify_hint(const SuperMatrix& m, const Poly& chi_body, const EigenData& hint,
                 const EigenOptions& options) {
  if (hint.values.size() != hint.multiplicities.size())
    fail(ErrorCode::input, "eigenvalue hint arity mismatch");
  if (hint.total_multiplicity() != m.rank())
    fail(ErrorCode::input, "eigenvalue hint multiplicities must sum to the rank");
  for (size_t i = 0; i < hint.values.size(); ++i)
    for (size_t j = i + 1; j < hint.values.size(); ++j)
      if (hint.values[i] == hint.values[j])
        fail(ErrorCode::input, "eigenvalue hint contains a repeated value");
  Backend bk = m.backend();
  Poly prod = Poly::one(bk);
  for (size_t i = 0; i < hint.values.size(); ++i)
    prod = prod * Poly::linear_from_root(hint.values[i].to_backend(bk))
                      .pow(static_cast<unsigned>(hint.multiplicities[i]));
  if (bk == Backend::exact) {
    if (!(prod == chi_body))
      fail(ErrorCode::input, "eigenvalue hint does not reproduce the body char poly");
    for (const auto& v : hint.values) {
      if (!v.is_exact())
        fail(ErrorCode::input, "exact backend needs exact eigenvalue hints");
      if (options.require_real && !v.is_real())
        fail(ErrorCode::spectrum_not_real, "hinted eigenvalue is not real");
      if (!v.is_real())
        fail(ErrorCode::input,
             "exact-path eigenvalues must be real rationals (use the numeric backend)");
    }
  } else {
    Poly diff = prod - chi_body;
    if (diff.max_abs_coefficient() >
        options.tolerance * std::max(1.0, chi_body.max_abs_coefficient()))
      fail(ErrorCode::input, "eigenvalue hint does not reproduce the body char poly");
    if (options.require_real)
      for (const auto& v : hint.values)
        if (std::abs(v.to_complex().imag()) > options.tolerance)
          fail(ErrorCode::spectrum_not_real, "hinted eigenvalue is not real");
  }
}

EigenData exact_extract(const Poly& chi, const EigenOptions& options) {
  for (const auto& c : chi.coeffs())
    if (!c.is_real()) {
      // a monic polynomial with all-real roots has real coefficients
      if (options.require_real)
        fail(ErrorCode::spectrum_not_real, "body spectrum is not real");
      fail(ErrorCode::needs_hint, "body char poly has complex coefficients; supply a hint");
    }
  if (!all_roots_real(chi)) {
    if (options.require_real)
      fail(ErrorCode::spectrum_not_real, "body spectrum is not real");
    fail(ErrorCode::needs_hint, "body spectrum is complex; supply a hint");
  }
  RationalRoots roots = rational_roots(chi);
  if (!roots.complete)
    fail(ErrorCode::needs_hint,
         "body spectrum is real but irrational; supply an eigenvalue hint");
  EigenData e;
  e.provenance = EigenProvenance::rational_roots;
  for (const auto& [value, mult] : roots.roots) {
    e.values.push_back(Coefficient::exact(value));
    e.multiplicities.push_back(mult);
  }
  return e;
}

EigenData numeric_extract(const Poly& chi, const EigenOptions& options) {
  std::vector<std::complex<double>> roots = numeric_roots(chi);
  std::vector<std::complex<double>> centers;
  std::vector<int> counts;
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
    return std::make_pair(a.real(), a.imag()) < std::make_pair(b.real(), b.imag());
  });
  for (const auto& z : roots) {
    bool placed = false;
    for (size_t i = 0; i < centers.size(); ++i) {
      if (std::abs(z - centers[i]) <= options.tolerance) {
        centers[i] = (centers[i] * static_cast<double>(counts[i]) + z) /
                     static_cast<double>(counts[i] + 1);
        ++counts[i];
        placed = true;
        break;
      }
    }
    if (!placed) {
      centers.push_back(z);
      counts.push_back(1);
    }
  }
  EigenData e;
  e.provenance = EigenProvenance::numeric_clustered;
  e.tolerance = options.tolerance;
  for (size_t i = 0; i < centers.size(); ++i) {
    std::complex<double> z = centers[i];
    if (options.require_real) {
      if (std::abs(z.imag()) > options.tolerance)
        fail(ErrorCode::spectrum_not_real, "body spectrum is not real");
      z = {z.real(), 0.0};
    }
    e.values.push_back(Coefficient::numeric(z));
    e.multiplicities.push_back(counts[i]);
  }
  return e;
}

}  // namespace

EigenData eigen_extract(const SuperMatrix& m, const std::optional<EigenData>& hint,
                        const EigenOptions& options) {
  Poly chi = m.body().charpoly();
  if (hint) {
    EigenData e = *hint;
    for (auto& v : e.values) v = v.to_backend(m.backend());
    verify_hint(m, chi, e, options);
    e.provenance = EigenProvenance::user_supplied;
    sort_eigen(e);
    return e;
  }
  EigenData e = (m.backend() == Backend::exact) ? exact_extract(chi, options)
                                                : numeric_extract(chi, options);
  sort_eigen(e);
  return e;
}

IdempotentSystem idempotent_system(const SuperMatrix& m, const EigenData& eigen) {
  Backend bk = m.backend();
  int s = m.signature().generators;
  if (eigen.total_multiplicity() != m.rank())
    fail(ErrorCode::input, "eigen data does not cover the full rank");

  int l = eigen.count();
  IdempotentSystem out;
  if (l == 1) {
    // chi has a single primary factor; the system is {Id}
    IdempotentSystem::Entry entry{{eigen.values[0]},
                                  SuperMatrix::identity(m.rank(), m.signature()),
                                  m.rank()};
    out.entries.push_back(std::move(entry));
    return out;
  }

  std::vector<Poly> gs;
  gs.reserve(static_cast<size_t>(l));
  for (int i = 0; i < l; ++i) {
    Poly g = Poly::one(bk);
    for (int j = 0; j < l; ++j) {
      if (j == i) continue;
      g = g * Poly::linear_from_root(eigen.values[static_cast<size_t>(j)])
                  .pow(static_cast<unsigned>((s + 1) * eigen.multiplicities[static_cast<size_t>(j)]));
    }
    gs.push_back(std::move(g));
  }
  std::vector<Poly> hs = poly_bezout(gs);
  for (int i = 0; i < l; ++i) {
    SuperMatrix e = poly_at_matrix(hs[static_cast<size_t>(i)] * gs[static_cast<size_t>(i)], m);
    IdempotentSystem::Entry entry{{eigen.values[static_cast<size_t>(i)]}, std::move(e),
                                  eigen.multiplicities[static_cast<size_t>(i)]};
    out.entries.push_back(std::move(entry));
  }
  return out;
}

IdempotentSystem joint_system(std::span<const SuperMatrix> ms, std::span<const EigenData> es) {
  if (ms.empty()) fail(ErrorCode::input, "joint_system needs at least one matrix");
  if (ms.size() != es.size())
    fail(ErrorCode::input, "joint_system needs eigen data per matrix");
  for (size_t i = 0; i < ms.size(); ++i)
    for (size_t j = i + 1; j < ms.size(); ++j)
      if (commutator_class(ms[i], ms[j]) != CommutatorClass::commute)
        fail(ErrorCode::precondition, "matrices " + std::to_string(i + 1) + " and " +
                                          std::to_string(j + 1) + " do not commute");

  std::vector<IdempotentSystem> singles;
  singles.reserve(ms.size());
  for (size_t i = 0; i < ms.size(); ++i)
    singles.push_back(idempotent_system(ms[i], es[i]));

  IdempotentSystem out;
  // product over one idempotent per factor; entries are visited in label order
  // because each single system is sorted by eigenvalue
  std::function<void(size_t, SuperMatrix, std::vector<Coefficient>)> rec =
      [&](size_t depth, SuperMatrix acc, std::vector<Coefficient> label) {
        if (acc.is_zero()) return;
        if (depth == singles.size()) {
          CoeffMatrix b = acc.body();
          Coefficient tr = b.trace();
          double rank_guess = tr.to_complex().real();
          int rank = static_cast<int>(std::llround(rank_guess));
          if (acc.backend() == Backend::exact &&
              !(tr == Coefficient::of_rational(Rational(rank), Backend::exact)))
            fail(ErrorCode::internal, "idempotent body trace is not an integer");
          out.entries.push_back({std::move(label), std::move(acc), rank});
          return;
        }
        for (const auto& entry : singles[depth].entries) {
          std::vector<Coefficient> next = label;
          next.push_back(entry.label[0]);
          rec(depth + 1, acc * entry.idempotent, std::move(next));
        }
      };
  rec(0, SuperMatrix::identity(ms[0].rank(), ms[0].signature()), {});
  return out;
}

PrimaryDecomposition primary_decomposition(const IdempotentSystem& system,
                                           std::span<const SuperMatrix> ms, double tol) {
  if (system.entries.empty()) fail(ErrorCode::input, "empty idempotent system");
  int r = system.entries[0].idempotent.rank();
  AlgebraSignature sig = system.entries[0].idempotent.signature();
  Backend bk = sig.backend;
  if (system.total_rank() != r)
    fail(ErrorCode::internal, "idempotent block ranks do not sum to the rank");

  PrimaryDecomposition out{system, SuperMatrix::zero(r, sig), SuperMatrix::zero(r, sig), {}, {}};

  // body eigenbasis per block: joint nullspace of the stacked (body_i - l_i)^r
  int col = 0;
  for (const auto& entry : system.entries) {
    if (entry.label.size() != ms.size())
      fail(ErrorCode::input, "idempotent system was built from a different matrix family");
    CoeffMatrix stacked(0, r, bk);
    for (size_t i = 0; i < ms.size(); ++i) {
      CoeffMatrix shifted = ms[i].body();
      Coefficient lambda = entry.label[i].to_backend(bk);
      for (int d = 0; d < r; ++d) shifted.at(d, d) -= lambda;
      stacked = stacked.stacked(shifted.pow(static_cast<unsigned>(r)));
    }
    CoeffMatrix xi = stacked.nullspace(tol);
    if (xi.cols() != entry.block_rank)
      fail(ErrorCode::internal,
           "body eigenspace dimension " + std::to_string(xi.cols()) +
               " does not match block rank " + std::to_string(entry.block_rank));
    // columns e_j(xi_k)
    for (int c = 0; c < xi.cols(); ++c, ++col) {
      for (int i = 0; i < r; ++i) {
        GrassmannElement cell = GrassmannElement::zero(sig);
        for (int k = 0; k < r; ++k)
          cell += entry.idempotent.at(i, k) * xi.at(k, c);
        out.basis.at(i, col) = std::move(cell);
      }
    }
    out.block_ranks.push_back(entry.block_rank);
  }

  try {
    out.basis_inverse = out.basis.inverse();
  } catch (const Error& e) {
    fail(ErrorCode::internal,
         std::string("adapted basis is not invertible (inconsistent eigen data?): ") +
             e.what());
  }

  // conjugate and slice the diagonal blocks; off-diagonal blocks must vanish
  std::vector<int> offsets = {0};
  for (int rank : out.block_ranks) offsets.push_back(offsets.back() + rank);
  for (size_t i = 0; i < ms.size(); ++i) {
    SuperMatrix conj = out.basis_inverse * ms[i] * out.basis;
    std::vector<SuperMatrix> blocks;
    for (size_t j = 0; j < out.block_ranks.size(); ++j) {
      int base = offsets[j], size = out.block_ranks[j];
      SuperMatrix block(size, sig);
      for (int a = 0; a < size; ++a)
        for (int b = 0; b < size; ++b) block.at(a, b) = conj.at(base + a, base + b);
      blocks.push_back(std::move(block));
    }
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        size_t ja = 0, jb = 0;
        while (a >= offsets[ja + 1]) ++ja;
        while (b >= offsets[jb + 1]) ++jb;
        if (ja == jb) continue;
        const GrassmannElement& x = conj.at(a, b);
        bool zero = (bk == Backend::exact) ? x.is_zero()
                                           : x.max_abs_coefficient() <=
                                                 tol * std::max(1.0, ms[i].max_abs_coefficient());
        if (!zero)
          fail(ErrorCode::internal, "conjugated matrix is not block-diagonal");
      }
    out.restricted.push_back(std::move(blocks));
  }
  return out;
}

}  // namespace azu
