#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "azu/supermatrix.hpp"

namespace azu {

enum class EigenProvenance { user_supplied, rational_roots, numeric_clustered };

const char* eigen_provenance_name(EigenProvenance p);

/// Distinct eigenvalues of a body matrix with algebraic multiplicities.
struct EigenData {
  std::vector<Coefficient> values;
  std::vector<int> multiplicities;
  EigenProvenance provenance = EigenProvenance::user_supplied;
  double tolerance = 0.0;  // numeric clustering tolerance, when applicable

  int count() const { return static_cast<int>(values.size()); }
  int total_multiplicity() const;
};

struct EigenOptions {
  bool require_real = false;
  double tolerance = 1e-8;  // numeric clustering
};

/// Spectrum of the body. Exact path: rational (real) eigenvalues only; an
/// irrational-but-real spectrum raises needs-hint, a complex one raises
/// spectrum-not-real when require_real is set (needs-hint otherwise).
/// Numeric path: Durand-Kerner roots clustered at the given tolerance.
EigenData eigen_extract(const SuperMatrix& m, const std::optional<EigenData>& hint = {},
                        const EigenOptions& options = {});

/// e_1..e_l with sum = I, e_i e_j = 0 (i != j), e_i^2 = e_i; each entry is a
/// polynomial in the generating endomorphism(s).
struct IdempotentSystem {
  struct Entry {
    std::vector<Coefficient> label;  // eigenvalue tuple, one slot per generator matrix
    SuperMatrix idempotent;
    int block_rank = 0;
  };
  std::vector<Entry> entries;

  int total_rank() const;
};

/// Construction for one endomorphism: g_i = chi / (t-l_i)^((s+1)d_i),
/// Bezout h_i, e_i = (h_i g_i)(m).
IdempotentSystem idempotent_system(const SuperMatrix& m, const EigenData& eigen);

/// Product expansion over the per-matrix systems of a commuting family;
/// labels are eigenvalue tuples, zero products are dropped.
IdempotentSystem joint_system(std::span<const SuperMatrix> ms, std::span<const EigenData> es);

struct PrimaryDecomposition {
  IdempotentSystem system;
  SuperMatrix basis;          // columns e_j(xi_{j,k}), invertible
  SuperMatrix basis_inverse;
  std::vector<int> block_ranks;
  /// restricted[i][j] = block j of basis^-1 * m_i * basis
  std::vector<std::vector<SuperMatrix>> restricted;
};

/// Adapted basis from idempotent images of a body eigenbasis; conjugation
/// by it is exactly block-diagonal.
PrimaryDecomposition primary_decomposition(const IdempotentSystem& system,
                                           std::span<const SuperMatrix> ms,
                                           double tol = 1e-9);

}  // namespace azu
