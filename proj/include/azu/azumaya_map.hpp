#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "azu/smoothfn.hpp"
#include "azu/spectral.hpp"
#include "azu/supermatrix.hpp"

namespace azu {

/// The assignment data: images of the even coordinates y^i and of the odd
/// coordinates vartheta^l, all r x r over the same s1-generator algebra.
struct AssignmentEta {
  int n = 0;
  int s1 = 0;
  int s2 = 0;
  int r = 0;
  Backend backend = Backend::exact;
  MergeConvention merge = MergeConvention::anticommute;
  double tolerance = 1e-8;
  std::vector<SuperMatrix> even;  // m_1..m_n
  std::vector<SuperMatrix> odd;   // Theta_1..Theta_s2
  std::vector<std::optional<EigenData>> eigen_hints;  // aligned with `even`, may be empty

  AlgebraSignature signature() const { return AlgebraSignature::plain(s1, backend); }
};

struct ValidationIssue {
  std::string relation;  // e.g. "m1*m2 = m2*m1"
  std::string detail;
};

struct ValidationReport {
  bool passed = true;
  std::vector<ValidationIssue> issues;
};

/// Checks conditions (1) (commutation pattern) and (2) (real body spectra)
/// exactly; violations are report entries, not exceptions.
ValidationReport validate(const AssignmentEta& eta);

struct SpectralBlock {
  std::vector<Coefficient> point;  // q_j
  int rank = 0;                    // r_j
  std::vector<int> nilpotency;     // nu_j^i, per even matrix
  int truncation_degree = 0;       // N_j = sum_i (nu_j^i - 1) + 1
};

struct SpectralLocusReport {
  std::vector<SpectralBlock> blocks;
  int total_rank = 0;
  int charpoly_bound = 0;      // r_j(s1+1) holds per block by construction
  int figure_bound = 0;        // (r-1)(s1+1)
  bool figure_bound_holds = false;
};

/// Blockwise Taylor evaluation of smooth functions on a commuting family
/// with real spectra: f |-> sum_j sum_alpha (1/alpha!) d^alpha f(q_j) N_j^alpha.
class BlockTaylorEngine {
 public:
  BlockTaylorEngine(std::vector<SuperMatrix> ms, std::vector<EigenData> es);

  int family_size() const { return static_cast<int>(ms_.size()); }
  const IdempotentSystem& system() const { return system_; }
  const std::vector<SuperMatrix>& matrices() const { return ms_; }
  const std::vector<EigenData>& eigen() const { return es_; }

  /// Evaluate on the requested backend (numeric forces conversion).
  SuperMatrix evaluate(const SmoothFunction& f, Backend wb) const;
  SpectralLocusReport locus() const;

 private:
  struct Block {
    std::vector<Coefficient> point;
    int rank = 0;
    std::vector<std::vector<SuperMatrix>> offset_powers;  // [i][k] = N_i^k, [i][0] = e
    std::vector<int> nilpotency;
    int cap = 0;
  };

  std::vector<SuperMatrix> ms_;
  std::vector<EigenData> es_;
  IdempotentSystem system_;
  std::vector<Block> blocks_;
};

struct HomomorphismSample {
  double mult_residual = 0.0;
  double add_residual = 0.0;
  bool exact_zero = false;
};

struct HomomorphismReport {
  std::vector<HomomorphismSample> samples;
  double max_mult_residual = 0.0;
  double max_add_residual = 0.0;
  bool all_exact_zero = true;
};

/// The built map: cached joint idempotent system and primary decomposition,
/// plus the evaluation function.
class MapHandle {
 public:
  /// Requires validate(eta).passed; needs-hint surfaces here when the exact
  /// spectrum cannot be labeled.
  static MapHandle build(AssignmentEta eta);

  const AssignmentEta& assignment() const { return eta_; }
  const IdempotentSystem& system() const { return engine_.system(); }
  const PrimaryDecomposition& decomposition() const { return decomposition_; }

  /// phi(F) = sum_I phi(f_I) Theta^I; polynomial components evaluate
  /// exactly on the exact backend, any numeric component switches the
  /// whole call to the numeric backend.
  SuperMatrix apply(const SuperFunction& f) const;
  SuperMatrix apply_even(const SmoothFunction& f) const;

  HomomorphismReport verify_homomorphism(
      std::span<const std::pair<SuperFunction, SuperFunction>> samples) const;

  SpectralLocusReport spectral_locus() const { return engine_.locus(); }

  /// Ordered product Theta_{l1}...Theta_{lk} for an ascending index mask.
  SuperMatrix theta_monomial(std::uint64_t mask, Backend wb) const;

 private:
  MapHandle(AssignmentEta eta, BlockTaylorEngine engine, PrimaryDecomposition decomposition)
      : eta_(std::move(eta)), engine_(std::move(engine)),
        decomposition_(std::move(decomposition)) {}

  AssignmentEta eta_;
  BlockTaylorEngine engine_;
  PrimaryDecomposition decomposition_;
};

/// f(r_1,...,r_l) for a commuting family with real spectra, through the same
/// blockwise machinery; the result commutes with every input.
SuperMatrix cinfty_hull_eval(std::span<const SuperMatrix> lambda, const SmoothFunction& f,
                             std::span<const std::optional<EigenData>> hints = {},
                             double tolerance = 1e-8);

struct AxiomResult {
  bool passed = true;
  double max_residual = 0.0;
  std::vector<std::string> notes;
};

struct AdmissibilityReport {
  AxiomResult commutes_with_inputs;  // condition (1)
  AxiomResult outputs_commute;       // condition (2)
  AxiomResult composition;           // condition (3)
  AxiomResult projection;            // condition (4)
  bool passed = true;
};

AdmissibilityReport check_admissibility_axioms(std::span<const SuperMatrix> lambda,
                                               std::span<const SmoothFunction> samples,
                                               double tolerance = 1e-8);

}  // namespace azu
