#pragma once

#include "json.hpp"

#include "azu/azumaya_map.hpp"

namespace azu {

using Json = nlohmann::ordered_json;

// values
Json coefficient_to_json(const Coefficient& c);
Coefficient coefficient_from_json(const Json& j, Backend b);
Json grassmann_to_json(const GrassmannElement& x);
GrassmannElement grassmann_from_json(const Json& j, const AlgebraSignature& sig);
Json supermatrix_to_json(const SuperMatrix& m);
SuperMatrix supermatrix_from_json(const Json& j, Backend b,
                                  MergeConvention merge = MergeConvention::anticommute);

// assignment input file
Json assignment_to_json(const AssignmentEta& eta);
AssignmentEta assignment_from_json(const Json& j, std::optional<Backend> backend_override,
                                   double tolerance, MergeConvention merge);

// super function: [{"odd_monomial": [l1,l2,...], "coefficient_expr": "..."}]
SuperFunction superfunction_from_json(const Json& j, int n, int s2, Backend b);

// reports
Json validation_report_to_json(const ValidationReport& r);
Json spectral_report_to_json(const SpectralLocusReport& r);
Json decomposition_report_to_json(const MapHandle& handle);
Json homomorphism_report_to_json(const HomomorphismReport& r);
Json admissibility_report_to_json(const AdmissibilityReport& r);
Json eigen_data_to_json(const EigenData& e);
EigenData eigen_data_from_json(const Json& j, Backend b);

}  // namespace azu
