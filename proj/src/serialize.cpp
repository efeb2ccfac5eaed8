#include "azu/serialize.hpp"

#include <bit>
#include <cstdlib>

namespace azu {

namespace {

const Json& require_field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name))
    fail(ErrorCode::input, std::string("missing field '") + name + "'");
  return j.at(name);
}

int as_int(const Json& j, const char* name) {
  const Json& v = require_field(j, name);
  if (!v.is_number_integer())
    fail(ErrorCode::input, std::string("field '") + name + "' must be an integer");
  return v.get<int>();
}

std::string as_string(const Json& j, const char* name) {
  const Json& v = require_field(j, name);
  if (!v.is_string())
    fail(ErrorCode::input, std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

Json coefficient_to_json(const Coefficient& c) {
  return Json{{"re", c.re_string()}, {"im", c.im_string()}};
}

Coefficient coefficient_from_json(const Json& j, Backend b) {
  std::string re = "0", im = "0";
  if (j.is_string()) {
    re = j.get<std::string>();
  } else if (j.is_number()) {
    re = j.dump();
  } else {
    if (j.contains("re")) re = j.at("re").is_string() ? j.at("re").get<std::string>()
                                                      : j.at("re").dump();
    if (j.contains("im")) im = j.at("im").is_string() ? j.at("im").get<std::string>()
                                                      : j.at("im").dump();
  }
  if (b == Backend::exact)
    return Coefficient::exact(rational_from_string(re), rational_from_string(im));
  // strtod is correctly rounded, unlike mpq's truncating get_d
  auto to_double = [](const std::string& text) {
    size_t slash = text.find('/');
    rational_from_string(text);  // reuse the exact parser for validation
    if (slash == std::string::npos) return std::strtod(text.c_str(), nullptr);
    return std::strtod(text.substr(0, slash).c_str(), nullptr) /
           std::strtod(text.substr(slash + 1).c_str(), nullptr);
  };
  return Coefficient::numeric({to_double(re), to_double(im)});
}

Json grassmann_to_json(const GrassmannElement& x) {
  Json terms = Json::array();
  for (const auto& [mask, c] : x.terms()) {
    Json subset = Json::array();
    for (int i = 0; i < 64; ++i)
      if (mask & (std::uint64_t(1) << i)) subset.push_back(i + 1);
    terms.push_back(Json{{"subset", std::move(subset)},
                         {"re", c.re_string()},
                         {"im", c.im_string()}});
  }
  return terms;
}

GrassmannElement grassmann_from_json(const Json& j, const AlgebraSignature& sig) {
  if (!j.is_array()) fail(ErrorCode::input, "Grassmann element must be a list of terms");
  GrassmannElement x = GrassmannElement::zero(sig);
  for (const auto& term : j) {
    const Json& subset = require_field(term, "subset");
    if (!subset.is_array()) fail(ErrorCode::input, "field 'subset' must be a list");
    std::uint64_t mask = 0;
    int prev = 0;
    for (const auto& g : subset) {
      if (!g.is_number_integer())
        fail(ErrorCode::input, "field 'subset' must hold generator indices");
      int idx = g.get<int>();
      if (idx <= prev)
        fail(ErrorCode::input, "field 'subset' must be strictly ascending");
      if (idx > sig.generators)
        fail(ErrorCode::input, "generator index " + std::to_string(idx) +
                                   " exceeds s = " + std::to_string(sig.generators));
      mask |= std::uint64_t(1) << (idx - 1);
      prev = idx;
    }
    x += GrassmannElement::monomial(sig, mask, coefficient_from_json(term, sig.backend));
  }
  return x;
}

Json supermatrix_to_json(const SuperMatrix& m) {
  Json entries = Json::array();
  for (int i = 0; i < m.rank(); ++i)
    for (int j = 0; j < m.rank(); ++j) entries.push_back(grassmann_to_json(m.at(i, j)));
  return Json{{"r", m.rank()}, {"s", m.signature().generators}, {"entries", std::move(entries)}};
}

SuperMatrix supermatrix_from_json(const Json& j, Backend b, MergeConvention merge) {
  int r = as_int(j, "r");
  int s = as_int(j, "s");
  if (r < 0) fail(ErrorCode::input, "field 'r' must be nonnegative");
  AlgebraSignature sig = AlgebraSignature::plain(s, b);
  sig.convention = merge;
  const Json& entries = require_field(j, "entries");
  if (!entries.is_array() || static_cast<int>(entries.size()) != r * r)
    fail(ErrorCode::input, "field 'entries' must hold r*r Grassmann elements (row-major)");
  SuperMatrix m(r, sig);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < r; ++k)
      m.at(i, k) = grassmann_from_json(entries[static_cast<size_t>(i * r + k)], sig);
  return m;
}

Json eigen_data_to_json(const EigenData& e) {
  Json values = Json::array();
  for (const auto& v : e.values) values.push_back(coefficient_to_json(v));
  return Json{{"values", std::move(values)},
              {"multiplicities", e.multiplicities},
              {"provenance", eigen_provenance_name(e.provenance)}};
}

EigenData eigen_data_from_json(const Json& j, Backend b) {
  EigenData e;
  const Json& values = require_field(j, "values");
  if (!values.is_array()) fail(ErrorCode::input, "field 'values' must be a list");
  for (const auto& v : values) e.values.push_back(coefficient_from_json(v, b));
  const Json& mults = require_field(j, "multiplicities");
  if (!mults.is_array()) fail(ErrorCode::input, "field 'multiplicities' must be a list");
  for (const auto& m : mults) {
    if (!m.is_number_integer() || m.get<int>() < 1)
      fail(ErrorCode::input, "multiplicities must be positive integers");
    e.multiplicities.push_back(m.get<int>());
  }
  if (e.values.size() != e.multiplicities.size())
    fail(ErrorCode::input, "'values' and 'multiplicities' must have equal length");
  e.provenance = EigenProvenance::user_supplied;
  return e;
}

Json assignment_to_json(const AssignmentEta& eta) {
  Json y = Json::array(), theta = Json::array();
  for (const auto& m : eta.even) y.push_back(supermatrix_to_json(m));
  for (const auto& m : eta.odd) theta.push_back(supermatrix_to_json(m));
  Json out{{"n", eta.n},        {"s1", eta.s1},
           {"s2", eta.s2},      {"r", eta.r},
           {"backend", backend_name(eta.backend)},
           {"matrices", Json{{"y", std::move(y)}, {"theta", std::move(theta)}}}};
  bool any_hint = false;
  for (const auto& h : eta.eigen_hints) any_hint = any_hint || h.has_value();
  if (any_hint) {
    Json hints = Json::array();
    for (const auto& h : eta.eigen_hints)
      hints.push_back(h ? eigen_data_to_json(*h) : Json(nullptr));
    out["eigen_hints"] = std::move(hints);
  }
  return out;
}

AssignmentEta assignment_from_json(const Json& j, std::optional<Backend> backend_override,
                                   double tolerance, MergeConvention merge) {
  AssignmentEta eta;
  eta.n = as_int(j, "n");
  eta.s1 = as_int(j, "s1");
  eta.s2 = as_int(j, "s2");
  eta.r = as_int(j, "r");
  eta.backend = backend_override
                    ? *backend_override
                    : backend_from_name(j.contains("backend") ? as_string(j, "backend")
                                                              : "exact");
  eta.merge = merge;
  eta.tolerance = tolerance;

  const Json& matrices = require_field(j, "matrices");
  const Json& y = require_field(matrices, "y");
  if (!y.is_array() || static_cast<int>(y.size()) != eta.n)
    fail(ErrorCode::input, "field 'matrices.y' must hold n matrices");
  for (const auto& m : y) {
    SuperMatrix sm = supermatrix_from_json(m, eta.backend, merge);
    if (sm.rank() != eta.r || sm.signature().generators != eta.s1)
      fail(ErrorCode::input, "matrix in 'matrices.y' disagrees with (r, s1)");
    eta.even.push_back(std::move(sm));
  }
  if (matrices.contains("theta")) {
    const Json& theta = matrices.at("theta");
    if (!theta.is_array() || static_cast<int>(theta.size()) != eta.s2)
      fail(ErrorCode::input, "field 'matrices.theta' must hold s2 matrices");
    for (const auto& m : theta) {
      SuperMatrix sm = supermatrix_from_json(m, eta.backend, merge);
      if (sm.rank() != eta.r || sm.signature().generators != eta.s1)
        fail(ErrorCode::input, "matrix in 'matrices.theta' disagrees with (r, s1)");
      eta.odd.push_back(std::move(sm));
    }
  } else if (eta.s2 != 0) {
    fail(ErrorCode::input, "s2 > 0 requires field 'matrices.theta'");
  }

  if (j.contains("eigen_hints")) {
    const Json& hints = j.at("eigen_hints");
    if (!hints.is_array() || static_cast<int>(hints.size()) != eta.n)
      fail(ErrorCode::input, "field 'eigen_hints' must hold one entry per even matrix");
    for (const auto& h : hints) {
      if (h.is_null())
        eta.eigen_hints.emplace_back(std::nullopt);
      else
        eta.eigen_hints.emplace_back(eigen_data_from_json(h, eta.backend));
    }
  }
  return eta;
}

SuperFunction superfunction_from_json(const Json& j, int n, int s2, Backend b) {
  if (!j.is_array())
    fail(ErrorCode::input, "super function must be a list of components");
  SuperFunction f(n, s2);
  for (const auto& comp : j) {
    std::uint64_t mask = 0;
    if (comp.contains("odd_monomial")) {
      const Json& mono = comp.at("odd_monomial");
      if (!mono.is_array()) fail(ErrorCode::input, "field 'odd_monomial' must be a list");
      int prev = 0;
      for (const auto& l : mono) {
        if (!l.is_number_integer())
          fail(ErrorCode::input, "field 'odd_monomial' must hold indices");
        int idx = l.get<int>();
        if (idx <= prev) fail(ErrorCode::input, "field 'odd_monomial' must be ascending");
        if (idx > s2)
          fail(ErrorCode::input, "odd index " + std::to_string(idx) + " exceeds s2");
        mask |= std::uint64_t(1) << (idx - 1);
        prev = idx;
      }
    }
    SmoothFunction g = SmoothFunction::parse(as_string(comp, "coefficient_expr"), n, b);
    auto existing = f.component(mask);
    f.set_component(mask, existing ? (*existing + g) : g);
  }
  return f;
}

Json validation_report_to_json(const ValidationReport& r) {
  Json issues = Json::array();
  for (const auto& issue : r.issues)
    issues.push_back(Json{{"relation", issue.relation}, {"detail", issue.detail}});
  return Json{{"passed", r.passed}, {"issues", std::move(issues)}};
}

Json spectral_report_to_json(const SpectralLocusReport& r) {
  Json blocks = Json::array();
  Json pushforward = Json::array();
  for (const auto& b : r.blocks) {
    Json q = Json::array();
    for (const auto& c : b.point) q.push_back(c.re_string());
    blocks.push_back(Json{{"q", q},
                          {"rank", b.rank},
                          {"nilpotency", b.nilpotency},
                          {"truncation_degree", b.truncation_degree}});
    pushforward.push_back(Json{{"q", q}, {"rank", b.rank}});
  }
  return Json{{"blocks", std::move(blocks)},
              {"pushforward", std::move(pushforward)},
              {"total_rank", r.total_rank},
              {"charpoly_bound", r.charpoly_bound},
              {"figure_bound", r.figure_bound},
              {"figure_bound_holds", r.figure_bound_holds}};
}

Json decomposition_report_to_json(const MapHandle& handle) {
  SpectralLocusReport locus = handle.spectral_locus();
  const PrimaryDecomposition& pd = handle.decomposition();
  Json blocks = Json::array();
  for (size_t j = 0; j < locus.blocks.size(); ++j) {
    const auto& b = locus.blocks[j];
    Json q = Json::array();
    for (const auto& c : b.point) q.push_back(c.re_string());
    blocks.push_back(Json{{"label", q},
                          {"rank", b.rank},
                          {"nilpotency", b.nilpotency}});
  }
  return Json{{"blocks", std::move(blocks)},
              {"block_ranks", pd.block_ranks},
              {"basis", supermatrix_to_json(pd.basis)}};
}

Json homomorphism_report_to_json(const HomomorphismReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples)
    samples.push_back(Json{{"mult_residual", s.mult_residual},
                           {"add_residual", s.add_residual},
                           {"exact_zero", s.exact_zero}});
  return Json{{"samples", std::move(samples)},
              {"max_mult_residual", r.max_mult_residual},
              {"max_add_residual", r.max_add_residual},
              {"all_exact_zero", r.all_exact_zero}};
}

Json admissibility_report_to_json(const AdmissibilityReport& r) {
  auto axiom = [](const AxiomResult& a) {
    return Json{{"passed", a.passed}, {"max_residual", a.max_residual}, {"notes", a.notes}};
  };
  return Json{{"commutes_with_inputs", axiom(r.commutes_with_inputs)},
              {"outputs_commute", axiom(r.outputs_commute)},
              {"composition", axiom(r.composition)},
              {"projection", axiom(r.projection)},
              {"passed", r.passed}};
}

}  // namespace azu
