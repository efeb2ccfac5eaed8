// Command-line front end: validate/decompose/spectral/eval/verify/hull over
// JSON assignment files. Exact-backend output is byte-stable for a given
// input and version.

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "azu/serialize.hpp"

namespace {

using azu::Json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct Options {
  std::string command;
  std::string input_path;
  std::string backend_flag;  // empty = take from file (or env default)
  double tol = 1e-8;
  std::string merge = "anticommute";
  std::string format = "text";
  std::string out_path;
};

Json read_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) azu::fail(azu::ErrorCode::input, "cannot open input file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    azu::fail(azu::ErrorCode::parse, std::string("JSON parse error: ") + e.what());
  }
}

std::optional<azu::Backend> backend_override(const Options& opt) {
  if (opt.backend_flag.empty()) return std::nullopt;
  return azu::backend_from_name(opt.backend_flag);
}

Json config_json(const Options& opt, azu::Backend backend) {
  return Json{{"backend", azu::backend_name(backend)},
              {"merge", opt.merge},
              {"tol", azu::double_to_string(opt.tol)},
              {"format", opt.format}};
}

void print_header(std::ostream& out, const Options& opt, azu::Backend backend) {
  out << "# azumap " << opt.command << "\n";
  out << "# backend: " << azu::backend_name(backend) << "\n";
  out << "# merge: " << opt.merge << "\n";
  out << "# tol: " << azu::double_to_string(opt.tol) << "\n";
}

void render_matrix_text(std::ostream& out, const azu::SuperMatrix& m) {
  for (int i = 0; i < m.rank(); ++i) {
    out << "  [";
    for (int j = 0; j < m.rank(); ++j) {
      if (j) out << ", ";
      out << m.at(i, j).to_string();
    }
    out << "]\n";
  }
}

struct CommandResult {
  Json payload;
  std::string text;
  int exit_code = kExitOk;
};

CommandResult run_validate(const azu::AssignmentEta& eta) {
  azu::ValidationReport report = azu::validate(eta);
  CommandResult res;
  res.payload = azu::validation_report_to_json(report);
  std::ostringstream text;
  text << (report.passed ? "validation: PASS\n" : "validation: FAIL\n");
  for (const auto& issue : report.issues)
    text << "  violated: " << issue.relation << " (" << issue.detail << ")\n";
  res.text = text.str();
  res.exit_code = report.passed ? kExitOk : kExitValidation;
  return res;
}

CommandResult run_decompose(const azu::AssignmentEta& eta) {
  azu::MapHandle handle = azu::MapHandle::build(eta);
  CommandResult res;
  res.payload = azu::decomposition_report_to_json(handle);
  std::ostringstream text;
  const auto locus = handle.spectral_locus();
  text << "blocks: " << locus.blocks.size() << "\n";
  for (const auto& b : locus.blocks) {
    text << "  q = (";
    for (size_t i = 0; i < b.point.size(); ++i)
      text << (i ? ", " : "") << b.point[i].re_string();
    text << ")  rank " << b.rank << "  nilpotency (";
    for (size_t i = 0; i < b.nilpotency.size(); ++i)
      text << (i ? ", " : "") << b.nilpotency[i];
    text << ")\n";
  }
  text << "basis:\n";
  render_matrix_text(text, handle.decomposition().basis);
  res.text = text.str();
  return res;
}

CommandResult run_spectral(const azu::AssignmentEta& eta) {
  azu::MapHandle handle = azu::MapHandle::build(eta);
  azu::SpectralLocusReport report = handle.spectral_locus();
  CommandResult res;
  res.payload = azu::spectral_report_to_json(report);
  std::ostringstream text;
  for (const auto& b : report.blocks) {
    text << "q = (";
    for (size_t i = 0; i < b.point.size(); ++i)
      text << (i ? ", " : "") << b.point[i].re_string();
    text << ")  rank " << b.rank << "  nilpotency (";
    for (size_t i = 0; i < b.nilpotency.size(); ++i)
      text << (i ? ", " : "") << b.nilpotency[i];
    text << ")  truncation " << b.truncation_degree << "\n";
  }
  text << "total rank: " << report.total_rank << "\n";
  text << "nilpotency <= r_j(s1+1): yes\n";
  text << "nilpotency <= (r-1)(s1+1) = " << report.figure_bound << ": "
       << (report.figure_bound_holds ? "yes" : "no") << "\n";
  res.text = text.str();
  return res;
}

CommandResult run_eval(const azu::AssignmentEta& eta, const Json& input) {
  if (!input.contains("function"))
    azu::fail(azu::ErrorCode::input, "eval needs a 'function' field");
  azu::SuperFunction f =
      azu::superfunction_from_json(input.at("function"), eta.n, eta.s2, eta.backend);
  azu::MapHandle handle = azu::MapHandle::build(eta);
  azu::SuperMatrix image = handle.apply(f);
  CommandResult res;
  res.payload = Json{{"result", azu::supermatrix_to_json(image)}};
  std::ostringstream text;
  text << "phi(F) =\n";
  render_matrix_text(text, image);
  res.text = text.str();
  return res;
}

CommandResult run_verify(const azu::AssignmentEta& eta, const Json& input) {
  if (!input.contains("samples"))
    azu::fail(azu::ErrorCode::input, "verify needs a 'samples' field");
  const Json& samples = input.at("samples");
  if (!samples.is_array()) azu::fail(azu::ErrorCode::input, "'samples' must be a list");
  std::vector<std::pair<azu::SuperFunction, azu::SuperFunction>> pairs;
  for (const auto& s : samples) {
    if (!s.contains("f") || !s.contains("g"))
      azu::fail(azu::ErrorCode::input, "each sample needs 'f' and 'g'");
    pairs.emplace_back(
        azu::superfunction_from_json(s.at("f"), eta.n, eta.s2, eta.backend),
        azu::superfunction_from_json(s.at("g"), eta.n, eta.s2, eta.backend));
  }
  azu::MapHandle handle = azu::MapHandle::build(eta);
  azu::HomomorphismReport report = handle.verify_homomorphism(pairs);
  CommandResult res;
  res.payload = azu::homomorphism_report_to_json(report);
  bool ok = true;
  for (const auto& s : report.samples)
    ok = ok && ((s.exact_zero) || (s.mult_residual <= 1e-9 && s.add_residual <= 1e-9));
  std::ostringstream text;
  text << "samples: " << report.samples.size() << "\n";
  text << "max multiplicativity residual: "
       << azu::double_to_string(report.max_mult_residual) << "\n";
  text << "max additivity residual: " << azu::double_to_string(report.max_add_residual)
       << "\n";
  text << "homomorphism: " << (ok ? "PASS" : "FAIL") << "\n";
  res.text = text.str();
  res.exit_code = ok ? kExitOk : kExitValidation;
  return res;
}

CommandResult run_hull(const Json& input, const Options& opt) {
  azu::Backend backend = backend_override(opt).value_or(azu::backend_from_name(
      input.contains("backend") ? input.at("backend").get<std::string>() : "exact"));
  if (!input.contains("lambda"))
    azu::fail(azu::ErrorCode::input, "hull needs a 'lambda' field");
  const Json& lam = input.at("lambda");
  if (!lam.is_array() || lam.empty())
    azu::fail(azu::ErrorCode::input, "'lambda' must be a nonempty list of matrices");
  std::vector<azu::SuperMatrix> lambda;
  for (const auto& m : lam)
    lambda.push_back(azu::supermatrix_from_json(m, backend));
  std::vector<std::optional<azu::EigenData>> hints;
  if (input.contains("eigen_hints")) {
    const Json& h = input.at("eigen_hints");
    if (!h.is_array() || h.size() != lam.size())
      azu::fail(azu::ErrorCode::input, "'eigen_hints' must align with 'lambda'");
    for (const auto& e : h)
      hints.push_back(e.is_null() ? std::optional<azu::EigenData>{}
                                  : azu::eigen_data_from_json(e, backend));
  }
  std::vector<azu::SmoothFunction> fns;
  Json results = Json::array();
  std::ostringstream text;
  if (input.contains("functions")) {
    const Json& fs = input.at("functions");
    if (!fs.is_array()) azu::fail(azu::ErrorCode::input, "'functions' must be a list");
    for (const auto& expr : fs) {
      if (!expr.is_string())
        azu::fail(azu::ErrorCode::input, "'functions' entries must be expression strings");
      fns.push_back(azu::SmoothFunction::parse(expr.get<std::string>(),
                                               static_cast<int>(lambda.size()), backend));
    }
    for (size_t i = 0; i < fns.size(); ++i) {
      azu::SuperMatrix value = azu::cinfty_hull_eval(lambda, fns[i], hints, opt.tol);
      results.push_back(Json{{"expr", fs[i]}, {"value", azu::supermatrix_to_json(value)}});
      text << "f" << (i + 1) << "(Lambda) =\n";
      render_matrix_text(text, value);
    }
  }
  azu::AdmissibilityReport report =
      azu::check_admissibility_axioms(lambda, fns, opt.tol);
  CommandResult res;
  res.payload = Json{{"values", std::move(results)},
                     {"admissibility", azu::admissibility_report_to_json(report)}};
  text << "admissibility: " << (report.passed ? "PASS" : "FAIL") << "\n";
  res.text = text.str();
  res.exit_code = report.passed ? kExitOk : kExitValidation;
  return res;
}

int dispatch(const Options& opt) {
  Json input = read_input(opt.input_path);
  azu::MergeConvention merge = azu::merge_convention_from_name(opt.merge);

  CommandResult result;
  if (opt.command == "hull") {
    result = run_hull(input, opt);
  } else {
    azu::AssignmentEta eta =
        azu::assignment_from_json(input, backend_override(opt), opt.tol, merge);
    if (opt.command == "validate")
      result = run_validate(eta);
    else if (opt.command == "decompose")
      result = run_decompose(eta);
    else if (opt.command == "spectral")
      result = run_spectral(eta);
    else if (opt.command == "eval")
      result = run_eval(eta, input);
    else if (opt.command == "verify")
      result = run_verify(eta, input);
    else
      azu::fail(azu::ErrorCode::input, "unknown command '" + opt.command + "'");
  }

  azu::Backend shown_backend = azu::Backend::exact;
  if (auto o = backend_override(opt))
    shown_backend = *o;
  else if (input.is_object() && input.contains("backend"))
    shown_backend = azu::backend_from_name(input.at("backend").get<std::string>());

  std::ostringstream out;
  if (opt.format == "json") {
    Json document{{"command", opt.command},
                  {"config", config_json(opt, shown_backend)},
                  {"report", result.payload}};
    out << document.dump(2) << "\n";
  } else {
    print_header(out, opt, shown_backend);
    out << result.text;
  }

  if (opt.out_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(opt.out_path);
    if (!f) azu::fail(azu::ErrorCode::input, "cannot open output file '" + opt.out_path + "'");
    f << out.str();
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Grassmann/matrix-algebra maps at a superpoint"};
  app.require_subcommand(1);

  Options opt;
  for (const char* name :
       {"validate", "decompose", "spectral", "eval", "verify", "hull"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("input", opt.input_path, "JSON input file")->required();
    sub->add_option("--backend", opt.backend_flag, "exact|numeric (overrides the file)")
        ->envname("AZUMAP_BACKEND");
    sub->add_option("--tol", opt.tol, "numeric tolerance");
    sub->add_option("--merge", opt.merge, "anticommute|commute");
    sub->add_option("--format", opt.format, "text|json");
    sub->add_option("--out", opt.out_path, "write the report to a file");
    sub->callback([&opt, name] { opt.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  try {
    return dispatch(opt);
  } catch (const azu::Error& e) {
    std::cerr << "error (" << azu::error_code_name(e.code()) << "): " << e.what() << "\n";
    switch (e.code()) {
      case azu::ErrorCode::parse:
      case azu::ErrorCode::input:
        return kExitInput;
      case azu::ErrorCode::internal:
        return kExitInternal;
      default:
        return kExitValidation;
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
