// Drives the built CLI against the golden inputs: byte-compares reports with
// the committed expected outputs and checks the documented exit codes.
// argv[1] = azumap path, argv[2] = golden directory.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "FAIL: " << what << "\n";
  }
}

int run_command(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: cli_golden <azumap> <golden-dir>\n";
    return 2;
  }
  std::string azumap = argv[1];
  std::string golden = argv[2];

  // golden-file comparison for decompose/spectral on each committed input
  std::vector<std::string> inputs = {"diag12", "nilpotent2", "scalar_soul"};
  for (const auto& name : inputs) {
    for (const std::string cmd : {"decompose", "spectral"}) {
      std::string out_path = "/tmp/cli_golden_" + name + "_" + cmd + ".json";
      int rc = run_command(azumap + " " + cmd + " " + golden + "/" + name +
                           ".json --format json --out " + out_path);
      expect(rc == 0, cmd + " on " + name + " exited " + std::to_string(rc));
      std::string expected_path = golden + "/expected_" + name + "_" + cmd + ".json";
      std::string expected = slurp(expected_path);
      std::string actual = slurp(out_path);
      expect(!expected.empty(), "missing golden file " + expected_path);
      expect(actual == expected, cmd + " output differs from " + expected_path);
    }
  }

  // validate: pass and fail exit codes
  expect(run_command(azumap + " validate " + golden + "/diag12.json --out /dev/null") == 0,
         "validate should accept diag12");
  write_file("/tmp/cli_bad_theta.json", R"({
    "n": 1, "s1": 0, "s2": 1, "r": 2, "backend": "exact",
    "matrices": {
      "y": [{"r": 2, "s": 0, "entries": [
        [{"subset": [], "re": "1", "im": "0"}], [], [],
        [{"subset": [], "re": "2", "im": "0"}]]}],
      "theta": [{"r": 2, "s": 0, "entries": [
        [{"subset": [], "re": "1", "im": "0"}], [], [],
        [{"subset": [], "re": "1", "im": "0"}]]}]
    }
  })");
  int rc_validate = run_command(azumap + " validate /tmp/cli_bad_theta.json --out /tmp/cli_validate.out");
  expect(rc_validate == 1, "validate on a violating assignment should exit 1, got " +
                               std::to_string(rc_validate));
  std::string report = slurp("/tmp/cli_validate.out");
  expect(report.find("Theta1") != std::string::npos,
         "validation report should name the offending Theta pair");

  // eval of F = y1 echoes the assigned matrix
  write_file("/tmp/cli_eval.json", slurp(golden + "/diag12.json"));
  {
    std::string text = slurp("/tmp/cli_eval.json");
    text.insert(text.rfind('}'),
                R"(, "function": [{"odd_monomial": [], "coefficient_expr": "y1"}])");
    write_file("/tmp/cli_eval.json", text);
  }
  expect(run_command(azumap + " eval /tmp/cli_eval.json --format json --out /tmp/cli_eval.out") == 0,
         "eval should succeed");
  std::string eval_out = slurp("/tmp/cli_eval.out");
  expect(eval_out.find("\"re\": \"2\"") != std::string::npos,
         "eval of y1 should echo the diagonal entry 2");

  // input errors exit with 2
  write_file("/tmp/cli_garbage.json", "this is not json");
  expect(run_command(azumap + " decompose /tmp/cli_garbage.json --out /dev/null") == 2,
         "garbage input should exit 2");
  write_file("/tmp/cli_missing_field.json", R"({"n": 1, "s1": 0, "s2": 0})");
  expect(run_command(azumap + " decompose /tmp/cli_missing_field.json --out /dev/null") == 2,
         "schema violation should exit 2");
  expect(run_command(azumap + " decompose /tmp/does_not_exist.json --out /dev/null") == 2,
         "missing file should exit 2");

  // hull command end to end
  write_file("/tmp/cli_hull.json", R"({
    "backend": "exact",
    "lambda": [{"r": 2, "s": 1, "entries": [
      [{"subset": [], "re": "1", "im": "0"}], [], [],
      [{"subset": [], "re": "2", "im": "0"}]]}],
    "functions": ["x1^2 - x1", "x1^3"]
  })");
  expect(run_command(azumap + " hull /tmp/cli_hull.json --format json --out /tmp/cli_hull.out") == 0,
         "hull should pass on a diagonal matrix");
  std::string hull_out = slurp("/tmp/cli_hull.out");
  expect(hull_out.find("\"passed\": true") != std::string::npos,
         "hull admissibility should pass");

  if (failures == 0) std::puts("cli_golden: all checks passed");
  return failures == 0 ? 0 : 1;
}
