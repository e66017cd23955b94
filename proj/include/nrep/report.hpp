#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "nrep/lattice.hpp"
#include "nrep/pauli.hpp"

namespace nrep {

enum class Task { spectrum, blindness, kl, fermion_verify, stabilizer, counterexample, golden };
enum class ModelKind { compass, toric, custom };

std::string to_string(Task t);
Task task_from_string(const std::string& s);
ModelKind model_from_string(const std::string& s);
Boundary boundary_from_string(const std::string& s);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  ModelKind model = ModelKind::compass;
  CompassParams compass;
  int toric_l = 2;
  std::string custom_file;

  Task task = Task::counterexample;
  int m = 2;
  double tol = 1e-9;
  double degeneracy_tol = 1e-8;
  int threads = 0;

  std::string out;            // report path; empty = stdout summary only
  std::string dump_spectrum;  // spectrum task
  std::string dump_ground;    // spectrum task
  std::string golden_check;   // golden task: compare against this file

  /// Throws ConfigError when a task lacks what it needs.
  void validate() const;
};

struct RunResult {
  int exit_code = 0;  // 0 pass, 2 certification failure, 1 error
  json report;
  std::string summary;
};

/// Executes the configured pipeline. Never throws: errors become exit code 1
/// with {"error": message}.
RunResult run(const RunConfig& config);

/// Per-field numeric tolerances keyed by JSON object key; other numbers use
/// `fallback`.
struct GoldenTolerances {
  double fallback = 1e-9;
  std::map<std::string, double> per_field;
};

class GoldenSchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Elementwise comparison. Numbers within tolerance, everything else equal.
/// Throws GoldenSchemaError when the two documents differ in shape.
bool compare_golden(const json& report, const json& golden, const GoldenTolerances& tol = {},
                    std::string* first_mismatch = nullptr);

/// Derived reference quantities for the compass model: E0, gap, degeneracy,
/// sector minima, parity-basis amplitudes and a pair marginal of |C0>.
json golden_report(const CompassParams& params);

/// Tolerances used by `golden --check` and the test suite.
GoldenTolerances default_golden_tolerances();

}  // namespace nrep
