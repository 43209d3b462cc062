#pragma once

// Command-line front end: JSON problem-spec and mechanism loading, the
// subcommand implementations (solve, verify, compare, vertices, project),
// and deterministic report emission. Reports are JSON objects with
// "schema": 1; numbers are printed with up to 17 significant digits so
// equal inputs produce byte-identical output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpsignal/core.hpp"
#include "dpsignal/mechanisms.hpp"

namespace dpsignal {

// Parse or validation failure in an input file. what() begins with
// "<file>:<line>: " for the offending location when known.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Options block of a problem spec, overridable from the command line.
struct SpecOptions {
  double tolerance = kLogTol;
  int max_n = kDefaultStateVertexCap;
  int max_databases = kDefaultDatabaseVertexCap;
};

// A loaded problem: privacy budget, exactly one of a count prior or a
// database prior, and the decision problem.
struct ProblemSpec {
  EpsilonBudget epsilon;
  std::optional<StatePrior> state_prior;
  std::optional<DatabasePrior> database_prior;
  DecisionProblem problem;
  SpecOptions options;

  bool oblivious() const { return state_prior.has_value(); }
};

// Loads and validates a problem spec file. Throws SpecError on malformed
// JSON, missing or ill-typed fields, non-normalized priors, or payoff-shape
// mismatches.
ProblemSpec load_problem_spec(const std::string& path);

// Loads a mechanism file: {"schema": 1, "label", "outputs", "rows"}.
ObliviousMechanism load_mechanism(const std::string& path);

// Exit codes: 0 success, 2 input/validation error, 3 size cap exceeded.
// Usage errors from flag parsing also exit 2.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSpecError = 2;
inline constexpr int kExitCapError = 3;

// Runs the full CLI. out/err receive the report and diagnostics.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Formats a double with up to 17 significant digits, shortest round-trip
// not required; deterministic across runs.
std::string format_number(double value);

}  // namespace dpsignal
