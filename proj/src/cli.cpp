#include "dpsignal/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string_view>

#include "CLI11.hpp"
#include "json.hpp"

#include "dpsignal/decision.hpp"
#include "dpsignal/design.hpp"
#include "dpsignal/orders.hpp"
#include "dpsignal/polytope.hpp"

namespace dpsignal {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Deterministic JSON emission. Keys are written in a fixed order by the
// report builders; numbers use up to 17 significant digits so identical
// inputs yield byte-identical reports.

class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& out) : out_(out) {}

  void begin_object() { sep(); out_ << '{'; first_.push_back(true); }
  void end_object() { out_ << '}'; first_.pop_back(); }
  void begin_array() { sep(); out_ << '['; first_.push_back(true); }
  void end_array() { out_ << ']'; first_.pop_back(); }
  void key(std::string_view k) {
    sep();
    literal(k);
    out_ << ':';
    after_key_ = true;
  }
  void number(double v) {
    sep();
    if (std::isnan(v)) {
      out_ << "\"nan\"";
    } else if (std::isinf(v)) {
      out_ << (v > 0 ? "\"inf\"" : "\"-inf\"");
    } else {
      out_ << format_number(v);
    }
  }
  void integer(long long v) {
    sep();
    out_ << v;
  }
  void boolean(bool v) {
    sep();
    out_ << (v ? "true" : "false");
  }
  void text(std::string_view v) {
    sep();
    literal(v);
  }
  void null() {
    sep();
    out_ << "null";
  }

 private:
  void sep() {
    if (after_key_) {
      after_key_ = false;
      return;
    }
    if (!first_.empty()) {
      if (!first_.back()) out_ << ',';
      first_.back() = false;
    }
  }
  void literal(std::string_view s) {
    out_ << '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ << "\\\""; break;
        case '\\': out_ << "\\\\"; break;
        case '\n': out_ << "\\n"; break;
        case '\t': out_ << "\\t"; break;
        case '\r': out_ << "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out_ << buf;
          } else {
            out_ << c;
          }
      }
    }
    out_ << '"';
  }

  std::ostream& out_;
  std::vector<bool> first_;
  bool after_key_ = false;
};

void emit_vector(JsonWriter& w, const std::vector<double>& v) {
  w.begin_array();
  for (double x : v) w.number(x);
  w.end_array();
}

void emit_int_vector(JsonWriter& w, const std::vector<int>& v) {
  w.begin_array();
  for (int x : v) w.integer(x);
  w.end_array();
}

// ---------------------------------------------------------------------------
// Spec loading with file:line diagnostics.

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(path + ": cannot read file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int line_of_offset(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

int line_of_key(const std::string& text, const std::string& k) {
  const std::size_t pos = text.find("\"" + k + "\"");
  return pos == std::string::npos ? 1 : line_of_offset(text, pos);
}

[[noreturn]] void fail_at(const std::string& path, const std::string& text,
                          const std::string& k, const std::string& message) {
  throw SpecError(path + ":" + std::to_string(line_of_key(text, k)) + ": " + message);
}

json parse_json(const std::string& path, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(path + ":" + std::to_string(line_of_offset(text, e.byte)) +
                    ": " + e.what());
  }
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& path, const std::string& text) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail_at(path, text, item.key(), "unknown key \"" + item.key() + "\"");
  }
}

void require_schema(const json& j, const std::string& path, const std::string& text) {
  if (!j.is_object()) throw SpecError(path + ":1: top level must be an object");
  if (!j.contains("schema")) fail_at(path, text, "schema", "missing \"schema\"");
  if (!j["schema"].is_number_integer() || j["schema"].get<int>() != 1) {
    fail_at(path, text, "schema", "\"schema\" must be 1");
  }
}

double read_number(const json& j, const char* k, const std::string& path,
                   const std::string& text) {
  if (!j.contains(k)) fail_at(path, text, k, std::string("missing \"") + k + "\"");
  if (!j[k].is_number()) fail_at(path, text, k, std::string("\"") + k + "\" must be a number");
  return j[k].get<double>();
}

std::vector<double> read_number_array(const json& value, const char* k,
                                      const std::string& path, const std::string& text) {
  if (!value.is_array() || value.empty()) {
    fail_at(path, text, k, std::string("\"") + k + "\" must be a non-empty array");
  }
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& entry : value) {
    if (!entry.is_number()) {
      fail_at(path, text, k, std::string("\"") + k + "\" must contain numbers");
    }
    out.push_back(entry.get<double>());
  }
  return out;
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";  // merge signed zeros
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

ProblemSpec load_problem_spec(const std::string& path) {
  const std::string text = read_file(path);
  const json j = parse_json(path, text);
  require_schema(j, path, text);
  reject_unknown_keys(j,
                      {"schema", "epsilon", "state_prior", "database_prior", "actions",
                       "payoffs", "options"},
                      path, text);

  const double epsilon = read_number(j, "epsilon", path, text);
  if (!(std::isfinite(epsilon) && epsilon > 0.0)) {
    fail_at(path, text, "epsilon", "\"epsilon\" must be positive and finite");
  }

  const bool has_state = j.contains("state_prior");
  const bool has_database = j.contains("database_prior");
  if (has_state == has_database) {
    fail_at(path, text, "epsilon",
            "exactly one of \"state_prior\" or \"database_prior\" is required");
  }

  std::optional<StatePrior> state_prior;
  std::optional<DatabasePrior> database_prior;
  int states = 0;
  if (has_state) {
    const std::vector<double> probs =
        read_number_array(j["state_prior"], "state_prior", path, text);
    try {
      state_prior.emplace(probs);
    } catch (const std::invalid_argument& e) {
      fail_at(path, text, "state_prior", e.what());
    }
    states = state_prior->num_states();
  } else {
    const json& dp = j["database_prior"];
    if (!dp.is_object()) {
      fail_at(path, text, "database_prior", "\"database_prior\" must be an object");
    }
    reject_unknown_keys(dp, {"n", "probs"}, path, text);
    if (!dp.contains("n") || !dp["n"].is_number_integer()) {
      fail_at(path, text, "n", "\"database_prior.n\" must be an integer");
    }
    const int n = dp["n"].get<int>();
    if (n < 1 || n > 25) fail_at(path, text, "n", "\"database_prior.n\" out of range");
    if (!dp.contains("probs")) fail_at(path, text, "probs", "missing \"database_prior.probs\"");
    const std::vector<double> probs = read_number_array(dp["probs"], "probs", path, text);
    try {
      database_prior.emplace(n, probs);
    } catch (const std::invalid_argument& e) {
      fail_at(path, text, "probs", e.what());
    }
    states = n + 1;
  }

  if (!j.contains("actions")) fail_at(path, text, "actions", "missing \"actions\"");
  const std::vector<double> actions = read_number_array(j["actions"], "actions", path, text);
  if (!j.contains("payoffs") || !j["payoffs"].is_array()) {
    fail_at(path, text, "payoffs", "\"payoffs\" must be an array of rows");
  }
  std::vector<std::vector<double>> payoffs;
  for (const auto& row : j["payoffs"]) {
    payoffs.push_back(read_number_array(row, "payoffs", path, text));
  }
  if (payoffs.size() != actions.size()) {
    fail_at(path, text, "payoffs", "\"payoffs\" needs one row per action");
  }
  for (const auto& row : payoffs) {
    if (static_cast<int>(row.size()) != states) {
      fail_at(path, text, "payoffs", "payoff rows must have one entry per state");
    }
  }

  SpecOptions options;
  if (j.contains("options")) {
    const json& o = j["options"];
    if (!o.is_object()) fail_at(path, text, "options", "\"options\" must be an object");
    reject_unknown_keys(o, {"tolerance", "max_n", "max_databases"}, path, text);
    if (o.contains("tolerance")) {
      options.tolerance = read_number(o, "tolerance", path, text);
      if (!(options.tolerance > 0.0) || !std::isfinite(options.tolerance)) {
        fail_at(path, text, "tolerance", "\"tolerance\" must be positive");
      }
    }
    if (o.contains("max_n")) {
      if (!o["max_n"].is_number_integer()) {
        fail_at(path, text, "max_n", "\"max_n\" must be an integer");
      }
      options.max_n = o["max_n"].get<int>();
      if (options.max_n < 1) fail_at(path, text, "max_n", "\"max_n\" must be >= 1");
    }
    if (o.contains("max_databases")) {
      if (!o["max_databases"].is_number_integer()) {
        fail_at(path, text, "max_databases", "\"max_databases\" must be an integer");
      }
      options.max_databases = o["max_databases"].get<int>();
      if (options.max_databases < 2) {
        fail_at(path, text, "max_databases", "\"max_databases\" must be >= 2");
      }
    }
  }

  try {
    return ProblemSpec{EpsilonBudget(epsilon), std::move(state_prior),
                       std::move(database_prior), DecisionProblem(actions, payoffs), options};
  } catch (const std::invalid_argument& e) {
    fail_at(path, text, "actions", e.what());
  }
}

ObliviousMechanism load_mechanism(const std::string& path) {
  const std::string text = read_file(path);
  const json j = parse_json(path, text);
  require_schema(j, path, text);
  reject_unknown_keys(j, {"schema", "label", "outputs", "rows"}, path, text);

  if (!j.contains("label") || !j["label"].is_string()) {
    fail_at(path, text, "label", "\"label\" must be a string");
  }
  if (!j.contains("outputs") || !j["outputs"].is_number_integer()) {
    fail_at(path, text, "outputs", "\"outputs\" must be an integer");
  }
  const int outputs = j["outputs"].get<int>();
  if (outputs < 1) fail_at(path, text, "outputs", "\"outputs\" must be >= 1");
  if (!j.contains("rows") || !j["rows"].is_array() || j["rows"].empty()) {
    fail_at(path, text, "rows", "\"rows\" must be a non-empty array");
  }

  SignalMatrix signal;
  signal.num_outputs = outputs;
  for (const auto& row : j["rows"]) {
    std::vector<double> r = read_number_array(row, "rows", path, text);
    if (static_cast<int>(r.size()) != outputs) {
      fail_at(path, text, "rows", "each row must have \"outputs\" entries");
    }
    double sum = 0.0;
    for (double& p : r) {
      if (p < 0.0) {
        if (p < -kNormTol) fail_at(path, text, "rows", "signal entries must be nonnegative");
        p = 0.0;
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kDedupTol) {
      fail_at(path, text, "rows", "each signal row must sum to one");
    }
    signal.probs.push_back(std::move(r));
  }
  return ObliviousMechanism{j["label"].get<std::string>(), std::move(signal)};
}

namespace {

// ---------------------------------------------------------------------------
// Shared view of a loaded spec: the count-side prior every subcommand can
// evaluate against, plus the database prior when one was given.

StatePrior working_state_prior(const ProblemSpec& spec) {
  if (spec.state_prior) return *spec.state_prior;
  return StatePrior(project_belief(DatabaseBelief(spec.database_prior->probs())).probs());
}

void write_report(const std::string& report_path, const std::string& body,
                  std::ostream& out) {
  out << body;
  if (report_path.empty()) return;
  std::ofstream f(report_path, std::ios::binary);
  if (!f) throw SpecError(report_path + ": cannot write file");
  f << body;
}

void emit_signal(JsonWriter& w, const SignalMatrix& signal) {
  w.begin_object();
  w.key("outputs");
  w.integer(signal.num_outputs);
  w.key("rows");
  w.begin_array();
  for (const auto& row : signal.probs) emit_vector(w, row);
  w.end_array();
  w.end_object();
}

int run_solve(const ProblemSpec& spec, const std::string& report_path, std::ostream& out) {
  std::ostringstream body;
  JsonWriter w(body);
  const double eps = spec.epsilon.value();
  const StatePrior mu0 = working_state_prior(spec);
  const ObliviousMechanism reference = geometric(spec.epsilon, mu0.max_count());
  const double geometric_value = mechanism_value(reference.signal, mu0, spec.problem);

  w.begin_object();
  w.key("schema");
  w.integer(1);
  w.key("command");
  w.text("solve");
  w.key("mode");
  w.text(spec.oblivious() ? "count" : "database");
  w.key("epsilon");
  w.number(eps);
  w.key("tolerance");
  w.number(spec.options.tolerance);
  w.key("states");
  w.integer(mu0.num_states());

  if (spec.oblivious()) {
    const ObliviousPolytope polytope{spec.epsilon, mu0};
    const DesignSolution solution = solve_oblivious(polytope, spec.problem, spec.options.max_n);
    w.key("no_information_value");
    w.number(solution.no_information_value);
    w.key("full_information_value");
    w.number(solution.full_information_value);
    w.key("optimum");
    w.number(solution.optimum);
    w.key("support");
    w.begin_array();
    const bool aligned = solution.support.size() == solution.distribution.size();
    for (std::size_t i = 0; i < solution.distribution.size(); ++i) {
      w.begin_object();
      if (aligned) {
        w.key("signature");
        w.integer(solution.support[i].mask);
      }
      w.key("weight");
      w.number(solution.distribution.weights()[i]);
      w.key("belief");
      emit_vector(w, solution.distribution.support()[i].probs());
      w.end_object();
    }
    w.end_array();
    w.key("signal");
    emit_signal(w, solution.signal);
    const DpAudit audit = verify_dp(solution.signal, spec.epsilon, spec.options.tolerance);
    w.key("dp_verified");
    w.boolean(audit.satisfied);
    w.key("dp_worst_log_ratio");
    w.number(audit.worst_log_ratio);
    w.key("geometric_value");
    w.number(geometric_value);
    w.key("geometric_gap");
    w.number(solution.optimum - geometric_value);
  } else {
    const DatabasePolytope polytope{spec.epsilon, *spec.database_prior};
    const DatabaseDesignSolution solution =
        solve_database(polytope, spec.problem, spec.options.max_databases);
    w.key("no_information_value");
    w.number(solution.no_information_value);
    w.key("full_information_value");
    w.number(full_information_value(spec.problem, mu0));
    w.key("optimum");
    w.number(solution.optimum);
    w.key("support");
    w.begin_array();
    const bool aligned = solution.support.size() == solution.distribution.size();
    for (std::size_t i = 0; i < solution.distribution.size(); ++i) {
      w.begin_object();
      if (aligned) {
        w.key("shifts");
        emit_int_vector(w, solution.support[i].shifts);
      }
      w.key("weight");
      w.number(solution.distribution.weights()[i]);
      w.key("belief");
      emit_vector(w, solution.distribution.support()[i].probs());
      w.key("projected");
      emit_vector(w, project_belief(solution.distribution.support()[i]).probs());
      w.end_object();
    }
    w.end_array();

    // Database signal: one output per supported vertex, row per database.
    SignalMatrix signal;
    signal.num_outputs = static_cast<int>(solution.distribution.size());
    const DatabasePrior& pi0 = *spec.database_prior;
    signal.probs.assign(pi0.num_databases(),
                        std::vector<double>(solution.distribution.size(), 0.0));
    for (std::uint32_t theta = 0; theta < pi0.num_databases(); ++theta) {
      for (std::size_t jx = 0; jx < solution.distribution.size(); ++jx) {
        signal.probs[theta][jx] = solution.distribution.support()[jx](theta) *
                                  solution.distribution.weights()[jx] / pi0(theta);
      }
    }
    w.key("signal");
    emit_signal(w, signal);
    std::vector<std::pair<int, int>> adjacency;
    for (const auto& [a, b] : polytope.adjacent_pairs()) {
      adjacency.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
    const DpAudit audit =
        verify_dp_rows(signal, adjacency, spec.epsilon, spec.options.tolerance);
    w.key("dp_verified");
    w.boolean(audit.satisfied);
    w.key("dp_worst_log_ratio");
    w.number(audit.worst_log_ratio);
    w.key("geometric_value");
    w.number(geometric_value);
    w.key("geometric_gap");
    w.number(solution.optimum - geometric_value);
  }
  w.end_object();
  body << "\n";
  write_report(report_path, body.str(), out);
  return kExitOk;
}

int run_verify(const ProblemSpec& spec, const std::vector<std::string>& mechanism_paths,
               const std::string& report_path, std::ostream& out) {
  if (mechanism_paths.empty()) {
    throw SpecError("verify needs at least one --mechanism");
  }
  const StatePrior mu0 = working_state_prior(spec);
  std::ostringstream body;
  JsonWriter w(body);
  w.begin_object();
  w.key("schema");
  w.integer(1);
  w.key("command");
  w.text("verify");
  w.key("epsilon");
  w.number(spec.epsilon.value());
  w.key("tolerance");
  w.number(spec.options.tolerance);
  w.key("mechanisms");
  w.begin_array();
  bool all_satisfied = true;
  for (const std::string& path : mechanism_paths) {
    const ObliviousMechanism mechanism = load_mechanism(path);
    if (static_cast<int>(mechanism.signal.probs.size()) != mu0.num_states()) {
      throw SpecError(path + ":1: mechanism rows do not match the spec state count");
    }
    const DpAudit audit =
        verify_dp(mechanism.signal, spec.epsilon, spec.options.tolerance);
    all_satisfied = all_satisfied && audit.satisfied;
    w.begin_object();
    w.key("label");
    w.text(mechanism.label);
    w.key("outputs");
    w.integer(mechanism.signal.num_outputs);
    w.key("dp_verified");
    w.boolean(audit.satisfied);
    w.key("worst_log_ratio");
    w.number(audit.worst_log_ratio);
    w.key("worst_output");
    w.integer(audit.worst_output);
    w.key("worst_state");
    w.integer(audit.worst_state);
    w.key("value");
    w.number(mechanism_value(mechanism.signal, mu0, spec.problem));
    w.end_object();
  }
  w.end_array();
  w.key("all_satisfied");
  w.boolean(all_satisfied);
  w.end_object();
  body << "\n";
  write_report(report_path, body.str(), out);
  return kExitOk;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += "\"";
  return quoted;
}

struct CompareRow {
  std::string label;
  double value = 0.0;
  bool dp_verified = false;
  double worst_log_ratio = 0.0;
  // "dominated": the geometric reference ratio-dominates this mechanism;
  // "incomparable": no joint peak assignment exists; "undefined": the
  // mechanism induces posteriors with zero entries, so ratios break down.
  std::string uprr_vs_geometric;
  std::optional<std::vector<int>> geometric_peaks;
  std::optional<bool> spm_vs_geometric;
};

int run_compare(const ProblemSpec& spec, const std::vector<std::string>& mechanism_paths,
                const std::string& report_path, bool csv, std::ostream& out) {
  if (mechanism_paths.empty()) {
    throw SpecError("compare needs at least one --mechanism file");
  }
  const StatePrior mu0 = working_state_prior(spec);
  const double tol = spec.options.tolerance;

  const ObliviousMechanism reference = geometric(spec.epsilon, mu0.max_count());
  const BeliefDistribution tau_g = induced_distribution(reference.signal, mu0);
  const double geometric_value = mechanism_value(reference.signal, mu0, spec.problem);

  std::vector<CompareRow> rows;
  for (const std::string& path : mechanism_paths) {
    const ObliviousMechanism m = load_mechanism(path);
    if (static_cast<int>(m.signal.probs.size()) != mu0.num_states()) {
      throw SpecError(path + ":1: mechanism rows do not match the spec state count");
    }
    CompareRow row;
    row.label = m.label;
    row.value = mechanism_value(m.signal, mu0, spec.problem);
    const DpAudit audit = verify_dp(m.signal, spec.epsilon, tol);
    row.dp_verified = audit.satisfied;
    row.worst_log_ratio = audit.worst_log_ratio;

    const BeliefDistribution tau_m = induced_distribution(m.signal, mu0);
    try {
      const std::optional<PeakAssignment> cmp = uprr_compare(tau_g, tau_m, tol);
      if (cmp) {
        row.uprr_vs_geometric = "dominated";
        row.geometric_peaks = cmp->peaks;
        // Corroborating CDF check: geometric laid out by the certified
        // peaks, the mechanism by support order (any layout works when the
        // ratio certificate holds).
        std::vector<double> peak_labels(cmp->peaks.begin(), cmp->peaks.end());
        std::vector<double> index_labels(tau_m.size());
        std::iota(index_labels.begin(), index_labels.end(), 0.0);
        const SpmReport spm = spm_dominates(frechet_representation(tau_g, peak_labels),
                                            frechet_representation(tau_m, index_labels),
                                            kDedupTol);
        row.spm_vs_geometric = spm.dominates;
      } else {
        row.uprr_vs_geometric = "incomparable";
      }
    } catch (const std::domain_error&) {
      row.uprr_vs_geometric = "undefined";
    }
    rows.push_back(std::move(row));
  }

  std::string payload;
  if (csv) {
    std::string table = "label,value,dp_verified,uprr_vs_geometric,spm_vs_geometric\n";
    for (const CompareRow& row : rows) {
      table += csv_field(row.label) + "," + format_number(row.value) + ",";
      table += row.dp_verified ? "true" : "false";
      table += "," + row.uprr_vs_geometric + ",";
      if (row.spm_vs_geometric) table += *row.spm_vs_geometric ? "true" : "false";
      table += "\n";
    }
    payload = std::move(table);
  } else {
    std::ostringstream body;
    JsonWriter w(body);
    w.begin_object();
    w.key("schema");
    w.integer(1);
    w.key("command");
    w.text("compare");
    w.key("epsilon");
    w.number(spec.epsilon.value());
    w.key("tolerance");
    w.number(tol);
    w.key("states");
    w.integer(mu0.num_states());
    w.key("geometric_value");
    w.number(geometric_value);
    w.key("rows");
    w.begin_array();
    for (const CompareRow& row : rows) {
      w.begin_object();
      w.key("label");
      w.text(row.label);
      w.key("value");
      w.number(row.value);
      w.key("dp_verified");
      w.boolean(row.dp_verified);
      w.key("worst_log_ratio");
      w.number(row.worst_log_ratio);
      w.key("uprr_vs_geometric");
      w.text(row.uprr_vs_geometric);
      w.key("geometric_peaks");
      if (row.geometric_peaks) {
        emit_int_vector(w, *row.geometric_peaks);
      } else {
        w.null();
      }
      w.key("spm_vs_geometric");
      if (row.spm_vs_geometric) {
        w.boolean(*row.spm_vs_geometric);
      } else {
        w.null();
      }
      w.end_object();
    }
    w.end_array();
    w.end_object();
    body << "\n";
    payload = body.str();
  }
  write_report(report_path, payload, out);
  return kExitOk;
}

int run_vertices(const ProblemSpec& spec, const std::string& report_path, std::ostream& out) {
  std::ostringstream body;
  JsonWriter w(body);
  w.begin_object();
  w.key("schema");
  w.integer(1);
  w.key("command");
  w.text("vertices");
  w.key("mode");
  w.text(spec.oblivious() ? "count" : "database");
  w.key("epsilon");
  w.number(spec.epsilon.value());

  if (spec.oblivious()) {
    const ObliviousPolytope polytope{spec.epsilon, *spec.state_prior};
    const std::vector<StateBelief> vertices =
        enumerate_oblivious_vertices(polytope, spec.options.max_n);
    w.key("states");
    w.integer(spec.state_prior->num_states());
    w.key("count");
    w.integer(static_cast<long long>(vertices.size()));
    w.key("vertices");
    w.begin_array();
    for (std::size_t mask = 0; mask < vertices.size(); ++mask) {
      const ObliviousMembership membership =
          oblivious_membership(polytope, vertices[mask], spec.options.tolerance);
      w.begin_object();
      w.key("signature");
      w.integer(static_cast<long long>(mask));
      w.key("belief");
      emit_vector(w, vertices[mask].probs());
      w.key("binding_count");
      w.integer(membership.binding_count(std::max(spec.options.tolerance, kLogTol)));
      w.end_object();
    }
    w.end_array();
  } else {
    const DatabasePolytope polytope{spec.epsilon, *spec.database_prior};
    const std::vector<DatabaseVertex> vertices =
        enumerate_database_vertices(polytope, spec.options.max_databases);
    w.key("databases");
    w.integer(static_cast<long long>(spec.database_prior->num_databases()));
    w.key("count");
    w.integer(static_cast<long long>(vertices.size()));
    w.key("vertices");
    w.begin_array();
    for (const DatabaseVertex& vertex : vertices) {
      const DatabaseMembership membership =
          database_membership(polytope, vertex.belief, std::max(spec.options.tolerance, kLogTol));
      w.begin_object();
      w.key("shifts");
      emit_int_vector(w, vertex.shifts);
      w.key("belief");
      emit_vector(w, vertex.belief.probs());
      w.key("projected");
      emit_vector(w, project_belief(vertex.belief).probs());
      w.key("binding_count");
      w.integer(membership.binding_count);
      w.end_object();
    }
    w.end_array();
  }
  w.end_object();
  body << "\n";
  write_report(report_path, body.str(), out);
  return kExitOk;
}

int run_project(const ProblemSpec& spec, const std::string& report_path, std::ostream& out) {
  const DatabasePrior pi0 = spec.database_prior
                                ? *spec.database_prior
                                : symmetric_prior_from_state_prior(*spec.state_prior);
  const DatabasePolytope polytope{spec.epsilon, pi0};
  if (static_cast<int>(pi0.num_databases()) > spec.options.max_databases) {
    throw SizeCapError("database space too large for vertex enumeration");
  }
  const ProjectionGapReport report = projection_gap(polytope, spec.options.tolerance);

  std::ostringstream body;
  JsonWriter w(body);
  w.begin_object();
  w.key("schema");
  w.integer(1);
  w.key("command");
  w.text("project");
  w.key("epsilon");
  w.number(spec.epsilon.value());
  w.key("n");
  w.integer(pi0.n_respondents());
  w.key("symmetric_prior");
  w.boolean(pi0.is_symmetric());
  w.key("database_vertices");
  w.integer(static_cast<long long>(report.projected_vertices.size()));
  w.key("oblivious_vertices");
  w.integer(static_cast<long long>(report.oblivious_vertices.size()));
  w.key("all_projections_inside");
  w.boolean(report.all_projections_inside);
  w.key("all_vertices_attained");
  w.boolean(report.all_vertices_attained);
  w.key("projections");
  w.begin_array();
  for (std::size_t i = 0; i < report.projected_vertices.size(); ++i) {
    w.begin_object();
    w.key("belief");
    emit_vector(w, report.projected_vertices[i].probs());
    w.key("member");
    w.boolean(report.projected_memberships[i].member);
    w.key("worst_violation");
    w.number(report.projected_memberships[i].worst_violation());
    w.end_object();
  }
  w.end_array();
  w.key("attainment");
  w.begin_array();
  for (std::size_t i = 0; i < report.oblivious_vertices.size(); ++i) {
    w.begin_object();
    w.key("vertex");
    emit_vector(w, report.oblivious_vertices[i].probs());
    w.key("attained");
    w.boolean(report.vertex_attained[i]);
    w.key("witness");
    if (report.attaining_beliefs[i]) {
      emit_vector(w, report.attaining_beliefs[i]->probs());
    } else {
      w.null();
    }
    w.end_object();
  }
  w.end_array();
  w.end_object();
  body << "\n";
  write_report(report_path, body.str(), out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"disclosure design under an epsilon privacy-loss bound"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string report_path;
  bool csv = false;
  std::vector<std::string> mechanism_paths;
  double epsilon_override = 0.0;
  double tolerance_override = 0.0;
  int max_n_override = 0;

  auto add_common = [&](CLI::App* sub, bool mechanisms, bool csv_flag) {
    sub->add_option("--spec", spec_path, "problem spec JSON file")->required();
    sub->add_option("--report", report_path, "write the JSON report to this file");
    sub->add_option("--epsilon", epsilon_override, "override the spec privacy budget");
    sub->add_option("--tolerance", tolerance_override, "override the spec tolerance");
    sub->add_option("--max-n", max_n_override, "override the enumeration size cap");
    if (mechanisms) {
      sub->add_option("--mechanism", mechanism_paths, "mechanism JSON file (repeatable)");
    }
    if (csv_flag) {
      sub->add_flag("--csv", csv, "emit the comparison table as CSV instead of JSON");
    }
  };

  CLI::App* solve = app.add_subcommand("solve", "solve the optimal disclosure program");
  CLI::App* verify = app.add_subcommand("verify", "audit mechanisms against the budget");
  CLI::App* compare = app.add_subcommand("compare", "value and ranking table for mechanisms");
  CLI::App* vertices = app.add_subcommand("vertices", "enumerate feasible-posterior vertices");
  CLI::App* project = app.add_subcommand("project", "certify the count projection of the database polytope");
  add_common(solve, false, false);
  add_common(verify, true, false);
  add_common(compare, true, true);
  add_common(vertices, false, false);
  add_common(project, false, false);

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitSpecError;
    }

    ProblemSpec spec = load_problem_spec(spec_path);
    if (epsilon_override != 0.0) {
      try {
        spec.epsilon = EpsilonBudget(epsilon_override);
      } catch (const std::invalid_argument& e) {
        throw SpecError(std::string("--epsilon: ") + e.what());
      }
    }
    if (tolerance_override != 0.0) {
      if (!(tolerance_override > 0.0) || !std::isfinite(tolerance_override)) {
        throw SpecError("--tolerance must be positive");
      }
      spec.options.tolerance = tolerance_override;
    }
    if (max_n_override != 0) {
      if (max_n_override < 1) throw SpecError("--max-n must be >= 1");
      spec.options.max_n = max_n_override;
      spec.options.max_databases =
          max_n_override < 25 ? (1 << max_n_override) : (1 << 25);
    }

    if (solve->parsed()) return run_solve(spec, report_path, out);
    if (verify->parsed()) return run_verify(spec, mechanism_paths, report_path, out);
    if (compare->parsed()) {
      return run_compare(spec, mechanism_paths, report_path, csv, out);
    }
    if (vertices->parsed()) return run_vertices(spec, report_path, out);
    if (project->parsed()) return run_project(spec, report_path, out);
    err << "error: no subcommand selected\n";
    return kExitSpecError;
  } catch (const SizeCapError& e) {
    err << "error: " << e.what() << "\n";
    return kExitCapError;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSpecError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSpecError;
  }
}

}  // namespace dpsignal
