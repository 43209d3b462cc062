#include "dpsignal/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace dpsignal {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_signal(const SignalMatrix& signal) {
  if (signal.probs.empty() || signal.num_outputs <= 0) {
    throw std::invalid_argument("signal matrix is empty");
  }
  for (const auto& row : signal.probs) {
    if (static_cast<int>(row.size()) != signal.num_outputs) {
      throw std::invalid_argument("signal rows differ in output count");
    }
    double sum = 0.0;
    for (double p : row) {
      if (!std::isfinite(p) || p < -kNormTol) {
        throw std::invalid_argument("signal entry is negative or non-finite");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kDedupTol) {
      throw std::invalid_argument("signal row does not sum to one");
    }
  }
}

DpAudit audit_pairs(const SignalMatrix& signal,
                    const std::vector<std::pair<int, int>>& pairs, double eps,
                    double tol) {
  DpAudit audit;
  audit.satisfied = true;
  for (const auto& [a, b] : pairs) {
    for (int j = 0; j < signal.num_outputs; ++j) {
      const double p = signal.probs[a][j];
      const double r = signal.probs[b][j];
      double log_ratio;
      if (p <= 0.0 && r <= 0.0) {
        log_ratio = 0.0;  // both impossible: ratio bound holds vacuously
      } else if (p <= 0.0 || r <= 0.0) {
        log_ratio = kInf;
      } else {
        log_ratio = std::abs(std::log(p / r));
      }
      if (log_ratio > audit.worst_log_ratio) {
        audit.worst_log_ratio = log_ratio;
        audit.worst_output = j;
        audit.worst_state = a;
      }
      if (log_ratio > eps + tol) audit.satisfied = false;
    }
  }
  return audit;
}

}  // namespace

ObliviousMechanism geometric(const EpsilonBudget& epsilon, int max_count) {
  if (max_count < 1) throw std::invalid_argument("geometric mechanism needs max count >= 1");
  const double q = std::exp(-epsilon.value());
  SignalMatrix signal;
  signal.num_outputs = max_count + 1;
  signal.probs.assign(max_count + 1, std::vector<double>(max_count + 1, 0.0));
  for (int w = 0; w <= max_count; ++w) {
    for (int s = 0; s <= max_count; ++s) {
      const double scale = (s == 0 || s == max_count) ? 1.0 / (1.0 + q) : (1.0 - q) / (1.0 + q);
      signal.probs[w][s] = scale * std::pow(q, std::abs(s - w));
    }
  }
  return ObliviousMechanism{"geometric", std::move(signal)};
}

BeliefDistribution induced_distribution(const SignalMatrix& signal, const StatePrior& mu0) {
  check_signal(signal);
  if (static_cast<int>(signal.probs.size()) != mu0.num_states()) {
    throw std::invalid_argument("signal and prior differ in state count");
  }
  std::vector<StateBelief> support;
  std::vector<double> weights;
  for (int j = 0; j < signal.num_outputs; ++j) {
    double marginal = 0.0;
    for (int w = 0; w < mu0.num_states(); ++w) marginal += mu0(w) * signal.probs[w][j];
    if (marginal <= 0.0) continue;  // output never realized
    std::vector<double> posterior(mu0.num_states());
    for (int w = 0; w < mu0.num_states(); ++w) {
      posterior[w] = mu0(w) * std::max(signal.probs[w][j], 0.0) / marginal;
    }
    support.emplace_back(std::move(posterior));
    weights.push_back(marginal);
  }
  if (support.empty()) throw std::invalid_argument("signal induces no realized output");
  return BeliefDistribution::merged(std::move(support), std::move(weights));
}

DpAudit verify_dp(const SignalMatrix& signal, const EpsilonBudget& epsilon, double tol) {
  check_signal(signal);
  std::vector<std::pair<int, int>> pairs;
  for (int w = 0; w + 1 < static_cast<int>(signal.probs.size()); ++w) {
    pairs.emplace_back(w, w + 1);
  }
  return audit_pairs(signal, pairs, epsilon.value(), tol);
}

DpAudit verify_dp_rows(const SignalMatrix& signal,
                       const std::vector<std::pair<int, int>>& adjacent_rows,
                       const EpsilonBudget& epsilon, double tol) {
  check_signal(signal);
  for (const auto& [a, b] : adjacent_rows) {
    if (a < 0 || b < 0 || a >= static_cast<int>(signal.probs.size()) ||
        b >= static_cast<int>(signal.probs.size())) {
      throw std::invalid_argument("adjacency references a missing signal row");
    }
  }
  return audit_pairs(signal, adjacent_rows, epsilon.value(), tol);
}

double mechanism_value(const SignalMatrix& signal, const StatePrior& mu0,
                       const DecisionProblem& problem) {
  check_signal(signal);
  if (static_cast<int>(signal.probs.size()) != mu0.num_states() ||
      problem.num_states() != mu0.num_states()) {
    throw std::invalid_argument("signal, prior, and problem differ in state count");
  }
  double value = 0.0;
  for (int j = 0; j < signal.num_outputs; ++j) {
    double marginal = 0.0;
    for (int w = 0; w < mu0.num_states(); ++w) marginal += mu0(w) * signal.probs[w][j];
    if (marginal <= 0.0) continue;
    std::vector<double> posterior(mu0.num_states());
    for (int w = 0; w < mu0.num_states(); ++w) {
      posterior[w] = mu0(w) * std::max(signal.probs[w][j], 0.0) / marginal;
    }
    value += marginal * interim_value(problem, StateBelief(std::move(posterior))).value;
  }
  return value;
}

}  // namespace dpsignal
