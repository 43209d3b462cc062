#include "dpsignal/decision.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace dpsignal {

ValueEvaluation interim_value(const DecisionProblem& problem, const StateBelief& mu) {
  if (mu.num_states() != problem.num_states()) {
    throw std::invalid_argument("belief and payoff table differ in state count");
  }
  ValueEvaluation out;
  out.value = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < problem.num_actions(); ++a) {
    double expected = 0.0;
    for (int w = 0; w < problem.num_states(); ++w) {
      expected += mu(w) * problem.payoff(a, w);
    }
    if (expected > out.value) {
      out.value = expected;
      out.action_index = a;
    }
  }
  return out;
}

SupermodularityReport is_supermodular(const DecisionProblem& problem, double tol) {
  SupermodularityReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (int a = 0; a + 1 < problem.num_actions(); ++a) {
    for (int w = 0; w + 1 < problem.num_states(); ++w) {
      const double margin = (problem.payoff(a + 1, w + 1) - problem.payoff(a, w + 1)) -
                            (problem.payoff(a + 1, w) - problem.payoff(a, w));
      if (margin < report.worst_margin) {
        report.worst_margin = margin;
        report.action_index = a;
        report.state = w;
      }
    }
  }
  if (problem.num_actions() < 2 || problem.num_states() < 2) {
    report.worst_margin = 0.0;  // no quadruples to violate
  }
  report.supermodular = report.worst_margin >= -tol;
  return report;
}

double full_information_value(const DecisionProblem& problem, const StatePrior& mu0) {
  double value = 0.0;
  for (int w = 0; w < mu0.num_states(); ++w) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < problem.num_actions(); ++a) {
      best = std::max(best, problem.payoff(a, w));
    }
    value += mu0(w) * best;
  }
  return value;
}

}  // namespace dpsignal
