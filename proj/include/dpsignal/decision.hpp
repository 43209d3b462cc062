#pragma once

// Decision-theoretic evaluation of beliefs: interim (posterior) value,
// supermodularity of the payoff table, and benchmark values with no
// information and full information.

#include <vector>

#include "dpsignal/core.hpp"

namespace dpsignal {

// Best expected payoff at a belief and the action attaining it.
struct ValueEvaluation {
  double value = 0.0;
  int action_index = 0;  // lowest index among maximizers
};

// v(mu) = max_a sum_w mu(w) u(a, w). Ties break to the lowest action index.
ValueEvaluation interim_value(const DecisionProblem& problem, const StateBelief& mu);

// Supermodularity check over adjacent action/state quadruples:
//   u(a', w') - u(a, w') >= u(a', w) - u(a, w)
// for consecutive actions a < a' and consecutive states w < w'. Reports the
// worst signed margin and a violating quadruple if one exists.
struct SupermodularityReport {
  bool supermodular = false;
  double worst_margin = 0.0;  // min over quadruples; negative means violated
  int action_index = -1;      // lower action of the worst quadruple
  int state = -1;             // lower state of the worst quadruple
};

SupermodularityReport is_supermodular(const DecisionProblem& problem, double tol = 0.0);

// E[v(delta_w)] under the prior: payoff from learning the state exactly.
double full_information_value(const DecisionProblem& problem, const StatePrior& mu0);

}  // namespace dpsignal
