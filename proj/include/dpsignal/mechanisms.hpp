#pragma once

// Concrete count mechanisms and privacy auditing: the truncated geometric
// mechanism, posterior induction, differential-privacy verification of
// arbitrary signal matrices, and decision value of a mechanism.

#include <string>
#include <vector>

#include "dpsignal/core.hpp"
#include "dpsignal/decision.hpp"
#include "dpsignal/design.hpp"
#include "dpsignal/polytope.hpp"

namespace dpsignal {

// A signal matrix over count inputs with a display label.
struct ObliviousMechanism {
  std::string label;
  SignalMatrix signal;
};

// Truncated epsilon-geometric mechanism on {0,...,N}: two-sided geometric
// noise with ratio q = exp(-epsilon), probability mass beyond the range
// collapsed onto 0 and N. Rows sum to one exactly:
//   interior s:  (1-q)/(1+q) * q^|s-w|
//   boundary s:  1/(1+q) * q^|s-w|
ObliviousMechanism geometric(const EpsilonBudget& epsilon, int max_count);

// Posterior distribution induced by a signal under a prior. Outputs with
// zero marginal probability are dropped; duplicate posteriors (L-inf within
// kDedupTol) are merged.
BeliefDistribution induced_distribution(const SignalMatrix& signal, const StatePrior& mu0);

// Differential-privacy audit of a count signal: over all outputs j and
// adjacent counts w, w+1, checks
//   sigma(j|w) <= exp(epsilon) sigma(j|w'),  both directions.
// Pairs 0/0 are satisfied; positive/0 violates with infinite log ratio.
struct DpAudit {
  bool satisfied = false;
  double worst_log_ratio = 0.0;  // max |log sigma(j|w) - log sigma(j|w+1)|
  int worst_output = -1;
  int worst_state = -1;  // lower count of the worst pair
};

DpAudit verify_dp(const SignalMatrix& signal, const EpsilonBudget& epsilon,
                  double tol = kLogTol);

// Same audit over an explicit adjacency list on row indices; used for
// database-indexed signals where adjacency is Hamming distance one.
DpAudit verify_dp_rows(const SignalMatrix& signal,
                       const std::vector<std::pair<int, int>>& adjacent_rows,
                       const EpsilonBudget& epsilon, double tol = kLogTol);

// Expected decision value of acting on each output's induced posterior.
double mechanism_value(const SignalMatrix& signal, const StatePrior& mu0,
                       const DecisionProblem& problem);

}  // namespace dpsignal
