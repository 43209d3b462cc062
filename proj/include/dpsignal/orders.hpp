#pragma once

// Informativeness orders on distributions of count posteriors:
//
//  - Uniform-peaked ratio rank (UPRR): a joint assignment of peak states
//    making every posterior of the first distribution a ratio-unimodal
//    transform of every posterior of the second, peaked at its own state.
//  - Frechet (comonotone) representation: posteriors laid out on [0,1] in
//    label order, enabling pointwise CDF comparisons.
//  - Supermodular-value dominance: the implied guarantee that one
//    distribution yields weakly higher value for any supermodular
//    decision problem.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dpsignal/core.hpp"
#include "dpsignal/decision.hpp"

namespace dpsignal {

// Peak states certifying a UPRR comparison. peaks[i] is the chosen peak for
// the i-th posterior of the dominating distribution; feasible_sets[i] lists
// every state that works, ascending.
struct PeakAssignment {
  std::vector<int> peaks;
  std::vector<std::vector<int>> feasible_sets;
};

// Attempts to certify that fine ratio-dominates coarse: for each posterior
// mu of fine there must exist a peak p such that, against every posterior
// mu' of coarse, the ratio mu/mu' is nondecreasing up to p and nonincreasing
// after p. Requires strictly positive posteriors on both sides (throws
// std::domain_error otherwise). Returns the smallest feasible peak per
// posterior, or nullopt if some posterior has no feasible peak.
std::optional<PeakAssignment> uprr_compare(const BeliefDistribution& fine,
                                           const BeliefDistribution& coarse,
                                           double tol = kLogTol);

// Distribution of posteriors laid on [0,1]: segment k occupies
// [breakpoints[k], breakpoints[k+1]) and carries one belief. Segments are
// ordered by ascending label; posteriors sharing a label are averaged.
// breakpoints.front() = 0, breakpoints.back() = 1.
struct FrechetRepresentation {
  std::vector<double> breakpoints;
  std::vector<StateBelief> segment_beliefs;
  std::vector<double> segment_labels;
};

// Lays out a labeled distribution comonotonically. labels[i] is a real
// label ordering the i-th support element; equal labels merge into one
// segment with the weight-averaged belief.
FrechetRepresentation frechet_representation(const BeliefDistribution& distribution,
                                             const std::vector<double>& labels);

// Joint CDF of the representation: F(w, x) = mass of states <= w on
// [0, x]. Piecewise linear in x; F(num_states - 1, 1) = 1.
double frechet_cdf(const FrechetRepresentation& rep, int omega, double x);

// Integral over [0, x] of one state's segment mass (the w-slice of the
// joint density); frechet_cdf is its running sum over states.
double frechet_slice(const FrechetRepresentation& rep, int omega, double x);

// Pointwise CDF dominance check between two representations over the same
// state space and the same total marginals.
struct SpmReport {
  bool dominates = false;
  double worst_margin = 0.0;     // min over checked (w, x) of F - G
  int worst_state = -1;
  double worst_point = 0.0;
};

// Checks F(w, x) >= G(w, x) - tol for all states w and all x in the union
// of the two breakpoint sets (sufficient for piecewise-linear CDFs).
// Throws std::invalid_argument if the two representations have different
// state counts or their state marginals disagree beyond kDedupTol.
SpmReport spm_dominates(const FrechetRepresentation& f, const FrechetRepresentation& g,
                        double tol = kNormTol);

// Expected values of the two distributions on one supermodular problem,
// in argument order. Throws std::invalid_argument if the problem fails
// the supermodularity check: the dominance guarantee only covers
// supermodular payoffs.
std::pair<double, double> supermodular_value_dominance(const BeliefDistribution& fine,
                                                       const BeliefDistribution& coarse,
                                                       const DecisionProblem& problem);

}  // namespace dpsignal
