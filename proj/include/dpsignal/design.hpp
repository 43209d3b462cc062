#pragma once

// Optimal disclosure design under the epsilon privacy-loss bound.
//
// Oblivious side: maximize sum_j tau_j v(mu_j) over distributions of
// posteriors supported on the count polytope's vertices with mean mu0
// (concavification restricted to the polytope, solved as a linear program
// over vertex weights).
//
// Database side: the same program over the database polytope's vertices
// with mean pi0, with values evaluated on projected count beliefs.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dpsignal/core.hpp"
#include "dpsignal/decision.hpp"
#include "dpsignal/polytope.hpp"

namespace dpsignal {

// Conditional signal distribution: probs[w][j] = sigma(j-th output | state w).
// Rows sum to one.
struct SignalMatrix {
  int num_outputs = 0;
  std::vector<std::vector<double>> probs;

  double operator()(int omega, int output) const { return probs[omega][output]; }
};

// Optimal oblivious disclosure: value, supporting vertices with weights,
// and the signal implementing it (one output per supported vertex).
struct DesignSolution {
  double optimum = 0.0;
  double no_information_value = 0.0;
  double full_information_value = 0.0;
  std::vector<UpperBoundSignature> support;  // ascending mask order
  BeliefDistribution distribution;
  SignalMatrix signal;
};

// Solves the vertex-weight program by dense simplex over all 2^N vertices.
// Support is the basic optimal solution with weights <= kPruneTol removed;
// vertices are reported in ascending signature-mask order.
DesignSolution solve_oblivious(const ObliviousPolytope& polytope,
                               const DecisionProblem& problem,
                               int max_n = kDefaultStateVertexCap);

// Thrown when a support's moment system is numerically rank deficient, so
// mean-matching weights are not identified.
class RankDeficiencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unique mean-matching weights for a fixed support, via least squares on
// sum_j tau_j mu_j = mu0. Distinguishes failure modes: rank deficiency
// throws; a well-posed system whose solution has a negative weight or a
// residual above tol reports not Bayes-plausible.
struct SupportWeights {
  bool bayes_plausible = false;
  std::vector<double> weights;
  double residual = 0.0;  // L2 norm of M tau - mu0
};

SupportWeights weights_for_support(const std::vector<StateBelief>& support,
                                   const StatePrior& mu0,
                                   double tol = kNormTol);

// Signal realizing a Bayes-plausible distribution of posteriors:
//   sigma(j | w) = mu_j(w) tau_j / mu0(w).
SignalMatrix build_signal_matrix(const BeliefDistribution& distribution,
                                 const StatePrior& mu0);

// Exponential-family form of a vertex-supported signal:
//   sigma(j | w)  proportional over j to  xi_j * exp(epsilon * q(w, j)),
// with integer score q(w, j) = 2 |Phi_j cap {1..w}| - w and a base measure
// xi on outputs. Score table is scores[w][j].
struct ExponentialParameterization {
  std::vector<std::vector<int>> scores;
  std::vector<double> base_measure;  // xi, normalized to sum 1
};

ExponentialParameterization exponential_parameterization(const DesignSolution& solution,
                                                         const ObliviousPolytope& polytope);

// Optimal database disclosure: the vertex-weight program over database
// polytope vertices, valued through the count projection.
struct DatabaseDesignSolution {
  double optimum = 0.0;
  double no_information_value = 0.0;
  std::vector<DatabaseVertex> support;
  DatabaseBeliefDistribution distribution;
  std::vector<StateBelief> projected_support;
};

DatabaseDesignSolution solve_database(const DatabasePolytope& polytope,
                                      const DecisionProblem& problem,
                                      int max_databases = kDefaultDatabaseVertexCap);

}  // namespace dpsignal
