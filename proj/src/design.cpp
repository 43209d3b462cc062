#include "dpsignal/design.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "dpsignal/simplex.hpp"

namespace dpsignal {
namespace {

std::vector<double> log_normalize(const std::vector<double>& u) {
  const double peak = *std::max_element(u.begin(), u.end());
  std::vector<double> p(u.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    p[i] = std::exp(u[i] - peak);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

double log_sum_exp(const std::vector<double>& u) {
  const double peak = *std::max_element(u.begin(), u.end());
  double sum = 0.0;
  for (double v : u) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

// Vertex-weight concavification: maximize sum tau_j values[j] subject to
// sum tau_j posteriors[j] = prior, tau >= 0. The mean constraint implies
// sum tau = 1.
LpSolution solve_weight_program(const std::vector<const std::vector<double>*>& posteriors,
                                const std::vector<double>& values,
                                const std::vector<double>& prior) {
  LinearProgram lp;
  lp.m = prior.size();
  lp.n = posteriors.size();
  lp.a.resize(lp.m * lp.n);
  lp.b = prior;
  lp.c = values;
  for (std::size_t j = 0; j < lp.n; ++j) {
    for (std::size_t w = 0; w < lp.m; ++w) {
      lp.at(w, j) = (*posteriors[j])[w];
    }
  }
  LpSolution solution = solve_lp(lp);
  if (solution.status != LpStatus::kOptimal) {
    throw std::runtime_error("vertex weight program failed to solve");
  }
  return solution;
}

// Prunes negligible weights and renormalizes the rest to sum one.
std::vector<std::size_t> pruned_support(const std::vector<double>& x,
                                        std::vector<double>& weights_out) {
  std::vector<std::size_t> kept;
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] > kPruneTol) {
      kept.push_back(j);
      total += x[j];
    }
  }
  weights_out.clear();
  for (std::size_t j : kept) weights_out.push_back(x[j] / total);
  return kept;
}

}  // namespace

DesignSolution solve_oblivious(const ObliviousPolytope& polytope,
                               const DecisionProblem& problem, int max_n) {
  const StatePrior& mu0 = polytope.prior;
  if (problem.num_states() != mu0.num_states()) {
    throw std::invalid_argument("decision problem and prior differ in state count");
  }
  const std::vector<StateBelief> vertices = enumerate_oblivious_vertices(polytope, max_n);

  std::vector<const std::vector<double>*> columns;
  std::vector<double> values;
  columns.reserve(vertices.size());
  values.reserve(vertices.size());
  for (const StateBelief& v : vertices) {
    columns.push_back(&v.probs());
    values.push_back(interim_value(problem, v).value);
  }
  const LpSolution lp = solve_weight_program(columns, values, mu0.probs());

  std::vector<double> weights;
  const std::vector<std::size_t> kept = pruned_support(lp.x, weights);
  std::vector<UpperBoundSignature> support;
  std::vector<StateBelief> support_beliefs;
  double optimum = 0.0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const std::uint32_t mask = static_cast<std::uint32_t>(kept[i]);
    support.push_back(UpperBoundSignature{mask, mu0.max_count()});
    support_beliefs.push_back(vertices[kept[i]]);
    optimum += weights[i] * values[kept[i]];
  }
  BeliefDistribution distribution =
      BeliefDistribution::merged(std::move(support_beliefs), std::move(weights));
  SignalMatrix signal = build_signal_matrix(distribution, mu0);
  return DesignSolution{optimum,
                        interim_value(problem, StateBelief(mu0.probs())).value,
                        full_information_value(problem, mu0),
                        std::move(support),
                        std::move(distribution),
                        std::move(signal)};
}

SupportWeights weights_for_support(const std::vector<StateBelief>& support,
                                   const StatePrior& mu0, double tol) {
  if (support.empty()) throw std::invalid_argument("support is empty");
  const int states = mu0.num_states();
  for (const StateBelief& mu : support) {
    if (mu.num_states() != states) {
      throw std::invalid_argument("support belief has wrong state count");
    }
  }
  Eigen::MatrixXd m(states, support.size());
  Eigen::VectorXd target(states);
  for (int w = 0; w < states; ++w) {
    target(w) = mu0(w);
    for (std::size_t j = 0; j < support.size(); ++j) m(w, j) = support[j](w);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-8);
  if (qr.rank() < static_cast<Eigen::Index>(support.size())) {
    throw RankDeficiencyError("support beliefs are linearly dependent");
  }
  const Eigen::VectorXd tau = qr.solve(target);
  SupportWeights out;
  out.weights.assign(tau.data(), tau.data() + tau.size());
  out.residual = (m * tau - target).norm();
  const double min_weight = *std::min_element(out.weights.begin(), out.weights.end());
  out.bayes_plausible = min_weight >= -tol && out.residual <= tol;
  return out;
}

SignalMatrix build_signal_matrix(const BeliefDistribution& distribution,
                                 const StatePrior& mu0) {
  const int states = mu0.num_states();
  if (distribution.support().front().num_states() != states) {
    throw std::invalid_argument("distribution and prior differ in state count");
  }
  if (!distribution.bayes_plausible(mu0.probs(), kDedupTol)) {
    throw std::invalid_argument("distribution mean does not match the prior");
  }
  SignalMatrix signal;
  signal.num_outputs = static_cast<int>(distribution.size());
  signal.probs.assign(states, std::vector<double>(distribution.size(), 0.0));
  for (int w = 0; w < states; ++w) {
    for (std::size_t j = 0; j < distribution.size(); ++j) {
      signal.probs[w][j] =
          distribution.support()[j](w) * distribution.weights()[j] / mu0(w);
    }
  }
  return signal;
}

ExponentialParameterization exponential_parameterization(const DesignSolution& solution,
                                                         const ObliviousPolytope& polytope) {
  const StatePrior& mu0 = polytope.prior;
  const double eps = polytope.epsilon.value();
  const int states = mu0.num_states();
  const std::size_t outputs = solution.support.size();
  if (outputs != solution.distribution.size()) {
    throw std::invalid_argument("solution support and distribution are misaligned");
  }

  ExponentialParameterization out;
  out.scores.assign(states, std::vector<int>(outputs, 0));
  for (int w = 0; w < states; ++w) {
    for (std::size_t j = 0; j < outputs; ++j) {
      out.scores[w][j] = 2 * solution.support[j].prefix_count(w) - w;
    }
  }
  // xi_j = tau_j / (mu0 . psi_j) makes sigma(j|w) = xi_j exp(eps q(w,j))
  // exact before normalization; computed in the log domain.
  std::vector<double> log_xi(outputs);
  for (std::size_t j = 0; j < outputs; ++j) {
    std::vector<double> terms(states);
    for (int w = 0; w < states; ++w) {
      terms[w] = std::log(mu0(w)) + eps * out.scores[w][j];
    }
    log_xi[j] = std::log(solution.distribution.weights()[j]) - log_sum_exp(terms);
  }
  out.base_measure = log_normalize(log_xi);
  return out;
}

DatabaseDesignSolution solve_database(const DatabasePolytope& polytope,
                                      const DecisionProblem& problem, int max_databases) {
  const DatabasePrior& pi0 = polytope.prior;
  if (problem.num_states() != pi0.n_respondents() + 1) {
    throw std::invalid_argument("decision problem and prior differ in state count");
  }
  const std::vector<DatabaseVertex> vertices =
      enumerate_database_vertices(polytope, max_databases);

  std::vector<const std::vector<double>*> columns;
  std::vector<double> values;
  columns.reserve(vertices.size());
  values.reserve(vertices.size());
  for (const DatabaseVertex& v : vertices) {
    columns.push_back(&v.belief.probs());
    values.push_back(interim_value(problem, project_belief(v.belief)).value);
  }
  const LpSolution lp = solve_weight_program(columns, values, pi0.probs());

  std::vector<double> weights;
  const std::vector<std::size_t> kept = pruned_support(lp.x, weights);
  std::vector<DatabaseVertex> support;
  std::vector<StateBelief> projected_support;
  std::vector<DatabaseBelief> support_beliefs;
  double optimum = 0.0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const DatabaseVertex& v = vertices[kept[i]];
    support.push_back(v);
    projected_support.push_back(project_belief(v.belief));
    support_beliefs.push_back(v.belief);
    optimum += weights[i] * values[kept[i]];
  }
  DatabaseBeliefDistribution distribution =
      DatabaseBeliefDistribution::merged(std::move(support_beliefs), std::move(weights));
  return DatabaseDesignSolution{
      optimum,
      interim_value(problem, project_belief(DatabaseBelief(pi0.probs()))).value,
      std::move(support),
      std::move(distribution),
      std::move(projected_support)};
}

}  // namespace dpsignal
