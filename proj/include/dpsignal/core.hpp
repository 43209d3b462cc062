#pragma once

// Shared domain types for private-count disclosure design: privacy budgets,
// priors and posteriors over databases {0,1}^N and over counts {0,...,N},
// finitely supported distributions of posteriors, and decision problems.
//
// Conventions. Databases are indexed by the integer whose binary numeral is
// the bit string (theta_1 ... theta_N), theta_1 most significant; states are
// zero-indexed counts. All probabilities are doubles. Normalization is
// checked in L1 with tolerance kNormTol; ratio constraints are evaluated in
// the log domain with tolerance kLogTol.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpsignal {

inline constexpr double kNormTol = 1e-9;    // L1 normalization tolerance
inline constexpr double kLogTol = 1e-9;     // log-domain ratio tolerance
inline constexpr double kDedupTol = 1e-7;   // L-inf belief deduplication
inline constexpr double kPruneTol = 1e-12;  // zero-weight support pruning

// Thrown when an enumeration would exceed its configured size cap.
class SizeCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Privacy loss bound in natural-log units. Strictly positive and finite.
class EpsilonBudget {
 public:
  explicit EpsilonBudget(double epsilon);
  double value() const { return epsilon_; }

 private:
  double epsilon_;
};

// Full-support probability vector over states {0,...,N}. Indexed by count.
class StatePrior {
 public:
  explicit StatePrior(std::vector<double> probs);
  int max_count() const { return static_cast<int>(probs_.size()) - 1; }
  int num_states() const { return static_cast<int>(probs_.size()); }
  double operator()(int omega) const { return probs_[omega]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// Full-support probability vector over the 2^N databases, binary order.
class DatabasePrior {
 public:
  DatabasePrior(int n_respondents, std::vector<double> probs);
  int n_respondents() const { return n_; }
  std::uint32_t num_databases() const { return 1u << n_; }
  double operator()(std::uint32_t theta) const { return probs_[theta]; }
  const std::vector<double>& probs() const { return probs_; }
  // True iff the prior is invariant under permuting respondents, i.e.
  // constant on each equal-count class of databases.
  bool is_symmetric(double tol = kNormTol) const;

 private:
  int n_;
  std::vector<double> probs_;
};

// Probability vector over states; entries nonnegative, sum 1.
class StateBelief {
 public:
  explicit StateBelief(std::vector<double> probs);
  int max_count() const { return static_cast<int>(probs_.size()) - 1; }
  int num_states() const { return static_cast<int>(probs_.size()); }
  double operator()(int omega) const { return probs_[omega]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// Probability vector over databases; length a power of two.
class DatabaseBelief {
 public:
  explicit DatabaseBelief(std::vector<double> probs);
  int n_respondents() const { return n_; }
  std::uint32_t num_databases() const { return 1u << n_; }
  double operator()(std::uint32_t theta) const { return probs_[theta]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  int n_;
  std::vector<double> probs_;
};

// Finitely supported distribution of posteriors. Support entries are
// pairwise distinct under the L-inf dedup tolerance; weights are nonnegative
// and sum to 1.
template <class Belief>
class PosteriorDistribution {
 public:
  PosteriorDistribution(std::vector<Belief> support, std::vector<double> weights);

  // Builds a distribution after merging duplicate beliefs (L-inf distance
  // <= kDedupTol) and dropping entries with weight <= drop_below.
  static PosteriorDistribution merged(std::vector<Belief> support,
                                      std::vector<double> weights,
                                      double drop_below = 0.0);

  std::size_t size() const { return support_.size(); }
  const std::vector<Belief>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }

  // Weighted average of the support.
  std::vector<double> mean() const;
  bool bayes_plausible(const std::vector<double>& prior, double tol = kNormTol) const;

 private:
  std::vector<Belief> support_;
  std::vector<double> weights_;
};

using BeliefDistribution = PosteriorDistribution<StateBelief>;
using DatabaseBeliefDistribution = PosteriorDistribution<DatabaseBelief>;

// Finite decision problem: strictly increasing real action labels and a
// finite payoff table u(a, omega), one row per action.
class DecisionProblem {
 public:
  DecisionProblem(std::vector<double> actions, std::vector<std::vector<double>> payoffs);
  int num_actions() const { return static_cast<int>(actions_.size()); }
  int num_states() const { return static_cast<int>(payoffs_.front().size()); }
  double action(int index) const { return actions_[index]; }
  double payoff(int action_index, int omega) const { return payoffs_[action_index][omega]; }
  const std::vector<double>& actions() const { return actions_; }
  const std::vector<std::vector<double>>& payoffs() const { return payoffs_; }

 private:
  std::vector<double> actions_;
  std::vector<std::vector<double>> payoffs_;
};

// Count of ones in the database bit pattern.
int state_of_database(std::uint32_t theta);

// Index of the database with the given respondent bits (bits[0] = theta_1).
std::uint32_t database_index(const std::vector<int>& bits);

// Respondent bits of a database index, most significant first.
std::vector<int> database_bits(std::uint32_t theta, int n_respondents);

// Collapses a database belief onto counts: (P pi)(w) = sum over theta with
// w ones of pi(theta).
StateBelief project_belief(const DatabaseBelief& pi);

// The unique respondent-permutation-invariant database prior projecting to
// mu0: pi0(theta) = mu0(w) / C(N, w) with w the count of theta.
DatabasePrior symmetric_prior_from_state_prior(const StatePrior& mu0);

}  // namespace dpsignal
