#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "dpsignal/core.hpp"

using namespace dpsignal;

TEST_SUITE("core") {

TEST_CASE("epsilon budget must be positive and finite") {
  CHECK(EpsilonBudget(1.5).value() == 1.5);
  CHECK(EpsilonBudget(1e-6).value() == 1e-6);
  CHECK_THROWS_AS(EpsilonBudget(0.0), std::invalid_argument);
  CHECK_THROWS_AS(EpsilonBudget(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(EpsilonBudget(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(EpsilonBudget(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
}

TEST_CASE("state prior validates full support and normalization") {
  const StatePrior mu0({0.2, 0.3, 0.5});
  CHECK(mu0.num_states() == 3);
  CHECK(mu0.max_count() == 2);
  CHECK(mu0(1) == 0.3);
  CHECK(mu0.probs().size() == 3);
  CHECK_THROWS_AS(StatePrior({0.5, 0.5, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(StatePrior({0.4, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(StatePrior({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(StatePrior({0.5, std::numeric_limits<double>::quiet_NaN()}),
                  std::invalid_argument);
}

TEST_CASE("database prior length is tied to the respondent count") {
  const DatabasePrior pi0(2, {0.4, 0.1, 0.2, 0.3});
  CHECK(pi0.n_respondents() == 2);
  CHECK(pi0.num_databases() == 4);
  CHECK(pi0(3) == 0.3);
  CHECK_FALSE(pi0.is_symmetric());
  CHECK_THROWS_AS(DatabasePrior(2, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(DatabasePrior(0, {1.0}), std::invalid_argument);

  // Symmetric means constant on each equal-count class: indices 1 and 2
  // share count 1 here.
  CHECK(DatabasePrior(2, {0.4, 0.15, 0.15, 0.3}).is_symmetric());
}

TEST_CASE("beliefs clamp rounding noise but reject real negatives") {
  const StateBelief clamped({1.0, -1e-12, 1e-12});
  CHECK(clamped(1) == 0.0);
  CHECK_THROWS_AS(StateBelief({1.2, -0.2, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(StateBelief({0.6, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(DatabaseBelief({0.5, 0.25, 0.25}), std::invalid_argument);
  const DatabaseBelief pi({0.5, 0.25, 0.125, 0.125});
  CHECK(pi.n_respondents() == 2);
}

TEST_CASE("database indexing is most-significant-bit first") {
  CHECK(database_index({1, 1, 0}) == 6u);
  CHECK(database_index({0, 0, 1}) == 1u);
  CHECK(database_bits(6, 3) == std::vector<int>{1, 1, 0});
  CHECK(database_bits(1, 3) == std::vector<int>{0, 0, 1});
  CHECK(state_of_database(6) == 2);
  CHECK(state_of_database(0) == 0);
  CHECK(state_of_database(7) == 3);
  CHECK_THROWS_AS(database_index({0, 2}), std::invalid_argument);
}

TEST_CASE("projection collapses databases onto counts") {
  const DatabaseBelief pi({0.25, 0.25, 0.25, 0.25});
  const StateBelief mu = project_belief(pi);
  CHECK(mu.num_states() == 3);
  CHECK(mu(0) == 0.25);
  CHECK(mu(1) == 0.5);
  CHECK(mu(2) == 0.25);

  const DatabaseBelief skew({0.1, 0.2, 0.3, 0.4});
  const StateBelief ms = project_belief(skew);
  CHECK(ms(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ms(2) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("symmetric prior splits each count over its databases") {
  const StatePrior mu0({1.0 / 3, 1.0 / 3, 1.0 / 3});
  const DatabasePrior pi0 = symmetric_prior_from_state_prior(mu0);
  CHECK(pi0.n_respondents() == 2);
  CHECK(pi0(0) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(pi0(1) == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(pi0(2) == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(pi0(3) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(pi0.is_symmetric());

  const StateBelief back = project_belief(DatabaseBelief(pi0.probs()));
  for (int w = 0; w < 3; ++w) {
    CHECK(back(w) == doctest::Approx(mu0(w)).epsilon(1e-12));
  }

  // Binomial split at N = 3: count 1 spreads over C(3,1) = 3 databases.
  const DatabasePrior big = symmetric_prior_from_state_prior(StatePrior({0.4, 0.3, 0.2, 0.1}));
  CHECK(big(1) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(big(3) == doctest::Approx(0.2 / 3).epsilon(1e-15));
}

TEST_CASE("posterior distributions validate weights and dedup") {
  const StateBelief a({0.7, 0.2, 0.1});
  const StateBelief b({0.1, 0.2, 0.7});
  CHECK_THROWS_AS(BeliefDistribution({a, b}, {0.7, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(BeliefDistribution({a, b}, {-0.25, 1.25}), std::invalid_argument);
  CHECK_THROWS_AS(BeliefDistribution({a, a}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(BeliefDistribution({a}, {0.5, 0.5}), std::invalid_argument);

  const BeliefDistribution d({a, b}, {0.25, 0.75});
  CHECK(d.size() == 2);
  const std::vector<double> mean = d.mean();
  CHECK(mean[0] == doctest::Approx(0.7 * 0.25 + 0.1 * 0.75).epsilon(1e-15));
  CHECK(mean[2] == doctest::Approx(0.1 * 0.25 + 0.7 * 0.75).epsilon(1e-15));
  CHECK(d.bayes_plausible(mean, 1e-12));
  CHECK_FALSE(d.bayes_plausible({1.0 / 3, 1.0 / 3, 1.0 / 3}, 1e-9));
}

TEST_CASE("merged collapses duplicates and prunes dust") {
  const StateBelief a({0.7, 0.2, 0.1});
  const StateBelief b({0.1, 0.2, 0.7});
  const StateBelief a_jitter({0.7 + 5e-9, 0.2 - 5e-9, 0.1});

  const BeliefDistribution m = BeliefDistribution::merged({a, b, a_jitter}, {0.25, 0.5, 0.25});
  CHECK(m.size() == 2);
  CHECK(m.weights()[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.weights()[1] == doctest::Approx(0.5).epsilon(1e-15));

  const BeliefDistribution p =
      BeliefDistribution::merged({a, b}, {1e-13, 1.0 - 1e-13}, 1e-12);
  CHECK(p.size() == 1);
  CHECK(p.weights()[0] == 1.0);
  CHECK(p.support()[0](2) == b(2));
}

TEST_CASE("decision problems demand increasing labels and rectangular payoffs") {
  const DecisionProblem dp({0.0, 1.0}, {{3.0, 0.0, -2.5}, {1.0, 1.0, 1.0}});
  CHECK(dp.num_actions() == 2);
  CHECK(dp.num_states() == 3);
  CHECK(dp.payoff(0, 2) == -2.5);
  CHECK(dp.action(1) == 1.0);
  CHECK_THROWS_AS(DecisionProblem({1.0, 0.0}, {{1.0}, {2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DecisionProblem({0.0, 0.0}, {{1.0}, {2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DecisionProblem({0.0, 1.0}, {{1.0, 2.0}, {1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DecisionProblem({0.0}, {}), std::invalid_argument);
}

}  // TEST_SUITE
