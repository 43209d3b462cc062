#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"

#include "dpsignal/design.hpp"
#include "dpsignal/mechanisms.hpp"
#include "dpsignal/orders.hpp"
#include "dpsignal/polytope.hpp"

using namespace dpsignal;

namespace {

StatePrior uniform3() { return StatePrior({1.0 / 3, 1.0 / 3, 1.0 / 3}); }

// Geometric-induced distribution at eps = 1 over three states.
BeliefDistribution tau_geometric() {
  return induced_distribution(geometric(EpsilonBudget(1.0), 2).signal, uniform3());
}

// Optimal distribution for the non-supermodular example: the two
// single-bound vertices.
BeliefDistribution tau_star() {
  const ObliviousPolytope polytope{EpsilonBudget(1.0), uniform3()};
  const DecisionProblem problem({0.0, 1.0}, {{2.5, -2.5, 2.5}, {1.0, 1.0, 1.0}});
  return solve_oblivious(polytope, problem).distribution;
}

std::vector<double> iota_labels(std::size_t n) {
  std::vector<double> labels(n);
  std::iota(labels.begin(), labels.end(), 0.0);
  return labels;
}

std::vector<double> peak_labels(const PeakAssignment& assignment) {
  return std::vector<double>(assignment.peaks.begin(), assignment.peaks.end());
}

}  // namespace

TEST_SUITE("orders") {

TEST_CASE("geometric split ratio-dominates the two-vertex optimum") {
  const auto assignment = uprr_compare(tau_geometric(), tau_star());
  REQUIRE(assignment.has_value());
  CHECK(assignment->peaks == std::vector<int>{0, 1, 2});
  // Every peak is forced: the feasible sets are singletons.
  CHECK(assignment->feasible_sets ==
        std::vector<std::vector<int>>{{0}, {1}, {2}});
}

TEST_CASE("the two-vertex optimum is not ratio-unimodal against the split") {
  // Its {2}-signature posterior falls then rises against the {1}-signature
  // posterior, so no peak exists.
  CHECK_FALSE(uprr_compare(tau_star(), tau_geometric()).has_value());
  CHECK_FALSE(uprr_compare(tau_star(), tau_star()).has_value());
}

TEST_CASE("uninformative distributions compare trivially") {
  const BeliefDistribution lone({StateBelief(uniform3().probs())}, {1.0});
  const auto assignment = uprr_compare(lone, lone);
  REQUIRE(assignment.has_value());
  CHECK(assignment->peaks == std::vector<int>{0});  // smallest feasible peak
  CHECK(assignment->feasible_sets == std::vector<std::vector<int>>{{0, 1, 2}});

  // Against no information each vertex ratio is monotone through its own
  // signature, so the peaks are again forced.
  const auto vs_lone = uprr_compare(tau_geometric(), lone);
  REQUIRE(vs_lone.has_value());
  CHECK(vs_lone->peaks == std::vector<int>{0, 1, 2});
  CHECK(vs_lone->feasible_sets == std::vector<std::vector<int>>{{0}, {1}, {2}});
}

TEST_CASE("ratio comparisons need strictly positive beliefs") {
  const BeliefDistribution degenerate({StateBelief({1.0, 0.0, 0.0})}, {1.0});
  const BeliefDistribution lone({StateBelief(uniform3().probs())}, {1.0});
  CHECK_THROWS_AS(uprr_compare(degenerate, lone), std::domain_error);
  CHECK_THROWS_AS(uprr_compare(lone, degenerate), std::domain_error);
}

TEST_CASE("comonotone layout orders segments by label") {
  const BeliefDistribution tau = tau_geometric();
  const FrechetRepresentation rep = frechet_representation(tau, {0.0, 1.0, 2.0});

  REQUIRE(rep.segment_beliefs.size() == 3);
  CHECK(rep.segment_labels == std::vector<double>{0.0, 1.0, 2.0});
  REQUIRE(rep.breakpoints.size() == 4);
  CHECK(rep.breakpoints[0] == 0.0);
  CHECK(rep.breakpoints[1] == doctest::Approx(0.36631267326714906).epsilon(1e-12));
  CHECK(rep.breakpoints[2] == doctest::Approx(0.63368732673285089).epsilon(1e-12));
  CHECK(rep.breakpoints[3] == 1.0);

  const std::vector<StateBelief> vertices =
      enumerate_oblivious_vertices(ObliviousPolytope{EpsilonBudget(1.0), uniform3()});
  const std::vector<int> vertex_of_segment{0, 1, 3};
  for (std::size_t k = 0; k < 3; ++k) {
    for (int w = 0; w < 3; ++w) {
      CHECK(rep.segment_beliefs[k](w) ==
            doctest::Approx(vertices[vertex_of_segment[k]](w)).epsilon(1e-12));
    }
  }

  // Descending labels reverse the layout.
  const FrechetRepresentation flipped = frechet_representation(tau, {2.0, 1.0, 0.0});
  CHECK(flipped.segment_labels == std::vector<double>{0.0, 1.0, 2.0});
  for (int w = 0; w < 3; ++w) {
    CHECK(flipped.segment_beliefs[0](w) == doctest::Approx(vertices[3](w)).epsilon(1e-12));
    CHECK(flipped.segment_beliefs[2](w) == doctest::Approx(vertices[0](w)).epsilon(1e-12));
  }
}

TEST_CASE("equal labels pool into weight-averaged segments") {
  const BeliefDistribution tau = tau_geometric();
  const FrechetRepresentation rep = frechet_representation(tau, {0.0, 1.0, 1.0});

  REQUIRE(rep.segment_beliefs.size() == 2);
  REQUIRE(rep.breakpoints.size() == 3);
  CHECK(rep.breakpoints[1] == doctest::Approx(tau.weights()[0]).epsilon(1e-12));
  CHECK(rep.breakpoints[2] == 1.0);

  const double w1 = tau.weights()[1];
  const double w2 = tau.weights()[2];
  for (int w = 0; w < 3; ++w) {
    const double pooled =
        (w1 * tau.support()[1](w) + w2 * tau.support()[2](w)) / (w1 + w2);
    CHECK(rep.segment_beliefs[1](w) == doctest::Approx(pooled).epsilon(1e-12));
  }

  // A constant label collapses everything onto the mean, i.e. the prior.
  const FrechetRepresentation flat = frechet_representation(tau, {5.0, 5.0, 5.0});
  REQUIRE(flat.segment_beliefs.size() == 1);
  CHECK(flat.breakpoints == std::vector<double>{0.0, 1.0});
  for (int w = 0; w < 3; ++w) {
    CHECK(flat.segment_beliefs[0](w) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }

  CHECK_THROWS_AS(frechet_representation(tau, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(frechet_representation(tau, {0.0, 1.0, std::nan("")}),
                  std::invalid_argument);
}

TEST_CASE("joint distribution function has uniform and prior marginals") {
  const BeliefDistribution tau = tau_geometric();
  const FrechetRepresentation rep = frechet_representation(tau, {0.0, 1.0, 2.0});

  double cumulative = 0.0;
  for (int w = 0; w < 3; ++w) {
    cumulative += 1.0 / 3;
    CHECK(frechet_cdf(rep, w, 1.0) == doctest::Approx(cumulative).epsilon(1e-9));
    CHECK(frechet_slice(rep, w, 1.0) == doctest::Approx(1.0 / 3).epsilon(1e-9));
  }
  for (double x : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    CHECK(frechet_cdf(rep, 2, x) == doctest::Approx(x).epsilon(1e-12));
  }

  // Monotone in x along every state and in the state at every x.
  for (int w = 0; w < 3; ++w) {
    double prev = -1.0;
    for (double x = 0.0; x <= 1.0; x += 0.05) {
      const double value = frechet_cdf(rep, w, x);
      CHECK(value >= prev - 1e-12);
      if (w > 0) CHECK(value >= frechet_cdf(rep, w - 1, x) - 1e-12);
      prev = value;
    }
  }

  // Inside the first segment the slice grows linearly with the vertex mass.
  const double half = 0.5 * rep.breakpoints[1];
  CHECK(frechet_slice(rep, 0, half) ==
        doctest::Approx(half * rep.segment_beliefs[0](0)).epsilon(1e-12));
}

TEST_CASE("pointwise dominance separates the split from its coarsenings") {
  const BeliefDistribution tau = tau_geometric();
  const auto assignment = uprr_compare(tau, tau_star());
  REQUIRE(assignment.has_value());

  const FrechetRepresentation fine = frechet_representation(tau, peak_labels(*assignment));
  const FrechetRepresentation coarse =
      frechet_representation(tau_star(), iota_labels(tau_star().size()));

  CHECK(spm_dominates(fine, fine).dominates);

  const SpmReport forward = spm_dominates(fine, coarse);
  CHECK(forward.dominates);
  CHECK(forward.worst_margin >= -kNormTol);

  const SpmReport backward = spm_dominates(coarse, fine);
  CHECK_FALSE(backward.dominates);
  CHECK(backward.worst_margin < -1e-3);
  CHECK(backward.worst_state >= 0);
  CHECK(backward.worst_point > 0.0);
  CHECK(backward.worst_point < 1.0);
}

TEST_CASE("dominance is only defined on matching marginals") {
  const BeliefDistribution tau = tau_geometric();
  const FrechetRepresentation fine = frechet_representation(tau, iota_labels(3));

  const BeliefDistribution two_state(
      {StateBelief({0.5, 0.5}), StateBelief({0.4, 0.6})}, {0.5, 0.5});
  const FrechetRepresentation other = frechet_representation(two_state, iota_labels(2));
  CHECK_THROWS_AS(spm_dominates(fine, other), std::invalid_argument);

  const BeliefDistribution tilted({StateBelief({0.5, 0.3, 0.2})}, {1.0});
  const FrechetRepresentation off = frechet_representation(tilted, iota_labels(1));
  CHECK_THROWS_AS(spm_dominates(fine, off), std::invalid_argument);
}

TEST_CASE("value comparisons require supermodular payoffs") {
  const DecisionProblem supermodular({0.0, 1.0}, {{3.0, 0.0, -2.5}, {1.0, 1.0, 1.0}});
  const DecisionProblem mixed({0.0, 1.0}, {{2.5, -2.5, 2.5}, {1.0, 1.0, 1.0}});

  const BeliefDistribution tau = tau_geometric();
  const BeliefDistribution lone({StateBelief(uniform3().probs())}, {1.0});

  const auto [fine_value, coarse_value] = supermodular_value_dominance(tau, lone, supermodular);
  CHECK(fine_value == doctest::Approx(1.2822975555283165).epsilon(1e-9));
  CHECK(coarse_value == doctest::Approx(1.0).epsilon(1e-9));

  const auto [self_a, self_b] = supermodular_value_dominance(tau, tau, supermodular);
  CHECK(self_a == doctest::Approx(self_b).epsilon(1e-12));

  CHECK_THROWS_AS(supermodular_value_dominance(tau, lone, mixed), std::invalid_argument);
}

TEST_CASE("ratio dominance implies pointwise and value dominance") {
  const StatePrior mu0 = uniform3();
  const BeliefDistribution tau = tau_geometric();
  const DecisionProblem supermodular({0.0, 1.0}, {{3.0, 0.0, -2.5}, {1.0, 1.0, 1.0}});

  // Post-processings of the geometric signal: each stays private, so the
  // split must dominate each induced distribution in all three senses.
  const std::vector<std::vector<std::vector<double>>> garbles{
      {{1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}},
      {{0.9, 0.1}, {0.1, 0.9}, {0.0, 1.0}},
      {{1.0, 0.0, 0.0}, {0.2, 0.6, 0.2}, {0.0, 0.0, 1.0}},
      {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}},
  };
  const SignalMatrix base = geometric(EpsilonBudget(1.0), 2).signal;

  for (const auto& garble : garbles) {
    SignalMatrix coarse_signal;
    coarse_signal.num_outputs = static_cast<int>(garble.front().size());
    coarse_signal.probs.assign(3, std::vector<double>(coarse_signal.num_outputs, 0.0));
    for (int w = 0; w < 3; ++w) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < coarse_signal.num_outputs; ++k) {
          coarse_signal.probs[w][k] += base(w, j) * garble[j][k];
        }
      }
    }
    const BeliefDistribution coarse = induced_distribution(coarse_signal, mu0);

    const auto assignment = uprr_compare(tau, coarse);
    REQUIRE(assignment.has_value());

    const auto [fine_value, coarse_value] = supermodular_value_dominance(tau, coarse, supermodular);
    CHECK(fine_value >= coarse_value - 1e-9);

    const FrechetRepresentation fine_rep = frechet_representation(tau, peak_labels(*assignment));
    const FrechetRepresentation coarse_rep =
        frechet_representation(coarse, iota_labels(coarse.size()));
    CHECK(spm_dominates(fine_rep, coarse_rep).dominates);
  }
}

}  // TEST_SUITE
