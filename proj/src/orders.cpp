#include "dpsignal/orders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace dpsignal {
namespace {

void require_positive(const BeliefDistribution& distribution, const char* side) {
  for (const StateBelief& mu : distribution.support()) {
    for (double p : mu.probs()) {
      if (p <= 0.0) {
        throw std::domain_error(std::string("ratio ranking needs strictly positive ") +
                                side + " posteriors");
      }
    }
  }
}

// Log-ratio steps of mu against nu: d(w) = log(mu(w)/nu(w)) - log(mu(w-1)/nu(w-1)).
std::vector<double> ratio_steps(const StateBelief& mu, const StateBelief& nu) {
  std::vector<double> d(mu.num_states() - 1);
  for (int w = 1; w < mu.num_states(); ++w) {
    d[w - 1] = (std::log(mu(w)) - std::log(nu(w))) - (std::log(mu(w - 1)) - std::log(nu(w - 1)));
  }
  return d;
}

}  // namespace

std::optional<PeakAssignment> uprr_compare(const BeliefDistribution& fine,
                                           const BeliefDistribution& coarse,
                                           double tol) {
  const int states = fine.support().front().num_states();
  if (coarse.support().front().num_states() != states) {
    throw std::invalid_argument("distributions differ in state count");
  }
  require_positive(fine, "dominating");
  require_positive(coarse, "dominated");

  PeakAssignment assignment;
  for (const StateBelief& mu : fine.support()) {
    // Against each dominated posterior the ratio must rise until the peak
    // and fall after it, so the peak lies in [last rise, first fall - 1];
    // intersect these intervals over the dominated support.
    int lo = 0;
    int hi = states - 1;
    for (const StateBelief& nu : coarse.support()) {
      const std::vector<double> d = ratio_steps(mu, nu);
      for (int w = 1; w < states; ++w) {
        if (d[w - 1] > tol) lo = std::max(lo, w);
      }
      for (int w = states - 1; w >= 1; --w) {
        if (d[w - 1] < -tol) hi = std::min(hi, w - 1);
      }
    }
    if (lo > hi) return std::nullopt;
    assignment.peaks.push_back(lo);
    std::vector<int> feasible(hi - lo + 1);
    std::iota(feasible.begin(), feasible.end(), lo);
    assignment.feasible_sets.push_back(std::move(feasible));
  }
  return assignment;
}

FrechetRepresentation frechet_representation(const BeliefDistribution& distribution,
                                             const std::vector<double>& labels) {
  if (labels.size() != distribution.size()) {
    throw std::invalid_argument("labels and support differ in length");
  }
  for (double label : labels) {
    if (!std::isfinite(label)) throw std::invalid_argument("labels must be finite");
  }
  const int states = distribution.support().front().num_states();

  std::map<double, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);

  FrechetRepresentation rep;
  rep.breakpoints.push_back(0.0);
  double cumulative = 0.0;
  double compensation = 0.0;
  for (const auto& [label, members] : groups) {
    double group_weight = 0.0;
    std::vector<double> blend(states, 0.0);
    for (std::size_t i : members) {
      const double tau = distribution.weights()[i];
      group_weight += tau;
      for (int w = 0; w < states; ++w) blend[w] += tau * distribution.support()[i](w);
    }
    if (group_weight > 0.0) {
      for (double& v : blend) v /= group_weight;
    } else {
      // Degenerate zero-weight group: plain average keeps a valid belief.
      for (std::size_t i : members) {
        for (int w = 0; w < states; ++w) {
          blend[w] += distribution.support()[i](w) / members.size();
        }
      }
    }
    const double y = group_weight - compensation;
    const double t = cumulative + y;
    compensation = (t - cumulative) - y;
    cumulative = t;
    rep.breakpoints.push_back(cumulative);
    rep.segment_beliefs.emplace_back(std::move(blend));
    rep.segment_labels.push_back(label);
  }
  rep.breakpoints.back() = 1.0;  // weights sum to one by construction
  return rep;
}

double frechet_slice(const FrechetRepresentation& rep, int omega, double x) {
  const double clamped = std::clamp(x, 0.0, 1.0);
  double mass = 0.0;
  for (std::size_t k = 0; k < rep.segment_beliefs.size(); ++k) {
    const double length =
        std::clamp(clamped - rep.breakpoints[k], 0.0, rep.breakpoints[k + 1] - rep.breakpoints[k]);
    mass += rep.segment_beliefs[k](omega) * length;
  }
  return mass;
}

double frechet_cdf(const FrechetRepresentation& rep, int omega, double x) {
  double mass = 0.0;
  for (int w = 0; w <= omega; ++w) mass += frechet_slice(rep, w, x);
  return mass;
}

SpmReport spm_dominates(const FrechetRepresentation& f, const FrechetRepresentation& g,
                        double tol) {
  if (f.segment_beliefs.empty() || g.segment_beliefs.empty() ||
      f.segment_beliefs.front().num_states() != g.segment_beliefs.front().num_states()) {
    throw std::invalid_argument("representations differ in state count");
  }
  const int states = f.segment_beliefs.front().num_states();
  double marginal_gap = 0.0;
  for (int w = 0; w < states; ++w) {
    marginal_gap += std::abs(frechet_slice(f, w, 1.0) - frechet_slice(g, w, 1.0));
  }
  if (marginal_gap > kDedupTol) {
    throw std::invalid_argument("representations have different state marginals");
  }

  SpmReport report;
  // Both CDFs are piecewise linear in x with kinks only at breakpoints, so
  // the minimum of F - G over x is attained on the union of breakpoints.
  std::set<double> points(f.breakpoints.begin(), f.breakpoints.end());
  points.insert(g.breakpoints.begin(), g.breakpoints.end());

  report.worst_margin = std::numeric_limits<double>::infinity();
  for (int w = 0; w < states; ++w) {
    for (double x : points) {
      const double margin = frechet_cdf(f, w, x) - frechet_cdf(g, w, x);
      if (margin < report.worst_margin) {
        report.worst_margin = margin;
        report.worst_state = w;
        report.worst_point = x;
      }
    }
  }
  report.dominates = report.worst_margin >= -tol;
  return report;
}

std::pair<double, double> supermodular_value_dominance(const BeliefDistribution& fine,
                                                       const BeliefDistribution& coarse,
                                                       const DecisionProblem& problem) {
  if (!is_supermodular(problem, 1e-12).supermodular) {
    throw std::invalid_argument("value dominance needs a supermodular problem");
  }
  auto expected_value = [&problem](const BeliefDistribution& d) {
    double value = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      value += d.weights()[i] * interim_value(problem, d.support()[i]).value;
    }
    return value;
  };
  return {expected_value(fine), expected_value(coarse)};
}

}  // namespace dpsignal
