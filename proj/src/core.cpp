#include "dpsignal/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace dpsignal {
namespace {

void check_probability_vector(std::vector<double>& probs, const char* what,
                              bool full_support) {
  if (probs.size() < 2) {
    throw std::invalid_argument(std::string(what) + " needs at least two entries");
  }
  double sum = 0.0;
  for (double& p : probs) {
    if (!std::isfinite(p)) {
      throw std::invalid_argument(std::string(what) + " has a non-finite entry");
    }
    if (p < 0.0) {
      if (p < -kNormTol) {
        throw std::invalid_argument(std::string(what) + " has a negative entry");
      }
      p = 0.0;  // within tolerance; clamp rounding noise
    }
    if (full_support && p <= 0.0) {
      throw std::invalid_argument(std::string(what) + " must have full support");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormTol) {
    throw std::invalid_argument(std::string(what) + " does not sum to one");
  }
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

int log2_exact(std::size_t v) {
  int n = 0;
  while ((std::size_t{1} << n) < v) ++n;
  return n;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

EpsilonBudget::EpsilonBudget(double epsilon) : epsilon_(epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw std::invalid_argument("epsilon must be positive and finite");
  }
}

StatePrior::StatePrior(std::vector<double> probs) : probs_(std::move(probs)) {
  check_probability_vector(probs_, "state prior", /*full_support=*/true);
}

DatabasePrior::DatabasePrior(int n_respondents, std::vector<double> probs)
    : n_(n_respondents), probs_(std::move(probs)) {
  if (n_ < 1) throw std::invalid_argument("database prior needs n >= 1");
  if (probs_.size() != (std::size_t{1} << n_)) {
    throw std::invalid_argument("database prior length must be 2^n");
  }
  check_probability_vector(probs_, "database prior", /*full_support=*/true);
}

bool DatabasePrior::is_symmetric(double tol) const {
  for (int w = 0; w <= n_; ++w) {
    double reference = -1.0;
    for (std::uint32_t theta = 0; theta < num_databases(); ++theta) {
      if (std::popcount(theta) != w) continue;
      if (reference < 0.0) {
        reference = probs_[theta];
      } else if (std::abs(probs_[theta] - reference) > tol) {
        return false;
      }
    }
  }
  return true;
}

StateBelief::StateBelief(std::vector<double> probs) : probs_(std::move(probs)) {
  check_probability_vector(probs_, "state belief", /*full_support=*/false);
}

DatabaseBelief::DatabaseBelief(std::vector<double> probs) : probs_(std::move(probs)) {
  if (!is_power_of_two(probs_.size()) || probs_.size() < 2) {
    throw std::invalid_argument("database belief length must be 2^n, n >= 1");
  }
  n_ = log2_exact(probs_.size());
  check_probability_vector(probs_, "database belief", /*full_support=*/false);
}

namespace {

template <class Belief>
double linf_distance(const Belief& a, const Belief& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.probs().size(); ++i) {
    d = std::max(d, std::abs(a.probs()[i] - b.probs()[i]));
  }
  return d;
}

}  // namespace

template <class Belief>
PosteriorDistribution<Belief>::PosteriorDistribution(std::vector<Belief> support,
                                                     std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.empty()) throw std::invalid_argument("distribution needs support");
  if (support_.size() != weights_.size()) {
    throw std::invalid_argument("support and weights differ in length");
  }
  const std::size_t dim = support_.front().probs().size();
  double sum = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i].probs().size() != dim) {
      throw std::invalid_argument("support beliefs differ in dimension");
    }
    double& w = weights_[i];
    if (!std::isfinite(w) || w < -kNormTol) {
      throw std::invalid_argument("distribution weight is negative");
    }
    if (w < 0.0) w = 0.0;
    sum += w;
  }
  if (std::abs(sum - 1.0) > kNormTol) {
    throw std::invalid_argument("distribution weights do not sum to one");
  }
  for (std::size_t i = 0; i < support_.size(); ++i) {
    for (std::size_t j = i + 1; j < support_.size(); ++j) {
      if (linf_distance(support_[i], support_[j]) <= kDedupTol) {
        throw std::invalid_argument("distribution support has duplicate beliefs");
      }
    }
  }
}

template <class Belief>
PosteriorDistribution<Belief> PosteriorDistribution<Belief>::merged(
    std::vector<Belief> support, std::vector<double> weights, double drop_below) {
  if (support.size() != weights.size() || support.empty()) {
    throw std::invalid_argument("support and weights differ in length");
  }
  std::vector<Belief> out_support;
  std::vector<double> out_weights;
  for (std::size_t i = 0; i < support.size(); ++i) {
    bool found = false;
    for (std::size_t k = 0; k < out_support.size(); ++k) {
      if (linf_distance(support[i], out_support[k]) <= kDedupTol) {
        // Merge as the weight-averaged belief so near-duplicates collapse
        // to a single representative.
        const double total = out_weights[k] + weights[i];
        if (total > 0.0) {
          std::vector<double> mix(out_support[k].probs());
          for (std::size_t w = 0; w < mix.size(); ++w) {
            mix[w] = (mix[w] * out_weights[k] + support[i].probs()[w] * weights[i]) / total;
          }
          out_support[k] = Belief(std::move(mix));
        }
        out_weights[k] = total;
        found = true;
        break;
      }
    }
    if (!found) {
      out_support.push_back(std::move(support[i]));
      out_weights.push_back(weights[i]);
    }
  }
  std::vector<Belief> kept_support;
  std::vector<double> kept_weights;
  double total = 0.0;
  for (std::size_t k = 0; k < out_support.size(); ++k) {
    if (out_weights[k] > drop_below) {
      kept_support.push_back(std::move(out_support[k]));
      kept_weights.push_back(out_weights[k]);
      total += out_weights[k];
    }
  }
  if (kept_support.empty() || total <= 0.0) {
    throw std::invalid_argument("distribution is empty after pruning");
  }
  for (double& w : kept_weights) w /= total;
  return PosteriorDistribution(std::move(kept_support), std::move(kept_weights));
}

template <class Belief>
std::vector<double> PosteriorDistribution<Belief>::mean() const {
  std::vector<double> m(support_.front().probs().size(), 0.0);
  for (std::size_t i = 0; i < support_.size(); ++i) {
    for (std::size_t w = 0; w < m.size(); ++w) {
      m[w] += weights_[i] * support_[i].probs()[w];
    }
  }
  return m;
}

template <class Belief>
bool PosteriorDistribution<Belief>::bayes_plausible(const std::vector<double>& prior,
                                                    double tol) const {
  const std::vector<double> m = mean();
  if (m.size() != prior.size()) return false;
  double l1 = 0.0;
  for (std::size_t w = 0; w < m.size(); ++w) l1 += std::abs(m[w] - prior[w]);
  return l1 <= tol;
}

template class PosteriorDistribution<StateBelief>;
template class PosteriorDistribution<DatabaseBelief>;

DecisionProblem::DecisionProblem(std::vector<double> actions,
                                 std::vector<std::vector<double>> payoffs)
    : actions_(std::move(actions)), payoffs_(std::move(payoffs)) {
  if (actions_.empty()) throw std::invalid_argument("decision problem needs actions");
  if (payoffs_.size() != actions_.size()) {
    throw std::invalid_argument("payoff table needs one row per action");
  }
  for (std::size_t i = 1; i < actions_.size(); ++i) {
    if (!(actions_[i - 1] < actions_[i])) {
      throw std::invalid_argument("action labels must be strictly increasing");
    }
  }
  const std::size_t states = payoffs_.front().size();
  if (states == 0) throw std::invalid_argument("payoff table needs states");
  for (const auto& row : payoffs_) {
    if (row.size() != states) {
      throw std::invalid_argument("payoff rows differ in length");
    }
    for (double u : row) {
      if (!std::isfinite(u)) throw std::invalid_argument("payoff is not finite");
    }
  }
}

int state_of_database(std::uint32_t theta) { return std::popcount(theta); }

std::uint32_t database_index(const std::vector<int>& bits) {
  if (bits.empty() || bits.size() > 31) {
    throw std::invalid_argument("database needs between 1 and 31 respondents");
  }
  std::uint32_t theta = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("respondent bit must be 0 or 1");
    theta = (theta << 1) | static_cast<std::uint32_t>(b);
  }
  return theta;
}

std::vector<int> database_bits(std::uint32_t theta, int n_respondents) {
  if (n_respondents < 1 || n_respondents > 31 || (theta >> n_respondents) != 0) {
    throw std::invalid_argument("database index out of range");
  }
  std::vector<int> bits(n_respondents);
  for (int i = 0; i < n_respondents; ++i) {
    bits[i] = static_cast<int>((theta >> (n_respondents - 1 - i)) & 1u);
  }
  return bits;
}

StateBelief project_belief(const DatabaseBelief& pi) {
  std::vector<double> mu(pi.n_respondents() + 1, 0.0);
  for (std::uint32_t theta = 0; theta < pi.num_databases(); ++theta) {
    mu[std::popcount(theta)] += pi(theta);
  }
  return StateBelief(std::move(mu));
}

DatabasePrior symmetric_prior_from_state_prior(const StatePrior& mu0) {
  const int n = mu0.max_count();
  std::vector<double> probs(std::size_t{1} << n);
  for (std::uint32_t theta = 0; theta < probs.size(); ++theta) {
    const int w = std::popcount(theta);
    probs[theta] = mu0(w) / binomial(n, w);
  }
  return DatabasePrior(n, std::move(probs));
}

}  // namespace dpsignal
