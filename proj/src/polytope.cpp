#include "dpsignal/polytope.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dpsignal/simplex.hpp"

namespace dpsignal {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Normalizes exp(u) in the log domain with max subtraction.
std::vector<double> softmax(const std::vector<double>& u) {
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

// Log-ratio deviation of mu from mu0 between two cells; +inf when mu has a
// zero cell (no finite ratio exists).
double ratio_deviation(double mu_hi, double mu_lo, double mu0_hi, double mu0_lo) {
  if (mu_hi <= 0.0 || mu_lo <= 0.0) return kInf;
  return std::log(mu_hi / mu_lo) - std::log(mu0_hi / mu0_lo);
}

// Union-find connectivity of the tight (difference exactly one) subgraph.
bool tight_graph_spans(const std::vector<int>& shifts, int n) {
  const std::uint32_t count = 1u << n;
  std::vector<std::uint32_t> parent(count);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::uint32_t components = count;
  for (std::uint32_t a = 0; a < count; ++a) {
    for (int p = 0; p < n; ++p) {
      const std::uint32_t b = a | (1u << p);
      if (b == a || std::abs(shifts[a] - shifts[b]) != 1) continue;
      const std::uint32_t ra = find(a), rb = find(b);
      if (ra != rb) {
        parent[ra] = rb;
        --components;
      }
    }
  }
  return components == 1;
}

}  // namespace

int UpperBoundSignature::prefix_count(int w) const {
  return std::popcount(mask & ((w >= 32 ? ~0u : (1u << w) - 1u)));
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> DatabasePolytope::adjacent_pairs() const {
  const int n = prior.n_respondents();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) << (n - 1));
  for (std::uint32_t theta = 0; theta < prior.num_databases(); ++theta) {
    for (int p = 0; p < n; ++p) {
      const std::uint32_t partner = theta | (1u << p);
      if (partner != theta) pairs.emplace_back(theta, partner);
    }
  }
  return pairs;
}

int ObliviousMembership::binding_count(double tol) const {
  int count = 0;
  for (double s : slacks) {
    if (std::isfinite(s) && std::abs(s) <= tol) ++count;
  }
  return count;
}

double ObliviousMembership::worst_violation() const {
  double worst = 0.0;
  for (double s : slacks) worst = std::max(worst, -s);
  return worst;
}

ObliviousMembership oblivious_membership(const ObliviousPolytope& polytope,
                                         const StateBelief& mu, double tol) {
  const StatePrior& mu0 = polytope.prior;
  if (mu.num_states() != mu0.num_states()) {
    throw std::invalid_argument("belief and prior differ in state count");
  }
  const double eps = polytope.epsilon.value();
  ObliviousMembership out;
  out.member = true;
  out.slacks.resize(mu0.max_count());
  for (int w = 1; w <= mu0.max_count(); ++w) {
    const double d = ratio_deviation(mu(w), mu(w - 1), mu0(w), mu0(w - 1));
    const double slack = std::isfinite(d) ? eps - std::abs(d) : -kInf;
    out.slacks[w - 1] = slack;
    if (slack < -tol) out.member = false;
  }
  return out;
}

DatabaseMembership database_membership(const DatabasePolytope& polytope,
                                       const DatabaseBelief& pi, double tol) {
  const DatabasePrior& pi0 = polytope.prior;
  if (pi.num_databases() != pi0.num_databases()) {
    throw std::invalid_argument("belief and prior differ in database count");
  }
  const double eps = polytope.epsilon.value();
  DatabaseMembership out;
  out.member = true;
  for (const auto& [a, b] : polytope.adjacent_pairs()) {
    const double d = ratio_deviation(pi(a), pi(b), pi0(a), pi0(b));
    const double excess = (std::isfinite(d) ? std::abs(d) : kInf) - eps;
    if (excess > tol) {
      out.member = false;
      out.worst_violation = std::max(out.worst_violation, excess);
    }
    if (std::abs(excess) <= tol) ++out.binding_count;
  }
  return out;
}

StateBelief oblivious_vertex(const ObliviousPolytope& polytope,
                             const UpperBoundSignature& signature) {
  const StatePrior& mu0 = polytope.prior;
  const int n = mu0.max_count();
  if (signature.n != n || (n < 32 && signature.mask >> n != 0)) {
    throw std::invalid_argument("signature does not match the state space");
  }
  const double eps = polytope.epsilon.value();
  std::vector<double> u(n + 1);
  for (int w = 0; w <= n; ++w) {
    u[w] = std::log(mu0(w)) + eps * (2 * signature.prefix_count(w) - w);
  }
  return StateBelief(softmax(u));
}

std::vector<StateBelief> enumerate_oblivious_vertices(const ObliviousPolytope& polytope,
                                                      int max_n) {
  const int n = polytope.prior.max_count();
  if (n > max_n || n > 25) {
    throw SizeCapError("state space too large for vertex enumeration");
  }
  std::vector<StateBelief> vertices;
  vertices.reserve(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    vertices.push_back(oblivious_vertex(polytope, UpperBoundSignature{mask, n}));
  }
  return vertices;
}

std::vector<DatabaseVertex> enumerate_database_vertices(const DatabasePolytope& polytope,
                                                        int max_databases) {
  const int n = polytope.prior.n_respondents();
  const std::uint32_t count = polytope.prior.num_databases();
  if (static_cast<int>(count) > max_databases) {
    throw SizeCapError("database space too large for vertex enumeration");
  }
  const double eps = polytope.epsilon.value();

  // Vertices correspond one-to-one with integer labelings m of the
  // hypercube satisfying m(0) = 0 and |m(a) - m(b)| <= 1 on edges, whose
  // tight edges (difference exactly one) connect all databases: tightness
  // on a spanning connected subgraph is exactly a full-rank binding set of
  // ratio constraints. Depth-first search assigns labels in index order;
  // every theta > 0 has the neighbor with its top bit cleared already
  // assigned, so candidate labels stay within an interval of width two.
  std::vector<DatabaseVertex> vertices;
  std::vector<int> shifts(count, 0);

  auto emit = [&]() {
    if (!tight_graph_spans(shifts, n)) return;
    std::vector<double> u(count);
    for (std::uint32_t theta = 0; theta < count; ++theta) {
      u[theta] = std::log(polytope.prior(theta)) + eps * shifts[theta];
    }
    vertices.push_back(DatabaseVertex{DatabaseBelief(softmax(u)), shifts});
  };

  auto assign = [&](auto&& self, std::uint32_t theta) -> void {
    if (theta == count) {
      emit();
      return;
    }
    int lo = std::numeric_limits<int>::min();
    int hi = std::numeric_limits<int>::max();
    for (int p = 0; p < n; ++p) {
      const std::uint32_t nb = theta ^ (1u << p);
      if (nb >= theta) continue;  // not assigned yet
      lo = std::max(lo, shifts[nb] - 1);
      hi = std::min(hi, shifts[nb] + 1);
    }
    for (int v = lo; v <= hi; ++v) {
      shifts[theta] = v;
      self(self, theta + 1);
    }
  };
  assign(assign, 1);
  return vertices;
}

ProjectionGapReport projection_gap(const DatabasePolytope& database_polytope, double tol) {
  const DatabasePrior& pi0 = database_polytope.prior;
  const int n = pi0.n_respondents();
  const double eps = database_polytope.epsilon.value();

  const StateBelief projected_prior = project_belief(DatabaseBelief(pi0.probs()));
  const ObliviousPolytope oblivious{database_polytope.epsilon, StatePrior(projected_prior.probs())};

  ProjectionGapReport report;
  report.all_projections_inside = true;
  for (const DatabaseVertex& vertex : enumerate_database_vertices(database_polytope)) {
    StateBelief projected = project_belief(vertex.belief);
    ObliviousMembership membership = oblivious_membership(oblivious, projected, tol);
    report.all_projections_inside = report.all_projections_inside && membership.member;
    report.projected_vertices.push_back(std::move(projected));
    report.projected_memberships.push_back(std::move(membership));
  }

  // Attainment certificates: for each count-polytope vertex, search the
  // database polytope for a belief with that projection. The ratio bounds
  // linearize as pi(a) <= e^(c+eps) pi(b) and pi(a) >= e^(c-eps) pi(b), so
  // feasibility is a phase-1 simplex question.
  const auto pairs = database_polytope.adjacent_pairs();
  const std::size_t d = pi0.num_databases();
  const std::size_t num_ineq = 2 * pairs.size();
  const std::size_t m = num_ineq + static_cast<std::size_t>(n) + 1;
  const std::size_t num_vars = d + num_ineq;

  report.all_vertices_attained = true;
  for (const StateBelief& target : enumerate_oblivious_vertices(oblivious)) {
    LinearProgram lp;
    lp.m = m;
    lp.n = num_vars;
    lp.a.assign(m * num_vars, 0.0);
    lp.b.assign(m, 0.0);
    lp.c.assign(num_vars, 0.0);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [a, b] = pairs[k];
      const double c_ab = std::log(pi0(a)) - std::log(pi0(b));
      // pi(a) - e^(c+eps) pi(b) + s = 0
      lp.at(2 * k, a) = 1.0;
      lp.at(2 * k, b) = -std::exp(c_ab + eps);
      lp.at(2 * k, d + 2 * k) = 1.0;
      // e^(c-eps) pi(b) - pi(a) + s = 0
      lp.at(2 * k + 1, a) = -1.0;
      lp.at(2 * k + 1, b) = std::exp(c_ab - eps);
      lp.at(2 * k + 1, d + 2 * k + 1) = 1.0;
    }
    for (std::uint32_t theta = 0; theta < d; ++theta) {
      lp.at(num_ineq + std::popcount(theta), theta) = 1.0;
    }
    for (int w = 0; w <= n; ++w) lp.b[num_ineq + w] = target(w);

    const LpSolution solution = solve_lp(lp);
    const bool attained = solution.status == LpStatus::kOptimal;
    report.oblivious_vertices.push_back(target);
    report.vertex_attained.push_back(attained);
    if (attained) {
      std::vector<double> pi(solution.x.begin(), solution.x.begin() + d);
      double sum = std::accumulate(pi.begin(), pi.end(), 0.0);
      for (double& v : pi) v /= sum;
      report.attaining_beliefs.emplace_back(DatabaseBelief(std::move(pi)));
    } else {
      report.attaining_beliefs.emplace_back(std::nullopt);
      report.all_vertices_attained = false;
    }
  }
  return report;
}

}  // namespace dpsignal
