#pragma once

// Feasible-posterior polytopes under an epsilon privacy-loss bound.
//
// Oblivious (count) side: beliefs mu over {0,...,N} with
//   |log(mu(w)/mu(w-1)) - log(mu0(w)/mu0(w-1))| <= epsilon,  w = 1..N.
// Its vertices are indexed by upper-bound signatures Phi subseteq {1..N}:
// the ratio constraint at w is tight at +epsilon when w in Phi and at
// -epsilon otherwise.
//
// Database side: beliefs pi over {0,1}^N with
//   |log(pi(theta)/pi(theta')) - log(pi0(theta)/pi0(theta'))| <= epsilon
// for every adjacent pair (theta, theta') differing in one respondent bit.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dpsignal/core.hpp"

namespace dpsignal {

inline constexpr int kDefaultStateVertexCap = 20;       // max N for 2^N vertices
inline constexpr int kDefaultDatabaseVertexCap = 16;    // max 2^N databases

// Subset of constraint indices {1..N} held at the upper bound, stored as a
// bitmask with bit w-1 for constraint w.
struct UpperBoundSignature {
  std::uint32_t mask = 0;
  int n = 0;

  bool contains(int w) const { return ((mask >> (w - 1)) & 1u) != 0; }
  // |Phi intersect {1..w}|, the prefix count entering the vertex closed form.
  int prefix_count(int w) const;
};

struct ObliviousPolytope {
  EpsilonBudget epsilon;
  StatePrior prior;
};

struct DatabasePolytope {
  EpsilonBudget epsilon;
  DatabasePrior prior;

  // All unordered adjacent database pairs (Hamming distance one),
  // lexicographic by (smaller index, larger index). N * 2^(N-1) pairs.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> adjacent_pairs() const;
};

// Membership report for the count polytope. slacks[w-1] is the signed
// margin epsilon - |log-ratio deviation at w|; negative means violated.
struct ObliviousMembership {
  bool member = false;
  std::vector<double> slacks;

  int binding_count(double tol = kLogTol) const;
  double worst_violation() const;  // most negative slack, 0 if member
};

// Membership report for the database polytope over all adjacent pairs.
struct DatabaseMembership {
  bool member = false;
  int binding_count = 0;
  double worst_violation = 0.0;  // largest constraint excess, 0 if member
};

ObliviousMembership oblivious_membership(const ObliviousPolytope& polytope,
                                         const StateBelief& mu,
                                         double tol = kLogTol);

DatabaseMembership database_membership(const DatabasePolytope& polytope,
                                       const DatabaseBelief& pi,
                                       double tol = kLogTol);

// Closed-form vertex for an upper-bound signature:
//   mu_Phi(w)  proportional to  mu0(w) * exp(epsilon * (2|Phi cap {1..w}| - w)).
// Evaluated in the log domain with max subtraction before exponentiation.
StateBelief oblivious_vertex(const ObliviousPolytope& polytope,
                             const UpperBoundSignature& signature);

// All 2^N vertices in ascending signature-mask order. Throws SizeCapError
// if N exceeds max_n.
std::vector<StateBelief> enumerate_oblivious_vertices(const ObliviousPolytope& polytope,
                                                      int max_n = kDefaultStateVertexCap);

// A vertex of the database polytope together with its integer log-shift
// labeling: pi proportional to pi0(theta) * exp(epsilon * shift[theta]),
// shift[0] = 0, |shift difference| <= 1 across every adjacent pair, and the
// pairs where the difference is exactly 1 form a connected spanning
// subgraph of the hypercube (so the binding constraints have full rank).
struct DatabaseVertex {
  DatabaseBelief belief;
  std::vector<int> shifts;
};

// All vertices of the database polytope, deterministic order. Throws
// SizeCapError if 2^N exceeds max_databases.
std::vector<DatabaseVertex> enumerate_database_vertices(const DatabasePolytope& polytope,
                                                        int max_databases = kDefaultDatabaseVertexCap);

// Comparison of the database polytope's count projection with the count
// polytope built from the projected prior at equal epsilon.
struct ProjectionGapReport {
  // Projection of each database vertex, paired with its membership in the
  // count polytope. All should be members: contraction direction.
  std::vector<StateBelief> projected_vertices;
  std::vector<ObliviousMembership> projected_memberships;
  bool all_projections_inside = false;

  // For each count-polytope vertex, whether a database belief in the
  // database polytope projects onto it (feasibility certificate).
  std::vector<StateBelief> oblivious_vertices;
  std::vector<bool> vertex_attained;
  std::vector<std::optional<DatabaseBelief>> attaining_beliefs;
  bool all_vertices_attained = false;
};

// Certifies both directions at a symmetric prior: database-vertex
// projections lie in the count polytope, and each count-polytope vertex is
// attained by some feasible database belief (found by feasibility LP).
ProjectionGapReport projection_gap(const DatabasePolytope& database_polytope,
                                   double tol = kLogTol);

}  // namespace dpsignal
