#ifndef POPMATCH_ROBUST_HPP
#define POPMATCH_ROBUST_HPP

// Cross-instance solvers.  A matching is robust popular (dominant) for a
// family of instances over one agent set when it is popular (dominant) in
// every member.  For families that share their graph and differ in the
// preferences of a single agent x, the search reduces to single-instance
// edge queries on synthesized "hybrid" instances: for a designated edge
// {x, y}, the hybrid lifts everything x prefers to y in ANY member above y,
// and a matching containing {x, y} is robust iff it is popular (dominant) in
// the hybrid.  Families differing in more agents are rejected, not guessed
// at; availability-reduced families with a complete first instance go
// through a weight-0 / weight--1 optimization instead.

#include <optional>
#include <vector>

#include "popmatch/core.hpp"
#include "popmatch/solve.hpp"

namespace popmatch {

// Rebuilds `i` with one agent's preference list replaced (same neighbor set,
// new order); throws ValidationError if `order` is not a permutation of the
// old list.
Instance replace_preferences(const Instance& i, AgentId a,
                             const std::vector<int>& order);

// The synthesized preference order of one agent with respect to pivot
// neighbor `y`, given that agent's lists in every family member: neighbors
// ranked above y anywhere move above y — first list's relative order first,
// strictly-later discoveries appended in their own order — and the rest
// follow y in the first list's relative order.  All lists must rank the same
// neighbor set and contain y.
std::vector<int> hybrid_order(const std::vector<std::vector<int>>& orders,
                              int y);

// A hybrid query: the synthesized instance together with the perturbed agent
// and the designated edge.
struct HybridInstance {
  Instance instance;
  AgentId x;
  Edge e;
};

// Builds the hybrid of a shared-graph family whose members differ in the
// preferences of (at most) one agent x, with respect to an edge e at x.
// When the members are identical, the worker endpoint of e plays the role of
// x.  Throws ValidationError when the family is not SameGraph, differs at
// more than one agent, or e is not incident to x.
HybridInstance hybrid_instance(const InstanceFamily& family, Edge e);

// Finds a matching that is popular (resp. dominant) in every member of a
// shared-graph, single-perturbed-agent family, or nullopt when none exists:
// first a stable (resp. dominant) matching of the first member, returned
// outright when it leaves x unmatched; otherwise one edge query per edge at
// x, in x's first-member preference order, each against its hybrid.
std::optional<Matching> robust_matching(const InstanceFamily& family,
                                        Goal goal,
                                        int max_side = kSolveMaxSide);

// Agents matched by no popular matching of i, in ascending AgentId order;
// decided by one popular-edge query per incident edge.
std::vector<AgentId> unpopular_agents(const Instance& i,
                                      int max_side = kSolveMaxSide);

// Fast path for shared-graph families: when every differing agent is matched
// by no popular matching of the first member, the perturbation cannot change
// the popular set, so any popular matching of the first member is robust.
// `Inapplicable` means only that this shortcut does not decide the family —
// not that no robust matching exists.
enum class FastPath { Robust, Inapplicable };

struct FastPathResult {
  FastPath status;
  std::optional<Matching> matching;  // set exactly when status == Robust
};

FastPathResult robust_via_unpopular(const InstanceFamily& family,
                                    int max_side = kSolveMaxSide);

// Robust popular matching for a family whose members only reduce the
// availability of a complete first member: maximize popular-matching weight
// with 0 on edges present everywhere and -1 elsewhere; an optimum of weight 0
// is robust, a negative optimum proves none exists.  Throws ValidationError
// unless the family is AlteredAvailability with a complete first member.
std::optional<Matching> robust_reduced_availability(
    const InstanceFamily& family, int max_side = kSolveMaxSide);

}  // namespace popmatch

#endif  // POPMATCH_ROBUST_HPP
