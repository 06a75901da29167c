#ifndef POPMATCH_SOLVE_HPP
#define POPMATCH_SOLVE_HPP

// Single-instance solvers: worker-proposing deferred acceptance, dominant
// matchings via two-level proposals, popular/dominant matchings through a
// required edge, and maximum-weight popular matchings on complete instances.
// All solvers are deterministic; ties break by ascending agent index.

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "popmatch/core.hpp"
#include "popmatch/rational.hpp"

namespace popmatch {

// Edge searches and weight optimization enumerate matchings; beyond this
// many agents per side they refuse to run instead of running forever.
inline constexpr int kSolveMaxSide = 12;

// Worker-proposing deferred acceptance.  The result is the worker-optimal
// stable matching: no non-matching edge is preferred by both endpoints.
Matching gale_shapley(const Instance& i);

// A dominant matching: popular and strictly beating every larger matching.
// Workers walk their lists twice, first at level 0 and, once exhausted,
// again at level 1; a firm takes any level-1 proposal over any level-0 one
// and otherwise follows its own order.
Matching dominant_matching(const Instance& i);

// A popular (resp. dominant) matching containing e, or nullopt when none
// exists.  Exact search: matchings containing e are enumerated in the
// oracle's order and the first one passing the structural check wins, so the
// answer is deterministic.  Throws ValidationError when e is not an edge of
// i and SizeBoundError beyond max_side.
std::optional<Matching> popular_edge(const Instance& i, Edge e,
                                     int max_side = kSolveMaxSide);
std::optional<Matching> dominant_edge(const Instance& i, Edge e,
                                      int max_side = kSolveMaxSide);

// Edge weights; a valid weight function covers exactly the edge set of its
// target instance.
using WeightFunction = std::map<Edge, Rational>;

// Parses `worker firm value` lines (value an integer or p/q) against i.
// Edges not mentioned get weight 0; unknown agents, non-edges, or repeated
// edges are ParseErrors.
WeightFunction parse_weights(const std::string& text, const Instance& i);

// A popular matching of i maximizing the total weight, with that weight;
// first in enumeration order among optimal ones.  Throws ValidationError
// unless i is complete and w covers exactly its edges; SizeBoundError beyond
// max_side.
std::pair<Matching, Rational> max_weight_popular(const Instance& i,
                                                 const WeightFunction& w,
                                                 int max_side = kSolveMaxSide);

}  // namespace popmatch

#endif  // POPMATCH_SOLVE_HPP
