#pragma once

#include <map>
#include <optional>
#include <string>

#include "popmatch/core.hpp"
#include "popmatch/rational.hpp"

// Mixed (fractional) popularity: the popularity polytope of a complete
// instance consists of the nonnegative edge-mass vectors that satisfy every
// agent's degree equality and have nonnegative expected margin against every
// matching.  Joint feasibility across a family, and the search for an
// integral point, are decided by exact rational arithmetic throughout.

namespace popmatch {

// Nonnegative mass per edge; edges absent from the map carry mass 0.
struct FractionalMatching {
  std::map<Edge, Rational> mass;

  Rational mass_of(Edge e) const {
    auto it = mass.find(e);
    return it == mass.end() ? Rational(0) : it->second;
  }

  friend bool operator==(const FractionalMatching&,
                         const FractionalMatching&) = default;
};

// Incidence vector of an (integral) matching.
FractionalMatching indicator(const Matching& m);

// Throws ValidationError unless every entry sits on an edge of `i`, is
// nonnegative, and no agent carries total incident mass above 1.
void validate_fractional(const Instance& i, const FractionalMatching& mu);

// Expected popularity margin of mu against m: each agent votes with the
// signed mass it places on partners better/worse than its partner in m,
// counting unassigned mass as the agent being unmatched.  Coincides with
// popularity_margin(i, m1, m) when mu is indicator(m1).
Rational fractional_margin(const Instance& i, const FractionalMatching& mu,
                           const Matching& m);

// One "<worker label> <firm label> <p/q>" line per positive-mass edge, in
// (worker, firm) index order.
std::string serialize_fractional(const Instance& i,
                                 const FractionalMatching& mu);

// A point in the intersection of the popularity polytopes of all family
// members, or nullopt if the intersection is empty.  Requires every member
// complete with equal side sizes (the degree equalities presume perfect
// fractional matchings); throws SizeBoundError above max_side.
std::optional<FractionalMatching> joint_polytope_feasible(
    const InstanceFamily& family, int max_side = 4);

// First matching (in enumeration order) whose incidence vector lies in the
// joint polytope — equivalently a robust popular matching of the family —
// or nullopt if the joint polytope contains no integral point.
std::optional<Matching> integral_point_exists(const InstanceFamily& family,
                                              int max_side = 4);

}  // namespace popmatch
