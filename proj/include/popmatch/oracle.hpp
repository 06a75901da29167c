#ifndef POPMATCH_ORACLE_HPP
#define POPMATCH_ORACLE_HPP

// Exhaustive ground truth for small instances: enumerate every matching of an
// instance and compute popular / dominant / strongly popular sets and their
// intersections across a family, straight from the definitions.  Everything
// here is exponential and guarded by explicit size bounds; it exists to
// cross-check the polynomial algorithms at desk scale, not to scale.

#include <functional>
#include <vector>

#include "popmatch/core.hpp"

namespace popmatch {

inline constexpr int kOracleMaxSide = 8;

// Calls `visit` once per matching of `i` in a fixed deterministic order:
// workers are decided in index order, each one first left unmatched and then
// paired with its free neighbors in ascending firm order.  The empty matching
// therefore comes first.  Enumeration stops early when `visit` returns false.
// Throws SizeBoundError when either side exceeds max_side.
void enumerate_matchings(const Instance& i, int max_side,
                         const std::function<bool(const Matching&)>& visit);

// All matchings of `i`, in enumeration order.
std::vector<Matching> all_matchings(const Instance& i,
                                    int max_side = kOracleMaxSide);

// Number of matchings of `i`, computed by an independent bitmask dynamic
// program; used to cross-check the enumerator.
long long count_matchings(const Instance& i, int max_side = 12);

// Definition-level popularity: m never loses a head-to-head vote against any
// matching of `i`.
bool is_popular_by_margins(const Instance& i, const Matching& m,
                           int max_side = kOracleMaxSide);

// The popular / dominant / strongly popular matchings of `i`, in enumeration
// order.  Membership is decided by the structural verifier by default; with
// `by_margins` the pairwise-margin definition is evaluated instead, so the
// two modes double-check each other.
std::vector<Matching> popular_set(const Instance& i,
                                  int max_side = kOracleMaxSide,
                                  bool by_margins = false);
std::vector<Matching> dominant_set(const Instance& i,
                                   int max_side = kOracleMaxSide,
                                   bool by_margins = false);
std::vector<Matching> strong_set(const Instance& i,
                                 int max_side = kOracleMaxSide);

// Matchings that are valid in every instance of the family and popular
// (resp. dominant) in all of them, in enumeration order of the first
// instance.
std::vector<Matching> robust_set(const InstanceFamily& family, Goal goal,
                                 int max_side = kOracleMaxSide,
                                 bool by_margins = false);

}  // namespace popmatch

#endif  // POPMATCH_ORACLE_HPP
