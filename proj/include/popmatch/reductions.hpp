#ifndef POPMATCH_REDUCTIONS_HPP
#define POPMATCH_REDUCTIONS_HPP

// Constructive hardness gadgets.  Each builder maps a source problem to a
// two-instance family whose robust popular (or dominant) matchings encode the
// source answers:
//
//   reduce_sat                      monotone 3-SAT formula -> pair differing
//                                   at two firms (s1, v2);
//   reduce_forbidden_edge_force_vert  popular matching avoiding an edge while
//                                   covering a vertex -> pair differing by one
//                                   swap at each of two agents;
//   reduce_two_forbidden            popular matching avoiding two disjoint
//                                   edges -> reduced-availability pair.
//
// witness_matching / extract_assignment translate between satisfying
// assignments of the formula and matchings of the SAT gadget pair.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "popmatch/core.hpp"

namespace popmatch {

// ---------------------------------------------------------------------------
// Monotone 3-CNF formulas

// One clause of exactly three literals sharing a polarity: all positive or
// all negative.  `vars` holds 0-based variable indices; duplicates are
// allowed (shorter clauses are padded by duplicating a literal).
struct CnfClause {
  bool positive;
  std::array<int, 3> vars;

  friend auto operator<=>(const CnfClause&, const CnfClause&) = default;
};

// A monotone 3-SAT formula.  Construction validates variable ranges.
class CnfFormula {
 public:
  CnfFormula(int num_variables, std::vector<CnfClause> clauses);

  int num_variables() const { return num_variables_; }
  int num_clauses() const { return static_cast<int>(clauses_.size()); }
  const std::vector<CnfClause>& clauses() const { return clauses_; }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  int num_variables_;
  std::vector<CnfClause> clauses_;
};

// assignment[k] is the value of variable k; must cover every variable.
using TruthAssignment = std::vector<bool>;

bool satisfies(const CnfFormula& f, const TruthAssignment& assignment);

// Parses DIMACS CNF ("p cnf <vars> <clauses>" header, clauses terminated by
// 0).  Validates monotonicity and the exactly-3-literal arity; throws
// ParseError with the offending line.
CnfFormula parse_dimacs(const std::string& text);
std::string serialize_dimacs(const CnfFormula& f);

// ---------------------------------------------------------------------------
// Gadget pairs

// A two-instance family produced by a reduction, with a provenance map from
// gadget-role symbols (e.g. "a_2^3", "s_1", "l_d") to the agent labels used
// in the instances, so structural failures are debuggable.  SAT gadgets also
// carry their source formula for the witness/extraction round trip.
struct GadgetPair {
  InstanceFamily family;
  std::map<std::string, std::string> provenance;
  std::optional<CnfFormula> formula;
};

// Builds the two-same-side-firms gadget pair for a monotone 3-SAT formula.
// The instances differ exactly at firms s_1 and v_2.  Throws ValidationError
// on an empty formula (at least one clause is required).
GadgetPair reduce_sat(const CnfFormula& f);

// The matching encoding a satisfying assignment: covers every agent except
// t_3 and is popular and dominant in both instances of the pair (checked
// before returning).  Throws ValidationError if the pair carries no formula
// or the assignment does not satisfy it.
Matching witness_matching(const GadgetPair& pair,
                          const TruthAssignment& assignment);

// Reads an assignment back off a matching of the SAT gadget pair: a variable
// is true when some gadget of one of its positive literals is matched in the
// "true" pattern, false when some negative-literal gadget is, true otherwise.
// Throws ValidationError when both patterns occur for one variable.
TruthAssignment extract_assignment(const GadgetPair& pair, const Matching& m);

// Builds the one-swap-at-two-agents pair for the forbidden-edge/forced-vertex
// problem.  The source must satisfy the promise: one endpoint `a` of `e` has
// no other neighbor, the other endpoint `b` has exactly one further neighbor
// `c`, and `b` and `c` top-rank each other.  `d` is the vertex to force;
// `d = a` is rejected (covering `a` while avoiding `e` is contradictory).
// The pair adds agents l_a, r_a, l_d, r_d and differs from the source-
// preserving instance by one swap at `a` and one at l_d.
GadgetPair reduce_forbidden_edge_force_vert(const Instance& src, Edge e,
                                            AgentId d);

// Builds the reduced-availability pair for two disjoint forbidden edges: the
// first instance is the source, the second drops `e` and `e2` and restricts
// the preference lists accordingly.
GadgetPair reduce_two_forbidden(const Instance& src, Edge e, Edge e2);

}  // namespace popmatch

#endif  // POPMATCH_REDUCTIONS_HPP
