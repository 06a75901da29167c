#ifndef POPMATCH_VERIFY_HPP
#define POPMATCH_VERIFY_HPP

// Votes, popularity margins, and structural verification of popularity,
// dominance, and strong popularity.
//
// A matching M is popular when it never loses a head-to-head vote: for every
// matching M', the margin Delta(M, M') = sum over agents of {+1, 0, -1} votes
// is nonnegative.  Popularity admits a combinatorial characterization on the
// labeled graph G_M obtained by classifying each non-matching edge by how its
// endpoints feel about it — (-,-) both prefer it to their situation under M,
// (+,-) exactly one does, (+,+) neither — and deleting the (+,+) edges.
// M is popular if and only if G_M contains none of:
//   (i)   an alternating cycle with a (-,-) edge,
//   (ii)  an alternating path with a (-,-) edge starting at a vertex
//         unmatched by M,
//   (iii) an alternating path with two distinct (-,-) edges.
// The verifier below searches for these structures in polynomial time and,
// when one exists, returns it together with a strictly more popular matching
// built mechanically from it.

#include <optional>
#include <vector>

#include "popmatch/core.hpp"

namespace popmatch {

// Classification of an edge relative to a matching.  The two mixed labels
// (+,-) and (-,+) are collapsed into PlusMinus; queries that care which
// endpoint prefers the edge use LabeledGraph::prefers_edge.
enum class EdgeLabel { MinusMinus, PlusMinus, PlusPlus, Matched };

// Per-edge labels relative to a matching, plus the "retained" adjacency of
// the subgraph G_M that drops the (+,+) edges.
class LabeledGraph {
 public:
  LabeledGraph(const Instance& i, Matching m);

  const Instance& instance() const { return *instance_; }
  const Matching& matching() const { return matching_; }

  EdgeLabel label(Edge e) const;
  // True iff endpoint `a` of edge `e` prefers e's partner to its partner
  // under the matching (unmatched agents prefer any edge).
  bool prefers_edge(AgentId a, Edge e) const;

  // Retained neighbors of `a`: partners of non-matching edges that are not
  // (+,+), in ascending index order.
  const std::vector<int>& retained(AgentId a) const;

  // All (-,-) edges, sorted.
  const std::vector<Edge>& minus_minus_edges() const { return minus_minus_; }

 private:
  const Instance* instance_;
  Matching matching_;
  std::vector<std::vector<int>> worker_retained_, firm_retained_;
  std::vector<Edge> minus_minus_;
};

LabeledGraph label_graph(const Instance& i, const Matching& m);

// Vote of agent x between two matchings: +1 if x prefers its partner under
// m1 (being matched beats being unmatched), -1 if it prefers m2, 0 otherwise.
int vote(const Instance& i, AgentId x, const Matching& m1, const Matching& m2);

// Delta(m1, m2): sum of all votes.  Positive means m1 wins the election.
int popularity_margin(const Instance& i, const Matching& m1,
                      const Matching& m2);

// Witness that a matching is unpopular: the violating alternating structure
// and the strictly more popular matching derived from it.
struct Certificate {
  enum class Kind {
    AlternatingCycle,    // condition (i)
    PathFromUnmatched,   // condition (ii)
    PathTwoMinusMinus,   // condition (iii)
  };
  Kind kind;
  // Vertex sequence of the alternating path, or of the cycle (first vertex
  // not repeated at the end).
  std::vector<AgentId> vertices;
  // The counter matching M' built from the structure, and Delta(M', M) > 0.
  Matching counter;
  int margin;

  Certificate(Kind k, std::vector<AgentId> v, Matching c, int d)
      : kind(k), vertices(std::move(v)), counter(std::move(c)), margin(d) {}
};

struct PopularityResult {
  bool popular;
  std::optional<Certificate> certificate;  // set iff !popular
};

// Structural popularity test; polynomial time.  The certificate returned for
// an unpopular matching is the first violation found under a fixed
// deterministic traversal (unmatched vertices in AgentId order, then (-,-)
// edges in edge order, breadth-first), and its counter matching is verified
// against popularity_margin before being returned.
PopularityResult is_popular(const Instance& i, const Matching& m);

// A dominant matching is a popular matching that defeats every strictly
// larger matching.  Checked structurally: popular and no augmenting path in
// G_M.  `is_dominant_by_enumeration` is the definition-level fallback used to
// cross-validate the structural check on small instances.
bool is_dominant(const Instance& i, const Matching& m);
bool is_dominant_by_enumeration(const Instance& i, const Matching& m,
                                int max_side = 8);

// Delta(m, m') > 0 against every other matching; exhaustive, so guarded by a
// size bound (throws SizeBoundError above it).
bool is_strongly_popular(const Instance& i, const Matching& m,
                         int max_side = 8);

// True iff no non-matching edge is preferred by both endpoints; stable
// matchings are exactly the matchings with no (-,-) edge.
bool is_stable(const Instance& i, const Matching& m);

}  // namespace popmatch

#endif  // POPMATCH_VERIFY_HPP
