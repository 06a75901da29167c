#ifndef POPMATCH_CORE_HPP
#define POPMATCH_CORE_HPP

// Data model for matching under preferences: bipartite worker/firm instances
// with strict preference orders, matchings, instance families, and the
// line-oriented text formats shared by the command-line tools.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace popmatch {

// ---------------------------------------------------------------------------
// Errors

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text. `line` is 1-based; 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Semantically invalid data (asymmetric edges, conflicting pairs, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An exhaustive routine was asked to run beyond its configured size bound.
class SizeBoundError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Agents and edges

enum class Side { Worker, Firm };

inline Side opposite(Side s) {
  return s == Side::Worker ? Side::Firm : Side::Worker;
}

// Dense identifier of an agent: side plus index into that side's label list.
// Ordering (workers before firms, then by index) is the tie-break order used
// by every deterministic traversal in the library.
struct AgentId {
  Side side;
  int index;

  friend auto operator<=>(const AgentId&, const AgentId&) = default;
};

inline AgentId worker(int index) { return {Side::Worker, index}; }
inline AgentId firm(int index) { return {Side::Firm, index}; }

// A worker-firm edge, stored by dense indices.
struct Edge {
  int worker;
  int firm;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// ---------------------------------------------------------------------------
// Instance

// A bipartite preference system: labeled workers and firms, each holding a
// strict preference order over its neighbors.  The preference lists are the
// single source of truth for the edge set; construction validates that every
// listed neighbor lists the agent back.  Instances are immutable after
// construction and safe to share across threads.
class Instance {
 public:
  // `worker_prefs[w]` / `firm_prefs[f]` list neighbor indices, most-preferred
  // first.  Throws ValidationError on duplicate labels, duplicate or
  // out-of-range list entries, or asymmetric edges.
  Instance(std::vector<std::string> worker_labels,
           std::vector<std::string> firm_labels,
           std::vector<std::vector<int>> worker_prefs,
           std::vector<std::vector<int>> firm_prefs);

  int num_workers() const { return static_cast<int>(worker_labels_.size()); }
  int num_firms() const { return static_cast<int>(firm_labels_.size()); }
  int num_agents() const { return num_workers() + num_firms(); }
  int num_edges() const { return num_edges_; }

  const std::string& label(AgentId a) const;
  // Dense id of the labeled agent; throws ValidationError if unknown.
  AgentId agent_by_label(const std::string& label) const;
  std::optional<AgentId> find_agent(const std::string& label) const;

  // Neighbor indices of `a` on the opposite side, most-preferred first.
  const std::vector<int>& pref_list(AgentId a) const;
  std::vector<AgentId> pref_agents(AgentId a) const;

  int degree(AgentId a) const { return static_cast<int>(pref_list(a).size()); }

  // Position of `partner_index` in a's list (0 = best), or -1 if not adjacent.
  int rank(AgentId a, int partner_index) const;
  bool has_edge(int worker_index, int firm_index) const {
    return rank({Side::Worker, worker_index}, firm_index) >= 0;
  }

  // True iff `a` strictly prefers partner `p` to partner `q`.  Either may be
  // -1, meaning "unmatched": any neighbor beats being unmatched.
  bool prefers(AgentId a, int p, int q) const;

  // Every worker-firm pair is an edge.
  bool is_complete() const { return num_edges_ == num_workers() * num_firms(); }

  // All edges, sorted by (worker, firm).
  const std::vector<Edge>& edges() const { return edges_; }

  // Same labels, same preference lists.
  friend bool operator==(const Instance&, const Instance&);

 private:
  std::vector<std::string> worker_labels_;
  std::vector<std::string> firm_labels_;
  std::vector<std::vector<int>> worker_prefs_;
  std::vector<std::vector<int>> firm_prefs_;
  // rank_[side][agent][partner] = position in the preference list, or -1.
  std::vector<std::vector<int>> worker_rank_;
  std::vector<std::vector<int>> firm_rank_;
  std::map<std::string, AgentId> by_label_;
  std::vector<Edge> edges_;
  int num_edges_ = 0;
};

// ---------------------------------------------------------------------------
// Matching

// A set of pairwise-disjoint worker-firm pairs over fixed side sizes.
// Matchings do not hold an Instance reference; validity against a particular
// instance is checked with `is_valid_for`.
class Matching {
 public:
  Matching(int num_workers, int num_firms);
  static Matching empty_for(const Instance& i) {
    return Matching(i.num_workers(), i.num_firms());
  }

  // Adds a pair; throws ValidationError if either agent is already matched
  // or an index is out of range.
  void add(int worker_index, int firm_index);
  void remove(int worker_index, int firm_index);

  int num_workers() const { return static_cast<int>(worker_to_firm_.size()); }
  int num_firms() const { return static_cast<int>(firm_to_worker_.size()); }

  // Partner index, or -1 when unmatched.
  int firm_of(int worker_index) const { return worker_to_firm_.at(worker_index); }
  int worker_of(int firm_index) const { return firm_to_worker_.at(firm_index); }
  int partner(AgentId a) const {
    return a.side == Side::Worker ? firm_of(a.index) : worker_of(a.index);
  }
  bool matched(AgentId a) const { return partner(a) >= 0; }
  bool contains(Edge e) const {
    return e.worker >= 0 && e.worker < num_workers() && firm_of(e.worker) == e.firm;
  }

  int size() const { return size_; }

  // Pairs sorted by worker index.
  std::vector<Edge> pairs() const;

  // Every pair is an edge of `i` and the side sizes agree.
  bool is_valid_for(const Instance& i) const;

  friend auto operator<=>(const Matching&, const Matching&) = default;

 private:
  std::vector<int> worker_to_firm_;
  std::vector<int> firm_to_worker_;
  int size_ = 0;
};

// Which notion a search, robustness, or set query targets.
enum class Goal { Popular, Dominant };

// ---------------------------------------------------------------------------
// Families

enum class FamilyRelation { SameGraph, AlteredAvailability, Unchecked };

// An ordered list of instances over the same worker/firm labels, tagged with
// how later instances relate to the first.  Construction validates the tag:
//   SameGraph            - identical edge sets;
//   AlteredAvailability  - edge sets may differ, but every agent's preference
//                          order restricted to common neighbors agrees
//                          pairwise across instances;
//   Unchecked            - labels only.
class InstanceFamily {
 public:
  InstanceFamily(std::vector<Instance> instances, FamilyRelation relation);

  const std::vector<Instance>& instances() const { return instances_; }
  const Instance& first() const { return instances_.front(); }
  int size() const { return static_cast<int>(instances_.size()); }
  FamilyRelation relation() const { return relation_; }

 private:
  std::vector<Instance> instances_;
  FamilyRelation relation_;
};

// ---------------------------------------------------------------------------
// Instance comparison

// How one instance was perturbed into another, per diff_instances.
struct PerturbationReport {
  // Agents whose preference lists differ, in AgentId order.
  std::vector<AgentId> changed;
  // For changed agents with the same neighbor set: number of adjacent
  // transpositions between the two orders (Kendall tau distance); -1 when the
  // neighbor sets themselves differ.
  std::map<AgentId, int> swap_distance;
  // Edges present in exactly one instance, sorted.
  std::vector<Edge> added;    // in b, not in a
  std::vector<Edge> removed;  // in a, not in b
  // At most one agent changed.
  bool single_agent = false;
  // Every changed agent kept its neighbor set and moved by exactly one
  // adjacent transposition.
  bool swaps_only = false;
  // E(b) is a subset of E(a) and orders restricted to common neighbors agree.
  bool reduced_availability = false;
  // The first instance is complete.
  bool a_complete = false;
};

// Compares two instances over identical label sets; throws ValidationError
// when the labels differ.
PerturbationReport diff_instances(const Instance& a, const Instance& b);

// ---------------------------------------------------------------------------
// Text formats
//
// Instance document (UTF-8, line oriented, `#` starts a comment):
//
//     workers: w1 w2 w3
//     firms:   f1 f2 f3
//     pref w1: f2 f1        # most-preferred first
//     pref f1: w1 w3
//
// Every agent needs a `pref` line (possibly empty).  Matching documents hold
// one `worker firm` pair per line.  Family documents hold consecutive
// `instance <name> { ... }` blocks, each wrapping an instance document.

Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& i);

Matching parse_matching(const std::string& text, const Instance& i);
std::string serialize_matching(const Matching& m, const Instance& i);

// Parses a family document; `relation` is validated by InstanceFamily.
InstanceFamily parse_family(const std::string& text, FamilyRelation relation);
std::string serialize_family(const InstanceFamily& family);

}  // namespace popmatch

#endif  // POPMATCH_CORE_HPP
