#pragma once

#include <random>

#include "popmatch/core.hpp"
#include "popmatch/reductions.hpp"

// Seeded random generators for property-test corpora.  All randomness flows
// through the caller's std::mt19937_64, and every derived draw (bounded
// integers, coins, shuffles) is implemented in-repo so that a fixed seed
// yields the same objects on every platform and standard library.

namespace popmatch {

// Uniform draw from [0, bound); bound >= 1.
int bounded_draw(std::mt19937_64& rng, int bound);

// Bernoulli draw with success probability p in [0, 1].
bool coin(std::mt19937_64& rng, double p);

// Instance with the given side sizes whose edges appear independently with
// probability `completeness`, preference orders uniformly shuffled.
Instance random_instance(int num_workers, int num_firms, double completeness,
                         std::mt19937_64& rng);

// Uniformly-shuffled greedy matching: visits edges in random order and adds
// each with probability 1/2 when both endpoints are still free.
Matching random_matching(const Instance& i, std::mt19937_64& rng);

// SameGraph pair (sides <= max_side) whose instances differ in exactly one
// agent's preference order.
InstanceFamily random_single_differing_pair(int max_side,
                                            std::mt19937_64& rng);

// Family whose first instance is complete (sides <= max_side) and whose
// other members independently drop edges, preserving the order of surviving
// neighbors (AlteredAvailability with only removals).
InstanceFamily random_reduced_availability_family(int max_side,
                                                  int num_instances,
                                                  std::mt19937_64& rng);

// Satisfiable monotone 3-CNF formula; satisfiability is checked by brute
// force, so num_variables must stay small (<= 20).
CnfFormula random_satisfiable_monotone_formula(int num_variables,
                                               int num_clauses,
                                               std::mt19937_64& rng);

// Valid input for reduce_forbidden_edge_force_vert: an instance where edge
// `e` joins a leaf to a degree-2 agent whose other neighbor it mutually
// top-ranks, plus a forced agent d distinct from the leaf.
struct FefvSource {
  Instance instance;
  Edge e;
  AgentId d;
};

FefvSource random_fefv_source(int max_side, std::mt19937_64& rng);

}  // namespace popmatch
