#include "popmatch/gen.hpp"

#include <algorithm>
#include <limits>

namespace popmatch {

int bounded_draw(std::mt19937_64& rng, int bound) {
  if (bound < 1) throw ValidationError("draw bound must be positive");
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t b = static_cast<std::uint64_t>(bound);
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % b;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<int>(x % b);
}

bool coin(std::mt19937_64& rng, double p) {
  return (rng() >> 11) * 0x1.0p-53 < p;
}

namespace {

template <typename T>
void shuffle_vec(std::vector<T>& v, std::mt19937_64& rng) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
    std::swap(v[i], v[bounded_draw(rng, i + 1)]);
}

std::vector<std::string> numbered_labels(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int k = 1; k <= n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

// Derives firm preference lists from worker lists: each firm ranks the
// workers listing it, in a fresh uniform order.
std::vector<std::vector<int>> derived_firm_prefs(
    int num_workers, int num_firms,
    const std::vector<std::vector<int>>& worker_prefs,
    std::mt19937_64& rng) {
  std::vector<std::vector<int>> fprefs(num_firms);
  for (int w = 0; w < num_workers; ++w)
    for (int f : worker_prefs[w]) fprefs[f].push_back(w);
  for (auto& list : fprefs) shuffle_vec(list, rng);
  return fprefs;
}

}  // namespace

Instance random_instance(int num_workers, int num_firms, double completeness,
                         std::mt19937_64& rng) {
  if (num_workers < 1 || num_firms < 1)
    throw ValidationError("instance needs at least one agent per side");
  if (completeness < 0.0 || completeness > 1.0)
    throw ValidationError("completeness must lie in [0, 1]");
  std::vector<std::vector<int>> wprefs(num_workers);
  for (int w = 0; w < num_workers; ++w) {
    for (int f = 0; f < num_firms; ++f)
      if (coin(rng, completeness)) wprefs[w].push_back(f);
    shuffle_vec(wprefs[w], rng);
  }
  auto fprefs = derived_firm_prefs(num_workers, num_firms, wprefs, rng);
  return Instance(numbered_labels("w", num_workers),
                  numbered_labels("f", num_firms), std::move(wprefs),
                  std::move(fprefs));
}

Matching random_matching(const Instance& i, std::mt19937_64& rng) {
  std::vector<Edge> edges = i.edges();
  shuffle_vec(edges, rng);
  Matching m = Matching::empty_for(i);
  for (Edge e : edges)
    if (!m.matched(worker(e.worker)) && !m.matched(firm(e.firm)) &&
        coin(rng, 0.5))
      m.add(e.worker, e.firm);
  return m;
}

InstanceFamily random_single_differing_pair(int max_side,
                                            std::mt19937_64& rng) {
  if (max_side < 2)
    throw ValidationError("a differing agent needs at least two neighbors");
  for (;;) {
    int nw = 1 + bounded_draw(rng, max_side);
    int nf = 1 + bounded_draw(rng, max_side);
    double completeness = 0.4 + 0.6 * (rng() >> 11) * 0x1.0p-53;
    Instance a = random_instance(nw, nf, completeness, rng);

    std::vector<AgentId> candidates;
    for (int w = 0; w < nw; ++w)
      if (a.degree(worker(w)) >= 2) candidates.push_back(worker(w));
    for (int f = 0; f < nf; ++f)
      if (a.degree(firm(f)) >= 2) candidates.push_back(firm(f));
    if (candidates.empty()) continue;
    AgentId x = candidates[bounded_draw(
        rng, static_cast<int>(candidates.size()))];

    std::vector<int> order = a.pref_list(x);
    do {
      shuffle_vec(order, rng);
    } while (order == a.pref_list(x));

    std::vector<std::vector<int>> wprefs, fprefs;
    for (int w = 0; w < nw; ++w) wprefs.push_back(a.pref_list(worker(w)));
    for (int f = 0; f < nf; ++f) fprefs.push_back(a.pref_list(firm(f)));
    (x.side == Side::Worker ? wprefs : fprefs)[x.index] = order;
    Instance b(numbered_labels("w", nw), numbered_labels("f", nf),
               std::move(wprefs), std::move(fprefs));
    return InstanceFamily({std::move(a), std::move(b)},
                          FamilyRelation::SameGraph);
  }
}

InstanceFamily random_reduced_availability_family(int max_side,
                                                  int num_instances,
                                                  std::mt19937_64& rng) {
  if (num_instances < 2)
    throw ValidationError("a family needs at least two instances");
  int nw = 1 + bounded_draw(rng, max_side);
  int nf = 1 + bounded_draw(rng, max_side);
  Instance first = random_instance(nw, nf, 1.0, rng);

  std::vector<Instance> members{first};
  for (int k = 1; k < num_instances; ++k) {
    std::vector<std::vector<int>> wprefs(nw), fprefs(nf);
    for (int w = 0; w < nw; ++w)
      for (int f : first.pref_list(worker(w)))
        if (!coin(rng, 0.25)) wprefs[w].push_back(f);
    for (int f = 0; f < nf; ++f)
      for (int w : first.pref_list(firm(f))) {
        auto& kept = wprefs[w];
        if (std::find(kept.begin(), kept.end(), f) != kept.end())
          fprefs[f].push_back(w);
      }
    members.emplace_back(numbered_labels("w", nw), numbered_labels("f", nf),
                         std::move(wprefs), std::move(fprefs));
  }
  return InstanceFamily(std::move(members),
                        FamilyRelation::AlteredAvailability);
}

CnfFormula random_satisfiable_monotone_formula(int num_variables,
                                               int num_clauses,
                                               std::mt19937_64& rng) {
  if (num_variables < 1 || num_variables > 20)
    throw ValidationError("variable count must lie in [1, 20]");
  if (num_clauses < 1) throw ValidationError("need at least one clause");
  for (;;) {
    std::vector<CnfClause> clauses;
    for (int j = 0; j < num_clauses; ++j) {
      CnfClause c{coin(rng, 0.5), {}};
      for (int k = 0; k < 3; ++k) c.vars[k] = bounded_draw(rng, num_variables);
      clauses.push_back(c);
    }
    CnfFormula f(num_variables, std::move(clauses));
    for (std::uint32_t bits = 0; bits < (1u << num_variables); ++bits) {
      TruthAssignment assignment(num_variables);
      for (int v = 0; v < num_variables; ++v)
        assignment[v] = (bits >> v) & 1u;
      if (satisfies(f, assignment)) return f;
    }
  }
}

FefvSource random_fefv_source(int max_side, std::mt19937_64& rng) {
  if (max_side < 2)
    throw ValidationError("source side bound must be at least 2");
  // a lives on a coin-flipped side together with c; b on the other side.
  bool a_is_worker = coin(rng, 0.5);
  int na = 2 + bounded_draw(rng, max_side - 1);  // a's side
  int nb = 1 + bounded_draw(rng, max_side);      // b's side

  int a = bounded_draw(rng, na);
  int c;
  do {
    c = bounded_draw(rng, na);
  } while (c == a);
  int b = bounded_draw(rng, nb);

  // Build a-side lists: b's neighborhood must be exactly {c, a}, so other
  // a-side agents draw neighbors from b's side minus b.
  std::vector<std::vector<int>> aprefs(na);
  aprefs[a] = {b};
  for (int x = 0; x < na; ++x) {
    if (x == a) continue;
    std::vector<int> others;
    for (int y = 0; y < nb; ++y)
      if (y != b && coin(rng, 0.7)) others.push_back(y);
    shuffle_vec(others, rng);
    if (x == c) others.insert(others.begin(), b);  // c top-ranks b
    aprefs[x] = std::move(others);
  }
  std::vector<std::vector<int>> bprefs(nb);
  for (int x = 0; x < na; ++x)
    for (int y : aprefs[x])
      if (y != b) bprefs[y].push_back(x);
  for (int y = 0; y < nb; ++y)
    if (y != b) shuffle_vec(bprefs[y], rng);
  bprefs[b] = {c, a};  // b top-ranks c

  Side a_side = a_is_worker ? Side::Worker : Side::Firm;
  int nw = a_is_worker ? na : nb;
  int nf = a_is_worker ? nb : na;
  Instance i(numbered_labels("w", nw), numbered_labels("f", nf),
             a_is_worker ? aprefs : bprefs, a_is_worker ? bprefs : aprefs);

  AgentId d;
  do {
    bool d_is_worker = coin(rng, 0.5);
    d = AgentId{d_is_worker ? Side::Worker : Side::Firm,
                bounded_draw(rng, d_is_worker ? nw : nf)};
  } while (d == AgentId{a_side, a});
  Edge e = a_is_worker ? Edge{a, b} : Edge{b, a};
  return FefvSource{std::move(i), e, d};
}

}  // namespace popmatch
