#include "popmatch/robust.hpp"

#include <algorithm>

#include "popmatch/verify.hpp"

namespace popmatch {

Instance replace_preferences(const Instance& i, AgentId a,
                             const std::vector<int>& order) {
  std::vector<int> old_sorted = i.pref_list(a), new_sorted = order;
  std::sort(old_sorted.begin(), old_sorted.end());
  std::sort(new_sorted.begin(), new_sorted.end());
  if (old_sorted != new_sorted)
    throw ValidationError("replacement order must permute the old neighbors");

  std::vector<std::string> wl(i.num_workers()), fl(i.num_firms());
  std::vector<std::vector<int>> wp(i.num_workers()), fp(i.num_firms());
  for (int w = 0; w < i.num_workers(); ++w) {
    wl[w] = i.label(worker(w));
    wp[w] = i.pref_list(worker(w));
  }
  for (int f = 0; f < i.num_firms(); ++f) {
    fl[f] = i.label(firm(f));
    fp[f] = i.pref_list(firm(f));
  }
  (a.side == Side::Worker ? wp[a.index] : fp[a.index]) = order;
  return Instance(std::move(wl), std::move(fl), std::move(wp), std::move(fp));
}

std::vector<int> hybrid_order(const std::vector<std::vector<int>>& orders,
                              int y) {
  if (orders.empty()) throw ValidationError("hybrid_order: no input orders");
  std::vector<int> base_sorted = orders.front();
  std::sort(base_sorted.begin(), base_sorted.end());
  for (const std::vector<int>& o : orders) {
    std::vector<int> sorted = o;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != base_sorted)
      throw ValidationError("hybrid_order: orders rank different neighbors");
    if (std::find(o.begin(), o.end(), y) == o.end())
      throw ValidationError("hybrid_order: pivot is not a neighbor");
  }

  std::vector<int> above;
  auto lift = [&](int z) {
    if (std::find(above.begin(), above.end(), z) == above.end())
      above.push_back(z);
  };
  for (const std::vector<int>& o : orders)
    for (int z : o) {
      if (z == y) break;
      lift(z);
    }

  std::vector<int> out = above;
  out.push_back(y);
  for (int z : orders.front())
    if (z != y &&
        std::find(above.begin(), above.end(), z) == above.end())
      out.push_back(z);
  return out;
}

namespace {

// The single agent whose preferences differ across the family, if any;
// validates the shared-graph single-agent premise.
std::optional<AgentId> differing_agent(const InstanceFamily& family) {
  if (family.relation() != FamilyRelation::SameGraph)
    throw ValidationError("family members must share one graph");
  std::vector<AgentId> changed;
  for (int k = 1; k < family.size(); ++k) {
    PerturbationReport rep =
        diff_instances(family.first(), family.instances()[k]);
    for (AgentId a : rep.changed)
      if (std::find(changed.begin(), changed.end(), a) == changed.end())
        changed.push_back(a);
  }
  if (changed.size() > 1)
    throw ValidationError(
        "family differs at more than one agent; that problem is not solved "
        "here");
  if (changed.empty()) return std::nullopt;
  return changed.front();
}

Edge edge_at(AgentId x, int y) {
  return x.side == Side::Worker ? Edge{x.index, y} : Edge{y, x.index};
}

}  // namespace

HybridInstance hybrid_instance(const InstanceFamily& family, Edge e) {
  std::optional<AgentId> diff = differing_agent(family);
  AgentId x = diff.value_or(worker(e.worker));
  int y = x.side == Side::Worker ? e.firm : e.worker;
  int x_end = x.side == Side::Worker ? e.worker : e.firm;
  if (x_end != x.index)
    throw ValidationError("designated edge is not incident to the perturbed "
                          "agent");
  if (!family.first().has_edge(e.worker, e.firm))
    throw ValidationError("designated edge is not in the instance");

  std::vector<std::vector<int>> orders;
  for (const Instance& inst : family.instances())
    orders.push_back(inst.pref_list(x));
  Instance hybrid =
      replace_preferences(family.first(), x, hybrid_order(orders, y));
  return {std::move(hybrid), x, e};
}

std::optional<Matching> robust_matching(const InstanceFamily& family,
                                        Goal goal, int max_side) {
  std::optional<AgentId> diff = differing_agent(family);
  Matching first = goal == Goal::Popular
                       ? gale_shapley(family.first())
                       : dominant_matching(family.first());

  auto check_all = [&](const Matching& m) {
    for (const Instance& inst : family.instances()) {
      bool ok = goal == Goal::Popular ? is_popular(inst, m).popular
                                      : is_dominant(inst, m);
      if (!ok)
        throw Error("internal error: matching reported robust is not");
    }
  };

  if (!diff || !first.matched(*diff)) {
    // Identical members, or the perturbed agent is unmatched: matchings
    // leaving x unmatched keep their popularity across the family.
    check_all(first);
    return first;
  }

  AgentId x = *diff;
  for (int y : family.first().pref_list(x)) {
    Edge e = edge_at(x, y);
    HybridInstance h = hybrid_instance(family, e);
    std::optional<Matching> m =
        goal == Goal::Popular ? popular_edge(h.instance, e, max_side)
                              : dominant_edge(h.instance, e, max_side);
    if (m) {
      check_all(*m);
      return m;
    }
  }
  return std::nullopt;
}

std::vector<AgentId> unpopular_agents(const Instance& i, int max_side) {
  std::vector<AgentId> out;
  auto covered = [&](AgentId a) {
    for (int y : i.pref_list(a))
      if (popular_edge(i, edge_at(a, y), max_side)) return true;
    return false;
  };
  for (int w = 0; w < i.num_workers(); ++w)
    if (!covered(worker(w))) out.push_back(worker(w));
  for (int f = 0; f < i.num_firms(); ++f)
    if (!covered(firm(f))) out.push_back(firm(f));
  return out;
}

FastPathResult robust_via_unpopular(const InstanceFamily& family,
                                    int max_side) {
  if (family.relation() != FamilyRelation::SameGraph)
    throw ValidationError("family members must share one graph");
  std::vector<AgentId> changed;
  for (int k = 1; k < family.size(); ++k)
    for (AgentId a :
         diff_instances(family.first(), family.instances()[k]).changed)
      changed.push_back(a);

  std::vector<AgentId> unpopular = unpopular_agents(family.first(), max_side);
  for (AgentId a : changed)
    if (std::find(unpopular.begin(), unpopular.end(), a) == unpopular.end())
      return {FastPath::Inapplicable, std::nullopt};

  // Perturbing only agents no popular matching touches preserves the popular
  // set, so the first member's stable matching is popular everywhere.
  return {FastPath::Robust, gale_shapley(family.first())};
}

std::optional<Matching> robust_reduced_availability(
    const InstanceFamily& family, int max_side) {
  if (family.relation() != FamilyRelation::AlteredAvailability)
    throw ValidationError("family must be tagged as altered availability");
  if (!family.first().is_complete())
    throw ValidationError("first family member must be complete");

  // Weight 0 on edges available everywhere, -1 on the rest: a popular
  // matching of the first member avoids every removed edge iff it reaches
  // weight 0.
  WeightFunction w;
  for (const Edge& e : family.first().edges()) {
    Rational value = 0;
    for (const Instance& inst : family.instances())
      if (!inst.has_edge(e.worker, e.firm)) {
        value = -1;
        break;
      }
    w[e] = value;
  }
  auto [best, weight] = max_weight_popular(family.first(), w, max_side);
  if (weight != 0) return std::nullopt;
  return best;
}

}  // namespace popmatch
