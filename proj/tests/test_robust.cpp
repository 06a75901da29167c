#include "popmatch/robust.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "popmatch/oracle.hpp"
#include "popmatch/verify.hpp"
#include "test_helpers.hpp"

using namespace popmatch;
using namespace popmatch::testing;

namespace {

bool contains(const std::vector<Matching>& set, const Matching& m) {
  return std::find(set.begin(), set.end(), m) != set.end();
}

bool same_set(std::vector<Matching> a, std::vector<Matching> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::vector<Matching> filter_containing(const std::vector<Matching>& set,
                                        Edge e) {
  std::vector<Matching> out;
  for (const Matching& m : set)
    if (m.contains(e)) out.push_back(m);
  return out;
}

InstanceFamily single_swap_family() {
  return InstanceFamily({load_instance("single_swap_a.txt"),
                         load_instance("single_swap_b.txt")},
                        FamilyRelation::SameGraph);
}

InstanceFamily size_tradeoff_family() {
  return InstanceFamily({load_instance("size_tradeoff_a.txt"),
                         load_instance("size_tradeoff_b.txt")},
                        FamilyRelation::SameGraph);
}

}  // namespace

TEST_CASE("replacing one preference list") {
  Instance a = load_instance("single_swap_a.txt");
  Instance b = load_instance("single_swap_b.txt");
  CHECK(replace_preferences(a, worker(0), {1, 2, 0}) == b);
  CHECK(replace_preferences(a, worker(0), a.pref_list(worker(0))) == a);
  CHECK_THROWS_AS(replace_preferences(a, worker(0), {1, 0}),
                  ValidationError);
  CHECK_THROWS_AS(replace_preferences(a, worker(0), {1, 0, 3}),
                  ValidationError);
}

TEST_CASE("synthesized hybrid orders") {
  // w1's lists: f2 f1 f3 in the first instance, f2 f3 f1 in the second.
  std::vector<std::vector<int>> orders = {{1, 0, 2}, {1, 2, 0}};
  CHECK(hybrid_order(orders, 0) == std::vector<int>{1, 2, 0});
  CHECK(hybrid_order(orders, 2) == std::vector<int>{1, 0, 2});
  CHECK(hybrid_order(orders, 1) == std::vector<int>{1, 0, 2});
  CHECK(hybrid_order({{0, 1, 2}}, 1) == std::vector<int>{0, 1, 2});

  CHECK_THROWS_AS(hybrid_order({{0, 1}, {0, 2}}, 0), ValidationError);
  CHECK_THROWS_AS(hybrid_order(orders, 3), ValidationError);
  CHECK_THROWS_AS(hybrid_order({}, 0), ValidationError);
}

TEST_CASE("hybrid instances of the single-swap pair") {
  InstanceFamily fam = single_swap_family();
  Instance a = load_instance("single_swap_a.txt");
  Instance b = load_instance("single_swap_b.txt");

  HybridInstance h1 = hybrid_instance(fam, {0, 0});  // w1-f1
  CHECK(h1.instance == b);
  CHECK(h1.x == worker(0));
  CHECK(h1.e == Edge{0, 0});
  CHECK(hybrid_instance(fam, {0, 2}).instance == a);  // w1-f3
  CHECK(hybrid_instance(fam, {0, 1}).instance == a);  // w1-f2

  InstanceFamily st = size_tradeoff_family();
  CHECK(hybrid_instance(st, {0, 0}).instance ==
        load_instance("size_tradeoff_b.txt"));
  CHECK(hybrid_instance(st, {0, 2}).instance ==
        load_instance("size_tradeoff_a.txt"));

  // Identical members: the worker endpoint is the pivot, nothing moves.
  InstanceFamily same({a, a}, FamilyRelation::SameGraph);
  HybridInstance hs = hybrid_instance(same, {1, 0});
  CHECK(hs.instance == a);
  CHECK(hs.x == worker(1));

  CHECK_THROWS_AS(hybrid_instance(fam, {1, 0}), ValidationError);  // not at w1
  CHECK_THROWS_AS(hybrid_instance(fam, {0, 3}), ValidationError);  // non-edge
}

TEST_CASE("hybrid construction rejects unsupported families") {
  Instance a = load_instance("two_swap_a.txt");
  Instance b = load_instance("two_swap_b.txt");
  InstanceFamily two({a, b}, FamilyRelation::SameGraph);
  CHECK_THROWS_AS(hybrid_instance(two, {0, 0}), ValidationError);
  CHECK_THROWS_AS(robust_matching(two, Goal::Popular), ValidationError);

  Instance c1 = parse_instance(
      "workers: w1\nfirms: f1\npref w1: f1\npref f1: w1\n");
  Instance c0 = parse_instance(
      "workers: w1\nfirms: f1\npref w1:\npref f1:\n");
  InstanceFamily reduced({c1, c0}, FamilyRelation::AlteredAvailability);
  CHECK_THROWS_AS(hybrid_instance(reduced, {0, 0}), ValidationError);
}

TEST_CASE("robust matchings of the fixture pairs") {
  InstanceFamily ss = single_swap_family();
  Matching m2 = load_matching("single_swap_m2.txt", ss.first());
  CHECK(robust_matching(ss, Goal::Popular) == m2);
  CHECK(robust_matching(ss, Goal::Dominant) == m2);

  InstanceFamily st = size_tradeoff_family();
  Matching m1 = load_matching("size_tradeoff_m1.txt", st.first());
  CHECK(robust_matching(st, Goal::Popular) == m1);
  CHECK(robust_matching(st, Goal::Dominant) == std::nullopt);

  // Identical members reduce to the single-instance solvers.
  Instance a = load_instance("single_swap_a.txt");
  InstanceFamily same({a, a}, FamilyRelation::SameGraph);
  Matching gs = load_matching("single_swap_m1.txt", a);
  CHECK(robust_matching(same, Goal::Popular) == gs);
  CHECK(robust_matching(same, Goal::Dominant) == gs);

  // Existence agrees with exhaustive intersection of the per-member sets.
  for (Goal goal : {Goal::Popular, Goal::Dominant}) {
    CHECK(robust_matching(ss, goal).has_value() ==
          !robust_set(ss, goal).empty());
    CHECK(robust_matching(st, goal).has_value() ==
          !robust_set(st, goal).empty());
  }
}

TEST_CASE("hybrid edge queries mirror robust membership") {
  for (const InstanceFamily& fam :
       {single_swap_family(), size_tradeoff_family()}) {
    std::vector<Matching> robust_pop = robust_set(fam, Goal::Popular);
    std::vector<Matching> robust_dom = robust_set(fam, Goal::Dominant);
    for (int y : fam.first().pref_list(worker(0))) {
      Edge e{0, y};
      CAPTURE(y);
      HybridInstance h = hybrid_instance(fam, e);
      CHECK(same_set(filter_containing(popular_set(h.instance), e),
                     filter_containing(robust_pop, e)));
      CHECK(same_set(filter_containing(dominant_set(h.instance), e),
                     filter_containing(robust_dom, e)));
    }
  }
}

TEST_CASE("a combined hybrid over two perturbed agents can lie") {
  Instance a = load_instance("two_swap_a.txt");
  Instance b = load_instance("two_swap_b.txt");
  Matching m = load_matching("two_swap_m.txt", a);
  REQUIRE(is_popular(a, m).popular);
  REQUIRE(is_popular(b, m).popular);
  InstanceFamily fam({a, b}, FamilyRelation::SameGraph);
  CHECK(contains(robust_set(fam, Goal::Popular), m));

  // Lift both perturbed agents over their partners in m at once.
  Instance naive = replace_preferences(
      a, worker(0),
      hybrid_order({a.pref_list(worker(0)), b.pref_list(worker(0))}, 0));
  naive = replace_preferences(
      naive, worker(1),
      hybrid_order({a.pref_list(worker(1)), b.pref_list(worker(1))}, 3));
  CHECK(naive.pref_list(worker(0)) == std::vector<int>{1, 0, 2, 3});
  CHECK(naive.pref_list(worker(1)) == std::vector<int>{2, 3, 0, 1});

  // m is robust, yet the two-agent hybrid rejects it: the one-agent
  // equivalence does not generalize, which is why multi-agent families are
  // refused rather than funneled through this construction.
  PopularityResult r = is_popular(naive, m);
  REQUIRE_FALSE(r.popular);
  REQUIRE(r.certificate.has_value());
  CHECK(r.certificate->margin == 2);
  CHECK(popularity_margin(naive, r.certificate->counter, m) == 2);
}

TEST_CASE("agents no popular matching touches") {
  Instance sta = load_instance("size_tradeoff_a.txt");
  CHECK(unpopular_agents(sta).empty());
  Instance stb = load_instance("size_tradeoff_b.txt");
  CHECK(unpopular_agents(stb) ==
        std::vector<AgentId>{worker(2), firm(1)});  // w3 and f2

  Instance isolated = parse_instance(
      "workers: w1\nfirms: f1\npref w1:\npref f1:\n");
  CHECK(unpopular_agents(isolated) ==
        std::vector<AgentId>{worker(0), firm(0)});

  for (const char* name : {"single_swap_a.txt", "single_swap_b.txt",
                           "size_tradeoff_a.txt", "size_tradeoff_b.txt",
                           "cyclic_a.txt", "cyclic_b.txt"}) {
    CAPTURE(name);
    Instance i = load_instance(name);
    std::set<AgentId> covered;
    for (const Matching& m : popular_set(i))
      for (const Edge& e : m.pairs()) {
        covered.insert(worker(e.worker));
        covered.insert(firm(e.firm));
      }
    std::vector<AgentId> unpop = unpopular_agents(i);
    for (int w = 0; w < i.num_workers(); ++w)
      CHECK((std::find(unpop.begin(), unpop.end(), worker(w)) !=
             unpop.end()) == !covered.count(worker(w)));
    for (int f = 0; f < i.num_firms(); ++f)
      CHECK((std::find(unpop.begin(), unpop.end(), firm(f)) !=
             unpop.end()) == !covered.count(firm(f)));
  }
}

TEST_CASE("fast path through unpopular agents") {
  // w3 is nobody's popular partner: its firms hold mutual-first matches.
  Instance y1 = parse_instance(
      "workers: w1 w2 w3\n"
      "firms: f1 f2\n"
      "pref w1: f1\n"
      "pref w2: f2\n"
      "pref w3: f1 f2\n"
      "pref f1: w1 w3\n"
      "pref f2: w2 w3\n");
  Instance y2 = replace_preferences(y1, worker(2), {1, 0});
  InstanceFamily fam({y1, y2}, FamilyRelation::SameGraph);

  FastPathResult r = robust_via_unpopular(fam);
  REQUIRE(r.status == FastPath::Robust);
  REQUIRE(r.matching.has_value());
  CHECK(*r.matching == make_matching(y1, {{0, 0}, {1, 1}}));
  CHECK(contains(robust_set(fam, Goal::Popular), *r.matching));

  // The single-swap pair perturbs w1, which popular matchings do cover.
  FastPathResult miss = robust_via_unpopular(single_swap_family());
  CHECK(miss.status == FastPath::Inapplicable);
  CHECK_FALSE(miss.matching.has_value());

  // No differing agents at all: trivially applicable.
  Instance stb = load_instance("size_tradeoff_b.txt");
  InstanceFamily same({stb, stb}, FamilyRelation::SameGraph);
  FastPathResult vac = robust_via_unpopular(same);
  CHECK(vac.status == FastPath::Robust);
  CHECK(*vac.matching == load_matching("size_tradeoff_m1.txt", stb));
}

TEST_CASE("robust matching under reduced availability") {
  Instance a = load_instance("cyclic_a.txt");
  InstanceFamily same({a, a}, FamilyRelation::AlteredAvailability);
  std::optional<Matching> m = robust_reduced_availability(same);
  REQUIRE(m.has_value());
  CHECK(*m == make_matching(a, {{0, 0}, {1, 1}, {2, 2}}));

  // Dropping the unique popular matching's edges leaves nothing robust.
  Instance sq = parse_instance(
      "workers: w1 w2\nfirms: f1 f2\n"
      "pref w1: f1 f2\npref w2: f1 f2\n"
      "pref f1: w1 w2\npref f2: w2 w1\n");
  Instance sq_cut = parse_instance(
      "workers: w1 w2\nfirms: f1 f2\n"
      "pref w1: f2\npref w2: f1\n"
      "pref f1: w2\npref f2: w1\n");
  InstanceFamily cut({sq, sq_cut}, FamilyRelation::AlteredAvailability);
  CHECK(robust_reduced_availability(cut) == std::nullopt);
  CHECK(robust_set(cut, Goal::Popular).empty());

  Instance c1 = parse_instance(
      "workers: w1\nfirms: f1\npref w1: f1\npref f1: w1\n");
  Instance c0 = parse_instance(
      "workers: w1\nfirms: f1\npref w1:\npref f1:\n");
  InstanceFamily gone({c1, c0}, FamilyRelation::AlteredAvailability);
  CHECK(robust_reduced_availability(gone) == std::nullopt);

  CHECK_THROWS_AS(robust_reduced_availability(single_swap_family()),
                  ValidationError);  // not an availability family
  Instance ssa = load_instance("single_swap_a.txt");
  InstanceFamily incomplete({ssa, ssa}, FamilyRelation::AlteredAvailability);
  CHECK_THROWS_AS(robust_reduced_availability(incomplete), ValidationError);
}
