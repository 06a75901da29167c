#include "popmatch/verify.hpp"

#include <doctest.h>

#include <vector>

#include "popmatch/oracle.hpp"
#include "test_helpers.hpp"

using namespace popmatch;
using namespace popmatch::testing;

namespace {

struct SingleSwap {
  Instance a = load_instance("single_swap_a.txt");
  Instance b = load_instance("single_swap_b.txt");
  Matching m1 = load_matching("single_swap_m1.txt", a);
  Matching m2 = load_matching("single_swap_m2.txt", a);
};

struct SizeTradeoff {
  Instance a = load_instance("size_tradeoff_a.txt");
  Instance b = load_instance("size_tradeoff_b.txt");
  Matching m1 = load_matching("size_tradeoff_m1.txt", a);
  Matching m2 = load_matching("size_tradeoff_m2.txt", a);
};

struct TwoSwap {
  Instance a = load_instance("two_swap_a.txt");
  Instance b = load_instance("two_swap_b.txt");
  Matching m = load_matching("two_swap_m.txt", a);
};

// Complete n-by-n instance where everyone ranks partners by ascending index.
Instance uniform_square(int n) {
  std::vector<std::string> ws, fs;
  std::vector<std::vector<int>> prefs(n);
  for (int k = 0; k < n; ++k) {
    ws.push_back("w" + std::to_string(k + 1));
    fs.push_back("f" + std::to_string(k + 1));
    for (int j = 0; j < n; ++j) prefs[k].push_back(j);
  }
  return Instance(ws, fs, prefs, prefs);
}

}  // namespace

TEST_CASE("edge labels relative to a matching") {
  SingleSwap fx;
  LabeledGraph lg(fx.a, fx.m1);

  CHECK(lg.label({0, 0}) == EdgeLabel::Matched);     // {w1,f1} in m1
  CHECK(lg.label({0, 1}) == EdgeLabel::PlusMinus);   // w1 wants f2; f2 happy
  CHECK(lg.label({1, 0}) == EdgeLabel::PlusMinus);   // w2 wants f1; f1 happy
  CHECK(lg.label({2, 3}) == EdgeLabel::PlusPlus);    // both happier in m1
  CHECK_THROWS_AS(lg.label({3, 0}), ValidationError);  // not an edge

  // (+,+) edges are dropped from the retained adjacency.
  CHECK(lg.retained(worker(2)) == std::vector<int>{0});  // w3: only f1 kept
  CHECK(lg.minus_minus_edges().empty());

  LabeledGraph lgb(fx.b, fx.m1);
  CHECK(lgb.label({0, 2}) == EdgeLabel::MinusMinus);  // {w1,f3} blocks in b
  CHECK(lgb.minus_minus_edges() == std::vector<Edge>{{0, 2}});
}

TEST_CASE("votes and popularity margins") {
  SingleSwap fx;
  // w1 ranks f1 above f3 in a, below it in b.
  CHECK(vote(fx.a, worker(0), fx.m2, fx.m1) == -1);
  CHECK(vote(fx.b, worker(0), fx.m2, fx.m1) == 1);
  CHECK(vote(fx.a, firm(0), fx.m1, fx.m2) == 1);
  CHECK(vote(fx.a, firm(1), fx.m1, fx.m2) == 0);  // same partner both sides

  CHECK(popularity_margin(fx.a, fx.m1, fx.m2) == 0);
  CHECK(popularity_margin(fx.a, fx.m2, fx.m1) == 0);
  CHECK(popularity_margin(fx.b, fx.m1, fx.m2) == -2);
  CHECK(popularity_margin(fx.b, fx.m2, fx.m1) == 2);
  CHECK(popularity_margin(fx.a, fx.m1, fx.m1) == 0);

  SizeTradeoff st;
  // Being matched at all beats being unmatched.
  CHECK(vote(st.a, worker(2), st.m2, st.m1) == 1);
  CHECK(vote(st.a, worker(2), st.m1, st.m2) == -1);
  CHECK(popularity_margin(st.a, st.m2, st.m1) == 0);
  CHECK(popularity_margin(st.b, st.m1, st.m2) == 2);
}

TEST_CASE("popularity on the single-swap pair") {
  SingleSwap fx;
  CHECK(is_popular(fx.a, fx.m1).popular);
  CHECK(is_popular(fx.a, fx.m2).popular);
  CHECK(is_popular(fx.b, fx.m2).popular);
  CHECK_FALSE(is_popular(fx.a, fx.m1).certificate.has_value());

  PopularityResult r = is_popular(fx.b, fx.m1);
  REQUIRE_FALSE(r.popular);
  REQUIRE(r.certificate.has_value());
  const Certificate& c = *r.certificate;
  CHECK(c.kind == Certificate::Kind::AlternatingCycle);
  CHECK(c.vertices ==
        std::vector<AgentId>{worker(0), firm(2), worker(1), firm(0)});
  CHECK(c.counter == fx.m2);
  CHECK(c.margin == 2);
  CHECK(popularity_margin(fx.b, c.counter, fx.m1) == c.margin);
  CHECK(c.counter.is_valid_for(fx.b));
}

TEST_CASE("popularity on the size-tradeoff pair") {
  SizeTradeoff fx;
  CHECK(is_popular(fx.a, fx.m1).popular);
  CHECK(is_popular(fx.a, fx.m2).popular);
  CHECK(is_popular(fx.b, fx.m1).popular);

  PopularityResult r = is_popular(fx.b, fx.m2);
  REQUIRE_FALSE(r.popular);
  REQUIRE(r.certificate.has_value());
  const Certificate& c = *r.certificate;
  // Path f3 - w1 - f1 - w2 carries blocking edges at both ends.
  CHECK(c.kind == Certificate::Kind::PathTwoMinusMinus);
  CHECK(c.vertices ==
        std::vector<AgentId>{firm(2), worker(0), firm(0), worker(1)});
  CHECK(c.counter == fx.m1);
  CHECK(c.margin == 2);
}

TEST_CASE("violations reachable from unmatched vertices") {
  Instance i = parse_instance(
      "workers: w1\n"
      "firms: f1 f2\n"
      "pref w1: f1 f2\n"
      "pref f1: w1\n"
      "pref f2: w1\n");

  // w1 settles for its second choice; unmatched f1 makes a blocking pair.
  PopularityResult r = is_popular(i, make_matching(i, {{0, 1}}));
  REQUIRE_FALSE(r.popular);
  CHECK(r.certificate->kind == Certificate::Kind::PathFromUnmatched);
  CHECK(r.certificate->vertices == std::vector<AgentId>{firm(0), worker(0)});
  CHECK(r.certificate->counter == make_matching(i, {{0, 0}}));
  CHECK(r.certificate->margin == 1);

  // The empty matching loses to matching the mutual first choices.
  PopularityResult e = is_popular(i, Matching::empty_for(i));
  REQUIRE_FALSE(e.popular);
  CHECK(e.certificate->kind == Certificate::Kind::PathFromUnmatched);
  CHECK(e.certificate->vertices == std::vector<AgentId>{worker(0), firm(0)});
  CHECK(e.certificate->margin == 2);

  CHECK(is_popular(i, make_matching(i, {{0, 0}})).popular);
}

TEST_CASE("structural check matches the margin definition on all matchings") {
  SingleSwap ss;
  SizeTradeoff st;
  TwoSwap ts;
  for (const Instance* i : {&ss.a, &ss.b, &st.a, &st.b, &ts.a, &ts.b}) {
    enumerate_matchings(*i, 8, [&](const Matching& m) {
      CAPTURE(serialize_matching(m, *i));
      PopularityResult r = is_popular(*i, m);
      CHECK(r.popular == is_popular_by_margins(*i, m));
      if (!r.popular) {
        // Every rejection carries a certificate whose counter really wins.
        REQUIRE(r.certificate.has_value());
        CHECK(r.certificate->margin ==
              popularity_margin(*i, r.certificate->counter, m));
        CHECK(r.certificate->margin > 0);
      }
      return true;
    });
  }
}

TEST_CASE("dominance") {
  SingleSwap ss;
  CHECK(is_dominant(ss.a, ss.m1));
  CHECK(is_dominant(ss.a, ss.m2));
  CHECK(is_dominant(ss.b, ss.m2));
  CHECK_FALSE(is_dominant(ss.b, ss.m1));

  SizeTradeoff st;
  // m1 is popular in a but loses its lead to the larger m2.
  CHECK(is_dominant(st.a, st.m2));
  CHECK_FALSE(is_dominant(st.a, st.m1));
  CHECK(is_popular(st.a, st.m1).popular);
  CHECK(is_dominant(st.b, st.m1));
  CHECK_FALSE(is_dominant(st.b, st.m2));

  TwoSwap ts;
  for (const Instance* i : {&ss.a, &ss.b, &st.a, &st.b, &ts.a, &ts.b}) {
    enumerate_matchings(*i, 8, [&](const Matching& m) {
      CAPTURE(serialize_matching(m, *i));
      CHECK(is_dominant(*i, m) == is_dominant_by_enumeration(*i, m));
      return true;
    });
  }
}

TEST_CASE("strong popularity") {
  SingleSwap ss;
  // m1 and m2 tie in a, so neither is strongly popular there.
  CHECK_FALSE(is_strongly_popular(ss.a, ss.m1));
  CHECK_FALSE(is_strongly_popular(ss.a, ss.m2));

  SizeTradeoff st;
  CHECK(is_strongly_popular(st.b, st.m1));
  CHECK_FALSE(is_strongly_popular(st.b, st.m2));

  Instance one = uniform_square(1);
  CHECK(is_strongly_popular(one, make_matching(one, {{0, 0}})));
  CHECK_FALSE(is_strongly_popular(one, Matching::empty_for(one)));

  Instance big = uniform_square(9);
  CHECK_THROWS_AS(is_strongly_popular(big, Matching::empty_for(big)),
                  SizeBoundError);
  CHECK_THROWS_AS(is_dominant_by_enumeration(big, Matching::empty_for(big)),
                  SizeBoundError);
}

TEST_CASE("stability") {
  SingleSwap ss;
  CHECK(is_stable(ss.a, ss.m1));
  CHECK_FALSE(is_stable(ss.a, ss.m2));  // {w1,f1} blocks m2 in a
  CHECK(is_stable(ss.b, ss.m2));
  CHECK_FALSE(is_stable(ss.b, ss.m1));

  SizeTradeoff st;
  CHECK(is_stable(st.a, st.m1));
  CHECK_FALSE(is_stable(st.a, st.m2));  // dominant yet not stable
  CHECK(is_dominant(st.a, st.m2));

  // Every stable matching is popular.
  TwoSwap ts;
  for (const Instance* i : {&ss.a, &ss.b, &st.a, &st.b, &ts.a, &ts.b}) {
    enumerate_matchings(*i, 8, [&](const Matching& m) {
      if (is_stable(*i, m)) CHECK(is_popular(*i, m).popular);
      return true;
    });
  }
}

TEST_CASE("verification rejects foreign matchings") {
  SingleSwap ss;
  Matching bad(4, 4);
  bad.add(3, 0);  // w4-f1 is not an edge
  CHECK_THROWS_AS(is_popular(ss.a, bad), ValidationError);
  Matching wrong_shape(3, 3);
  CHECK_THROWS_AS(is_popular(ss.a, wrong_shape), ValidationError);
}
