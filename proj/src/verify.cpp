#include "popmatch/verify.hpp"

#include <algorithm>
#include <deque>

#include "popmatch/oracle.hpp"

namespace popmatch {

// ---------------------------------------------------------------------------
// Votes and margins

int vote(const Instance& i, AgentId x, const Matching& m1,
         const Matching& m2) {
  int p1 = m1.partner(x), p2 = m2.partner(x);
  if (p1 == p2) return 0;
  if (p1 == -1) return -1;  // matched only in m2
  if (p2 == -1) return 1;   // matched only in m1
  return i.prefers(x, p1, p2) ? 1 : -1;
}

int popularity_margin(const Instance& i, const Matching& m1,
                      const Matching& m2) {
  int total = 0;
  for (int w = 0; w < i.num_workers(); ++w)
    total += vote(i, worker(w), m1, m2);
  for (int f = 0; f < i.num_firms(); ++f) total += vote(i, firm(f), m1, m2);
  return total;
}

// ---------------------------------------------------------------------------
// Labeling

LabeledGraph::LabeledGraph(const Instance& i, Matching m)
    : instance_(&i), matching_(std::move(m)) {
  if (!matching_.is_valid_for(i))
    throw ValidationError("matching is not valid for the instance");
  worker_retained_.resize(i.num_workers());
  firm_retained_.resize(i.num_firms());
  for (const Edge& e : i.edges()) {
    if (matching_.contains(e)) continue;
    bool w_side = prefers_edge(worker(e.worker), e);
    bool f_side = prefers_edge(firm(e.firm), e);
    if (!w_side && !f_side) continue;  // (+,+): dropped from G_M
    worker_retained_[e.worker].push_back(e.firm);
    firm_retained_[e.firm].push_back(e.worker);
    if (w_side && f_side) minus_minus_.push_back(e);
  }
}

EdgeLabel LabeledGraph::label(Edge e) const {
  if (!instance_->has_edge(e.worker, e.firm))
    throw ValidationError("label: not an edge of the instance");
  if (matching_.contains(e)) return EdgeLabel::Matched;
  bool w_side = prefers_edge(worker(e.worker), e);
  bool f_side = prefers_edge(firm(e.firm), e);
  if (w_side && f_side) return EdgeLabel::MinusMinus;
  if (w_side || f_side) return EdgeLabel::PlusMinus;
  return EdgeLabel::PlusPlus;
}

bool LabeledGraph::prefers_edge(AgentId a, Edge e) const {
  int other = a.side == Side::Worker ? e.firm : e.worker;
  int current = matching_.partner(a);
  if (current == -1) return true;  // unmatched agents prefer any edge
  return instance_->prefers(a, other, current);
}

const std::vector<int>& LabeledGraph::retained(AgentId a) const {
  return a.side == Side::Worker ? worker_retained_.at(a.index)
                                : firm_retained_.at(a.index);
}

LabeledGraph label_graph(const Instance& i, const Matching& m) {
  return LabeledGraph(i, m);
}

// ---------------------------------------------------------------------------
// Alternating reachability
//
// An alternating walk that leaves a vertex u through a retained non-matching
// edge {u,y} and continues must do so through y's matching edge, arriving at
// M(y) on u's own side.  Searches therefore run on one side at a time, with
// the implicit arc u -> M(y).  Because the graph is bipartite and partners
// are unique, a simple chain of such arcs always unfolds into a simple
// alternating path, which keeps breadth-first search both sound and complete
// here.

namespace {

// Breadth-first exploration of one side of G_M along alternating arcs.
class AltBfs {
 public:
  AltBfs(const LabeledGraph& lg, Side side)
      : lg_(lg),
        side_(side),
        count_(side == Side::Worker ? lg.instance().num_workers()
                                    : lg.instance().num_firms()),
        parent_(count_, kUnvisited),
        via_(count_, -1) {}

  // Marks `s` as a search root; `via` is the opposite-side vertex whose
  // matching edge the walk used to arrive at s (or -1 at a free start).
  void seed(int s, int via) {
    parent_[s] = kRoot;
    via_[s] = via;
    queue_.push_back(s);
  }

  bool exhausted() const { return queue_.empty(); }
  int pop() {
    int x = queue_.front();
    queue_.pop_front();
    return x;
  }

  // Expands x through retained edge {x, y}: arrives at M(y) if unvisited.
  void expand(int x) {
    for (int y : lg_.retained({side_, x})) {
      int z = lg_.matching().partner({opposite(side_), y});
      if (z == -1 || parent_[z] != kUnvisited) continue;
      parent_[z] = x;
      via_[z] = y;
      queue_.push_back(z);
    }
  }

  bool visited(int x) const { return parent_[x] != kUnvisited; }

  // True iff `y` is one of the opposite-side vertices on the tree path to x
  // (including the via recorded at the root).
  bool vias_contain(int x, int y) const {
    for (int v = x; v != kRoot; v = parent_[v]) {
      if (via_[v] == y) return true;
      if (parent_[v] == kRoot) break;
    }
    return false;
  }

  // Tree path to x as alternating G-vertices [root, via1, x1, ..., x],
  // excluding the root's own via.
  std::vector<AgentId> gpath_to(int x) const {
    std::vector<AgentId> rev;
    int v = x;
    while (true) {
      rev.push_back({side_, v});
      if (parent_[v] == kRoot) break;
      rev.push_back({opposite(side_), via_[v]});
      v = parent_[v];
    }
    return {rev.rbegin(), rev.rend()};
  }

 private:
  static constexpr int kUnvisited = -2;
  static constexpr int kRoot = -1;
  const LabeledGraph& lg_;
  Side side_;
  int count_;
  std::vector<int> parent_, via_;
  std::deque<int> queue_;
};

Edge as_edge(AgentId a, int other) {
  return a.side == Side::Worker ? Edge{a.index, other} : Edge{other, a.index};
}

// Removes the matched pairs among consecutive vertices of `seq` (wrapping
// when `cycle`) and adds the unmatched ones; `seq` must alternate, so the
// result is a valid matching.
Matching toggle_along(const Matching& m, const std::vector<AgentId>& seq,
                      bool cycle) {
  Matching out = m;
  std::vector<Edge> to_add;
  size_t n = seq.size();
  size_t limit = cycle ? n : n - 1;
  for (size_t k = 0; k < limit; ++k) {
    const AgentId& u = seq[k];
    const AgentId& v = seq[(k + 1) % n];
    Edge e = u.side == Side::Worker ? Edge{u.index, v.index}
                                    : Edge{v.index, u.index};
    if (out.contains(e))
      out.remove(e.worker, e.firm);
    else
      to_add.push_back(e);
  }
  for (const Edge& e : to_add) out.add(e.worker, e.firm);
  return out;
}

// Wraps a violating structure into a certificate, building the counter
// matching and double-checking that it indeed beats m.
Certificate make_certificate(const Instance& i, const Matching& m,
                             Certificate::Kind kind,
                             std::vector<AgentId> structure,
                             const std::vector<AgentId>& toggle_seq,
                             bool cycle) {
  Matching counter = toggle_along(m, toggle_seq, cycle);
  int margin = popularity_margin(i, counter, m);
  if (margin <= 0)
    throw Error("internal error: certificate counter matching does not win");
  return Certificate(kind, std::move(structure), std::move(counter), margin);
}

// Extends an alternating path at both ends through the endpoints' matching
// edges, which is what flipping the path requires to stay a valid matching.
std::vector<AgentId> extend_through_partners(const Matching& m,
                                             std::vector<AgentId> seq) {
  int front = m.partner(seq.front());
  if (front != -1) {
    seq.insert(seq.begin(), {opposite(seq.front().side), front});
  }
  int back = m.partner(seq.back());
  if (back != -1) seq.push_back({opposite(seq.back().side), back});
  return seq;
}

}  // namespace

// ---------------------------------------------------------------------------
// Popularity

PopularityResult is_popular(const Instance& i, const Matching& m) {
  LabeledGraph lg(i, m);
  const Matching& M = lg.matching();

  // Condition (ii): an alternating path from an unmatched vertex containing
  // a (-,-) edge.  Such a path can be cut right after its first (-,-) edge,
  // so we search forward from every unmatched vertex and test the retained
  // (-,-) edges at each reached vertex.  When the far endpoint of that edge
  // already lies on the tree path, the structure closes into an alternating
  // cycle through the (-,-) edge instead (condition (i)).
  auto search_from_unmatched = [&](AgentId u) -> std::optional<Certificate> {
    AltBfs bfs(lg, u.side);
    bfs.seed(u.index, -1);
    while (!bfs.exhausted()) {
      int x = bfs.pop();
      AgentId xa{u.side, x};
      for (int y : lg.retained(xa)) {
        Edge g = as_edge(xa, y);
        if (lg.label(g) != EdgeLabel::MinusMinus) continue;
        if (bfs.vias_contain(x, y)) {
          // Lasso: close the cycle at y's matching partner on the path.
          std::vector<AgentId> walk = bfs.gpath_to(x);
          AgentId ya{opposite(u.side), y};
          auto start = std::find(walk.begin(), walk.end(), ya);
          std::vector<AgentId> cycle(start, walk.end());
          return make_certificate(i, m, Certificate::Kind::AlternatingCycle,
                                  cycle, cycle, true);
        }
        std::vector<AgentId> path = bfs.gpath_to(x);
        path.push_back({opposite(u.side), y});
        // Flipping the path also frees y's partner when y is matched.
        std::vector<AgentId> seq = path;
        if (int p = M.partner(path.back()); p != -1)
          seq.push_back({u.side, p});
        return make_certificate(i, m, Certificate::Kind::PathFromUnmatched,
                                std::move(path), seq, false);
      }
      bfs.expand(x);
    }
    return std::nullopt;
  };

  for (int w = 0; w < i.num_workers(); ++w)
    if (M.firm_of(w) == -1)
      if (auto c = search_from_unmatched(worker(w)))
        return {false, std::move(c)};
  for (int f = 0; f < i.num_firms(); ++f)
    if (M.worker_of(f) == -1)
      if (auto c = search_from_unmatched(firm(f)))
        return {false, std::move(c)};

  // Conditions (i) and (iii): walk away from a (-,-) edge e1 = {a, b},
  // entering the graph through b's matching edge.  Reaching a again closes
  // an alternating cycle through e1; reaching a second retained (-,-) edge
  // yields the two-(-,-)-edge path.  Again, when that second edge points
  // back into the walk, the structure is an alternating cycle through it.
  // Both endpoints of e1 are matched here, otherwise the search above would
  // have reported the edge already.
  auto search_through = [&](AgentId a, AgentId b,
                            Edge e1) -> std::optional<Certificate> {
    int s = M.partner(b);
    if (s == -1 || M.partner(a) == -1)
      throw Error("internal error: loose (-,-) edge missed");
    AltBfs bfs(lg, a.side);
    bfs.seed(s, b.index);
    while (!bfs.exhausted()) {
      int x = bfs.pop();
      AgentId xa{a.side, x};
      if (x == a.index) {
        // a - b - M(b) - ... - M(a) - a is an alternating cycle through e1.
        std::vector<AgentId> cycle{a, b};
        std::vector<AgentId> walk = bfs.gpath_to(x);
        cycle.insert(cycle.end(), walk.begin(), walk.end() - 1);
        return make_certificate(i, m, Certificate::Kind::AlternatingCycle,
                                cycle, cycle, true);
      }
      for (int y : lg.retained(xa)) {
        Edge g = as_edge(xa, y);
        if (g == e1 || lg.label(g) != EdgeLabel::MinusMinus) continue;
        AgentId ya{opposite(a.side), y};
        if (bfs.vias_contain(x, y)) {
          std::vector<AgentId> walk = bfs.gpath_to(x);
          auto start = std::find(walk.begin(), walk.end(), ya);
          std::vector<AgentId> cycle;
          if (start == walk.end()) {
            // y is b itself: the walk entered through b's matching edge, so
            // the cycle wraps through b and spans the whole walk.
            cycle.push_back(ya);
            cycle.insert(cycle.end(), walk.begin(), walk.end());
          } else {
            cycle.assign(start, walk.end());
          }
          return make_certificate(i, m, Certificate::Kind::AlternatingCycle,
                                  cycle, cycle, true);
        }
        if (y == M.partner(a)) {
          // M(a) - a - b - ... - x - M(a): a cycle through e1 and g.
          std::vector<AgentId> cycle{ya, a, b};
          std::vector<AgentId> walk = bfs.gpath_to(x);
          cycle.insert(cycle.end(), walk.begin(), walk.end());
          return make_certificate(i, m, Certificate::Kind::AlternatingCycle,
                                  cycle, cycle, true);
        }
        std::vector<AgentId> path{a, b};
        std::vector<AgentId> walk = bfs.gpath_to(x);
        path.insert(path.end(), walk.begin(), walk.end());
        path.push_back(ya);
        return make_certificate(i, m, Certificate::Kind::PathTwoMinusMinus,
                                path, extend_through_partners(M, path),
                                false);
      }
      bfs.expand(x);
    }
    return std::nullopt;
  };

  for (const Edge& e1 : lg.minus_minus_edges()) {
    if (auto c = search_through(worker(e1.worker), firm(e1.firm), e1))
      return {false, std::move(c)};
    if (auto c = search_through(firm(e1.firm), worker(e1.worker), e1))
      return {false, std::move(c)};
  }
  return {true, std::nullopt};
}

// ---------------------------------------------------------------------------
// Dominance and strong popularity

namespace {

// True iff G_M contains an augmenting path (between two unmatched vertices).
bool has_augmenting_path(const LabeledGraph& lg) {
  const Instance& i = lg.instance();
  const Matching& M = lg.matching();
  // Any augmenting path has one unmatched endpoint on each side, so starting
  // from unmatched workers is enough.
  for (int w = 0; w < i.num_workers(); ++w) {
    if (M.firm_of(w) != -1) continue;
    AltBfs bfs(lg, Side::Worker);
    bfs.seed(w, -1);
    while (!bfs.exhausted()) {
      int x = bfs.pop();
      for (int y : lg.retained(worker(x)))
        if (M.worker_of(y) == -1) return true;
      bfs.expand(x);
    }
  }
  return false;
}

}  // namespace

bool is_dominant(const Instance& i, const Matching& m) {
  if (!is_popular(i, m).popular) return false;
  return !has_augmenting_path(LabeledGraph(i, m));
}

bool is_dominant_by_enumeration(const Instance& i, const Matching& m,
                                int max_side) {
  bool ok = true;
  enumerate_matchings(i, max_side, [&](const Matching& other) {
    int margin = popularity_margin(i, m, other);
    if (margin < 0 || (margin == 0 && other.size() > m.size())) {
      ok = false;
      return false;
    }
    return true;
  });
  return ok;
}

bool is_strongly_popular(const Instance& i, const Matching& m, int max_side) {
  bool ok = true;
  enumerate_matchings(i, max_side, [&](const Matching& other) {
    if (other == m) return true;
    if (popularity_margin(i, m, other) <= 0) {
      ok = false;
      return false;
    }
    return true;
  });
  return ok;
}

bool is_stable(const Instance& i, const Matching& m) {
  return LabeledGraph(i, m).minus_minus_edges().empty();
}

}  // namespace popmatch
