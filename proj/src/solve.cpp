#include "popmatch/solve.hpp"

#include <cctype>
#include <deque>
#include <sstream>

#include "popmatch/oracle.hpp"
#include "popmatch/verify.hpp"

namespace popmatch {

// ---------------------------------------------------------------------------
// Rationals

Rational parse_rational(const std::string& text) {
  // Accept only [-]digits[/digits]; GMP itself is laxer than we want.
  size_t pos = 0, slash = std::string::npos;
  if (pos < text.size() && text[pos] == '-') ++pos;
  if (pos == text.size()) throw ParseError(0, "empty rational");
  for (; pos < text.size(); ++pos) {
    if (text[pos] == '/' && slash == std::string::npos && pos + 1 < text.size())
      slash = pos;
    else if (!std::isdigit(static_cast<unsigned char>(text[pos])))
      throw ParseError(0, "malformed rational '" + text + "'");
  }
  Rational r(text, 10);
  if (r.get_den() == 0)
    throw ParseError(0, "zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// ---------------------------------------------------------------------------
// Deferred acceptance

Matching gale_shapley(const Instance& i) {
  Matching m = Matching::empty_for(i);
  std::vector<int> next(i.num_workers(), 0);
  std::deque<int> free;
  for (int w = 0; w < i.num_workers(); ++w) free.push_back(w);
  while (!free.empty()) {
    int w = free.front();
    free.pop_front();
    const std::vector<int>& prefs = i.pref_list(worker(w));
    while (next[w] < static_cast<int>(prefs.size())) {
      int f = prefs[next[w]++];
      int cur = m.worker_of(f);
      if (cur == -1) {
        m.add(w, f);
        break;
      }
      if (i.prefers(firm(f), w, cur)) {
        m.remove(cur, f);
        m.add(w, f);
        free.push_back(cur);
        break;
      }
    }
  }
  return m;
}

Matching dominant_matching(const Instance& i) {
  Matching m = Matching::empty_for(i);
  std::vector<int> next(i.num_workers(), 0), level(i.num_workers(), 0);
  std::deque<int> free;
  for (int w = 0; w < i.num_workers(); ++w) free.push_back(w);
  while (!free.empty()) {
    int w = free.front();
    free.pop_front();
    const std::vector<int>& prefs = i.pref_list(worker(w));
    while (true) {
      if (next[w] == static_cast<int>(prefs.size())) {
        if (level[w] == 1 || prefs.empty()) break;  // stays unmatched
        level[w] = 1;  // second pass down the same list
        next[w] = 0;
      }
      int f = prefs[next[w]++];
      int cur = m.worker_of(f);
      bool accepts = cur == -1 || level[w] > level[cur] ||
                     (level[w] == level[cur] && i.prefers(firm(f), w, cur));
      if (!accepts) continue;
      if (cur != -1) {
        m.remove(cur, f);
        free.push_back(cur);
      }
      m.add(w, f);
      break;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Matchings through a required edge

namespace {

// Enumerates matchings containing `e` in the oracle's order (workers in
// index order, unmatched first, then free neighbors ascending; e.worker is
// pinned to e.firm).  Stops when `visit` returns false.
void enumerate_containing(const Instance& i, Edge e, int max_side,
                          const std::function<bool(const Matching&)>& visit) {
  if (i.num_workers() > max_side || i.num_firms() > max_side)
    throw SizeBoundError("edge search: instance exceeds " +
                         std::to_string(max_side) + " agents per side");
  if (!i.has_edge(e.worker, e.firm))
    throw ValidationError("edge search: not an edge of the instance");
  std::vector<std::vector<int>> neighbors(i.num_workers());
  for (const Edge& g : i.edges()) neighbors[g.worker].push_back(g.firm);

  Matching m = Matching::empty_for(i);
  bool stopped = false;
  auto rec = [&](auto&& self, int w) -> void {
    if (stopped) return;
    if (w == i.num_workers()) {
      if (!visit(m)) stopped = true;
      return;
    }
    if (w == e.worker) {
      if (m.worker_of(e.firm) != -1) return;  // dead branch
      m.add(e.worker, e.firm);
      self(self, w + 1);
      m.remove(e.worker, e.firm);
      return;
    }
    self(self, w + 1);
    for (int f : neighbors[w]) {
      if (stopped) return;
      if (m.worker_of(f) != -1) continue;
      m.add(w, f);
      self(self, w + 1);
      m.remove(w, f);
    }
  };
  rec(rec, 0);
}

std::optional<Matching> first_matching_with(
    const Instance& i, Edge e, int max_side,
    const std::function<bool(const Matching&)>& good) {
  std::optional<Matching> found;
  enumerate_containing(i, e, max_side, [&](const Matching& m) {
    if (!good(m)) return true;
    found = m;
    return false;
  });
  return found;
}

}  // namespace

std::optional<Matching> popular_edge(const Instance& i, Edge e, int max_side) {
  return first_matching_with(i, e, max_side, [&](const Matching& m) {
    return is_popular(i, m).popular;
  });
}

std::optional<Matching> dominant_edge(const Instance& i, Edge e,
                                      int max_side) {
  return first_matching_with(
      i, e, max_side, [&](const Matching& m) { return is_dominant(i, m); });
}

// ---------------------------------------------------------------------------
// Weights

WeightFunction parse_weights(const std::string& text, const Instance& i) {
  WeightFunction w;
  for (const Edge& e : i.edges()) w[e] = 0;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::vector<std::vector<bool>> seen(i.num_workers(),
                                      std::vector<bool>(i.num_firms(), false));
  while (std::getline(in, line)) {
    ++line_no;
    if (size_t hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream fields(line);
    std::string wl, fl, value;
    if (!(fields >> wl)) continue;  // blank
    if (!(fields >> fl >> value))
      throw ParseError(line_no, "expected 'worker firm value'");
    std::string extra;
    if (fields >> extra) throw ParseError(line_no, "trailing field");
    AgentId wa = i.find_agent(wl).value_or(AgentId{Side::Firm, -1});
    AgentId fa = i.find_agent(fl).value_or(AgentId{Side::Firm, -1});
    if (wa.side != Side::Worker || wa.index < 0)
      throw ParseError(line_no, "unknown worker '" + wl + "'");
    if (fa.side != Side::Firm || fa.index < 0)
      throw ParseError(line_no, "unknown firm '" + fl + "'");
    if (!i.has_edge(wa.index, fa.index))
      throw ParseError(line_no, "no edge " + wl + " -- " + fl);
    if (seen[wa.index][fa.index])
      throw ParseError(line_no, "repeated edge " + wl + " -- " + fl);
    seen[wa.index][fa.index] = true;
    try {
      w[{wa.index, fa.index}] = parse_rational(value);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return w;
}

std::pair<Matching, Rational> max_weight_popular(const Instance& i,
                                                 const WeightFunction& w,
                                                 int max_side) {
  if (!i.is_complete())
    throw ValidationError("max_weight_popular requires a complete instance");
  if (static_cast<int>(w.size()) != i.num_edges())
    throw ValidationError("weight function must cover exactly the edge set");
  for (const auto& [e, value] : w)
    if (!i.has_edge(e.worker, e.firm))
      throw ValidationError("weight on a non-edge");

  std::optional<Matching> best;
  Rational best_weight = 0;
  enumerate_matchings(i, max_side, [&](const Matching& m) {
    if (!is_popular(i, m).popular) return true;
    Rational total = 0;
    for (const Edge& e : m.pairs()) total += w.at(e);
    if (!best || total > best_weight) {
      best = m;
      best_weight = total;
    }
    return true;
  });
  if (!best)
    throw Error("internal error: no popular matching found");  // unreachable
  return {*best, best_weight};
}

}  // namespace popmatch
