#include "popmatch/reductions.hpp"

#include <algorithm>
#include <sstream>

#include "popmatch/verify.hpp"

namespace popmatch {

// ---------------------------------------------------------------------------
// Monotone 3-CNF formulas

CnfFormula::CnfFormula(int num_variables, std::vector<CnfClause> clauses)
    : num_variables_(num_variables), clauses_(std::move(clauses)) {
  if (num_variables_ < 0)
    throw ValidationError("negative variable count");
  for (const CnfClause& c : clauses_)
    for (int v : c.vars)
      if (v < 0 || v >= num_variables_)
        throw ValidationError("clause variable out of range");
}

bool satisfies(const CnfFormula& f, const TruthAssignment& assignment) {
  if (static_cast<int>(assignment.size()) != f.num_variables())
    throw ValidationError("assignment size does not match variable count");
  for (const CnfClause& c : f.clauses()) {
    bool sat = false;
    for (int v : c.vars) sat = sat || (assignment[v] == c.positive);
    if (!sat) return false;
  }
  return true;
}

CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int num_vars = -1, num_clauses = -1;
  std::vector<CnfClause> clauses;
  std::vector<int> literals;  // pending literals of the current clause

  auto close_clause = [&](int at_line) {
    if (literals.size() != 3)
      throw ParseError(at_line, "clause does not have exactly 3 literals");
    bool positive = literals[0] > 0;
    CnfClause c{positive, {}};
    for (int k = 0; k < 3; ++k) {
      if ((literals[k] > 0) != positive)
        throw ParseError(at_line, "clause mixes positive and negative literals");
      c.vars[k] = std::abs(literals[k]) - 1;
    }
    clauses.push_back(c);
    literals.clear();
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c") continue;  // blank or comment line
    if (tok == "p") {
      std::string fmt;
      if (num_vars >= 0 || !(ls >> fmt >> num_vars >> num_clauses) ||
          fmt != "cnf" || num_vars < 0 || num_clauses < 0)
        throw ParseError(lineno, "malformed problem line");
      continue;
    }
    if (num_vars < 0) throw ParseError(lineno, "literals before problem line");
    ls.clear();
    ls.str(line);
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        close_clause(lineno);
        continue;
      }
      if (std::abs(lit) > num_vars)
        throw ParseError(lineno, "literal out of range");
      literals.push_back(lit);
    }
    if (!ls.eof()) throw ParseError(lineno, "malformed literal");
  }
  if (!literals.empty())
    throw ParseError(lineno, "unterminated clause at end of input");
  if (static_cast<int>(clauses.size()) != num_clauses)
    throw ParseError(lineno, "clause count does not match problem line");
  return CnfFormula(num_vars, std::move(clauses));
}

std::string serialize_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_variables() << ' ' << f.num_clauses() << '\n';
  for (const CnfClause& c : f.clauses()) {
    for (int v : c.vars) out << (c.positive ? v + 1 : -(v + 1)) << ' ';
    out << "0\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Instance assembly by labels

namespace {

// Accumulates labeled agents and label-valued preference lists, then resolves
// them into an Instance (whose constructor validates mutual consistency).
class LabeledBuilder {
 public:
  void add(Side side, const std::string& label) {
    (side == Side::Worker ? workers_ : firms_).push_back(label);
  }

  std::vector<std::string>& prefs(const std::string& label) {
    return prefs_[label];
  }

  Instance build() const {
    std::map<std::string, int> windex, findex;
    for (int w = 0; w < static_cast<int>(workers_.size()); ++w)
      windex[workers_[w]] = w;
    for (int f = 0; f < static_cast<int>(firms_.size()); ++f)
      findex[firms_[f]] = f;
    auto resolve = [&](const std::vector<std::string>& labels,
                       const std::map<std::string, int>& index) {
      std::vector<int> out;
      for (const std::string& l : labels) out.push_back(index.at(l));
      return out;
    };
    std::vector<std::vector<int>> wprefs, fprefs;
    for (const std::string& w : workers_)
      wprefs.push_back(resolve(prefs_.at(w), findex));
    for (const std::string& f : firms_)
      fprefs.push_back(resolve(prefs_.at(f), windex));
    return Instance(workers_, firms_, std::move(wprefs), std::move(fprefs));
  }

 private:
  std::vector<std::string> workers_, firms_;
  std::map<std::string, std::vector<std::string>> prefs_;
};

std::string tag(int j, int i) {
  return ".j" + std::to_string(j) + ".i" + std::to_string(i);
}

std::string sym(const std::string& letter, int j, int i) {
  return letter + "_" + std::to_string(i) + "^" + std::to_string(j);
}

}  // namespace

// ---------------------------------------------------------------------------
// Monotone 3-SAT gadget

GadgetPair reduce_sat(const CnfFormula& f) {
  if (f.num_clauses() == 0)
    throw ValidationError("formula must have at least one clause");
  int m = f.num_clauses();
  const std::vector<CnfClause>& cl = f.clauses();

  // Labels: per-literal gadget agents use <letter>.j<clause>.i<position>;
  // barred letters carry a trailing 'b'.
  auto name = [&](const char* letter, int j, int i) {
    return std::string(letter) + tag(j, i);
  };
  auto pos = [&](int j) { return cl[j - 1].positive; };

  LabeledBuilder ba, bb;  // first and second instance
  std::map<std::string, std::string> provenance;
  auto add = [&](Side side, const std::string& label) {
    ba.add(side, label);
    bb.add(side, label);
  };

  for (int j = 1; j <= m; ++j)
    for (int i = 1; i <= 3; ++i) {
      const char* wletters[3] = {"a", "c", "d"};
      const char* fletters[3] = {"b", "e", "f"};
      const char* wbarred[3] = {"ab", "cb", "db"};
      const char* fbarred[3] = {"bb", "eb", "fb"};
      for (int k = 0; k < 3; ++k) {
        const char* wl = pos(j) ? wletters[k] : wbarred[k];
        const char* fl = pos(j) ? fletters[k] : fbarred[k];
        add(Side::Worker, name(wl, j, i));
        add(Side::Firm, name(fl, j, i));
        provenance[sym(wl, j, i)] = name(wl, j, i);
        provenance[sym(fl, j, i)] = name(fl, j, i);
      }
    }
  for (const char* w : {"w1", "w2", "t1", "t2", "t3"}) {
    add(Side::Worker, w);
    provenance[std::string(1, w[0]) + "_" + (w + 1)] = w;
  }
  for (const char* f : {"v1", "v2", "s1", "s2"}) {
    add(Side::Firm, f);
    provenance[std::string(1, f[0]) + "_" + (f + 1)] = f;
  }

  // Cross-gadget partner sets, in clause-major, position-minor order: the
  // negative-literal firms matching a positive literal's variable and vice
  // versa.
  auto crossing = [&](bool positive, int var, const char* letter) {
    std::vector<std::string> out;
    for (int j = 1; j <= m; ++j)
      for (int i = 1; i <= 3; ++i)
        if (pos(j) == positive && cl[j - 1].vars[i - 1] == var)
          out.push_back(name(letter, j, i));
    return out;
  };

  auto append = [](std::vector<std::string>& list,
                   const std::vector<std::string>& tail) {
    list.insert(list.end(), tail.begin(), tail.end());
  };

  // Both instances share every list except s1's and v2's.
  auto set_both = [&](const std::string& label,
                      std::vector<std::string> list) {
    ba.prefs(label) = list;
    bb.prefs(label) = std::move(list);
  };

  for (int j = 1; j <= m; ++j) {
    if (pos(j)) {
      for (int i = 1; i <= 3; ++i) {
        int var = cl[j - 1].vars[i - 1];
        // Workers of the positive-literal gadget.
        if (i < 3)
          set_both(name("a", j, i),
                   {name("f", j, i), name("b", j, i + 1), "v2"});
        else
          set_both(name("a", j, 3), {name("f", j, 3), "v1", "v2"});
        std::vector<std::string> c_list{name("e", j, i)};
        append(c_list, crossing(false, var, "bb"));
        append(c_list, {name("b", j, i), "v2"});
        set_both(name("c", j, i), std::move(c_list));
        set_both(name("d", j, i),
                 {name("b", j, i), name("e", j, i), name("f", j, i), "v2"});
        // Firms.
        if (i == 1)
          set_both(name("b", j, 1), {name("c", j, 1), "t1", name("d", j, 1)});
        else
          set_both(name("b", j, i),
                   {name("c", j, i), name("a", j, i - 1), name("d", j, i)});
        set_both(name("e", j, i), {name("d", j, i), name("c", j, i)});
        set_both(name("f", j, i), {name("d", j, i), name("a", j, i)});
      }
    } else {
      for (int i = 1; i <= 3; ++i) {
        int var = cl[j - 1].vars[i - 1];
        // Workers of the negative-literal gadget.
        if (i < 3)
          set_both(name("ab", j, i), {name("fb", j, i), name("bb", j, i + 1),
                                      name("eb", j, i + 1), "v2"});
        else
          set_both(name("ab", j, 3), {name("fb", j, 3), "v1", "v2"});
        set_both(name("cb", j, i), {name("eb", j, i), name("bb", j, i), "v2"});
        set_both(name("db", j, i), {"v2", name("bb", j, i), name("fb", j, i),
                                    name("eb", j, i)});
        // Firms.
        std::vector<std::string> bb_list;
        if (i == 1)
          bb_list = {"t1", name("cb", j, 1)};
        else
          bb_list = {name("ab", j, i - 1), name("cb", j, i)};
        append(bb_list, crossing(true, var, "c"));
        bb_list.push_back(name("db", j, i));
        set_both(name("bb", j, i), std::move(bb_list));
        if (i == 1)
          set_both(name("eb", j, 1), {"t1", name("db", j, 1), name("cb", j, 1)});
        else
          set_both(name("eb", j, i),
                   {name("ab", j, i - 1), name("db", j, i), name("cb", j, i)});
        set_both(name("fb", j, i), {name("ab", j, i), name("db", j, i)});
      }
    }
  }

  // Hub workers.
  std::vector<std::string> t1_list{"s1"};
  for (int j = 1; j <= m; ++j) {
    if (pos(j))
      t1_list.push_back(name("b", j, 1));
    else
      append(t1_list, {name("bb", j, 1), name("eb", j, 1)});
  }
  t1_list.push_back("v2");
  set_both("t1", std::move(t1_list));
  set_both("t2", {"s2", "s1"});
  set_both("t3", {"s2"});
  set_both("w1", {"v2", "v1"});
  set_both("w2", {"v2"});

  // Hub firms.
  std::vector<std::string> v1_list;
  for (int j = 1; j <= m; ++j)
    v1_list.push_back(name(pos(j) ? "a" : "ab", j, 3));
  v1_list.push_back("w1");
  set_both("v1", std::move(v1_list));

  std::vector<std::string> v2_tail;  // all workers except t2, t3, w1, w2
  for (int j = 1; j <= m; ++j)
    for (int i = 1; i <= 3; ++i) {
      if (pos(j))
        for (const char* l : {"a", "c", "d"}) v2_tail.push_back(name(l, j, i));
      else
        for (const char* l : {"ab", "cb", "db"})
          v2_tail.push_back(name(l, j, i));
    }
  v2_tail.push_back("t1");
  std::vector<std::string> v2_a{"w1", "w2"};
  append(v2_a, v2_tail);
  std::vector<std::string> v2_b = v2_tail;
  append(v2_b, {"w2", "w1"});
  ba.prefs("v2") = std::move(v2_a);
  bb.prefs("v2") = std::move(v2_b);

  set_both("s2", {"t2", "t3"});
  ba.prefs("s1") = {"t2", "t1"};
  bb.prefs("s1") = {"t1", "t2"};

  InstanceFamily family({ba.build(), bb.build()}, FamilyRelation::SameGraph);
  return GadgetPair{std::move(family), std::move(provenance), f};
}

// ---------------------------------------------------------------------------
// Witness matching and assignment extraction

namespace {

// The three matched pairs of one literal gadget under a truth value, as
// (worker letter, firm letter) pairs; barred letters for negative literals.
std::vector<std::pair<const char*, const char*>> gadget_pattern(bool positive,
                                                                bool lit_true) {
  if (positive)
    return lit_true ? std::vector<std::pair<const char*, const char*>>{
                          {"c", "b"}, {"d", "e"}, {"a", "f"}}
                    : std::vector<std::pair<const char*, const char*>>{
                          {"d", "b"}, {"c", "e"}, {"a", "f"}};
  return lit_true ? std::vector<std::pair<const char*, const char*>>{
                        {"db", "bb"}, {"cb", "eb"}, {"ab", "fb"}}
                  : std::vector<std::pair<const char*, const char*>>{
                        {"cb", "bb"}, {"db", "eb"}, {"ab", "fb"}};
}

}  // namespace

Matching witness_matching(const GadgetPair& pair,
                          const TruthAssignment& assignment) {
  if (!pair.formula)
    throw ValidationError("gadget pair does not carry a formula");
  const CnfFormula& f = *pair.formula;
  if (!satisfies(f, assignment))
    throw ValidationError("assignment does not satisfy the formula");

  const Instance& ia = pair.family.instances()[0];
  const Instance& ib = pair.family.instances()[1];
  Matching m = Matching::empty_for(ia);
  auto match = [&](const std::string& wl, const std::string& fl) {
    m.add(ia.agent_by_label(wl).index, ia.agent_by_label(fl).index);
  };

  match("t1", "s1");
  match("t2", "s2");
  match("w1", "v1");
  match("w2", "v2");
  for (int j = 1; j <= f.num_clauses(); ++j) {
    const CnfClause& c = f.clauses()[j - 1];
    for (int i = 1; i <= 3; ++i) {
      bool lit_true = assignment[c.vars[i - 1]] == c.positive;
      for (auto [wl, fl] : gadget_pattern(c.positive, lit_true))
        match(wl + tag(j, i), fl + tag(j, i));
    }
  }

  for (const Instance* i : {&ia, &ib}) {
    if (!is_popular(*i, m).popular || !is_dominant(*i, m))
      throw Error("internal error: witness matching failed verification");
  }
  return m;
}

TruthAssignment extract_assignment(const GadgetPair& pair, const Matching& m) {
  if (!pair.formula)
    throw ValidationError("gadget pair does not carry a formula");
  const CnfFormula& f = *pair.formula;
  const Instance& ia = pair.family.instances()[0];

  auto matched = [&](const std::string& wl, const std::string& fl) {
    return m.contains({ia.agent_by_label(wl).index,
                       ia.agent_by_label(fl).index});
  };
  auto pattern_matched = [&](int j, int i, bool positive, bool lit_true) {
    for (auto [wl, fl] : gadget_pattern(positive, lit_true))
      if (!matched(wl + tag(j, i), fl + tag(j, i))) return false;
    return true;
  };

  TruthAssignment out(f.num_variables(), true);
  for (int var = 0; var < f.num_variables(); ++var) {
    bool saw_true = false, saw_false = false;
    for (int j = 1; j <= f.num_clauses(); ++j) {
      const CnfClause& c = f.clauses()[j - 1];
      for (int i = 1; i <= 3; ++i) {
        if (c.vars[i - 1] != var) continue;
        if (c.positive && pattern_matched(j, i, true, true)) saw_true = true;
        if (!c.positive && pattern_matched(j, i, false, true)) saw_false = true;
      }
    }
    if (saw_true && saw_false)
      throw ValidationError(
          "matching does not induce a consistent assignment");
    out[var] = saw_false ? false : true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Forbidden edge + forced vertex gadget

namespace {

std::string fresh_label(const Instance& i, std::string base) {
  while (i.find_agent(base)) base += "'";
  return base;
}

// Side-generic view of an instance as label-valued preference lists.
struct LabelLists {
  std::vector<std::string> workers, firms;
  std::map<std::string, std::vector<std::string>> prefs;

  explicit LabelLists(const Instance& i) {
    for (int w = 0; w < i.num_workers(); ++w) {
      workers.push_back(i.label(worker(w)));
      auto& list = prefs[workers.back()];
      for (AgentId f : i.pref_agents(worker(w))) list.push_back(i.label(f));
    }
    for (int f = 0; f < i.num_firms(); ++f) {
      firms.push_back(i.label(firm(f)));
      auto& list = prefs[firms.back()];
      for (AgentId w : i.pref_agents(firm(f))) list.push_back(i.label(w));
    }
  }

  void add_agent(Side side, const std::string& label) {
    (side == Side::Worker ? workers : firms).push_back(label);
    prefs[label] = {};
  }

  Instance build() const {
    LabeledBuilder b;
    for (const std::string& w : workers) {
      b.add(Side::Worker, w);
      b.prefs(w) = prefs.at(w);
    }
    for (const std::string& f : firms) {
      b.add(Side::Firm, f);
      b.prefs(f) = prefs.at(f);
    }
    return b.build();
  }
};

}  // namespace

GadgetPair reduce_forbidden_edge_force_vert(const Instance& src, Edge e,
                                            AgentId d) {
  if (!src.has_edge(e.worker, e.firm))
    throw ValidationError("designated edge is not an edge of the instance");
  // The promise: one endpoint of e is a leaf; call it a.
  AgentId a, b;
  if (src.degree(worker(e.worker)) == 1) {
    a = worker(e.worker);
    b = firm(e.firm);
  } else if (src.degree(firm(e.firm)) == 1) {
    a = firm(e.firm);
    b = worker(e.worker);
  } else {
    throw ValidationError("designated edge has no leaf endpoint");
  }
  if (src.degree(b) != 2)
    throw ValidationError(
        "the non-leaf endpoint must have exactly one further neighbor");
  int c_index = src.pref_list(b)[0] == a.index ? src.pref_list(b)[1]
                                               : src.pref_list(b)[0];
  AgentId c{opposite(b.side), c_index};
  if (src.rank(b, c.index) != 0 || src.rank(c, b.index) != 0)
    throw ValidationError(
        "the non-leaf endpoint and its other neighbor must top-rank each "
        "other");
  if (d.index < 0 ||
      d.index >= (d.side == Side::Worker ? src.num_workers() : src.num_firms()))
    throw ValidationError("forced vertex is out of range");
  if (d == a)
    throw ValidationError(
        "forcing the leaf endpoint of the forbidden edge is contradictory");

  std::string la = fresh_label(src, "la");
  std::string ra = fresh_label(src, "ra");
  std::string ld = fresh_label(src, "ld");
  std::string rd = fresh_label(src, "rd");

  LabelLists lists(src);
  lists.add_agent(opposite(a.side), la);
  lists.add_agent(a.side, ra);
  lists.add_agent(opposite(d.side), ld);
  lists.add_agent(d.side, rd);

  const std::string a_label = src.label(a);
  const std::string b_label = src.label(b);
  const std::string d_label = src.label(d);
  lists.prefs[la] = {a_label, ra};
  lists.prefs[ra] = {la};
  lists.prefs[rd] = {ld};
  lists.prefs[d_label].push_back(ld);

  LabelLists lists_b = lists;
  lists.prefs[a_label] = {b_label, la};
  lists.prefs[ld] = {d_label, rd};
  lists_b.prefs[a_label] = {la, b_label};
  lists_b.prefs[ld] = {rd, d_label};

  InstanceFamily family({lists.build(), lists_b.build()},
                        FamilyRelation::SameGraph);
  std::map<std::string, std::string> provenance{
      {"a", a_label},       {"b", b_label}, {"c", src.label(c)},
      {"d", d_label},       {"l_a", la},    {"r_a", ra},
      {"l_d", ld},          {"r_d", rd}};
  return GadgetPair{std::move(family), std::move(provenance), std::nullopt};
}

// ---------------------------------------------------------------------------
// Two forbidden edges (reduced availability)

GadgetPair reduce_two_forbidden(const Instance& src, Edge e, Edge e2) {
  if (!src.has_edge(e.worker, e.firm) || !src.has_edge(e2.worker, e2.firm))
    throw ValidationError("designated edge is not an edge of the instance");
  if (e.worker == e2.worker || e.firm == e2.firm)
    throw ValidationError("designated edges must be disjoint");

  LabelLists lists(src);
  for (Edge drop : {e, e2}) {
    const std::string wl = src.label(worker(drop.worker));
    const std::string fl = src.label(firm(drop.firm));
    std::erase(lists.prefs[wl], fl);
    std::erase(lists.prefs[fl], wl);
  }

  InstanceFamily family({src, lists.build()},
                        FamilyRelation::AlteredAvailability);
  auto edge_name = [&](Edge g) {
    return src.label(worker(g.worker)) + ":" + src.label(firm(g.firm));
  };
  std::map<std::string, std::string> provenance{{"e", edge_name(e)},
                                                {"e_prime", edge_name(e2)}};
  return GadgetPair{std::move(family), std::move(provenance), std::nullopt};
}

}  // namespace popmatch
