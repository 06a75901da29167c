#include "popmatch/core.hpp"

#include <algorithm>
#include <sstream>

namespace popmatch {

namespace {

// Validates one side's preference lists and builds its rank matrix.
std::vector<std::vector<int>> build_ranks(
    const std::vector<std::vector<int>>& prefs, int opposite_count,
    const char* side_name) {
  std::vector<std::vector<int>> ranks(prefs.size(),
                                      std::vector<int>(opposite_count, -1));
  for (size_t a = 0; a < prefs.size(); ++a) {
    for (size_t pos = 0; pos < prefs[a].size(); ++pos) {
      int p = prefs[a][pos];
      if (p < 0 || p >= opposite_count)
        throw ValidationError(std::string(side_name) + " " +
                              std::to_string(a) +
                              ": preference index out of range");
      if (ranks[a][p] != -1)
        throw ValidationError(std::string(side_name) + " " +
                              std::to_string(a) +
                              ": duplicate entry in preference list");
      ranks[a][p] = static_cast<int>(pos);
    }
  }
  return ranks;
}

}  // namespace

Instance::Instance(std::vector<std::string> worker_labels,
                   std::vector<std::string> firm_labels,
                   std::vector<std::vector<int>> worker_prefs,
                   std::vector<std::vector<int>> firm_prefs)
    : worker_labels_(std::move(worker_labels)),
      firm_labels_(std::move(firm_labels)),
      worker_prefs_(std::move(worker_prefs)),
      firm_prefs_(std::move(firm_prefs)) {
  if (worker_prefs_.size() != worker_labels_.size() ||
      firm_prefs_.size() != firm_labels_.size())
    throw ValidationError("preference list count does not match agent count");

  for (int w = 0; w < num_workers(); ++w) {
    auto [it, fresh] = by_label_.emplace(worker_labels_[w], AgentId{Side::Worker, w});
    if (!fresh) throw ValidationError("duplicate agent label: " + worker_labels_[w]);
  }
  for (int f = 0; f < num_firms(); ++f) {
    auto [it, fresh] = by_label_.emplace(firm_labels_[f], AgentId{Side::Firm, f});
    if (!fresh) throw ValidationError("duplicate agent label: " + firm_labels_[f]);
  }

  worker_rank_ = build_ranks(worker_prefs_, num_firms(), "worker");
  firm_rank_ = build_ranks(firm_prefs_, num_workers(), "firm");

  // Mutual-edge consistency: w lists f iff f lists w.
  for (int w = 0; w < num_workers(); ++w) {
    for (int f : worker_prefs_[w]) {
      if (firm_rank_[f][w] == -1)
        throw ValidationError("asymmetric edge: " + worker_labels_[w] +
                              " lists " + firm_labels_[f] +
                              " but not vice versa");
      edges_.push_back({w, f});
    }
  }
  for (int f = 0; f < num_firms(); ++f)
    for (int w : firm_prefs_[f])
      if (worker_rank_[w][f] == -1)
        throw ValidationError("asymmetric edge: " + firm_labels_[f] +
                              " lists " + worker_labels_[w] +
                              " but not vice versa");

  std::sort(edges_.begin(), edges_.end());
  num_edges_ = static_cast<int>(edges_.size());
}

const std::string& Instance::label(AgentId a) const {
  return a.side == Side::Worker ? worker_labels_.at(a.index)
                                : firm_labels_.at(a.index);
}

AgentId Instance::agent_by_label(const std::string& label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end())
    throw ValidationError("unknown agent label: " + label);
  return it->second;
}

std::optional<AgentId> Instance::find_agent(const std::string& label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

const std::vector<int>& Instance::pref_list(AgentId a) const {
  return a.side == Side::Worker ? worker_prefs_.at(a.index)
                                : firm_prefs_.at(a.index);
}

std::vector<AgentId> Instance::pref_agents(AgentId a) const {
  std::vector<AgentId> out;
  for (int p : pref_list(a)) out.push_back({opposite(a.side), p});
  return out;
}

int Instance::rank(AgentId a, int partner_index) const {
  const auto& row = a.side == Side::Worker ? worker_rank_.at(a.index)
                                           : firm_rank_.at(a.index);
  if (partner_index < 0 || partner_index >= static_cast<int>(row.size()))
    return -1;
  return row[partner_index];
}

bool Instance::prefers(AgentId a, int p, int q) const {
  if (p == q) return false;
  if (p == -1) return false;           // unmatched never beats a neighbor
  int rp = rank(a, p);
  if (rp == -1)
    throw ValidationError("prefers: " + std::to_string(p) +
                          " is not a neighbor of " + label(a));
  if (q == -1) return true;            // any neighbor beats unmatched
  int rq = rank(a, q);
  if (rq == -1)
    throw ValidationError("prefers: " + std::to_string(q) +
                          " is not a neighbor of " + label(a));
  return rp < rq;
}

bool operator==(const Instance& a, const Instance& b) {
  return a.worker_labels_ == b.worker_labels_ &&
         a.firm_labels_ == b.firm_labels_ &&
         a.worker_prefs_ == b.worker_prefs_ && a.firm_prefs_ == b.firm_prefs_;
}

// ---------------------------------------------------------------------------

Matching::Matching(int num_workers, int num_firms)
    : worker_to_firm_(num_workers, -1), firm_to_worker_(num_firms, -1) {}

void Matching::add(int worker_index, int firm_index) {
  if (worker_index < 0 || worker_index >= num_workers() || firm_index < 0 ||
      firm_index >= num_firms())
    throw ValidationError("matching pair index out of range");
  if (worker_to_firm_[worker_index] != -1)
    throw ValidationError("worker " + std::to_string(worker_index) +
                          " already matched");
  if (firm_to_worker_[firm_index] != -1)
    throw ValidationError("firm " + std::to_string(firm_index) +
                          " already matched");
  worker_to_firm_[worker_index] = firm_index;
  firm_to_worker_[firm_index] = worker_index;
  ++size_;
}

void Matching::remove(int worker_index, int firm_index) {
  if (!contains({worker_index, firm_index}))
    throw ValidationError("matching does not contain the pair");
  worker_to_firm_[worker_index] = -1;
  firm_to_worker_[firm_index] = -1;
  --size_;
}

std::vector<Edge> Matching::pairs() const {
  std::vector<Edge> out;
  for (int w = 0; w < num_workers(); ++w)
    if (worker_to_firm_[w] != -1) out.push_back({w, worker_to_firm_[w]});
  return out;
}

bool Matching::is_valid_for(const Instance& i) const {
  if (num_workers() != i.num_workers() || num_firms() != i.num_firms())
    return false;
  for (const Edge& e : pairs())
    if (!i.has_edge(e.worker, e.firm)) return false;
  return true;
}

// ---------------------------------------------------------------------------

namespace {

void require_same_labels(const Instance& a, const Instance& b) {
  if (a.num_workers() != b.num_workers() || a.num_firms() != b.num_firms())
    throw ValidationError("instances have different side sizes");
  for (int w = 0; w < a.num_workers(); ++w)
    if (a.label(worker(w)) != b.label(worker(w)))
      throw ValidationError("worker labels differ between instances");
  for (int f = 0; f < a.num_firms(); ++f)
    if (a.label(firm(f)) != b.label(firm(f)))
      throw ValidationError("firm labels differ between instances");
}

// True iff the two orders agree on the elements they share.
bool common_restriction_agrees(const Instance& a, const Instance& b,
                               AgentId agent) {
  const auto& la = a.pref_list(agent);
  std::vector<int> ra, rb;
  for (int p : la)
    if (b.rank(agent, p) >= 0) ra.push_back(p);
  for (int p : b.pref_list(agent))
    if (a.rank(agent, p) >= 0) rb.push_back(p);
  return ra == rb;
}

// Kendall tau distance between two orders over the same element set
// (= minimum number of adjacent transpositions).
int kendall_distance(const std::vector<int>& from, const std::vector<int>& to) {
  std::map<int, int> pos;
  for (size_t i = 0; i < to.size(); ++i) pos[to[i]] = static_cast<int>(i);
  // Count inversions of the image sequence with a simple quadratic pass;
  // preference lists are short.
  int inv = 0;
  for (size_t i = 0; i < from.size(); ++i)
    for (size_t j = i + 1; j < from.size(); ++j)
      if (pos.at(from[i]) > pos.at(from[j])) ++inv;
  return inv;
}

}  // namespace

PerturbationReport diff_instances(const Instance& a, const Instance& b) {
  require_same_labels(a, b);
  PerturbationReport rep;

  auto compare_side = [&](Side side, int count) {
    for (int idx = 0; idx < count; ++idx) {
      AgentId agent{side, idx};
      const auto& la = a.pref_list(agent);
      const auto& lb = b.pref_list(agent);
      if (la == lb) continue;
      rep.changed.push_back(agent);
      std::vector<int> sa = la, sb = lb;
      std::sort(sa.begin(), sa.end());
      std::sort(sb.begin(), sb.end());
      rep.swap_distance[agent] = sa == sb ? kendall_distance(la, lb) : -1;
    }
  };
  compare_side(Side::Worker, a.num_workers());
  compare_side(Side::Firm, a.num_firms());

  std::set_difference(b.edges().begin(), b.edges().end(), a.edges().begin(),
                      a.edges().end(), std::back_inserter(rep.added));
  std::set_difference(a.edges().begin(), a.edges().end(), b.edges().begin(),
                      b.edges().end(), std::back_inserter(rep.removed));

  rep.single_agent = rep.changed.size() <= 1;
  rep.swaps_only = !rep.changed.empty();
  for (const auto& [agent, dist] : rep.swap_distance)
    if (dist != 1) rep.swaps_only = false;
  if (rep.changed.empty()) rep.swaps_only = true;  // vacuously

  rep.reduced_availability = rep.added.empty();
  if (rep.reduced_availability)
    for (const AgentId& agent : rep.changed)
      if (!common_restriction_agrees(a, b, agent))
        rep.reduced_availability = false;

  rep.a_complete = a.is_complete();
  return rep;
}

// ---------------------------------------------------------------------------

InstanceFamily::InstanceFamily(std::vector<Instance> instances,
                               FamilyRelation relation)
    : instances_(std::move(instances)), relation_(relation) {
  if (instances_.empty())
    throw ValidationError("a family needs at least one instance");
  for (size_t k = 1; k < instances_.size(); ++k) {
    require_same_labels(instances_[0], instances_[k]);
    if (relation_ == FamilyRelation::SameGraph) {
      if (instances_[0].edges() != instances_[k].edges())
        throw ValidationError(
            "family tagged SameGraph but edge sets differ");
    } else if (relation_ == FamilyRelation::AlteredAvailability) {
      for (int w = 0; w < instances_[0].num_workers(); ++w)
        if (!common_restriction_agrees(instances_[0], instances_[k], worker(w)))
          throw ValidationError(
              "family tagged AlteredAvailability but preferences over common "
              "neighbors differ at " + instances_[0].label(worker(w)));
      for (int f = 0; f < instances_[0].num_firms(); ++f)
        if (!common_restriction_agrees(instances_[0], instances_[k], firm(f)))
          throw ValidationError(
              "family tagged AlteredAvailability but preferences over common "
              "neighbors differ at " + instances_[0].label(firm(f)));
    }
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Line {
  int number;
  std::string text;
};

// Strips comments and whitespace; keeps nonempty lines with their numbers.
std::vector<Line> significant_lines(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    // trim
    auto begin = raw.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    auto end = raw.find_last_not_of(" \t\r");
    lines.push_back({number, raw.substr(begin, end - begin + 1)});
  }
  return lines;
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> words;
  std::istringstream in(s);
  std::string word;
  while (in >> word) words.push_back(word);
  return words;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  std::vector<std::string> worker_labels, firm_labels;
  std::map<std::string, AgentId> ids;
  std::vector<std::vector<int>> worker_prefs, firm_prefs;
  std::vector<bool> worker_seen, firm_seen;
  bool have_workers = false, have_firms = false;

  for (const Line& line : significant_lines(text)) {
    auto colon = line.text.find(':');
    if (colon == std::string::npos)
      throw ParseError(line.number, "expected ':' in instance line");
    std::string head = line.text.substr(0, colon);
    std::vector<std::string> tail = split_words(line.text.substr(colon + 1));
    std::vector<std::string> head_words = split_words(head);

    if (head_words.size() == 1 && head_words[0] == "workers") {
      if (have_workers) throw ParseError(line.number, "duplicate workers line");
      have_workers = true;
      for (const auto& label : tail) {
        if (ids.count(label))
          throw ParseError(line.number, "duplicate agent label: " + label);
        ids[label] = worker(static_cast<int>(worker_labels.size()));
        worker_labels.push_back(label);
      }
      worker_prefs.resize(worker_labels.size());
      worker_seen.resize(worker_labels.size(), false);
    } else if (head_words.size() == 1 && head_words[0] == "firms") {
      if (have_firms) throw ParseError(line.number, "duplicate firms line");
      have_firms = true;
      for (const auto& label : tail) {
        if (ids.count(label))
          throw ParseError(line.number, "duplicate agent label: " + label);
        ids[label] = firm(static_cast<int>(firm_labels.size()));
        firm_labels.push_back(label);
      }
      firm_prefs.resize(firm_labels.size());
      firm_seen.resize(firm_labels.size(), false);
    } else if (head_words.size() == 2 && head_words[0] == "pref") {
      if (!have_workers || !have_firms)
        throw ParseError(line.number,
                         "pref line before workers/firms declarations");
      auto it = ids.find(head_words[1]);
      if (it == ids.end())
        throw ParseError(line.number, "unknown agent label: " + head_words[1]);
      AgentId agent = it->second;
      auto& seen =
          agent.side == Side::Worker ? worker_seen : firm_seen;
      if (seen[agent.index])
        throw ParseError(line.number,
                         "duplicate pref line for " + head_words[1]);
      seen[agent.index] = true;
      std::vector<int> order;
      for (const auto& label : tail) {
        auto pit = ids.find(label);
        if (pit == ids.end())
          throw ParseError(line.number, "unknown agent label: " + label);
        if (pit->second.side != opposite(agent.side))
          throw ParseError(line.number,
                           label + " is on the same side as " + head_words[1]);
        order.push_back(pit->second.index);
      }
      (agent.side == Side::Worker ? worker_prefs : firm_prefs)[agent.index] =
          std::move(order);
    } else {
      throw ParseError(line.number, "unrecognized line: " + line.text);
    }
  }

  if (!have_workers || !have_firms)
    throw ParseError(0, "document needs workers and firms declarations");
  for (size_t w = 0; w < worker_seen.size(); ++w)
    if (!worker_seen[w])
      throw ParseError(0, "missing pref line for " + worker_labels[w]);
  for (size_t f = 0; f < firm_seen.size(); ++f)
    if (!firm_seen[f])
      throw ParseError(0, "missing pref line for " + firm_labels[f]);

  try {
    return Instance(std::move(worker_labels), std::move(firm_labels),
                    std::move(worker_prefs), std::move(firm_prefs));
  } catch (const ValidationError& e) {
    throw ParseError(0, e.what());
  }
}

std::string serialize_instance(const Instance& i) {
  std::ostringstream out;
  out << "workers:";
  for (int w = 0; w < i.num_workers(); ++w) out << ' ' << i.label(worker(w));
  out << "\nfirms:";
  for (int f = 0; f < i.num_firms(); ++f) out << ' ' << i.label(firm(f));
  out << '\n';
  for (int w = 0; w < i.num_workers(); ++w) {
    out << "pref " << i.label(worker(w)) << ':';
    for (int f : i.pref_list(worker(w))) out << ' ' << i.label(firm(f));
    out << '\n';
  }
  for (int f = 0; f < i.num_firms(); ++f) {
    out << "pref " << i.label(firm(f)) << ':';
    for (int w : i.pref_list(firm(f))) out << ' ' << i.label(worker(w));
    out << '\n';
  }
  return out.str();
}

Matching parse_matching(const std::string& text, const Instance& i) {
  Matching m = Matching::empty_for(i);
  for (const Line& line : significant_lines(text)) {
    std::vector<std::string> words = split_words(line.text);
    if (words.size() != 2)
      throw ParseError(line.number, "expected 'worker firm' pair");
    auto w = i.find_agent(words[0]);
    auto f = i.find_agent(words[1]);
    if (!w || w->side != Side::Worker)
      throw ParseError(line.number, "unknown worker label: " + words[0]);
    if (!f || f->side != Side::Firm)
      throw ParseError(line.number, "unknown firm label: " + words[1]);
    if (i.rank(*w, f->index) < 0)
      throw ParseError(line.number, "pair " + words[0] + " " + words[1] +
                                        " is not an edge of the instance");
    try {
      m.add(w->index, f->index);
    } catch (const ValidationError& e) {
      throw ParseError(line.number, e.what());
    }
  }
  return m;
}

std::string serialize_matching(const Matching& m, const Instance& i) {
  std::ostringstream out;
  for (const Edge& e : m.pairs())
    out << i.label(worker(e.worker)) << ' ' << i.label(firm(e.firm)) << '\n';
  return out.str();
}

InstanceFamily parse_family(const std::string& text, FamilyRelation relation) {
  // Family documents wrap instance documents in `instance <name> { ... }`
  // blocks.  Braces must sit on the instance header and on their own line.
  std::vector<Instance> instances;
  std::string current;
  bool inside = false;
  int block_line = 0;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string stripped = raw;
    if (auto hash = stripped.find('#'); hash != std::string::npos)
      stripped.erase(hash);
    std::vector<std::string> words = split_words(stripped);
    if (!inside) {
      if (words.empty()) continue;
      if (words.size() == 3 && words[0] == "instance" && words[2] == "{") {
        inside = true;
        block_line = number;
        current.clear();
      } else {
        throw ParseError(number, "expected 'instance <name> {'");
      }
    } else if (words.size() == 1 && words[0] == "}") {
      inside = false;
      try {
        instances.push_back(parse_instance(current));
      } catch (const ParseError& e) {
        throw ParseError(block_line, std::string("in instance block: ") +
                                         e.what());
      }
    } else {
      current += raw;
      current += '\n';
    }
  }
  if (inside) throw ParseError(block_line, "unterminated instance block");
  if (instances.empty()) throw ParseError(0, "no instance blocks found");
  return InstanceFamily(std::move(instances), relation);
}

std::string serialize_family(const InstanceFamily& family) {
  std::ostringstream out;
  for (int k = 0; k < family.size(); ++k) {
    out << "instance i" << k + 1 << " {\n";
    std::istringstream body(serialize_instance(family.instances()[k]));
    std::string line;
    while (std::getline(body, line)) out << "  " << line << '\n';
    out << "}\n";
  }
  return out.str();
}

}  // namespace popmatch
