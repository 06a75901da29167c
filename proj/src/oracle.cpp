#include "popmatch/oracle.hpp"

#include "popmatch/verify.hpp"

namespace popmatch {

namespace {

void check_bound(const Instance& i, int max_side, const char* who) {
  if (i.num_workers() > max_side || i.num_firms() > max_side)
    throw SizeBoundError(std::string(who) + ": instance exceeds " +
                         std::to_string(max_side) + " agents per side");
}

}  // namespace

void enumerate_matchings(const Instance& i, int max_side,
                         const std::function<bool(const Matching&)>& visit) {
  check_bound(i, max_side, "enumerate_matchings");
  std::vector<std::vector<int>> neighbors(i.num_workers());
  for (const Edge& e : i.edges()) neighbors[e.worker].push_back(e.firm);

  Matching m = Matching::empty_for(i);
  bool stopped = false;
  auto rec = [&](auto&& self, int w) -> void {
    if (stopped) return;
    if (w == i.num_workers()) {
      if (!visit(m)) stopped = true;
      return;
    }
    self(self, w + 1);  // leave w unmatched
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

std::vector<Matching> all_matchings(const Instance& i, int max_side) {
  std::vector<Matching> out;
  enumerate_matchings(i, max_side, [&](const Matching& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

long long count_matchings(const Instance& i, int max_side) {
  check_bound(i, max_side, "count_matchings");
  int nf = i.num_firms();
  std::vector<unsigned> neighbor_mask(i.num_workers(), 0);
  for (const Edge& e : i.edges())
    neighbor_mask[e.worker] |= 1u << e.firm;
  // ways[mask] = matchings among workers w..end given firms in `mask` taken.
  std::vector<long long> ways(size_t{1} << nf, 1), next(size_t{1} << nf);
  for (int w = i.num_workers() - 1; w >= 0; --w) {
    for (unsigned mask = 0; mask < (1u << nf); ++mask) {
      long long total = ways[mask];
      for (unsigned avail = neighbor_mask[w] & ~mask; avail;
           avail &= avail - 1)
        total += ways[mask | (avail & -avail)];
      next[mask] = total;
    }
    std::swap(ways, next);
  }
  return ways[0];
}

bool is_popular_by_margins(const Instance& i, const Matching& m,
                           int max_side) {
  if (!m.is_valid_for(i))
    throw ValidationError("is_popular_by_margins: matching not valid here");
  bool ok = true;
  enumerate_matchings(i, max_side, [&](const Matching& other) {
    if (popularity_margin(i, m, other) < 0) {
      ok = false;
      return false;
    }
    return true;
  });
  return ok;
}

std::vector<Matching> popular_set(const Instance& i, int max_side,
                                  bool by_margins) {
  std::vector<Matching> out;
  if (by_margins) {
    std::vector<Matching> all = all_matchings(i, max_side);
    for (const Matching& m : all) {
      bool ok = true;
      for (const Matching& other : all)
        if (popularity_margin(i, m, other) < 0) {
          ok = false;
          break;
        }
      if (ok) out.push_back(m);
    }
  } else {
    enumerate_matchings(i, max_side, [&](const Matching& m) {
      if (is_popular(i, m).popular) out.push_back(m);
      return true;
    });
  }
  return out;
}

std::vector<Matching> dominant_set(const Instance& i, int max_side,
                                   bool by_margins) {
  std::vector<Matching> out;
  if (by_margins) {
    std::vector<Matching> all = all_matchings(i, max_side);
    for (const Matching& m : all) {
      bool ok = true;
      for (const Matching& other : all) {
        int margin = popularity_margin(i, m, other);
        if (margin < 0 || (margin == 0 && other.size() > m.size())) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(m);
    }
  } else {
    enumerate_matchings(i, max_side, [&](const Matching& m) {
      if (is_dominant(i, m)) out.push_back(m);
      return true;
    });
  }
  return out;
}

std::vector<Matching> strong_set(const Instance& i, int max_side) {
  std::vector<Matching> out;
  std::vector<Matching> all = all_matchings(i, max_side);
  for (const Matching& m : all) {
    bool ok = true;
    for (const Matching& other : all) {
      if (other == m) continue;
      if (popularity_margin(i, m, other) <= 0) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(m);
  }
  return out;
}

std::vector<Matching> robust_set(const InstanceFamily& family, Goal goal,
                                 int max_side, bool by_margins) {
  for (const Instance& inst : family.instances())
    check_bound(inst, max_side, "robust_set");
  std::vector<Matching> out;
  enumerate_matchings(family.first(), max_side, [&](const Matching& m) {
    for (const Instance& inst : family.instances())
      if (!m.is_valid_for(inst)) return true;
    for (const Instance& inst : family.instances()) {
      bool ok;
      if (goal == Goal::Dominant)
        ok = by_margins ? is_dominant_by_enumeration(inst, m, max_side)
                        : is_dominant(inst, m);
      else
        ok = by_margins ? is_popular_by_margins(inst, m, max_side)
                        : is_popular(inst, m).popular;
      if (!ok) return true;
    }
    out.push_back(m);
    return true;
  });
  return out;
}

}  // namespace popmatch
