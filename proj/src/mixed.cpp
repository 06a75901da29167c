#include "popmatch/mixed.hpp"

#include <set>
#include <sstream>
#include <vector>

#include "popmatch/oracle.hpp"
#include "popmatch/verify.hpp"

namespace popmatch {

FractionalMatching indicator(const Matching& m) {
  FractionalMatching mu;
  for (Edge e : m.pairs()) mu.mass[e] = 1;
  return mu;
}

void validate_fractional(const Instance& i, const FractionalMatching& mu) {
  std::vector<Rational> worker_mass(i.num_workers(), 0);
  std::vector<Rational> firm_mass(i.num_firms(), 0);
  for (const auto& [e, p] : mu.mass) {
    if (!i.has_edge(e.worker, e.firm))
      throw ValidationError("fractional mass on a non-edge");
    if (p < 0) throw ValidationError("negative edge mass");
    worker_mass[e.worker] += p;
    firm_mass[e.firm] += p;
  }
  for (const Rational& s : worker_mass)
    if (s > 1) throw ValidationError("agent carries mass above 1");
  for (const Rational& s : firm_mass)
    if (s > 1) throw ValidationError("agent carries mass above 1");
}

namespace {

// Signed vote of agent x comparing partner candidate p against partner q.
int cmp_partners(const Instance& i, AgentId x, int p, int q) {
  if (i.prefers(x, p, q)) return 1;
  if (i.prefers(x, q, p)) return -1;
  return 0;
}

}  // namespace

Rational fractional_margin(const Instance& i, const FractionalMatching& mu,
                           const Matching& m) {
  validate_fractional(i, mu);
  Rational total = 0;
  for (int side = 0; side < 2; ++side) {
    Side s = side == 0 ? Side::Worker : Side::Firm;
    int count = s == Side::Worker ? i.num_workers() : i.num_firms();
    for (int k = 0; k < count; ++k) {
      AgentId x{s, k};
      int mx = m.partner(x);
      Rational assigned = 0;
      for (int y : i.pref_list(x)) {
        Edge e = s == Side::Worker ? Edge{k, y} : Edge{y, k};
        Rational p = mu.mass_of(e);
        if (p == 0) continue;
        total += p * cmp_partners(i, x, y, mx);
        assigned += p;
      }
      // Mass not assigned to any partner votes as the agent being unmatched,
      // which loses to any partner in m.
      if (mx != -1) total -= Rational(1) - assigned;
    }
  }
  return total;
}

std::string serialize_fractional(const Instance& i,
                                 const FractionalMatching& mu) {
  std::ostringstream out;
  for (Edge e : i.edges()) {
    Rational p = mu.mass_of(e);
    if (p > 0)
      out << i.label(worker(e.worker)) << ' ' << i.label(firm(e.firm)) << ' '
          << format_rational(p) << '\n';
  }
  return out.str();
}

namespace {

void check_joint_preconditions(const InstanceFamily& family, int max_side) {
  const Instance& first = family.instances()[0];
  if (std::max(first.num_workers(), first.num_firms()) > max_side)
    throw SizeBoundError("family exceeds the polytope size bound");
  for (const Instance& i : family.instances())
    if (!i.is_complete())
      throw ValidationError(
          "the popularity polytope is defined for complete instances only");
}

// Phase-I simplex with Bland's rule over exact rationals, deciding
// feasibility of A mu = b (degree equalities) plus margin inequalities
// turned into equalities by slacks, mu >= 0.  Only the equality rows need
// artificial variables: a ">= 0" row negated has its slack as a valid
// initial basic variable at value 0.
class FeasibilityTableau {
 public:
  explicit FeasibilityTableau(int num_structural)
      : num_structural_(num_structural) {}

  void add_equality(std::vector<Rational> coeffs, Rational rhs) {
    equalities_.push_back(std::move(coeffs));
    rhs_.push_back(std::move(rhs));
  }

  void add_at_least_zero(std::vector<Rational> coeffs) {
    inequalities_.insert(std::move(coeffs));
  }

  // Returns the structural solution if the system is feasible.
  std::optional<std::vector<Rational>> solve() {
    const int num_eq = static_cast<int>(equalities_.size());
    const int num_ineq = static_cast<int>(inequalities_.size());
    const int r = num_eq + num_ineq;
    const int slack_base = num_structural_;
    const int art_base = slack_base + num_ineq;
    const int width = art_base + num_eq + 1;  // + rhs column

    std::vector<std::vector<Rational>> t(r, std::vector<Rational>(width, 0));
    std::vector<int> basis(r);
    for (int row = 0; row < num_eq; ++row) {
      for (int j = 0; j < num_structural_; ++j) t[row][j] = equalities_[row][j];
      t[row][art_base + row] = 1;
      t[row][width - 1] = rhs_[row];
      basis[row] = art_base + row;
    }
    int row = num_eq;
    for (const std::vector<Rational>& coeffs : inequalities_) {
      // Negated: -sum(coeffs * mu) + slack = 0, slack basic at 0.
      for (int j = 0; j < num_structural_; ++j) t[row][j] = -coeffs[j];
      t[row][slack_base + (row - num_eq)] = 1;
      basis[row] = slack_base + (row - num_eq);
      ++row;
    }

    // Minimize the sum of artificials: objective row = cost vector reduced
    // by the rows whose basic variable is artificial (the equality rows).
    std::vector<Rational> obj(width, 0);
    for (int j = art_base; j < width - 1; ++j) obj[j] = 1;
    for (int er = 0; er < num_eq; ++er)
      for (int j = 0; j < width; ++j) obj[j] -= t[er][j];

    for (;;) {
      int enter = -1;
      for (int j = 0; j < width - 1 && enter < 0; ++j)
        if (obj[j] < 0) enter = j;  // Bland: smallest eligible index
      if (enter < 0) break;

      int leave = -1;
      Rational best;
      for (int k = 0; k < r; ++k) {
        if (t[k][enter] <= 0) continue;
        Rational ratio = t[k][width - 1] / t[k][enter];
        if (leave < 0 || ratio < best ||
            (ratio == best && basis[k] < basis[leave])) {
          leave = k;
          best = ratio;
        }
      }
      if (leave < 0)
        throw Error("internal error: unbounded phase-I objective");

      Rational pivot = t[leave][enter];
      for (int j = 0; j < width; ++j) t[leave][j] /= pivot;
      for (int k = 0; k < r; ++k) {
        if (k == leave || t[k][enter] == 0) continue;
        Rational factor = t[k][enter];
        for (int j = 0; j < width; ++j) t[k][j] -= factor * t[leave][j];
      }
      Rational factor = obj[enter];
      if (factor != 0)
        for (int j = 0; j < width; ++j) obj[j] -= factor * t[leave][j];
      basis[leave] = enter;
    }

    Rational artificial_sum = 0;
    for (int k = 0; k < r; ++k)
      if (basis[k] >= art_base) artificial_sum += t[k][width - 1];
    if (artificial_sum != 0) return std::nullopt;

    std::vector<Rational> solution(num_structural_, 0);
    for (int k = 0; k < r; ++k)
      if (basis[k] < num_structural_) solution[basis[k]] = t[k][width - 1];
    return solution;
  }

 private:
  int num_structural_;
  std::vector<std::vector<Rational>> equalities_;
  std::vector<Rational> rhs_;
  std::set<std::vector<Rational>> inequalities_;  // deduplicated rows
};

}  // namespace

std::optional<FractionalMatching> joint_polytope_feasible(
    const InstanceFamily& family, int max_side) {
  check_joint_preconditions(family, max_side);
  const Instance& first = family.instances()[0];
  const std::vector<Edge> edges = first.edges();
  const int ne = static_cast<int>(edges.size());
  auto edge_index = [&](Edge e) {
    return e.worker * first.num_firms() + e.firm;  // complete: dense layout
  };

  FeasibilityTableau tableau(ne);
  for (int w = 0; w < first.num_workers(); ++w) {
    std::vector<Rational> row(ne, 0);
    for (int f = 0; f < first.num_firms(); ++f) row[edge_index({w, f})] = 1;
    tableau.add_equality(std::move(row), 1);
  }
  for (int f = 0; f < first.num_firms(); ++f) {
    std::vector<Rational> row(ne, 0);
    for (int w = 0; w < first.num_workers(); ++w) row[edge_index({w, f})] = 1;
    tableau.add_equality(std::move(row), 1);
  }

  // Under the degree equalities the expected margin against M reduces to a
  // linear form over edge masses: each edge contributes its endpoints'
  // votes comparing the edge to their partners in M.
  for (const Instance& i : family.instances())
    for (const Matching& m : all_matchings(i, max_side)) {
      std::vector<Rational> row(ne, 0);
      for (Edge e : edges) {
        int vote = cmp_partners(i, worker(e.worker), e.firm,
                                m.firm_of(e.worker)) +
                   cmp_partners(i, firm(e.firm), e.worker,
                                m.worker_of(e.firm));
        row[edge_index(e)] = vote;
      }
      tableau.add_at_least_zero(std::move(row));
    }

  std::optional<std::vector<Rational>> solution = tableau.solve();
  if (!solution) return std::nullopt;
  FractionalMatching mu;
  for (Edge e : edges) {
    const Rational& p = (*solution)[edge_index(e)];
    if (p != 0) mu.mass[e] = p;
  }
  return mu;
}

std::optional<Matching> integral_point_exists(const InstanceFamily& family,
                                              int max_side) {
  check_joint_preconditions(family, max_side);
  const Instance& first = family.instances()[0];
  for (const Matching& m : all_matchings(first, max_side)) {
    if (2 * m.size() != first.num_agents()) continue;  // degree equalities
    bool popular_everywhere = true;
    for (const Instance& i : family.instances())
      if (!is_popular(i, m).popular) {
        popular_everywhere = false;
        break;
      }
    if (popular_everywhere) return m;
  }
  return std::nullopt;
}

}  // namespace popmatch
