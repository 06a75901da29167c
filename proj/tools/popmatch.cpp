// popmatch: command-line front end for popular/dominant/robust matching
// computations.  Exit codes: 0 = success / affirmative answer, 1 = negative
// decision answer, 2 = usage or input errors.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "popmatch/core.hpp"
#include "popmatch/gen.hpp"
#include "popmatch/mixed.hpp"
#include "popmatch/oracle.hpp"
#include "popmatch/reductions.hpp"
#include "popmatch/robust.hpp"
#include "popmatch/solve.hpp"
#include "popmatch/verify.hpp"

using nlohmann::json;
using namespace popmatch;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Instance load_instance(const std::string& path) {
  return parse_instance(read_file(path));
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Builds a family from comma-separated instance files (or one family
// document), deducing the tightest relation tag that validates.
InstanceFamily load_family(const std::string& arg) {
  std::vector<std::string> paths = split_commas(arg);
  if (paths.empty()) throw ValidationError("no instance files given");

  auto deduce = [](auto build) {
    for (FamilyRelation r : {FamilyRelation::SameGraph,
                             FamilyRelation::AlteredAvailability}) {
      try {
        return build(r);
      } catch (const ValidationError&) {
      }
    }
    return build(FamilyRelation::Unchecked);
  };

  if (paths.size() == 1) {
    std::string text = read_file(paths[0]);
    return deduce([&](FamilyRelation r) { return parse_family(text, r); });
  }
  std::vector<Instance> members;
  for (const std::string& p : paths) members.push_back(load_instance(p));
  return deduce(
      [&](FamilyRelation r) { return InstanceFamily(members, r); });
}

Edge parse_edge_arg(const std::string& text, const Instance& i) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ValidationError("expected edge as WORKER:FIRM, got: " + text);
  AgentId w = i.agent_by_label(text.substr(0, colon));
  AgentId f = i.agent_by_label(text.substr(colon + 1));
  if (w.side != Side::Worker || f.side != Side::Firm)
    throw ValidationError("edge must name a worker then a firm: " + text);
  return Edge{w.index, f.index};
}

Goal parse_goal(const std::string& mode) {
  if (mode == "popular") return Goal::Popular;
  if (mode == "dominant") return Goal::Dominant;
  throw ValidationError("unknown mode: " + mode);
}

json matching_json(const Matching& m, const Instance& i) {
  json pairs = json::array();
  for (Edge e : m.pairs())
    pairs.push_back({{"worker", i.label(worker(e.worker))},
                     {"firm", i.label(firm(e.firm))}});
  return pairs;
}

void emit_matching(const Matching& m, const Instance& i, bool json_mode,
                   const char* key = "matching") {
  if (json_mode)
    std::cout << json{{key, matching_json(m, i)}}.dump(2) << '\n';
  else
    std::cout << serialize_matching(m, i);
}

int emit_decision(bool yes, const std::string& yes_text,
                  const std::string& no_text, bool json_mode,
                  json extra = json::object()) {
  if (json_mode) {
    extra["answer"] = yes;
    std::cout << extra.dump(2) << '\n';
  } else {
    std::cout << (yes ? yes_text : no_text) << '\n';
  }
  return yes ? 0 : 1;
}

const char* certificate_kind_name(Certificate::Kind kind) {
  switch (kind) {
    case Certificate::Kind::AlternatingCycle:
      return "alternating-cycle";
    case Certificate::Kind::PathFromUnmatched:
      return "path-from-unmatched";
    case Certificate::Kind::PathTwoMinusMinus:
      return "path-two-minus-minus";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Subcommand bodies.  Each returns the process exit code.

int run_verify(const std::string& instance_path,
               const std::string& matching_path, const std::string& mode,
               bool json_mode) {
  Instance i = load_instance(instance_path);
  Matching m = parse_matching(read_file(matching_path), i);
  if (mode == "dominant")
    return emit_decision(is_dominant(i, m), "dominant", "not dominant",
                         json_mode, {{"mode", mode}});
  if (mode == "strong")
    return emit_decision(is_strongly_popular(i, m), "strongly popular",
                         "not strongly popular", json_mode, {{"mode", mode}});
  if (mode == "stable")
    return emit_decision(is_stable(i, m), "stable", "not stable", json_mode,
                         {{"mode", mode}});
  if (mode != "popular") throw ValidationError("unknown mode: " + mode);

  PopularityResult r = is_popular(i, m);
  json extra{{"mode", mode}};
  if (!r.popular && r.certificate) {
    json agents = json::array();
    for (AgentId a : r.certificate->vertices) agents.push_back(i.label(a));
    extra["certificate"] = {
        {"kind", certificate_kind_name(r.certificate->kind)},
        {"agents", agents},
        {"counter", matching_json(r.certificate->counter, i)},
        {"margin", r.certificate->margin}};
  }
  int rc = emit_decision(r.popular, "popular", "not popular", json_mode,
                         extra);
  if (!json_mode && !r.popular && r.certificate) {
    std::cout << "counter matching (wins by " << r.certificate->margin
              << "):\n"
              << serialize_matching(r.certificate->counter, i);
  }
  return rc;
}

int run_solve(const std::string& instance_path, const std::string& algo,
              const std::string& edge_text, const std::string& weights_path,
              bool json_mode) {
  Instance i = load_instance(instance_path);
  if (algo == "stable") {
    emit_matching(gale_shapley(i), i, json_mode);
    return 0;
  }
  if (algo == "dominant") {
    emit_matching(dominant_matching(i), i, json_mode);
    return 0;
  }
  if (algo == "popular-edge" || algo == "dominant-edge") {
    if (edge_text.empty())
      throw ValidationError("--edge is required for edge queries");
    Edge e = parse_edge_arg(edge_text, i);
    std::optional<Matching> m = algo == "popular-edge"
                                    ? popular_edge(i, e)
                                    : dominant_edge(i, e);
    if (!m) return emit_decision(false, "", "NO MATCHING", json_mode);
    emit_matching(*m, i, json_mode);
    return 0;
  }
  if (algo == "max-weight") {
    if (weights_path.empty())
      throw ValidationError("--weights is required for max-weight");
    WeightFunction w = parse_weights(read_file(weights_path), i);
    auto [m, value] = max_weight_popular(i, w);
    if (json_mode)
      std::cout << json{{"matching", matching_json(m, i)},
                        {"weight", format_rational(value)}}
                       .dump(2)
                << '\n';
    else
      std::cout << "weight: " << format_rational(value) << '\n'
                << serialize_matching(m, i);
    return 0;
  }
  throw ValidationError("unknown algorithm: " + algo);
}

int run_robust(const std::string& instances_spec, const std::string& mode,
               bool json_mode) {
  InstanceFamily family = load_family(instances_spec);
  Goal goal = parse_goal(mode);
  const Instance& first = family.instances()[0];

  std::optional<Matching> m;
  if (family.relation() == FamilyRelation::SameGraph) {
    m = robust_matching(family, goal);
  } else if (family.relation() == FamilyRelation::AlteredAvailability &&
             goal == Goal::Popular && first.is_complete()) {
    m = robust_reduced_availability(family);
  } else {
    // No structural fast path applies; fall back to exhaustive search.
    std::vector<Matching> set = robust_set(family, goal);
    if (!set.empty()) m = set.front();
  }

  if (!m)
    return emit_decision(false, "", "NO ROBUST MATCHING", json_mode,
                         {{"mode", mode}});
  if (json_mode)
    std::cout << json{{"answer", true},
                      {"mode", mode},
                      {"matching", matching_json(*m, first)}}
                     .dump(2)
              << '\n';
  else
    std::cout << serialize_matching(*m, first);
  return 0;
}

int run_oracle(const std::string& instance_path, const std::string& set_name,
               const std::string& instances_spec,
               const std::string& robust_mode, bool json_mode) {
  auto emit_set = [&](const std::vector<Matching>& set, const Instance& i) {
    if (json_mode) {
      json arr = json::array();
      for (const Matching& m : set) arr.push_back(matching_json(m, i));
      std::cout << json{{"matchings", arr}}.dump(2) << '\n';
    } else {
      for (size_t k = 0; k < set.size(); ++k) {
        if (k > 0) std::cout << '\n';
        std::cout << serialize_matching(set[k], i);
      }
    }
  };

  if (!robust_mode.empty()) {
    if (instances_spec.empty())
      throw ValidationError("--robust requires --instances");
    InstanceFamily family = load_family(instances_spec);
    std::vector<Matching> set = robust_set(family, parse_goal(robust_mode));
    emit_set(set, family.instances()[0]);
    return set.empty() ? 1 : 0;
  }

  if (instance_path.empty())
    throw ValidationError("--instance is required for set enumeration");
  Instance i = load_instance(instance_path);
  std::vector<Matching> set;
  if (set_name == "popular")
    set = popular_set(i);
  else if (set_name == "dominant")
    set = dominant_set(i);
  else if (set_name == "strong")
    set = strong_set(i);
  else
    throw ValidationError("unknown set: " + set_name);
  emit_set(set, i);
  return 0;
}

json provenance_json(const GadgetPair& pair) {
  json out = json::object();
  for (const auto& [symbol, label] : pair.provenance) out[symbol] = label;
  return out;
}

int emit_gadget(const GadgetPair& pair, bool json_mode) {
  if (json_mode) {
    json instances = json::array();
    for (const Instance& i : pair.family.instances())
      instances.push_back(serialize_instance(i));
    std::cout << json{{"instances", instances},
                      {"relation",
                       pair.family.relation() == FamilyRelation::SameGraph
                           ? "same-graph"
                           : "altered-availability"},
                      {"provenance", provenance_json(pair)}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << serialize_family(pair.family);
  }
  return 0;
}

int run_reduce_sat(const std::string& cnf_path, const std::string& assign_bits,
                   bool json_mode) {
  CnfFormula f = parse_dimacs(read_file(cnf_path));
  GadgetPair pair = reduce_sat(f);
  if (assign_bits.empty()) return emit_gadget(pair, json_mode);

  if (static_cast<int>(assign_bits.size()) != f.num_variables())
    throw ValidationError("assignment length must match the variable count");
  TruthAssignment phi;
  for (char c : assign_bits) {
    if (c != '0' && c != '1')
      throw ValidationError("assignment must be a 0/1 string");
    phi.push_back(c == '1');
  }
  Matching witness = witness_matching(pair, phi);
  emit_matching(witness, pair.family.instances()[0], json_mode, "witness");
  return 0;
}

int run_reduce_fefv(const std::string& instance_path,
                    const std::string& edge_text, const std::string& force,
                    bool json_mode) {
  Instance src = load_instance(instance_path);
  Edge e = parse_edge_arg(edge_text, src);
  return emit_gadget(
      reduce_forbidden_edge_force_vert(src, e, src.agent_by_label(force)),
      json_mode);
}

int run_reduce_two(const std::string& instance_path,
                   const std::string& edge_text, const std::string& edge2_text,
                   bool json_mode) {
  Instance src = load_instance(instance_path);
  return emit_gadget(reduce_two_forbidden(src, parse_edge_arg(edge_text, src),
                                          parse_edge_arg(edge2_text, src)),
                     json_mode);
}

int run_mixed(const std::string& instances_spec, const std::string& check,
              bool json_mode) {
  InstanceFamily family = load_family(instances_spec);
  const Instance& first = family.instances()[0];
  if (check == "feasible") {
    std::optional<FractionalMatching> point = joint_polytope_feasible(family);
    if (!point)
      return emit_decision(false, "", "INFEASIBLE", json_mode,
                           {{"check", check}});
    if (json_mode) {
      json masses = json::array();
      for (const auto& [e, p] : point->mass)
        masses.push_back({{"worker", first.label(worker(e.worker))},
                          {"firm", first.label(firm(e.firm))},
                          {"mass", format_rational(p)}});
      std::cout << json{{"answer", true}, {"check", check}, {"point", masses}}
                       .dump(2)
                << '\n';
    } else {
      std::cout << serialize_fractional(first, *point);
    }
    return 0;
  }
  if (check == "integral") {
    std::optional<Matching> m = integral_point_exists(family);
    if (!m)
      return emit_decision(false, "", "NO INTEGRAL POINT", json_mode,
                           {{"check", check}});
    if (json_mode)
      std::cout << json{{"answer", true},
                        {"check", check},
                        {"matching", matching_json(*m, first)}}
                       .dump(2)
                << '\n';
    else
      std::cout << serialize_matching(*m, first);
    return 0;
  }
  throw ValidationError("unknown check: " + check);
}

int run_diff(const std::string& a_path, const std::string& b_path) {
  Instance a = load_instance(a_path);
  Instance b = load_instance(b_path);
  PerturbationReport report = diff_instances(a, b);

  json changed = json::array();
  json distances = json::object();
  for (AgentId x : report.changed) {
    changed.push_back(a.label(x));
    auto it = report.swap_distance.find(x);
    if (it != report.swap_distance.end())
      distances[a.label(x)] = it->second;
  }
  auto edge_list = [&](const std::vector<Edge>& edges) {
    json out = json::array();
    for (Edge e : edges)
      out.push_back(a.label(worker(e.worker)) + ":" +
                    a.label(firm(e.firm)));
    return out;
  };
  std::cout << json{{"changed", changed},
                    {"swap_distance", distances},
                    {"added", edge_list(report.added)},
                    {"removed", edge_list(report.removed)},
                    {"single_agent", report.single_agent},
                    {"swaps_only", report.swaps_only},
                    {"reduced_availability", report.reduced_availability},
                    {"a_complete", report.a_complete}}
                   .dump(2)
            << '\n';
  return 0;
}

int run_gen(const std::string& what, int workers, int firms,
            double completeness, int max_side, int count, int vars,
            int clauses, const std::string& instance_path,
            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (what == "instance") {
    std::cout << serialize_instance(
        random_instance(workers, firms, completeness, rng));
    return 0;
  }
  if (what == "matching") {
    if (instance_path.empty())
      throw ValidationError("gen matching requires --instance");
    Instance i = load_instance(instance_path);
    std::cout << serialize_matching(random_matching(i, rng), i);
    return 0;
  }
  if (what == "pair") {
    std::cout << serialize_family(random_single_differing_pair(max_side, rng));
    return 0;
  }
  if (what == "reduced") {
    std::cout << serialize_family(
        random_reduced_availability_family(max_side, count, rng));
    return 0;
  }
  if (what == "formula") {
    std::cout << serialize_dimacs(
        random_satisfiable_monotone_formula(vars, clauses, rng));
    return 0;
  }
  if (what == "fefv") {
    FefvSource src = random_fefv_source(max_side, rng);
    const Instance& i = src.instance;
    // Comment lines keep the output parseable as a plain instance document.
    std::cout << "# e: " << i.label(worker(src.e.worker)) << ":"
              << i.label(firm(src.e.firm)) << '\n'
              << "# d: " << i.label(src.d) << '\n'
              << serialize_instance(i);
    return 0;
  }
  throw ValidationError("unknown generator: " + what);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"popular, dominant, and robust matchings under preferences"};
  app.require_subcommand(1);
  bool json_mode = false;
  std::uint64_t seed = 0;
  app.add_flag("--json", json_mode, "emit one JSON object instead of text");
  app.add_option("--seed", seed, "seed for randomized generation");

  std::string instance_path, matching_path, mode = "popular";
  CLI::App* verify = app.add_subcommand("verify", "check a matching");
  verify->add_option("--instance", instance_path)->required();
  verify->add_option("--matching", matching_path)->required();
  verify->add_option("--mode", mode)
      ->check(CLI::IsMember({"popular", "dominant", "strong", "stable"}));

  std::string algo = "stable", edge_text, weights_path;
  CLI::App* solve = app.add_subcommand("solve", "compute a matching");
  solve->add_option("--instance", instance_path)->required();
  solve->add_option("--algo", algo)
      ->check(CLI::IsMember({"stable", "dominant", "popular-edge",
                             "dominant-edge", "max-weight"}));
  solve->add_option("--edge", edge_text, "edge as WORKER:FIRM");
  solve->add_option("--weights", weights_path);

  std::string instances_spec;
  CLI::App* robust = app.add_subcommand(
      "robust", "find a matching popular/dominant in every family member");
  robust->add_option("--instances", instances_spec,
                     "comma-separated instance files, or one family file")
      ->required();
  robust->add_option("--mode", mode)
      ->check(CLI::IsMember({"popular", "dominant"}));

  std::string set_name = "popular", robust_mode;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "exhaustive enumeration on small instances");
  oracle->add_option("--instance", instance_path);
  oracle->add_option("--set", set_name)
      ->check(CLI::IsMember({"popular", "dominant", "strong"}));
  oracle->add_option("--instances", instances_spec);
  oracle->add_option("--robust", robust_mode)
      ->check(CLI::IsMember({"popular", "dominant"}));

  std::string cnf_path, assign_bits, force_label, edge2_text;
  CLI::App* reduce = app.add_subcommand("reduce", "hardness constructions");
  reduce->require_subcommand(1);
  CLI::App* reduce_sat_cmd = reduce->add_subcommand(
      "sat", "monotone 3-SAT to robust-matching gadget pair");
  reduce_sat_cmd->add_option("--cnf", cnf_path, "DIMACS CNF file")->required();
  reduce_sat_cmd->add_option(
      "--assign", assign_bits,
      "0/1 string; print the witness matching for this assignment");
  CLI::App* reduce_fefv_cmd = reduce->add_subcommand(
      "fefv", "forbidden-edge/forced-vertex query to a two-instance family");
  reduce_fefv_cmd->add_option("--instance", instance_path)->required();
  reduce_fefv_cmd->add_option("--edge", edge_text, "edge as WORKER:FIRM")
      ->required();
  reduce_fefv_cmd->add_option("--force", force_label, "agent label")
      ->required();
  CLI::App* reduce_two_cmd = reduce->add_subcommand(
      "two-forbidden", "two forbidden edges to a reduced-availability family");
  reduce_two_cmd->add_option("--instance", instance_path)->required();
  reduce_two_cmd->add_option("--edge", edge_text)->required();
  reduce_two_cmd->add_option("--edge2", edge2_text)->required();

  std::string check = "feasible";
  CLI::App* mixed = app.add_subcommand(
      "mixed", "fractional popularity over the joint polytope");
  mixed->add_option("--instances", instances_spec)->required();
  mixed->add_option("--check", check)
      ->check(CLI::IsMember({"feasible", "integral"}));

  std::string diff_a, diff_b;
  CLI::App* diff = app.add_subcommand(
      "diff", "report how two instances differ (always JSON)");
  diff->add_option("a", diff_a)->required();
  diff->add_option("b", diff_b)->required();

  std::string what = "instance";
  int workers = 4, firms = 4, max_side = 4, count = 2, vars = 3, clauses = 2;
  double completeness = 0.7;
  CLI::App* gen = app.add_subcommand("gen", "seeded random test data");
  gen->add_option("--what", what)
      ->check(CLI::IsMember(
          {"instance", "matching", "pair", "reduced", "formula", "fefv"}));
  gen->add_option("--workers", workers);
  gen->add_option("--firms", firms);
  gen->add_option("--completeness", completeness);
  gen->add_option("--max-side", max_side);
  gen->add_option("--count", count);
  gen->add_option("--vars", vars);
  gen->add_option("--clauses", clauses);
  gen->add_option("--instance", instance_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify)
      return run_verify(instance_path, matching_path, mode, json_mode);
    if (*solve)
      return run_solve(instance_path, algo, edge_text, weights_path,
                       json_mode);
    if (*robust) return run_robust(instances_spec, mode, json_mode);
    if (*oracle)
      return run_oracle(instance_path, set_name, instances_spec, robust_mode,
                        json_mode);
    if (*reduce_sat_cmd) return run_reduce_sat(cnf_path, assign_bits, json_mode);
    if (*reduce_fefv_cmd)
      return run_reduce_fefv(instance_path, edge_text, force_label, json_mode);
    if (*reduce_two_cmd)
      return run_reduce_two(instance_path, edge_text, edge2_text, json_mode);
    if (*mixed) return run_mixed(instances_spec, check, json_mode);
    if (*diff) return run_diff(diff_a, diff_b);
    if (*gen)
      return run_gen(what, workers, firms, completeness, max_side, count,
                     vars, clauses, instance_path, seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
