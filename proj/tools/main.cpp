#include <algorithm>
#include <cmath>
#include <limits>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "report.hpp"
#include "vrpsd/instance.hpp"
#include "vrpsd/restocking.hpp"
#include "vrpsd/search.hpp"

namespace {

using namespace vrpsd;
using nlohmann::json;

constexpr int kExitParse = 2;
constexpr int kExitInfeasibleRoute = 4;

struct Options {
  std::string instance;
  double f = 1.0;
  std::string fleet = "auto";
  std::string mode = "exact";
  double time_limit = 3600.0;
  bool round = false;
  double eps_p = 1e-5;
  std::string policy = "optimal";
  bool deterministic = false;
  bool json = false;
  std::string routes;
  int simulate = 0;
  std::uint64_t seed = 1;
  std::vector<double> factors{1.05, 1.20, 1.35, 1.50};
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--instance", o.instance, "TSPLIB/CVRPLIB instance file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--f", o.f, "load factor")->check(CLI::PositiveNumber);
  cmd->add_option("--fleet", o.fleet, "number of routes: auto or K");
  cmd->add_option("--mode", o.mode, "dominance mode")->check(CLI::IsMember({"exact", "heuristic"}));
  cmd->add_option("--time-limit", o.time_limit, "seconds")->check(CLI::PositiveNumber);
  cmd->add_flag("--round-distances", o.round, "round distances to the nearest integer");
  cmd->add_option("--eps-p", o.eps_p, "Poisson truncation threshold")->check(CLI::Range(0.0, 0.5));
  cmd->add_option("--policy", o.policy, "restocking policy")->check(CLI::IsMember({"optimal", "dtd"}));
  cmd->add_flag("--deterministic", o.deterministic, "solve the deterministic CVRP (a priori costs)");
  cmd->add_flag("--json", o.json, "print a JSON report");
  cmd->add_option("--seed", o.seed, "random seed");
}

std::optional<int> parse_fleet(const std::string& s) {
  if (s == "auto") return std::nullopt;
  std::size_t used = 0;
  const int k = std::stoi(s, &used);
  if (used != s.size() || k < 1) throw std::invalid_argument("--fleet expects 'auto' or a positive integer");
  return k;
}

Instance load(const Options& o, double f) {
  InstanceConfig ic;
  ic.load_factor = f;
  ic.eps_p = o.eps_p;
  ic.rounding = o.round ? DistanceRounding::nearest_integer : DistanceRounding::exact_euclidean;
  return parse_instance(o.instance, ic);
}

SolveConfig solve_config(const Options& o) {
  SolveConfig c;
  c.fleet = parse_fleet(o.fleet);
  c.mode = o.mode == "heuristic" ? SearchMode::heuristic : SearchMode::exact;
  c.time_limit_s = o.time_limit;
  if (o.deterministic)
    c.cost_model = CostModel::apriori;
  else if (o.policy == "dtd")
    c.cost_model = CostModel::detour_to_depot;
  return c;
}

cli::RunInfo run_info(const Options& o, double f) {
  cli::RunInfo r;
  r.instance_path = o.instance;
  r.load_factor = f;
  r.fleet = parse_fleet(o.fleet).value_or(0);
  r.mode = o.mode;
  r.policy = o.policy;
  r.deterministic = o.deterministic;
  r.rounded = o.round;
  r.eps_p = o.eps_p;
  r.time_limit_s = o.time_limit;
  return r;
}

RestockPolicy policy_of(const Options& o) {
  return o.policy == "dtd" ? RestockPolicy::detour_to_depot : RestockPolicy::optimal;
}

int cmd_solve(const Options& o) {
  const Instance inst = load(o, o.f);
  const SolveConfig config = solve_config(o);
  const SolveResult r = solve(inst, config);
  if (o.json)
    std::cout << cli::solve_report(run_info(o, o.f), inst, r).dump(2) << '\n';
  else
    cli::print_solve(std::cout, inst, r, policy_of(o));
  return cli::solve_exit_code(r);
}

int cmd_evaluate(const Options& o) {
  const Instance inst = load(o, o.f);
  const auto routes = cli::read_routes(o.routes);
  cli::EvaluateOptions eo;
  eo.simulate_reps = o.simulate;
  eo.seed = o.seed;
  const auto evaluated = cli::evaluate_routes(routes, inst, eo);
  if (o.json)
    std::cout << cli::evaluate_report(evaluated).dump(2) << '\n';
  else
    cli::print_evaluate(std::cout, evaluated);
  for (const auto& e : evaluated)
    if (!e.feasible) return kExitInfeasibleRoute;
  return 0;
}

json routes_json(const std::vector<Route>& routes) {
  json a = json::array();
  for (const auto& r : routes) a.push_back(r);
  return a;
}

int cmd_vss(const Options& o) {
  const Instance inst = load(o, o.f);
  const VssResult v = compute_vss(inst, solve_config(o));
  if (o.json) {
    std::cout << json{{"instance", inst.name()},
                      {"load_factor", o.f},
                      {"vss_pct", v.vss_pct},
                      {"stoch_obj", v.stoch_obj},
                      {"det_eval_obj", v.det_eval_obj},
                      {"det_obj", v.det_obj},
                      {"approximate", v.approximate},
                      {"det_routes", routes_json(v.det_routes)},
                      {"stoch_routes", routes_json(v.stoch_routes)}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << std::fixed << std::setprecision(3) << "instance " << inst.name() << '\n'
              << "deterministic optimum   " << v.det_obj << '\n'
              << "  evaluated stochastic  " << v.det_eval_obj << '\n'
              << "stochastic optimum      " << v.stoch_obj << '\n'
              << "VSS                     " << std::setprecision(2) << v.vss_pct << '%'
              << (v.approximate ? "  (not proven optimal)" : "") << '\n';
  }
  return 0;
}

int cmd_compare(const Options& o) {
  const Instance inst = load(o, o.f);
  const PolicyComparison p = compare_policies(inst, solve_config(o));
  if (o.json) {
    std::cout << json{{"instance", inst.name()},
                      {"load_factor", o.f},
                      {"optimal_obj", p.optimal_obj},
                      {"dtd_obj", p.dtd_obj},
                      {"diff_pct", p.diff_pct},
                      {"approximate", p.approximate},
                      {"optimal_routes", p.optimal.incumbent ? p.optimal.incumbent->routes.size() : 0},
                      {"dtd_routes", p.dtd.incumbent ? p.dtd.incumbent->routes.size() : 0}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << std::fixed << std::setprecision(3) << "instance " << inst.name() << '\n'
              << "optimal restocking  " << p.optimal_obj << '\n'
              << "detour-to-depot     " << p.dtd_obj << '\n'
              << "difference          " << std::setprecision(3) << p.diff_pct << '%'
              << (p.approximate ? "  (not proven optimal)" : "") << '\n';
  }
  return 0;
}

int cmd_sweep(const Options& o) {
  const SolveConfig config = solve_config(o);
  const Instance base_inst = load(o, o.f);
  for (double f : o.factors)
    if (f < o.f) throw std::invalid_argument("load factors must not be below the baseline --f");
  struct Row {
    double f;
    SolveResult r;
  };
  std::vector<Row> rows;
  rows.push_back({o.f, solve(base_inst, config)});
  for (double f : o.factors) rows.push_back({f, solve(base_inst.with_load_factor(f), config)});

  const auto obj = [](const SolveResult& r) {
    return r.incumbent ? r.incumbent->objective : std::numeric_limits<double>::infinity();
  };
  const double base = obj(rows.front().r);
  if (o.json) {
    json out = json::array();
    for (const auto& row : rows) {
      out.push_back({{"load_factor", row.f},
                     {"status", row.r.optimal ? "optimal" : (row.r.incumbent ? "feasible" : "none")},
                     {"objective", row.r.incumbent ? json(row.r.incumbent->objective) : json(nullptr)},
                     {"n_routes", row.r.incumbent ? row.r.incumbent->routes.size() : 0},
                     {"strict_improvement", obj(row.r) < base - 1e-6},
                     {"seconds", row.r.stats.seconds}});
    }
    std::cout << json{{"instance", base_inst.name()}, {"sweep", out}}.dump(2) << '\n';
  } else {
    std::cout << std::fixed << "instance " << base_inst.name() << '\n'
              << std::setw(6) << "f" << std::setw(12) << "objective" << std::setw(5) << "#" << '\n';
    for (const auto& row : rows) {
      std::cout << std::setprecision(2) << std::setw(6) << row.f << std::setprecision(3);
      if (row.r.incumbent)
        std::cout << std::setw(12) << row.r.incumbent->objective << std::setw(5) << row.r.incumbent->routes.size();
      else
        std::cout << std::setw(12) << "-" << std::setw(5) << "-";
      if (obj(row.r) < base - 1e-6) std::cout << "  improved";
      std::cout << '\n';
    }
  }
  int code = 0;
  for (const auto& row : rows) code = std::max(code, cli::solve_exit_code(row.r));
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Branch-price-and-cut solver for the VRP with stochastic demands"};
  app.require_subcommand(1);
  Options o;

  auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
  add_common(solve_cmd, o);

  auto* eval_cmd = app.add_subcommand("evaluate", "evaluate fixed routes");
  add_common(eval_cmd, o);
  eval_cmd->add_option("--routes", o.routes, "route file or solve JSON report")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--simulate", o.simulate, "Monte Carlo replications")->check(CLI::NonNegativeNumber);

  auto* vss_cmd = app.add_subcommand("vss", "value of the stochastic solution");
  add_common(vss_cmd, o);

  auto* cmp_cmd = app.add_subcommand("compare-policies", "optimal restocking versus detour-to-depot");
  add_common(cmp_cmd, o);

  auto* sweep_cmd = app.add_subcommand("sweep-load-factor", "solve for several load factors");
  add_common(sweep_cmd, o);
  sweep_cmd->add_option("--factors", o.factors, "load factors above the baseline")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (*solve_cmd) return cmd_solve(o);
    if (*eval_cmd) return cmd_evaluate(o);
    if (*vss_cmd) return cmd_vss(o);
    if (*cmp_cmd) return cmd_compare(o);
    if (*sweep_cmd) return cmd_sweep(o);
  } catch (const InstanceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return 0;
}
