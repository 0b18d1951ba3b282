#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "vrpsd/instance.hpp"
#include "vrpsd/restocking.hpp"
#include "vrpsd/search.hpp"

namespace vrpsd::cli {

struct RunInfo {
  std::string instance_path;
  double load_factor = 1.0;
  int fleet = 0;  // 0 = unfixed
  std::string mode = "exact";
  std::string policy = "optimal";
  bool deterministic = false;
  bool rounded = false;
  double eps_p = 1e-5;
  double time_limit_s = 3600.0;
};

struct RouteCosts {
  Route route;
  double apriori = 0.0;
  double expected = 0.0;
};

RouteCosts route_costs(const Route& route, const Instance& inst, RestockPolicy policy);

/// Share of expected restocking cost in the total, in percent.
double restocking_share(const std::vector<RouteCosts>& routes);

nlohmann::json solve_report(const RunInfo& run, const Instance& inst, const SolveResult& result);

/// Exit status of a solve: 3 on time-out without incumbent, 0 otherwise.
int solve_exit_code(const SolveResult& result);

void print_solve(std::ostream& out, const Instance& inst, const SolveResult& result, RestockPolicy policy);

/// Routes from a plain route file (one route per line) or from a solve
/// report (a JSON object with a "routes" array).
std::vector<Route> read_routes(const std::filesystem::path& path);

struct EvaluateOptions {
  int simulate_reps = 0;
  std::uint64_t seed = 1;
};

struct EvaluatedRoute {
  Route route;
  bool feasible = true;
  double load = 0.0;
  double apriori = 0.0;
  double optimal = 0.0;
  double dtd = 0.0;
  int preventive_states = 0;
  bool simulated = false;
  SimulationResult simulation;
};

std::vector<EvaluatedRoute> evaluate_routes(const std::vector<Route>& routes, const Instance& inst,
                                            const EvaluateOptions& options);

nlohmann::json evaluate_report(const std::vector<EvaluatedRoute>& routes);

void print_evaluate(std::ostream& out, const std::vector<EvaluatedRoute>& routes);

}  // namespace vrpsd::cli
