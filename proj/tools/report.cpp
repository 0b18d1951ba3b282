#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vrpsd::cli {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string status_of(const SolveResult& r) {
  if (r.infeasible) return "infeasible";
  if (r.optimal) return "optimal";
  if (r.timed_out) return r.incumbent ? "time_limit" : "time_limit_no_solution";
  return "stopped";
}

}  // namespace

RouteCosts route_costs(const Route& route, const Instance& inst, RestockPolicy policy) {
  return {route, apriori_cost(route, inst), eval_route(route, inst, policy)};
}

double restocking_share(const std::vector<RouteCosts>& routes) {
  double total = 0.0;
  double restock = 0.0;
  for (const auto& r : routes) {
    total += r.expected;
    restock += r.expected - r.apriori;
  }
  return total > 0.0 ? 100.0 * restock / total : 0.0;
}

json solve_report(const RunInfo& run, const Instance& inst, const SolveResult& result) {
  const RestockPolicy policy = run.policy == "dtd" ? RestockPolicy::detour_to_depot : RestockPolicy::optimal;
  json j;
  j["instance"] = inst.name();
  j["instance_path"] = run.instance_path;
  j["load_factor"] = run.load_factor;
  j["fleet"] = run.fleet > 0 ? json(run.fleet) : json("auto");
  j["mode"] = run.mode;
  j["policy"] = run.policy;
  j["deterministic"] = run.deterministic;
  j["round_distances"] = run.rounded;
  j["eps_p"] = run.eps_p;
  j["time_limit_s"] = run.time_limit_s;
  j["status"] = status_of(result);

  std::vector<RouteCosts> costs;
  if (result.incumbent) {
    for (const auto& r : result.incumbent->routes) costs.push_back(route_costs(r, inst, policy));
  }
  j["objective"] = result.incumbent ? json(result.incumbent->objective) : json(nullptr);
  j["lower_bound"] = number_or_null(result.lower_bound);
  j["gap"] = number_or_null(result.gap);
  j["n_routes"] = costs.size();
  j["restocking_share_pct"] = result.incumbent ? json(restocking_share(costs)) : json(nullptr);
  json routes = json::array();
  for (const auto& c : costs) {
    routes.push_back({{"customers", c.route},
                      {"load", route_load(c.route, inst)},
                      {"apriori_cost", c.apriori},
                      {"expected_cost", c.expected},
                      {"restocking_cost", c.expected - c.apriori}});
  }
  j["routes"] = std::move(routes);

  const auto& s = result.stats;
  j["stats"] = {{"nodes", s.nodes},
                {"columns", s.columns},
                {"cuts", s.cuts},
                {"pricing_calls", s.pricing_calls},
                {"exact_pricing_calls", s.exact_pricing_calls},
                {"labels", s.labels},
                {"lp_iterations", s.lp_iterations},
                {"root_lb", s.root_lb},
                {"seconds", s.seconds}};
  json log = json::array();
  for (const auto& e : result.log) {
    log.push_back({{"node", e.node},
                   {"depth", e.depth},
                   {"lb", e.lb},
                   {"global_lb", e.global_lb},
                   {"incumbent", number_or_null(e.incumbent)},
                   {"columns_added", e.columns_added},
                   {"cuts_added", e.cuts_added}});
  }
  j["log"] = std::move(log);
  return j;
}

int solve_exit_code(const SolveResult& result) { return result.timed_out && !result.incumbent ? 3 : 0; }

void print_solve(std::ostream& out, const Instance& inst, const SolveResult& result, RestockPolicy policy) {
  out << std::fixed << std::setprecision(3);
  out << "instance " << inst.name() << "  f=" << inst.load_factor() << "  N=" << inst.n_customers()
      << "  Q=" << inst.capacity() << '\n';
  out << "status   " << status_of(result) << '\n';
  if (result.incumbent) {
    std::vector<RouteCosts> costs;
    for (const auto& r : result.incumbent->routes) costs.push_back(route_costs(r, inst, policy));
    out << "objective " << result.incumbent->objective << "  routes " << costs.size() << "  restocking "
        << std::setprecision(1) << restocking_share(costs) << "%\n"
        << std::setprecision(3);
    int k = 0;
    for (const auto& c : costs) {
      out << "  route " << ++k << ":";
      for (int v : c.route) out << ' ' << v;
      out << "  [apriori " << c.apriori << ", expected " << c.expected << "]\n";
    }
  }
  out << "lb " << result.lower_bound << "  gap ";
  if (std::isfinite(result.gap))
    out << std::setprecision(2) << 100.0 * result.gap << '%';
  else
    out << '-';
  out << std::setprecision(2) << "  nodes " << result.stats.nodes << "  columns " << result.stats.columns
      << "  cuts " << result.stats.cuts << "  time " << result.stats.seconds << "s\n";
}

std::vector<Route> read_routes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open route file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<Route> routes;
  if (first != std::string::npos && text[first] == '{') {
    const json j = json::parse(text);
    for (const auto& r : j.at("routes")) routes.push_back(r.at("customers").get<Route>());
    return routes;
  }
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream tok(line);
    Route r;
    std::string word;
    while (tok >> word) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(word, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != word.size()) throw std::runtime_error("line " + std::to_string(line_no) + ": bad customer '" + word + "'");
      r.push_back(v);
    }
    if (!r.empty()) routes.push_back(std::move(r));
  }
  return routes;
}

std::vector<EvaluatedRoute> evaluate_routes(const std::vector<Route>& routes, const Instance& inst,
                                            const EvaluateOptions& options) {
  std::vector<EvaluatedRoute> out;
  std::uint64_t seed = options.seed;
  for (const auto& r : routes) {
    for (int v : r)
      if (v < 1 || v > inst.n_customers()) throw std::runtime_error("customer index out of range: " + std::to_string(v));
    EvaluatedRoute e;
    e.route = r;
    e.load = route_load(r, inst);
    e.feasible = route_feasible(r, inst);
    e.apriori = apriori_cost(r, inst);
    const auto opt = eval_optimal(r, inst);
    e.optimal = opt.cost;
    e.dtd = eval_dtd(r, inst);
    e.preventive_states = opt.table.preventive_restock_states();
    if (options.simulate_reps > 0) {
      e.simulated = true;
      e.simulation = simulate(r, opt.table, inst, options.simulate_reps, seed++);
    }
    out.push_back(std::move(e));
  }
  return out;
}

json evaluate_report(const std::vector<EvaluatedRoute>& routes) {
  json arr = json::array();
  bool all_feasible = true;
  for (const auto& e : routes) {
    json r = {{"customers", e.route},
              {"load", e.load},
              {"feasible", e.feasible},
              {"apriori_cost", e.apriori},
              {"expected_cost", e.optimal},
              {"dtd_cost", e.dtd},
              {"preventive_restock_states", e.preventive_states}};
    if (e.simulated) r["simulation"] = {{"mean", e.simulation.mean}, {"std_err", e.simulation.std_err}};
    all_feasible = all_feasible && e.feasible;
    arr.push_back(std::move(r));
  }
  return {{"routes", std::move(arr)}, {"all_feasible", all_feasible}};
}

void print_evaluate(std::ostream& out, const std::vector<EvaluatedRoute>& routes) {
  out << std::fixed << std::setprecision(3);
  out << std::left << std::setw(6) << "route" << std::right << std::setw(10) << "load" << std::setw(12) << "apriori"
      << std::setw(12) << "optimal" << std::setw(12) << "dtd" << std::setw(11) << "restocks" << '\n';
  int k = 0;
  for (const auto& e : routes) {
    out << std::left << std::setw(6) << ++k << std::right << std::setw(10) << e.load << std::setw(12) << e.apriori
        << std::setw(12) << e.optimal << std::setw(12) << e.dtd << std::setw(11) << e.preventive_states;
    if (!e.feasible) out << "  INFEASIBLE (load exceeds fQ)";
    if (e.simulated) out << "  sim " << e.simulation.mean << " +- " << e.simulation.std_err;
    out << '\n';
  }
}

}  // namespace vrpsd::cli
