#include "vrpsd/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <regex>
#include <sstream>

namespace vrpsd {

namespace {

constexpr double kExactTriangleTol = 1e-9;
constexpr double kRoundedTriangleTol = 1.0 + 1e-9;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<int> fleet_from_name(const std::string& name) {
  static const std::regex re(R"(-k(\d+)\s*$)");
  std::smatch m;
  if (std::regex_search(name, m, re)) return std::stoi(m[1].str());
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// DiscreteDistribution

DiscreteDistribution::DiscreteDistribution(int min_support, std::vector<double> probs)
    : min_support_(min_support), probs_(std::move(probs)) {
  if (min_support_ < 0) throw InstanceError("demand support must be non-negative");
  if (probs_.empty()) throw InstanceError("demand distribution has empty support");
  for (double p : probs_) {
    if (!(p >= 0.0) || p > 1.0 + 1e-12) throw InstanceError("demand probability out of [0, 1]");
  }
  // Trim zero tails so min/max support are meaningful.
  auto first = std::find_if(probs_.begin(), probs_.end(), [](double p) { return p > 0.0; });
  if (first == probs_.end()) throw InstanceError("demand distribution has no positive mass");
  auto last = std::find_if(probs_.rbegin(), probs_.rend(), [](double p) { return p > 0.0; }).base();
  min_support_ += static_cast<int>(first - probs_.begin());
  probs_ = std::vector<double>(first, last);

  mass_ = 0.0;
  mean_ = 0.0;
  for (std::size_t t = 0; t < probs_.size(); ++t) {
    mass_ += probs_[t];
    mean_ += probs_[t] * static_cast<double>(min_support_ + static_cast<int>(t));
  }
  if (mass_ > 1.0 + 1e-9) throw InstanceError("demand probabilities sum above one");
}

DiscreteDistribution DiscreteDistribution::deterministic(int value) {
  return DiscreteDistribution(value, {1.0});
}

double DiscreteDistribution::prob(int k) const {
  if (k < min_support_ || k > max_support()) return 0.0;
  return probs_[static_cast<std::size_t>(k - min_support_)];
}

DiscreteDistribution truncate_poisson(double lambda, double eps) {
  if (!(lambda > 0.0)) throw InstanceError("Poisson rate must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw InstanceError("truncation threshold must lie in (0, 1)");

  auto pmf = [lambda](int k) {
    return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
  };
  // The pmf is unimodal with mode floor(lambda), so the kept set is an interval around it.
  const int mode = static_cast<int>(std::floor(lambda));
  if (pmf(mode) < eps) throw InstanceError("Poisson truncation leaves an empty support");
  int lo = mode;
  while (lo > 0 && pmf(lo - 1) >= eps) --lo;
  int hi = mode;
  while (pmf(hi + 1) >= eps) ++hi;

  std::vector<double> probs;
  probs.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int k = lo; k <= hi; ++k) probs.push_back(pmf(k));
  DiscreteDistribution dist(lo, std::move(probs));
  if (!(dist.mean() > 0.0)) throw InstanceError("Poisson truncation yields a zero-demand customer");
  return dist;
}

// ---------------------------------------------------------------------------
// Instance

Instance::Instance(std::string name, std::vector<Point> coords, std::vector<double> dist, int capacity,
                   double load_factor, std::vector<DiscreteDistribution> demands,
                   DistanceRounding rounding, std::optional<int> min_fleet)
    : name_(std::move(name)),
      n_customers_(static_cast<int>(demands.size())),
      coords_(std::move(coords)),
      dist_(std::move(dist)),
      capacity_(capacity),
      load_factor_(load_factor),
      demands_(std::move(demands)),
      rounding_(rounding) {
  if (n_customers_ < 1) throw InstanceError("instance needs at least one customer");
  if (capacity_ <= 0) throw InstanceError("capacity must be positive");
  if (!(load_factor_ > 0.0)) throw InstanceError("load factor must be positive");
  const auto n = static_cast<std::size_t>(n_nodes());
  if (dist_.size() != n * n) throw InstanceError("distance table has wrong dimension");
  if (!coords_.empty() && coords_.size() != n) throw InstanceError("coordinate count mismatch");

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = dist_[i * n + j];
      if (!std::isfinite(v) || v < 0.0) throw InstanceError("distances must be finite and non-negative");
    }
    if (dist_[i * n + i] != 0.0) throw InstanceError("d_ii must be zero");
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        worst = std::max(worst, dist_[i * n + k] - dist_[i * n + j] - dist_[j * n + k]);
  triangle_violation_ = worst;
  const double tol =
      rounding_ == DistanceRounding::nearest_integer ? kRoundedTriangleTol : kExactTriangleTol;
  if (worst > tol) {
    std::ostringstream os;
    os << "triangle inequality violated by " << worst << " in " << name_;
    throw InstanceError(os.str());
  }

  for (int i = 1; i <= n_customers_; ++i) {
    if (!(mean_demand(i) > 0.0)) {
      throw InstanceError("customer " + std::to_string(i) + " has zero expected demand");
    }
    if (mean_demand(i) > max_load() + 1e-9) {
      throw InstanceError("customer " + std::to_string(i) + " expected demand exceeds fQ");
    }
  }

  if (min_fleet) {
    min_fleet_ = *min_fleet;
  } else if (auto k = fleet_from_name(name_)) {
    min_fleet_ = *k;
  } else {
    min_fleet_ = static_cast<int>(std::ceil(total_mean_demand() / max_load() - 1e-9));
  }
  if (min_fleet_ < 1) min_fleet_ = 1;
}

double Instance::total_mean_demand() const {
  double s = 0.0;
  for (const auto& d : demands_) s += d.mean();
  return s;
}

Instance Instance::with_load_factor(double f) const {
  std::optional<int> fleet;
  if (auto k = fleet_from_name(name_)) fleet = *k;
  return Instance(name_, coords_, dist_, capacity_, f, demands_, rounding_, fleet);
}

Instance Instance::with_rounded_distances() const {
  std::vector<double> dist = dist_;
  for (double& v : dist) v = std::floor(v + 0.5);
  return Instance(name_, coords_, std::move(dist), capacity_, load_factor_, demands_, DistanceRounding::nearest_integer,
                  min_fleet_);
}

// ---------------------------------------------------------------------------
// Parsing

std::vector<DiscreteDistribution> parse_pmf_file(const std::filesystem::path& path, int n_customers) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open pmf file " + path.string());
  std::vector<std::optional<DiscreteDistribution>> out(static_cast<std::size_t>(n_customers));
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw InstanceError("pmf line without ':' in " + path.string());
    const int id = std::stoi(line.substr(0, colon));
    if (id < 1 || id > n_customers) throw InstanceError("pmf customer index out of range");
    std::istringstream is(line.substr(colon + 1));
    std::map<int, double> values;
    int v = 0;
    double p = 0.0;
    while (is >> v >> p) {
      if (v < 0) throw InstanceError("pmf demand values must be non-negative");
      values[v] += p;
    }
    if (values.empty()) throw InstanceError("pmf line without values");
    const int lo = values.begin()->first;
    const int hi = values.rbegin()->first;
    std::vector<double> probs(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (auto [val, pr] : values) probs[static_cast<std::size_t>(val - lo)] = pr;
    out[static_cast<std::size_t>(id - 1)] = DiscreteDistribution(lo, std::move(probs));
  }
  std::vector<DiscreteDistribution> result;
  result.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!out[i]) throw InstanceError("pmf file lacks customer " + std::to_string(i + 1));
    result.push_back(std::move(*out[i]));
  }
  return result;
}

Instance parse_instance(const std::filesystem::path& path, const InstanceConfig& config) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open instance file " + path.string());

  std::string name = path.stem().string();
  int dimension = -1;
  int capacity = -1;
  std::string weight_type = "EUC_2D";
  std::string weight_format;
  std::map<int, Point> coords;
  std::map<int, double> demand;
  std::vector<double> explicit_weights;
  std::vector<int> depots;
  bool saw_demand = false;
  bool saw_coords = false;

  enum class Section { none, coords, demand, depot, weights };
  Section section = Section::none;

  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line == "EOF") break;

    const auto colon = line.find(':');
    std::string key = trim(colon == std::string::npos ? line : line.substr(0, colon));
    const bool is_keyword = std::all_of(key.begin(), key.end(), [](char c) {
      return std::isupper(static_cast<unsigned char>(c)) || c == '_' || std::isdigit(static_cast<unsigned char>(c));
    }) && !key.empty() && !std::isdigit(static_cast<unsigned char>(key[0]));

    if (is_keyword) {
      const std::string value = colon == std::string::npos ? "" : trim(line.substr(colon + 1));
      section = Section::none;
      if (key == "NAME") {
        name = value;
      } else if (key == "DIMENSION") {
        dimension = std::stoi(value);
      } else if (key == "CAPACITY") {
        capacity = std::stoi(value);
      } else if (key == "EDGE_WEIGHT_TYPE") {
        weight_type = value;
      } else if (key == "EDGE_WEIGHT_FORMAT") {
        weight_format = value;
      } else if (key == "NODE_COORD_SECTION") {
        section = Section::coords;
        saw_coords = true;
      } else if (key == "DEMAND_SECTION") {
        section = Section::demand;
        saw_demand = true;
      } else if (key == "DEPOT_SECTION") {
        section = Section::depot;
      } else if (key == "EDGE_WEIGHT_SECTION") {
        section = Section::weights;
      }
      continue;
    }

    std::istringstream is(line);
    switch (section) {
      case Section::coords: {
        int id = 0;
        Point p;
        if (!(is >> id >> p.x >> p.y)) throw InstanceError("malformed coordinate line: " + line);
        coords[id] = p;
        break;
      }
      case Section::demand: {
        int id = 0;
        double q = 0.0;
        if (!(is >> id >> q)) throw InstanceError("malformed demand line: " + line);
        demand[id] = q;
        break;
      }
      case Section::depot: {
        int id = 0;
        while (is >> id) {
          if (id > 0) depots.push_back(id);
        }
        break;
      }
      case Section::weights: {
        double w = 0.0;
        while (is >> w) explicit_weights.push_back(w);
        break;
      }
      case Section::none:
        throw InstanceError("unexpected data outside of a section: " + line);
    }
  }

  if (dimension < 2) throw InstanceError("missing or invalid DIMENSION");
  if (capacity <= 0) throw InstanceError("missing or non-positive CAPACITY");
  if (!saw_demand || static_cast<int>(demand.size()) != dimension) {
    throw InstanceError("missing or incomplete DEMAND_SECTION");
  }
  const int depot = depots.empty() ? 1 : depots.front();

  // Node order: depot first, then the remaining file ids ascending.
  std::vector<int> order{depot};
  for (const auto& [id, q] : demand) {
    if (id != depot) order.push_back(id);
  }
  const auto n = static_cast<std::size_t>(dimension);
  std::vector<double> dist(n * n, 0.0);
  std::vector<Point> pts;

  if (weight_type == "EUC_2D") {
    if (!saw_coords || static_cast<int>(coords.size()) != dimension) {
      throw InstanceError("missing or incomplete NODE_COORD_SECTION");
    }
    for (int id : order) pts.push_back(coords.at(id));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double v = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
        if (config.rounding == DistanceRounding::nearest_integer) v = std::floor(v + 0.5);
        dist[i * n + j] = i == j ? 0.0 : v;
      }
    }
  } else if (weight_type == "EXPLICIT") {
    // Weights are given in file-id order (1..n); remap to node order afterwards.
    std::vector<double> raw(n * n, 0.0);
    std::size_t pos = 0;
    auto take = [&]() {
      if (pos >= explicit_weights.size()) throw InstanceError("EDGE_WEIGHT_SECTION too short");
      return explicit_weights[pos++];
    };
    if (weight_format == "FULL_MATRIX") {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) raw[i * n + j] = take();
    } else if (weight_format == "LOWER_ROW" || weight_format == "LOWER_DIAG_ROW") {
      const bool diag = weight_format == "LOWER_DIAG_ROW";
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < (diag ? i + 1 : i); ++j) raw[i * n + j] = raw[j * n + i] = take();
    } else if (weight_format == "UPPER_ROW" || weight_format == "UPPER_DIAG_ROW") {
      const bool diag = weight_format == "UPPER_DIAG_ROW";
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = diag ? i : i + 1; j < n; ++j) raw[i * n + j] = raw[j * n + i] = take();
    } else {
      throw InstanceError("unsupported EDGE_WEIGHT_FORMAT " + weight_format);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto a = static_cast<std::size_t>(order[i] - 1);
        const auto b = static_cast<std::size_t>(order[j] - 1);
        dist[i * n + j] = i == j ? 0.0 : raw[a * n + b];
      }
    }
    if (saw_coords && static_cast<int>(coords.size()) == dimension) {
      for (int id : order) pts.push_back(coords.at(id));
    }
  } else {
    throw InstanceError("unsupported EDGE_WEIGHT_TYPE " + weight_type);
  }

  const int n_customers = dimension - 1;
  std::vector<DiscreteDistribution> demands;
  if (config.pmf_path) {
    demands = parse_pmf_file(*config.pmf_path, n_customers);
  } else {
    demands.reserve(static_cast<std::size_t>(n_customers));
    for (std::size_t t = 1; t < order.size(); ++t) {
      const double rate = demand.at(order[t]);
      if (!(rate > 0.0)) {
        throw InstanceError("customer " + std::to_string(order[t]) + " has zero demand");
      }
      demands.push_back(truncate_poisson(rate, config.eps_p));
    }
  }

  return Instance(name, std::move(pts), std::move(dist), capacity, config.load_factor, std::move(demands),
                  config.rounding);
}

// ---------------------------------------------------------------------------
// Routes

double route_load(std::span<const int> route, const Instance& inst) {
  double load = 0.0;
  for (int c : route) load += inst.mean_demand(c);
  return load;
}

double apriori_cost(std::span<const int> route, const Instance& inst) {
  if (route.empty()) return 0.0;
  double cost = inst.d(0, route.front()) + inst.d(route.back(), 0);
  for (std::size_t t = 1; t < route.size(); ++t) cost += inst.d(route[t - 1], route[t]);
  return cost;
}

bool route_feasible(std::span<const int> route, const Instance& inst) {
  if (route.empty()) return false;
  std::vector<char> seen(static_cast<std::size_t>(inst.n_nodes()), 0);
  for (int c : route) {
    if (c < 1 || c > inst.n_customers() || seen[static_cast<std::size_t>(c)]) return false;
    seen[static_cast<std::size_t>(c)] = 1;
  }
  return route_load(route, inst) <= inst.max_load() + 1e-9;
}

}  // namespace vrpsd
