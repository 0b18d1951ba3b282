#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vrpsd {

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Probability mass function of a non-negative integer demand, stored over the
/// contiguous range [min_support, max_support]. Probabilities are kept as given
/// (truncated mass is not redistributed), so mass() may be slightly below one.
class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;
  DiscreteDistribution(int min_support, std::vector<double> probs);

  static DiscreteDistribution deterministic(int value);

  int min_support() const { return min_support_; }
  int max_support() const { return min_support_ + static_cast<int>(probs_.size()) - 1; }
  std::size_t size() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }

  double prob(int k) const;
  double mean() const { return mean_; }
  double mass() const { return mass_; }

 private:
  int min_support_ = 0;
  std::vector<double> probs_;
  double mean_ = 0.0;
  double mass_ = 0.0;
};

/// Poisson(lambda) restricted to the values whose mass is at least `eps`.
/// Throws InstanceError when nothing survives or when the surviving mean is zero.
DiscreteDistribution truncate_poisson(double lambda, double eps = 1e-5);

enum class DistanceRounding { exact_euclidean, nearest_integer };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct InstanceConfig {
  DistanceRounding rounding = DistanceRounding::exact_euclidean;
  double load_factor = 1.0;
  double eps_p = 1e-5;
  // Optional sidecar with explicit demand distributions ("i: v1 p1 v2 p2 ...").
  std::optional<std::filesystem::path> pmf_path;
};

/// Validated VRPSD instance. Node 0 is the depot, 1..N are customers.
class Instance {
 public:
  Instance(std::string name, std::vector<Point> coords, std::vector<double> dist, int capacity,
           double load_factor, std::vector<DiscreteDistribution> demands,
           DistanceRounding rounding = DistanceRounding::exact_euclidean,
           std::optional<int> min_fleet = std::nullopt);

  const std::string& name() const { return name_; }
  int n_customers() const { return n_customers_; }
  int n_nodes() const { return n_customers_ + 1; }
  int capacity() const { return capacity_; }
  double load_factor() const { return load_factor_; }
  double max_load() const { return load_factor_ * capacity_; }
  int min_fleet() const { return min_fleet_; }
  DistanceRounding rounding() const { return rounding_; }

  double d(int i, int j) const { return dist_[static_cast<std::size_t>(i) * n_nodes() + j]; }
  const std::vector<Point>& coords() const { return coords_; }

  // Customer indices are 1-based; demand(0) is invalid.
  const DiscreteDistribution& demand(int i) const { return demands_[static_cast<std::size_t>(i) - 1]; }
  double mean_demand(int i) const { return demand(i).mean(); }
  double total_mean_demand() const;

  // Largest violation of d_ik <= d_ij + d_jk found at load time (0 when it holds).
  double triangle_violation() const { return triangle_violation_; }

  // Copy with a different load factor; distributions and distances are shared values.
  Instance with_load_factor(double f) const;

  // Copy with every distance rounded to the nearest integer (CVRPLIB convention).
  Instance with_rounded_distances() const;

 private:
  std::string name_;
  int n_customers_ = 0;
  std::vector<Point> coords_;
  std::vector<double> dist_;
  int capacity_ = 0;
  double load_factor_ = 1.0;
  int min_fleet_ = 0;
  std::vector<DiscreteDistribution> demands_;
  DistanceRounding rounding_ = DistanceRounding::exact_euclidean;
  double triangle_violation_ = 0.0;
};

/// Reads a TSPLIB/CVRPLIB file (EUC_2D or EXPLICIT weights). File demands
/// become Poisson rates unless `config.pmf_path` supplies explicit pmfs.
Instance parse_instance(const std::filesystem::path& path, const InstanceConfig& config = {});

/// Parses the explicit-pmf sidecar; returns one distribution per customer 1..n.
std::vector<DiscreteDistribution> parse_pmf_file(const std::filesystem::path& path, int n_customers);

/// Customer sequence of an a priori route, depot excluded at both ends.
using Route = std::vector<int>;

double route_load(std::span<const int> route, const Instance& inst);
double apriori_cost(std::span<const int> route, const Instance& inst);
bool route_feasible(std::span<const int> route, const Instance& inst);

}  // namespace vrpsd
