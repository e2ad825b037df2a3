#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "emr_edge/placement.hpp"

namespace emr_edge {

// A shared device first holds its host's complete EMR; each guest then
// borrows the smallest useful cache from what is left.
struct SharingPolicy {
  double host_requirement_gb = 106.66;
  double guest_requirement_gb = 3.0;

  bool valid() const {
    return host_requirement_gb > 0.0 && guest_requirement_gb > 0.0 &&
           host_requirement_gb >= guest_requirement_gb;
  }
  friend bool operator==(const SharingPolicy&, const SharingPolicy&) = default;
};

// Slack for capacities that are exact multiples of the guest size but do
// not divide exactly in binary.
inline constexpr double kShareSlack = 1e-9;

// Patients a device can serve when shared; 0 when it cannot hold the host's
// full EMR.
inline long patients_served(double capacity_gb, const SharingPolicy& policy) {
  if (!policy.valid()) throw std::invalid_argument("invalid sharing policy");
  if (capacity_gb < 0.0) throw std::invalid_argument("capacity must be >= 0");
  if (capacity_gb + kShareSlack < policy.host_requirement_gb) return 0;
  const double spare = std::max(0.0, capacity_gb - policy.host_requirement_gb);
  return 1 + static_cast<long>(std::floor(spare / policy.guest_requirement_gb + kShareSlack));
}

// With count_hosts, a device too small to share still serves its own host.
inline long scenario_capacity(const std::vector<EdgeDevice>& devices, const SharingPolicy& policy,
                              bool count_hosts = false) {
  long total = 0;
  for (const auto& d : devices) {
    const long n = patients_served(d.capacity_gb, policy);
    total += (n == 0 && count_hosts) ? 1 : n;
  }
  return total;
}

struct SweepPoint {
  double capacity_gb = 0.0;
  long patients = 0;
};

inline std::vector<SweepPoint> capacity_sweep(double min_gb, double max_gb, double step_gb,
                                              const SharingPolicy& policy) {
  if (!(step_gb > 0.0)) throw std::invalid_argument("sweep step must be > 0");
  if (!(min_gb >= 0.0) || !(max_gb >= min_gb)) throw std::invalid_argument("invalid sweep range");
  std::vector<SweepPoint> out;
  const auto n = static_cast<long>(std::floor((max_gb - min_gb) / step_gb + kShareSlack));
  out.reserve(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) {
    const double c = min_gb + static_cast<double>(i) * step_gb;
    out.push_back({c, patients_served(c, policy)});
  }
  return out;
}

}  // namespace emr_edge
