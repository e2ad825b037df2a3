#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "emr_edge/placement.hpp"
#include "emr_edge/records.hpp"

namespace emr_edge {

// Link throughput in GB/s. The edge link (R1) serves cached files, the
// macro cell (R2) serves everything fetched from the registered hospital.
struct LinkRates {
  double edge_gb_per_s = 0.146484375;
  double macro_gb_per_s = 0.01953125;

  bool valid() const { return edge_gb_per_s > 0.0 && macro_gb_per_s > 0.0; }
  friend bool operator==(const LinkRates&, const LinkRates&) = default;
};

// What the nearest hospital needs at each location, keyed by location name.
using DemandProfile = std::map<std::string, FileSet>;

enum class DelayCase { Best, Worst };

inline constexpr std::string_view to_string(DelayCase c) {
  return c == DelayCase::Best ? "best" : "worst";
}

inline DelayCase parse_delay_case(std::string_view s) {
  if (s == "best") return DelayCase::Best;
  if (s == "worst") return DelayCase::Worst;
  throw std::invalid_argument("unknown delay case '" + std::string(s) + "'");
}

inline double transfer_minutes(double size_gb, double rate_gb_per_s) {
  if (!(rate_gb_per_s > 0.0)) throw std::invalid_argument("transfer rate must be > 0");
  if (size_gb < 0.0) throw std::invalid_argument("transfer size must be >= 0");
  return size_gb / rate_gb_per_s / 60.0;
}

// One location's contribution before probability weighting. The best case
// bills only the primary transfer; the worst case adds the residual EMR
// fetched from the registered hospital.
struct DelayTerm {
  std::string location;
  double probability = 0.0;
  double primary_gb = 0.0;
  double residual_gb = 0.0;
  double primary_minutes = 0.0;
  double residual_minutes = 0.0;

  double minutes(DelayCase c) const {
    return c == DelayCase::Best ? primary_minutes : primary_minutes + residual_minutes;
  }
};

struct DelayReport {
  std::string scheme;
  double best_minutes = 0.0;
  double worst_minutes = 0.0;
  std::vector<DelayTerm> terms;

  double minutes(DelayCase c) const { return c == DelayCase::Best ? best_minutes : worst_minutes; }
};

namespace detail {

inline void total_up(DelayReport& r) {
  r.best_minutes = 0.0;
  r.worst_minutes = 0.0;
  for (const auto& t : r.terms) {
    r.best_minutes += t.probability * t.minutes(DelayCase::Best);
    r.worst_minutes += t.probability * t.minutes(DelayCase::Worst);
  }
}

}  // namespace detail

// Expected delay of a cached plan: each location's edge device serves its
// cached files at R1; in the worst case the residual EMR also comes from the
// registered hospital at R2.
inline DelayReport expected_delay_report(const AllocationPlan& plan,
                                         const std::vector<LocationProfile>& locations,
                                         const LinkRates& rates, std::string scheme = "edge") {
  DelayReport r{std::move(scheme), 0.0, 0.0, {}};
  for (const auto& loc : locations) {
    const auto* e = plan.find_location(loc.name);
    if (e == nullptr) throw std::invalid_argument("plan has no device at location '" + loc.name + "'");
    DelayTerm t{loc.name, loc.probability, e->cached_gb, e->residual_gb, 0.0, 0.0};
    t.primary_minutes = transfer_minutes(t.primary_gb, rates.edge_gb_per_s);
    t.residual_minutes = transfer_minutes(t.residual_gb, rates.macro_gb_per_s);
    r.terms.push_back(std::move(t));
  }
  detail::total_up(r);
  return r;
}

inline double expected_delay(const AllocationPlan& plan,
                             const std::vector<LocationProfile>& locations, const LinkRates& rates,
                             DelayCase c) {
  return expected_delay_report(plan, locations, rates).minutes(c);
}

// No edge caching and no DVS: every file travels over the macro cell. The
// best case fetches only what each location needs; the worst case fetches
// the whole conventional EMR.
inline DelayReport baseline_delay_report(const DemandProfile& demand, const RecordSet& records,
                                         const std::vector<LocationProfile>& locations,
                                         const LinkRates& rates) {
  DelayReport r{"baseline", 0.0, 0.0, {}};
  const double full = full_emr_size(records, VideoMode::Conventional);
  for (const auto& loc : locations) {
    const auto it = demand.find(loc.name);
    if (it == demand.end())
      throw std::invalid_argument("demand profile has no entry for location '" + loc.name + "'");
    const double needed = subset_size(it->second, records, VideoMode::Conventional);
    DelayTerm t{loc.name, loc.probability, needed, full - needed, 0.0, 0.0};
    t.primary_minutes = transfer_minutes(t.primary_gb, rates.macro_gb_per_s);
    t.residual_minutes = transfer_minutes(t.residual_gb, rates.macro_gb_per_s);
    r.terms.push_back(std::move(t));
  }
  detail::total_up(r);
  return r;
}

inline double baseline_delay(const DemandProfile& demand, const RecordSet& records,
                             const std::vector<LocationProfile>& locations, const LinkRates& rates,
                             DelayCase c) {
  return baseline_delay_report(demand, records, locations, rates).minutes(c);
}

inline double improvement_pct(double reference_minutes, double new_minutes) {
  if (!(reference_minutes > 0.0)) throw std::invalid_argument("reference delay must be > 0");
  return (reference_minutes - new_minutes) / reference_minutes * 100.0;
}

// A reported delay expressed as minutes = edge_gb / R1 / 60 + macro_gb / R2 / 60,
// with the GB figures already probability-weighted.
struct DelayObservation {
  double edge_gb = 0.0;
  double macro_gb = 0.0;
  double minutes = 0.0;
};

inline DelayObservation observe_plan(const AllocationPlan& plan,
                                     const std::vector<LocationProfile>& locations, DelayCase c,
                                     double reported_minutes) {
  DelayObservation o{0.0, 0.0, reported_minutes};
  for (const auto& loc : locations) {
    const auto* e = plan.find_location(loc.name);
    if (e == nullptr) throw std::invalid_argument("plan has no device at location '" + loc.name + "'");
    o.edge_gb += loc.probability * e->cached_gb;
    if (c == DelayCase::Worst) o.macro_gb += loc.probability * e->residual_gb;
  }
  return o;
}

inline DelayObservation observe_baseline(const DemandProfile& demand, const RecordSet& records,
                                         const std::vector<LocationProfile>& locations,
                                         DelayCase c, double reported_minutes) {
  DelayObservation o{0.0, 0.0, reported_minutes};
  const double full = full_emr_size(records, VideoMode::Conventional);
  for (const auto& loc : locations) {
    if (c == DelayCase::Worst) {
      o.macro_gb += loc.probability * full;
      continue;
    }
    const auto it = demand.find(loc.name);
    if (it == demand.end())
      throw std::invalid_argument("demand profile has no entry for location '" + loc.name + "'");
    o.macro_gb += loc.probability * subset_size(it->second, records, VideoMode::Conventional);
  }
  return o;
}

struct CalibrationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Solves for (1/R1, 1/R2) in the least-squares sense and returns the rates.
inline LinkRates calibrate_rates(const std::vector<DelayObservation>& observed) {
  // Normal equations for minutes*60 = a * u + b * v, u = 1/R1, v = 1/R2.
  double aa = 0.0, ab = 0.0, bb = 0.0, ay = 0.0, by = 0.0;
  for (const auto& o : observed) {
    const double y = o.minutes * 60.0;
    aa += o.edge_gb * o.edge_gb;
    ab += o.edge_gb * o.macro_gb;
    bb += o.macro_gb * o.macro_gb;
    ay += o.edge_gb * y;
    by += o.macro_gb * y;
  }
  if (aa <= 0.0) throw CalibrationError("no observation constrains the edge rate");
  if (bb <= 0.0) throw CalibrationError("no observation constrains the macro rate");
  const double det = aa * bb - ab * ab;
  if (std::abs(det) <= 1e-12 * aa * bb)
    throw CalibrationError("observations do not separate the edge and macro rates");
  const double u = (ay * bb - by * ab) / det;
  const double v = (aa * by - ab * ay) / det;
  if (!(u > 0.0) || !(v > 0.0))
    throw CalibrationError("observations imply a non-positive transfer rate");
  return {1.0 / u, 1.0 / v};
}

}  // namespace emr_edge
