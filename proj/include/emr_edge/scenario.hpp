#pragma once

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "emr_edge/delay.hpp"
#include "emr_edge/dvs.hpp"
#include "emr_edge/placement.hpp"
#include "emr_edge/records.hpp"
#include "emr_edge/sharing.hpp"

namespace emr_edge {

struct DvsSettings {
  double frame_bitrate_bps = dvs::kCifBitrateBps;
  dvs::SensorModel event_sensor = dvs::default_event_sensor();
  double scale_ratio = dvs::kDefaultScaleRatio;
  dvs::ActivityTimeline timeline = dvs::sleep_night_timeline();

  friend bool operator==(const DvsSettings&, const DvsSettings&) = default;
};

// Everything the placement, delay and sharing computations consume. The
// registered hospital is implicit: it holds the full EMR behind the macro
// link.
struct EdgeScenario {
  RecordSet records;
  VideoMode video_mode = VideoMode::Dvs;
  std::vector<LocationProfile> locations;
  std::vector<EdgeDevice> devices;
  LinkRates rates;
  PenaltyTables tables = PenaltyTables::defaults();
  DemandProfile demand;
  SharingPolicy policy;
  DvsSettings dvs;

  const LocationProfile& location(const std::string& name) const {
    for (const auto& l : locations)
      if (l.name == name) return l;
    throw std::invalid_argument("unknown location '" + name + "'");
  }

  friend bool operator==(const EdgeScenario&, const EdgeScenario&) = default;
};

// Home, work, family, friend and elsewhere, with devices EA..EE.
inline EdgeScenario paper_scenario() {
  EdgeScenario s;
  s.locations = {
      LocationProfile::from_dwell("home", 10),  LocationProfile::from_dwell("work", 8),
      LocationProfile::from_dwell("family", 3), LocationProfile::from_dwell("friend", 2),
      LocationProfile::from_dwell("other", 1),
  };
  s.devices = {
      {"EA", 100.0, "home"}, {"EB", 500.0, "work"},  {"EC", 150.0, "family"},
      {"ED", 50.0, "friend"}, {"EE", 10.0, "other"},
  };
  const FileSet text_image{FileClass::Text, FileClass::Image};
  s.demand = {
      {"home", text_image},
      {"work", FileSet::all()},
      {"family", FileSet::all()},
      {"friend", FileSet{FileClass::Text}},
      {"other", FileSet{FileClass::Text}},
  };
  return s;
}

// True when records, locations and devices match the built-in scenario
// (the only case in which the reference allocation applies).
inline bool is_paper_scenario(const EdgeScenario& s) {
  const auto ref = paper_scenario();
  if (s.records != ref.records || s.video_mode != ref.video_mode) return false;
  if (s.devices != ref.devices || s.locations.size() != ref.locations.size()) return false;
  for (std::size_t i = 0; i < ref.locations.size(); ++i)
    if (s.locations[i].name != ref.locations[i].name ||
        s.locations[i].dwell_hours != ref.locations[i].dwell_hours)
      return false;
  return true;
}

struct Violation {
  std::string field;
  std::string rule;

  friend bool operator==(const Violation&, const Violation&) = default;
};

inline std::string describe(const std::vector<Violation>& vs) {
  std::string out;
  for (const auto& v : vs) {
    if (!out.empty()) out += "; ";
    out += v.field + ": " + v.rule;
  }
  return out;
}

inline std::vector<Violation> validate(const EdgeScenario& s) {
  std::vector<Violation> out;
  auto add = [&](std::string f, std::string r) { out.push_back({std::move(f), std::move(r)}); };
  auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };

  const auto& r = s.records;
  if (!finite_nonneg(r.text_gb)) add("records.text_gb", "must be >= 0");
  if (!finite_nonneg(r.image_gb)) add("records.image_gb", "must be >= 0");
  if (!finite_nonneg(r.video_conventional_gb)) add("records.video_conventional_gb", "must be >= 0");
  if (!finite_nonneg(r.video_dvs_gb)) add("records.video_dvs_gb", "must be >= 0");
  if (r.video_dvs_gb > r.video_conventional_gb)
    add("records.video_dvs_gb", "must not exceed video_conventional_gb");

  std::set<std::string> loc_names;
  int dwell_sum = 0;
  double prob_sum = 0.0;
  for (const auto& l : s.locations) {
    const std::string f = "locations." + l.name;
    if (l.name.empty()) add("locations", "location name must not be empty");
    if (!loc_names.insert(l.name).second) add(f, "duplicate location name");
    if (l.dwell_hours < 1 || l.dwell_hours > 24) add(f + ".dwell_hours", "must be within 1..24");
    if (!(l.probability >= 0.0 && l.probability <= 1.0)) add(f + ".probability", "must be within [0, 1]");
    dwell_sum += l.dwell_hours;
    prob_sum += l.probability;
  }
  if (s.locations.empty()) add("locations", "at least one location is required");
  if (dwell_sum != 24) add("locations", "dwell hours must sum to 24 (got " + std::to_string(dwell_sum) + ")");
  if (std::abs(prob_sum - 1.0) > 1e-9) add("locations", "probabilities must sum to 1");

  std::set<std::string> ids;
  std::map<std::string, int> per_location;
  for (const auto& d : s.devices) {
    const std::string f = "devices." + d.id;
    if (d.id.empty()) add("devices", "device id must not be empty");
    if (!ids.insert(d.id).second) add(f, "duplicate device id");
    if (!finite_nonneg(d.capacity_gb)) add(f + ".capacity_gb", "must be >= 0");
    if (!loc_names.count(d.location)) add(f + ".location", "unknown location '" + d.location + "'");
    ++per_location[d.location];
  }
  for (const auto& name : loc_names) {
    const int n = per_location.count(name) ? per_location[name] : 0;
    if (n != 1) add("locations." + name, "must host exactly one device (has " + std::to_string(n) + ")");
  }

  if (!(s.rates.edge_gb_per_s > 0.0)) add("rates.edge_gb_per_s", "must be > 0");
  if (!(s.rates.macro_gb_per_s > 0.0)) add("rates.macro_gb_per_s", "must be > 0");

  for (std::size_t h = 0; h < s.tables.staying.size(); ++h)
    if (!finite_nonneg(s.tables.staying[h])) add("tables.staying", "coefficients must be >= 0");
  for (auto c : kAllClasses)
    if (!finite_nonneg(s.tables.lambda(c)))
      add("tables.value." + std::string(to_string(c)), "must be >= 0");
  if (s.tables.combo)
    for (double b : *s.tables.combo)
      if (!finite_nonneg(b)) add("tables.combo", "coefficients must be >= 0");

  for (const auto& [loc, subset] : s.demand)
    if (!loc_names.count(loc)) add("demand." + loc, "unknown location");
  for (const auto& name : loc_names)
    if (!s.demand.count(name)) add("demand." + name, "missing demand for location");

  if (!(s.policy.host_requirement_gb > 0.0)) add("policy.host_requirement_gb", "must be > 0");
  if (!(s.policy.guest_requirement_gb > 0.0)) add("policy.guest_requirement_gb", "must be > 0");
  if (s.policy.host_requirement_gb < s.policy.guest_requirement_gb)
    add("policy", "host requirement must be >= guest requirement");

  const auto& sensor = s.dvs.event_sensor;
  if (!finite_nonneg(s.dvs.frame_bitrate_bps)) add("dvs.frame_bitrate_bps", "must be >= 0");
  if (sensor.event_rate(dvs::MotionLevel::None) != 0.0) add("dvs.event_rates.none", "must be 0");
  if (!finite_nonneg(sensor.event_rate(dvs::MotionLevel::Slow)) ||
      sensor.event_rate(dvs::MotionLevel::Slow) > sensor.event_rate(dvs::MotionLevel::Fast))
    add("dvs.event_rates", "must satisfy 0 <= slow <= fast");
  if (!(s.dvs.scale_ratio >= 0.0 && s.dvs.scale_ratio <= 1.0)) add("dvs.scale_ratio", "must be within [0, 1]");
  return out;
}

struct ValidationError : std::invalid_argument {
  explicit ValidationError(std::vector<Violation> vs)
      : std::invalid_argument("invalid scenario: " + describe(vs)), violations(std::move(vs)) {}
  std::vector<Violation> violations;
};

inline void require_valid(const EdgeScenario& s) {
  auto vs = validate(s);
  if (!vs.empty()) throw ValidationError(std::move(vs));
}

inline AllocationPlan plan_scenario(const EdgeScenario& s, const PlacementMode& mode,
                                    VideoMode video) {
  if (mode.kind == PlacementKind::PaperFixture && (!is_paper_scenario(s) || video != VideoMode::Dvs))
    throw PaperFixtureError("paper fixture mode is only valid for the built-in paper scenario");
  AllocationPlan plan{mode.kind, video, {}};
  for (const auto& d : s.devices) {
    const auto subset = optimize_device(d, s.location(d.location).dwell_hours, s.records, video,
                                        s.tables, mode);
    plan.entries.push_back(make_entry(d, subset, s.records, video));
  }
  return plan;
}

inline AllocationPlan plan_scenario(const EdgeScenario& s, const PlacementMode& mode) {
  return plan_scenario(s, mode, s.video_mode);
}

// PaperFixture for the built-in scenario, OmissionPenalty otherwise.
inline PlacementMode auto_mode(const EdgeScenario& s) {
  return is_paper_scenario(s) ? PlacementMode::paper_fixture() : PlacementMode::omission();
}

inline DelayReport edge_delay(const EdgeScenario& s, const PlacementMode& mode) {
  return expected_delay_report(plan_scenario(s, mode), s.locations, s.rates, "edge+dvs");
}

// Femtocaching without DVS: conventional video sizes, smallest feasible
// combination penalty per device.
inline AllocationPlan femtocache_plan(const EdgeScenario& s) {
  return plan_scenario(s, PlacementMode::min_combo(), VideoMode::Conventional);
}

inline DelayReport femtocache_delay(const EdgeScenario& s) {
  return expected_delay_report(femtocache_plan(s), s.locations, s.rates, "femtocache");
}

inline DelayReport baseline_delay(const EdgeScenario& s) {
  return baseline_delay_report(s.demand, s.records, s.locations, s.rates);
}

}  // namespace emr_edge
