#pragma once

#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "emr_edge/dvs.hpp"
#include "emr_edge/scenario.hpp"
#include "emr_edge/scenario_io.hpp"
#include "emr_edge/sharing.hpp"

namespace emr_edge {

inline std::string fixed(double x, int decimals) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(decimals) << x;
  return ss.str();
}

inline std::string minutes_str(double m) { return fixed(m, 3); }
inline std::string percent_str(double p) { return fixed(p, 2); }

// FNV-1a over the canonical scenario document.
inline std::string scenario_digest(const EdgeScenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : save_scenario_string(s)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Improvement {
  std::string reference;
  std::string scheme;
  DelayCase which = DelayCase::Best;
  double percent = 0.0;
};

struct Comparison {
  PlacementKind mode = PlacementKind::PaperFixture;
  AllocationPlan plan;
  DelayReport edge;
  DelayReport femtocache;
  DelayReport baseline;
  std::vector<Improvement> improvements;

  std::vector<const DelayReport*> reports() const { return {&edge, &femtocache, &baseline}; }
};

inline Comparison compare_schemes(const EdgeScenario& s, const PlacementMode& mode) {
  Comparison c;
  c.mode = mode.kind;
  c.plan = plan_scenario(s, mode);
  c.edge = expected_delay_report(c.plan, s.locations, s.rates, "edge+dvs");
  c.femtocache = femtocache_delay(s);
  c.baseline = baseline_delay(s);
  const std::pair<const DelayReport*, const DelayReport*> pairs[] = {
      {&c.femtocache, &c.edge}, {&c.baseline, &c.edge}, {&c.baseline, &c.femtocache}};
  for (const auto& [ref, cur] : pairs)
    for (auto which : {DelayCase::Best, DelayCase::Worst})
      c.improvements.push_back({ref->scheme, cur->scheme, which,
                                improvement_pct(ref->minutes(which), cur->minutes(which))});
  return c;
}

// --- tables -----------------------------------------------------------------

inline std::string allocation_table(const AllocationPlan& plan) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "device" << std::setw(10) << "location" << std::right
      << std::setw(12) << "capacity_gb" << "  " << std::left << std::setw(20) << "cached"
      << std::right << std::setw(11) << "cached_gb" << std::setw(13) << "residual_gb" << "\n";
  for (const auto& e : plan.entries)
    out << std::left << std::setw(8) << e.device_id << std::setw(10) << e.location << std::right
        << std::setw(12) << fixed(e.capacity_gb, 2) << "  " << std::left << std::setw(20)
        << e.cached.label() << std::right << std::setw(11) << fixed(e.cached_gb, 2)
        << std::setw(13) << fixed(e.residual_gb, 2) << "\n";
  return out.str();
}

inline std::string delay_table(const std::vector<const DelayReport*>& reports) {
  std::ostringstream out;
  out << std::left << std::setw(12) << "scheme" << std::right << std::setw(12) << "best_min"
      << std::setw(12) << "worst_min" << "\n";
  for (const auto* r : reports)
    out << std::left << std::setw(12) << r->scheme << std::right << std::setw(12)
        << minutes_str(r->best_minutes) << std::setw(12) << minutes_str(r->worst_minutes) << "\n";
  return out.str();
}

inline std::string terms_table(const DelayReport& r) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "location" << std::right << std::setw(10) << "prob"
      << std::setw(12) << "primary_gb" << std::setw(13) << "residual_gb" << std::setw(12)
      << "best_min" << std::setw(12) << "worst_min" << "\n";
  for (const auto& t : r.terms)
    out << std::left << std::setw(10) << t.location << std::right << std::setw(10)
        << fixed(t.probability, 4) << std::setw(12) << fixed(t.primary_gb, 2) << std::setw(13)
        << fixed(t.residual_gb, 2) << std::setw(12) << minutes_str(t.minutes(DelayCase::Best))
        << std::setw(12) << minutes_str(t.minutes(DelayCase::Worst)) << "\n";
  return out.str();
}

inline std::string improvement_table(const std::vector<Improvement>& imps) {
  std::ostringstream out;
  out << std::left << std::setw(12) << "reference" << std::setw(12) << "scheme" << std::setw(7)
      << "case" << std::right << std::setw(10) << "percent" << "\n";
  for (const auto& i : imps)
    out << std::left << std::setw(12) << i.reference << std::setw(12) << i.scheme << std::setw(7)
        << to_string(i.which) << std::right << std::setw(10) << percent_str(i.percent) << "\n";
  return out.str();
}

// --- CSV --------------------------------------------------------------------

inline std::string allocation_csv(const AllocationPlan& plan) {
  std::string out = "device,location,capacity_gb,cached,cached_gb,residual_gb\n";
  for (const auto& e : plan.entries)
    out += e.device_id + "," + e.location + "," + fixed(e.capacity_gb, 2) + "," +
           e.cached.label() + "," + fixed(e.cached_gb, 2) + "," + fixed(e.residual_gb, 2) + "\n";
  return out;
}

// Bar-chart series: one row per scheme and case.
inline std::string delay_bars_csv(const std::vector<const DelayReport*>& reports) {
  std::string out = "scheme,case,minutes\n";
  for (const auto* r : reports)
    for (auto which : {DelayCase::Best, DelayCase::Worst})
      out += r->scheme + "," + std::string(to_string(which)) + "," + minutes_str(r->minutes(which)) + "\n";
  return out;
}

inline std::string terms_csv(const DelayReport& r) {
  std::string out = "scheme,location,probability,primary_gb,residual_gb,best_minutes,worst_minutes\n";
  for (const auto& t : r.terms)
    out += r.scheme + "," + t.location + "," + fixed(t.probability, 6) + "," + fixed(t.primary_gb, 4) +
           "," + fixed(t.residual_gb, 4) + "," + minutes_str(t.minutes(DelayCase::Best)) + "," +
           minutes_str(t.minutes(DelayCase::Worst)) + "\n";
  return out;
}

inline std::string improvement_csv(const std::vector<Improvement>& imps) {
  std::string out = "reference,scheme,case,percent\n";
  for (const auto& i : imps)
    out += i.reference + "," + i.scheme + "," + std::string(to_string(i.which)) + "," +
           percent_str(i.percent) + "\n";
  return out;
}

inline std::string sweep_csv(const std::vector<SweepPoint>& pts) {
  std::string out = "capacity_gb,patients\n";
  for (const auto& p : pts) out += fixed(p.capacity_gb, 2) + "," + std::to_string(p.patients) + "\n";
  return out;
}

// --- JSON -------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const AllocationPlan& plan) {
  nlohmann::ordered_json j;
  j["mode"] = std::string(to_string(plan.mode));
  j["video_mode"] = std::string(to_string(plan.video));
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : plan.entries)
    j["entries"].push_back({{"device", e.device_id},
                            {"location", e.location},
                            {"capacity_gb", e.capacity_gb},
                            {"cached", io_detail::subset_to_json(e.cached)},
                            {"cached_gb", e.cached_gb},
                            {"residual_gb", e.residual_gb}});
  return j;
}

inline nlohmann::ordered_json to_json(const DelayReport& r) {
  nlohmann::ordered_json j;
  j["scheme"] = r.scheme;
  j["best_minutes"] = r.best_minutes;
  j["worst_minutes"] = r.worst_minutes;
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : r.terms)
    j["terms"].push_back({{"location", t.location},
                          {"probability", t.probability},
                          {"primary_gb", t.primary_gb},
                          {"residual_gb", t.residual_gb},
                          {"primary_minutes", t.primary_minutes},
                          {"residual_minutes", t.residual_minutes}});
  return j;
}

inline nlohmann::ordered_json to_json(const std::vector<Improvement>& imps) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& i : imps)
    j.push_back({{"reference", i.reference},
                 {"scheme", i.scheme},
                 {"case", std::string(to_string(i.which))},
                 {"percent", i.percent}});
  return j;
}

inline nlohmann::ordered_json to_json(const Comparison& c) {
  nlohmann::ordered_json j;
  j["placement_mode"] = std::string(to_string(c.mode));
  j["plan"] = to_json(c.plan);
  j["schemes"] = {to_json(c.edge), to_json(c.femtocache), to_json(c.baseline)};
  j["improvements"] = to_json(c.improvements);
  return j;
}

inline nlohmann::ordered_json to_json(const std::vector<SweepPoint>& pts) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& p : pts) j.push_back({{"capacity_gb", p.capacity_gb}, {"patients", p.patients}});
  return j;
}

// --- DVS sizing ---------------------------------------------------------------

struct DvsSizing {
  double duration_s = 0.0;
  double frame_bytes = 0.0;
  double event_bytes = 0.0;
  double scaled_video_gb = 0.0;

  double ratio() const { return frame_bytes > 0.0 ? event_bytes / frame_bytes : 0.0; }
};

inline DvsSizing size_dvs(const DvsSettings& settings, const dvs::ActivityTimeline& timeline,
                          const RecordSet& records) {
  DvsSizing d;
  d.duration_s = timeline.total_duration_s();
  d.frame_bytes = dvs::frame_volume(settings.frame_bitrate_bps, d.duration_s);
  d.event_bytes = dvs::event_volume(timeline, settings.event_sensor);
  d.scaled_video_gb = dvs::dvs_scale(records.video_conventional_gb, settings.scale_ratio);
  return d;
}

inline nlohmann::ordered_json to_json(const DvsSizing& d) {
  return {{"duration_s", d.duration_s},
          {"frame_bytes", d.frame_bytes},
          {"event_bytes", d.event_bytes},
          {"event_to_frame_ratio", d.ratio()},
          {"scaled_video_gb", d.scaled_video_gb}};
}

inline std::string dvs_csv(const DvsSizing& d) {
  std::ostringstream out;
  out << "duration_s,frame_bytes,event_bytes,event_to_frame_ratio,scaled_video_gb\n"
      << fixed(d.duration_s, 1) << "," << fixed(d.frame_bytes, 0) << "," << fixed(d.event_bytes, 0)
      << "," << fixed(d.ratio(), 6) << "," << fixed(d.scaled_video_gb, 3) << "\n";
  return out.str();
}

}  // namespace emr_edge
