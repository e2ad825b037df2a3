#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "emr_edge/scenario.hpp"

namespace emr_edge {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace io_detail {

using json = nlohmann::ordered_json;

inline void reject_unknown(const json& obj, std::string_view where,
                           std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ParseError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get(const json& obj, const char* key, std::string_view where) {
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(where) + "." + key + ": " + e.what());
  }
}

template <typename T>
void maybe(const json& obj, const char* key, std::string_view where, T& out) {
  if (obj.contains(key)) out = get<T>(obj, key, where);
}

inline json subset_to_json(FileSet s) {
  json arr = json::array();
  for (auto c : s.classes()) arr.push_back(std::string(to_string(c)));
  return arr;
}

inline FileSet subset_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of file classes");
  FileSet out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ParseError(where + ": file classes must be strings");
    try {
      out = out.with(parse_file_class(e.get<std::string>()));
    } catch (const std::invalid_argument& ex) {
      throw ParseError(where + ": " + ex.what());
    }
  }
  return out;
}

template <typename F>
auto wrap(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& ex) {
    throw ParseError(where + ": " + ex.what());
  }
}

}  // namespace io_detail

inline nlohmann::ordered_json scenario_to_json(const EdgeScenario& s) {
  using io_detail::json;
  json j;
  j["records"] = {{"text_gb", s.records.text_gb},
                  {"image_gb", s.records.image_gb},
                  {"video_conventional_gb", s.records.video_conventional_gb},
                  {"video_dvs_gb", s.records.video_dvs_gb},
                  {"video_mode", std::string(to_string(s.video_mode))}};
  j["locations"] = json::array();
  for (const auto& l : s.locations)
    j["locations"].push_back(
        {{"name", l.name}, {"dwell_hours", l.dwell_hours}, {"probability", l.probability}});
  j["devices"] = json::array();
  for (const auto& d : s.devices)
    j["devices"].push_back({{"id", d.id}, {"capacity_gb", d.capacity_gb}, {"location", d.location}});
  j["rates"] = {{"edge_gb_per_s", s.rates.edge_gb_per_s},
                {"macro_gb_per_s", s.rates.macro_gb_per_s}};

  json tables;
  tables["staying"] = s.tables.staying;
  tables["value"] = json::object();
  for (auto c : kAllClasses) tables["value"][std::string(to_string(c))] = s.tables.lambda(c);
  if (s.tables.combo) {
    tables["combo"] = json::object();
    for (auto sub : FileSet::power_set()) tables["combo"][sub.label()] = (*s.tables.combo)[sub.mask()];
  }
  j["tables"] = std::move(tables);

  j["demand"] = json::object();
  for (const auto& l : s.locations) {
    const auto it = s.demand.find(l.name);
    if (it != s.demand.end()) j["demand"][l.name] = io_detail::subset_to_json(it->second);
  }
  for (const auto& [loc, sub] : s.demand)
    if (!j["demand"].contains(loc)) j["demand"][loc] = io_detail::subset_to_json(sub);

  j["policy"] = {{"host_requirement_gb", s.policy.host_requirement_gb},
                 {"guest_requirement_gb", s.policy.guest_requirement_gb}};

  const auto& sensor = s.dvs.event_sensor;
  json timeline = json::array();
  for (const auto& seg : s.dvs.timeline.segments())
    timeline.push_back({{"duration_s", seg.duration_s}, {"level", std::string(dvs::to_string(seg.level))}});
  j["dvs"] = {{"frame_bitrate_bps", s.dvs.frame_bitrate_bps},
              {"event_rates_bps",
               {{"none", sensor.event_rate(dvs::MotionLevel::None)},
                {"slow", sensor.event_rate(dvs::MotionLevel::Slow)},
                {"fast", sensor.event_rate(dvs::MotionLevel::Fast)}}},
              {"scale_ratio", s.dvs.scale_ratio},
              {"timeline", std::move(timeline)}};
  return j;
}

inline std::string save_scenario_string(const EdgeScenario& s) {
  return scenario_to_json(s).dump(2) + "\n";
}

// Parses a scenario document. Omitted sections come from paper_scenario();
// unknown keys are parse errors. Does not validate.
inline EdgeScenario scenario_from_json(const nlohmann::ordered_json& j) {
  using namespace io_detail;
  EdgeScenario s = paper_scenario();
  reject_unknown(j, "scenario",
                 {"records", "locations", "devices", "rates", "tables", "demand", "policy", "dvs"});

  if (j.contains("records")) {
    const auto& r = j["records"];
    reject_unknown(r, "records",
                   {"text_gb", "image_gb", "video_conventional_gb", "video_dvs_gb", "video_mode"});
    maybe(r, "text_gb", "records", s.records.text_gb);
    maybe(r, "image_gb", "records", s.records.image_gb);
    maybe(r, "video_conventional_gb", "records", s.records.video_conventional_gb);
    maybe(r, "video_dvs_gb", "records", s.records.video_dvs_gb);
    if (r.contains("video_mode")) {
      const auto m = get<std::string>(r, "video_mode", "records");
      s.video_mode = wrap("records.video_mode", [&] { return parse_video_mode(m); });
    }
  }

  if (j.contains("locations")) {
    if (!j["locations"].is_array()) throw ParseError("locations: expected an array");
    s.locations.clear();
    for (const auto& l : j["locations"]) {
      reject_unknown(l, "locations[]", {"name", "dwell_hours", "probability"});
      auto loc = LocationProfile::from_dwell(get<std::string>(l, "name", "locations[]"),
                                             get<int>(l, "dwell_hours", "locations[]"));
      maybe(l, "probability", "locations[]", loc.probability);
      s.locations.push_back(std::move(loc));
    }
  }

  if (j.contains("devices")) {
    if (!j["devices"].is_array()) throw ParseError("devices: expected an array");
    s.devices.clear();
    for (const auto& d : j["devices"]) {
      reject_unknown(d, "devices[]", {"id", "capacity_gb", "location"});
      s.devices.push_back({get<std::string>(d, "id", "devices[]"),
                           get<double>(d, "capacity_gb", "devices[]"),
                           get<std::string>(d, "location", "devices[]")});
    }
  }

  if (j.contains("rates")) {
    const auto& r = j["rates"];
    reject_unknown(r, "rates", {"edge_gb_per_s", "macro_gb_per_s"});
    maybe(r, "edge_gb_per_s", "rates", s.rates.edge_gb_per_s);
    maybe(r, "macro_gb_per_s", "rates", s.rates.macro_gb_per_s);
  }

  if (j.contains("tables")) {
    const auto& t = j["tables"];
    reject_unknown(t, "tables", {"staying", "value", "combo"});
    if (t.contains("staying")) {
      if (!t["staying"].is_array() || t["staying"].size() != 24)
        throw ParseError("tables.staying: expected 24 coefficients (hours 1..24)");
      s.tables.staying = get<std::array<double, 24>>(t, "staying", "tables");
    }
    if (t.contains("value")) {
      const auto& v = t["value"];
      reject_unknown(v, "tables.value", {"text", "image", "video"});
      for (auto c : kAllClasses) {
        const std::string key(to_string(c));
        if (v.contains(key)) s.tables.value[static_cast<std::size_t>(c)] = get<double>(v, key.c_str(), "tables.value");
      }
    }
    if (t.contains("combo")) {
      const auto& c = t["combo"];
      if (!c.is_object()) throw ParseError("tables.combo: expected an object");
      std::array<double, FileSet::kCount> combo{};
      std::set<std::uint8_t> seen;
      for (const auto& [label, value] : c.items()) {
        const auto sub = wrap("tables.combo", [&] { return parse_file_set(label); });
        if (!value.is_number()) throw ParseError("tables.combo." + label + ": expected a number");
        combo[sub.mask()] = value.get<double>();
        seen.insert(sub.mask());
      }
      if (seen.size() != FileSet::kCount)
        throw ParseError("tables.combo: all 8 subsets (including \"none\") must be given");
      s.tables.combo = combo;
    }
  }

  if (j.contains("demand")) {
    const auto& d = j["demand"];
    if (!d.is_object()) throw ParseError("demand: expected an object");
    s.demand.clear();
    for (const auto& [loc, sub] : d.items()) s.demand[loc] = subset_from_json(sub, "demand." + loc);
  }

  if (j.contains("policy")) {
    const auto& p = j["policy"];
    reject_unknown(p, "policy", {"host_requirement_gb", "guest_requirement_gb"});
    maybe(p, "host_requirement_gb", "policy", s.policy.host_requirement_gb);
    maybe(p, "guest_requirement_gb", "policy", s.policy.guest_requirement_gb);
  }

  if (j.contains("dvs")) {
    const auto& d = j["dvs"];
    reject_unknown(d, "dvs", {"frame_bitrate_bps", "event_rates_bps", "scale_ratio", "timeline"});
    maybe(d, "frame_bitrate_bps", "dvs", s.dvs.frame_bitrate_bps);
    maybe(d, "scale_ratio", "dvs", s.dvs.scale_ratio);
    if (d.contains("event_rates_bps")) {
      const auto& e = d["event_rates_bps"];
      reject_unknown(e, "dvs.event_rates_bps", {"none", "slow", "fast"});
      auto& rates = s.dvs.event_sensor.event_rates_bps;
      for (auto level : {dvs::MotionLevel::None, dvs::MotionLevel::Slow, dvs::MotionLevel::Fast}) {
        const std::string key(dvs::to_string(level));
        if (e.contains(key)) rates[static_cast<std::size_t>(level)] = get<double>(e, key.c_str(), "dvs.event_rates_bps");
      }
    }
    if (d.contains("timeline")) {
      if (!d["timeline"].is_array()) throw ParseError("dvs.timeline: expected an array");
      std::vector<dvs::Segment> segs;
      for (const auto& seg : d["timeline"]) {
        reject_unknown(seg, "dvs.timeline[]", {"duration_s", "level"});
        const auto level = get<std::string>(seg, "level", "dvs.timeline[]");
        segs.push_back({get<double>(seg, "duration_s", "dvs.timeline[]"),
                        wrap("dvs.timeline[].level", [&] { return dvs::parse_motion_level(level); })});
      }
      s.dvs.timeline = wrap("dvs.timeline", [&] { return dvs::ActivityTimeline(std::move(segs)); });
    }
  }
  return s;
}

inline EdgeScenario parse_scenario(std::string_view text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed scenario: ") + e.what());
  }
  return scenario_from_json(j);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

// Loads and validates a scenario; "paper" selects the built-in one.
inline EdgeScenario load_scenario(const std::string& path) {
  EdgeScenario s = path == "paper" ? paper_scenario() : parse_scenario(read_file(path));
  require_valid(s);
  return s;
}

inline void save_scenario(const EdgeScenario& s, const std::string& path) {
  write_file(path, save_scenario_string(s));
}

// One "duration_seconds,level" row per line; '#' comments, blank lines and
// a header row are skipped.
inline dvs::ActivityTimeline parse_timeline_csv(std::string_view text) {
  dvs::ActivityTimeline t;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("timeline line " + std::to_string(lineno) + ": expected 'duration_seconds,level'");
    const std::string dur = line.substr(0, comma);
    std::string level = line.substr(comma + 1);
    while (!level.empty() && level.front() == ' ') level.erase(level.begin());
    if (lineno == 1 && dur == "duration_seconds") continue;
    double seconds = 0.0;
    try {
      std::size_t used = 0;
      seconds = std::stod(dur, &used);
      if (used != dur.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ParseError("timeline line " + std::to_string(lineno) + ": bad duration '" + dur + "'");
    }
    const std::string where = "timeline line " + std::to_string(lineno);
    const auto lvl = io_detail::wrap(where, [&] { return dvs::parse_motion_level(level); });
    io_detail::wrap(where, [&] { t.append({seconds, lvl}); return 0; });
  }
  return t;
}

inline dvs::ActivityTimeline load_timeline_csv(const std::string& path) {
  return parse_timeline_csv(read_file(path));
}

}  // namespace emr_edge
