#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "emr_edge/records.hpp"

namespace emr_edge {

struct LocationProfile {
  std::string name;
  int dwell_hours = 1;
  // Weight of this location in the expected delay; dwell_hours / 24 unless
  // the scenario states it explicitly.
  double probability = 1.0 / 24.0;

  static LocationProfile from_dwell(std::string name, int dwell_hours) {
    return {std::move(name), dwell_hours, dwell_hours / 24.0};
  }

  friend bool operator==(const LocationProfile&, const LocationProfile&) = default;
};

struct EdgeDevice {
  std::string id;
  double capacity_gb = 0.0;
  std::string location;

  friend bool operator==(const EdgeDevice&, const EdgeDevice&) = default;
};

// Penalty for a dwell time of h hours: 24 for one hour down to 1 for a
// full day.
inline double staying_penalty(int hours) {
  if (hours < 1 || hours > 24)
    throw std::out_of_range("staying time must be within 1..24 hours, got " +
                            std::to_string(hours));
  return 25.0 - hours;
}

// Descending-size rank of the 7 non-empty subsets, doubled; the empty
// subset sits one step past the last rank (16).
inline double combo_penalty(FileSet subset, const RecordSet& records, VideoMode mode) {
  if (subset.empty()) return 16.0;
  std::array<FileSet, 7> ranked{};
  for (std::uint8_t m = 1; m < FileSet::kCount; ++m) ranked[m - 1] = FileSet::from_mask(m);
  auto lex_less = [](FileSet a, FileSet b) {
    auto ca = a.classes();
    auto cb = b.classes();
    return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
  };
  std::stable_sort(ranked.begin(), ranked.end(), [&](FileSet a, FileSet b) {
    const double sa = subset_size(a, records, mode);
    const double sb = subset_size(b, records, mode);
    if (sa != sb) return sa > sb;
    if (a.count() != b.count()) return a.count() < b.count();
    return lex_less(a, b);
  });
  const auto it = std::find(ranked.begin(), ranked.end(), subset);
  return 2.0 * static_cast<double>(std::distance(ranked.begin(), it) + 1);
}

struct PenaltyTables {
  // staying[h - 1] is the coefficient for h hours.
  std::array<double, 24> staying{};
  // Indexed by FileClass.
  std::array<double, 3> value{2.0, 1.0, 3.0};
  // Explicit per-subset coefficients (indexed by mask); the rank rule applies
  // when absent.
  std::optional<std::array<double, FileSet::kCount>> combo;

  static PenaltyTables defaults() {
    PenaltyTables t;
    for (int h = 1; h <= 24; ++h) t.staying[h - 1] = staying_penalty(h);
    return t;
  }

  double alpha(int hours) const {
    if (hours < 1 || hours > 24) throw std::out_of_range("staying time must be within 1..24 hours");
    return staying[static_cast<std::size_t>(hours - 1)];
  }
  double lambda(FileClass c) const { return value[static_cast<std::size_t>(c)]; }
  double beta(FileSet s, const RecordSet& records, VideoMode mode) const {
    if (combo) return (*combo)[s.mask()];
    return combo_penalty(s, records, mode);
  }

  friend bool operator==(const PenaltyTables&, const PenaltyTables&) = default;
};

inline double value_penalty(FileClass c, const PenaltyTables& tables = PenaltyTables::defaults()) {
  return tables.lambda(c);
}

struct PenaltyWeights {
  double staying = 1.0;
  double value = 1.0;
  double combo = 1.0;

  friend bool operator==(const PenaltyWeights&, const PenaltyWeights&) = default;
};

enum class PlacementKind { OmissionPenalty, MinComboFeasible, PaperFixture, CustomWeights };

struct PlacementMode {
  PlacementKind kind = PlacementKind::OmissionPenalty;
  PenaltyWeights weights{};

  static PlacementMode omission() { return {PlacementKind::OmissionPenalty, {1, 1, 1}}; }
  static PlacementMode min_combo() { return {PlacementKind::MinComboFeasible, {0, 0, 1}}; }
  static PlacementMode paper_fixture() { return {PlacementKind::PaperFixture, {}}; }
  static PlacementMode custom(PenaltyWeights w) { return {PlacementKind::CustomWeights, w}; }

  // Effective weights of the scored modes.
  PenaltyWeights effective_weights() const {
    switch (kind) {
      case PlacementKind::OmissionPenalty: return {1, 1, 1};
      case PlacementKind::MinComboFeasible: return {0, 0, 1};
      default: return weights;
    }
  }
};

inline std::string_view to_string(PlacementKind k) {
  switch (k) {
    case PlacementKind::OmissionPenalty: return "omission";
    case PlacementKind::MinComboFeasible: return "min-combo";
    case PlacementKind::PaperFixture: return "paper";
    case PlacementKind::CustomWeights: return "custom";
  }
  return "?";
}

// Every subset that fits on the device (size <= capacity), empty set first.
inline std::vector<FileSet> enumerate_feasible(const EdgeDevice& device, const RecordSet& records,
                                               VideoMode mode) {
  std::vector<FileSet> out;
  for (auto s : FileSet::power_set())
    if (subset_size(s, records, mode) <= device.capacity_gb) out.push_back(s);
  return out;
}

// Score of caching `subset` at a location with the given dwell time: the
// staying and value penalties are charged for every class left out.
inline double placement_score(FileSet subset, int dwell_hours, const RecordSet& records,
                              VideoMode video, const PenaltyTables& tables, PenaltyWeights w) {
  double omitted = 0.0;
  double omitted_value = 0.0;
  for (auto c : kAllClasses) {
    if (subset.contains(c)) continue;
    omitted += tables.alpha(dwell_hours);
    omitted_value += tables.lambda(c);
  }
  return w.staying * omitted + w.value * omitted_value +
         w.combo * tables.beta(subset, records, video);
}

struct PaperFixtureError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

struct FixtureRow {
  std::string_view id;
  double capacity_gb;
  FileSet subset;
};

inline const std::array<FixtureRow, 5>& paper_fixture_rows() {
  static const std::array<FixtureRow, 5> rows{{
      {"EA", 100.0, FileSet{FileClass::Text, FileClass::Image}},
      {"EB", 500.0, FileSet::all()},
      {"EC", 150.0, FileSet::all()},
      {"ED", 50.0, FileSet{FileClass::Text}},
      {"EE", 10.0, FileSet{FileClass::Text}},
  }};
  return rows;
}

}  // namespace detail

// Best subset for one device by exhaustive search over the power set.
// Ties on score go to the larger cached size, then the lower class mask.
inline FileSet optimize_device(const EdgeDevice& device, int dwell_hours, const RecordSet& records,
                               VideoMode video, const PenaltyTables& tables,
                               const PlacementMode& mode) {
  if (mode.kind == PlacementKind::PaperFixture) {
    if (records != RecordSet{} || video != VideoMode::Dvs)
      throw PaperFixtureError("paper fixture requires the default DVS record set");
    for (const auto& row : detail::paper_fixture_rows())
      if (row.id == device.id) {
        if (row.capacity_gb != device.capacity_gb)
          throw PaperFixtureError("paper fixture: device " + device.id +
                                  " capacity differs from the reference scenario");
        return row.subset;
      }
    throw PaperFixtureError("paper fixture has no row for device '" + device.id + "'");
  }
  if (dwell_hours < 1 || dwell_hours > 24)
    throw std::out_of_range("device " + device.id + ": dwell time must be within 1..24 hours");

  const auto w = mode.effective_weights();
  FileSet best;
  double best_score = std::numeric_limits<double>::infinity();
  double best_size = -1.0;
  for (auto s : enumerate_feasible(device, records, video)) {
    const double score = placement_score(s, dwell_hours, records, video, tables, w);
    const double size = subset_size(s, records, video);
    if (score < best_score || (score == best_score && size > best_size)) {
      best = s;
      best_score = score;
      best_size = size;
    }
  }
  return best;
}

struct AllocationEntry {
  std::string device_id;
  std::string location;
  double capacity_gb = 0.0;
  FileSet cached;
  double cached_gb = 0.0;
  double residual_gb = 0.0;

  friend bool operator==(const AllocationEntry&, const AllocationEntry&) = default;
};

struct AllocationPlan {
  PlacementKind mode = PlacementKind::OmissionPenalty;
  VideoMode video = VideoMode::Dvs;
  std::vector<AllocationEntry> entries;

  const AllocationEntry* find_device(std::string_view id) const {
    for (const auto& e : entries)
      if (e.device_id == id) return &e;
    return nullptr;
  }
  const AllocationEntry* find_location(std::string_view loc) const {
    for (const auto& e : entries)
      if (e.location == loc) return &e;
    return nullptr;
  }
};

inline AllocationEntry make_entry(const EdgeDevice& device, FileSet subset,
                                  const RecordSet& records, VideoMode video) {
  const double cached = subset_size(subset, records, video);
  return {device.id, device.location, device.capacity_gb, subset, cached,
          full_emr_size(records, video) - cached};
}

// Builds a plan directly from per-device subsets (used for demand-style and
// hand-written plans). Throws if a subset does not fit.
inline AllocationPlan plan_from_subsets(const std::vector<EdgeDevice>& devices,
                                        const std::map<std::string, FileSet>& subsets,
                                        const RecordSet& records, VideoMode video,
                                        PlacementKind kind) {
  AllocationPlan plan{kind, video, {}};
  for (const auto& d : devices) {
    const auto it = subsets.find(d.id);
    const FileSet s = it == subsets.end() ? FileSet{} : it->second;
    auto e = make_entry(d, s, records, video);
    if (e.cached_gb > d.capacity_gb)
      throw std::invalid_argument("subset " + s.label() + " does not fit device " + d.id);
    plan.entries.push_back(std::move(e));
  }
  return plan;
}

// Device ids whose cached subsets differ between two plans.
inline std::vector<std::string> plan_divergence(const AllocationPlan& a, const AllocationPlan& b) {
  std::vector<std::string> out;
  for (const auto& e : a.entries) {
    const auto* other = b.find_device(e.device_id);
    if (other == nullptr || other->cached != e.cached) out.push_back(e.device_id);
  }
  return out;
}

}  // namespace emr_edge
