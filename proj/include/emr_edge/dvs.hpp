#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace emr_edge::dvs {

enum class MotionLevel : std::uint8_t { None = 0, Slow = 1, Fast = 2 };

inline constexpr std::string_view to_string(MotionLevel l) {
  switch (l) {
    case MotionLevel::None: return "none";
    case MotionLevel::Slow: return "slow";
    case MotionLevel::Fast: return "fast";
  }
  return "?";
}

inline MotionLevel parse_motion_level(std::string_view s) {
  if (s == "none") return MotionLevel::None;
  if (s == "slow") return MotionLevel::Slow;
  if (s == "fast") return MotionLevel::Fast;
  throw std::invalid_argument("unknown motion level '" + std::string(s) + "'");
}

struct Segment {
  double duration_s = 0.0;
  MotionLevel level = MotionLevel::None;

  friend bool operator==(const Segment&, const Segment&) = default;
};

// Piecewise-constant motion activity.
class ActivityTimeline {
 public:
  ActivityTimeline() = default;
  explicit ActivityTimeline(std::vector<Segment> segments) : segments_(std::move(segments)) {
    for (const auto& s : segments_)
      if (!(s.duration_s >= 0.0)) throw std::invalid_argument("segment duration must be >= 0");
  }

  void append(Segment s) {
    if (!(s.duration_s >= 0.0)) throw std::invalid_argument("segment duration must be >= 0");
    segments_.push_back(s);
  }

  const std::vector<Segment>& segments() const { return segments_; }

  double total_duration_s() const {
    double t = 0.0;
    for (const auto& s : segments_) t += s.duration_s;
    return t;
  }

  ActivityTimeline concat(const ActivityTimeline& other) const {
    auto segs = segments_;
    segs.insert(segs.end(), other.segments_.begin(), other.segments_.end());
    return ActivityTimeline(std::move(segs));
  }

  friend bool operator==(const ActivityTimeline&, const ActivityTimeline&) = default;

 private:
  std::vector<Segment> segments_;
};

enum class SensorKind : std::uint8_t { FrameBased, EventBased };

struct SensorModel {
  SensorKind kind = SensorKind::EventBased;
  double frame_bitrate_bps = 0.0;
  // Indexed by MotionLevel.
  std::array<double, 3> event_rates_bps{0.0, 0.0, 0.0};

  static SensorModel frame_based(double bitrate_bps) {
    SensorModel m;
    m.kind = SensorKind::FrameBased;
    m.frame_bitrate_bps = bitrate_bps;
    return m;
  }

  static SensorModel event_based(double slow_bps, double fast_bps) {
    if (slow_bps < 0.0 || slow_bps > fast_bps)
      throw std::invalid_argument("event rates must satisfy 0 <= slow <= fast");
    SensorModel m;
    m.kind = SensorKind::EventBased;
    m.event_rates_bps = {0.0, slow_bps, fast_bps};
    return m;
  }

  double event_rate(MotionLevel l) const { return event_rates_bps[static_cast<std::size_t>(l)]; }

  friend bool operator==(const SensorModel&, const SensorModel&) = default;
};

// CIF frame camera and the 128x128 event camera figures.
inline constexpr double kCifBitrateBps = 512e3;
inline constexpr double kDvsFastBitrateBps = 256e3;
inline constexpr double kDvsSlowBitrateBps = 64e3;
inline constexpr double kDefaultScaleRatio = 1.0 / 12.0;

inline SensorModel default_event_sensor() {
  return SensorModel::event_based(kDvsSlowBitrateBps, kDvsFastBitrateBps);
}

// Bytes recorded by a constant-bitrate camera.
inline double frame_volume(double bitrate_bps, double duration_s) {
  if (bitrate_bps < 0.0 || duration_s < 0.0)
    throw std::invalid_argument("bitrate and duration must be >= 0");
  return bitrate_bps * duration_s / 8.0;
}

// Bytes recorded by an event camera: nothing while the scene is still.
inline double event_volume(const ActivityTimeline& timeline, const SensorModel& model) {
  if (model.kind != SensorKind::EventBased)
    throw std::invalid_argument("event_volume requires an event-based sensor model");
  double bits = 0.0;
  for (const auto& s : timeline.segments()) bits += model.event_rate(s.level) * s.duration_s;
  return bits / 8.0;
}

inline double dvs_scale(double conventional_gb, double ratio) {
  if (ratio < 0.0 || ratio > 1.0) throw std::invalid_argument("scale ratio must be in [0, 1]");
  if (conventional_gb < 0.0) throw std::invalid_argument("size must be >= 0");
  return conventional_gb * ratio;
}

// A 12 h night that is still except for 52 min of fast movement,
// spread over a few bursts.
inline ActivityTimeline sleep_night_timeline() {
  constexpr double kNight = 12.0 * 3600.0;
  constexpr double kBurst = 52.0 * 60.0 / 4.0;
  ActivityTimeline t;
  const double gap = (kNight - 4 * kBurst) / 5.0;
  for (int i = 0; i < 4; ++i) {
    t.append({gap, MotionLevel::None});
    t.append({kBurst, MotionLevel::Fast});
  }
  t.append({gap, MotionLevel::None});
  return t;
}

}  // namespace emr_edge::dvs
