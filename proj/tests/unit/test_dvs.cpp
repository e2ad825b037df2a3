#include <gtest/gtest.h>

#include <random>

#include "emr_edge/dvs.hpp"

using namespace emr_edge::dvs;

TEST(FrameVolume, CifNightIsFormulaExact) {
  // 512 kbit/s for 12 h, divided by 8: 2.7648e9 bytes.
  EXPECT_EQ(frame_volume(512e3, 43200.0), 2.7648e9);
}

TEST(FrameVolume, ZeroDurationAndHourAt256k) {
  EXPECT_EQ(frame_volume(512e3, 0.0), 0.0);
  EXPECT_EQ(frame_volume(1e9, 0.0), 0.0);
  EXPECT_EQ(frame_volume(256e3, 3600.0), 1.152e8);
}

TEST(FrameVolume, RejectsNegativeInputs) {
  EXPECT_THROW(frame_volume(-1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(frame_volume(1.0, -1.0), std::invalid_argument);
}

TEST(EventVolume, StillSceneRecordsNothing) {
  ActivityTimeline t({{43200.0, MotionLevel::None}});
  EXPECT_EQ(event_volume(t, default_event_sensor()), 0.0);
}

TEST(EventVolume, OneHourFast) {
  ActivityTimeline t({{3600.0, MotionLevel::Fast}});
  EXPECT_EQ(event_volume(t, default_event_sensor()), 1.152e8);
}

TEST(EventVolume, SleepNightIsAbout100MB) {
  const auto night = sleep_night_timeline();
  EXPECT_DOUBLE_EQ(night.total_duration_s(), 43200.0);
  // 52 min of fast movement at 256 kbit/s = 9.984e7 bytes.
  EXPECT_NEAR(event_volume(night, default_event_sensor()), 9.984e7, 1.0);
  EXPECT_NEAR(event_volume(night, default_event_sensor()), 1.0e8, 0.01e8);
}

TEST(EventVolume, RejectsFrameBasedModel) {
  ActivityTimeline t({{10.0, MotionLevel::Fast}});
  EXPECT_THROW(event_volume(t, SensorModel::frame_based(512e3)), std::invalid_argument);
}

TEST(DvsScale, Examples) {
  EXPECT_NEAR(dvs_scale(200.0, 1.0 / 12.0), 16.667, 0.001);
  EXPECT_EQ(dvs_scale(0.0, 0.3), 0.0);
  EXPECT_EQ(dvs_scale(200.0, 1.0), 200.0);
  EXPECT_THROW(dvs_scale(200.0, 1.5), std::invalid_argument);
  EXPECT_THROW(dvs_scale(200.0, -0.1), std::invalid_argument);
}

TEST(SensorModel, EventRateInvariants) {
  const auto m = default_event_sensor();
  EXPECT_EQ(m.event_rate(MotionLevel::None), 0.0);
  EXPECT_LE(m.event_rate(MotionLevel::Slow), m.event_rate(MotionLevel::Fast));
  EXPECT_THROW(SensorModel::event_based(300e3, 256e3), std::invalid_argument);
}

TEST(Timeline, RejectsNegativeDuration) {
  EXPECT_THROW(ActivityTimeline({{-1.0, MotionLevel::Slow}}), std::invalid_argument);
  ActivityTimeline t;
  EXPECT_THROW(t.append({-5.0, MotionLevel::None}), std::invalid_argument);
}

namespace {

ActivityTimeline random_timeline(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n(0, 8), lvl(0, 2);
  std::uniform_real_distribution<double> dur(0.0, 4000.0);
  ActivityTimeline t;
  const int k = n(rng);
  for (int i = 0; i < k; ++i) t.append({dur(rng), static_cast<MotionLevel>(lvl(rng))});
  return t;
}

}  // namespace

TEST(EventVolumeProperty, DominatedMonotoneAdditive) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rate(0.0, 1e6);
  for (int trial = 0; trial < 500; ++trial) {
    double slow = rate(rng), fast = rate(rng);
    if (slow > fast) std::swap(slow, fast);
    const auto model = SensorModel::event_based(slow, fast);
    const auto a = random_timeline(rng);
    const auto b = random_timeline(rng);

    // Dominance whenever the fast event rate does not exceed the frame rate.
    const double frame = fast + std::uniform_real_distribution<double>(0.0, 1e6)(rng);
    EXPECT_LE(event_volume(a, model), frame_volume(frame, a.total_duration_s()) * (1 + 1e-12));

    EXPECT_NEAR(event_volume(a.concat(b), model), event_volume(a, model) + event_volume(b, model),
                1e-6 * (1 + event_volume(a.concat(b), model)));

    if (!a.segments().empty()) {
      auto segs = a.segments();
      const auto i = std::uniform_int_distribution<std::size_t>(0, segs.size() - 1)(rng);
      const auto before = event_volume(a, model);
      if (segs[i].level != MotionLevel::Fast)
        segs[i].level = static_cast<MotionLevel>(static_cast<int>(segs[i].level) + 1);
      EXPECT_GE(event_volume(ActivityTimeline(segs), model), before);
    }
  }
}
