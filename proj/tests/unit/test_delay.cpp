#include <gtest/gtest.h>

#include <random>

#include "emr_edge/scenario.hpp"
#include "oracles.hpp"

using namespace emr_edge;

namespace {

constexpr double kR1 = 0.146484375;
constexpr double kR2 = 0.01953125;

// Reference values from exact rational evaluation of the closed form.
constexpr double kEdgeBest = 9.871454814814815;
constexpr double kEdgeWorst = 26.852077037037038;
constexpr double kFemtoBest = 16.587851851851852;
constexpr double kFemtoWorst = 139.64562962962964;
constexpr double kBaseBest = 145.7422222222222;
constexpr double kBaseWorst = 247.46666666666667;

std::vector<double> probs(const EdgeScenario& s) {
  std::vector<double> p;
  for (const auto& l : s.locations) p.push_back(l.probability);
  return p;
}

}  // namespace

TEST(TransferMinutes, Examples) {
  EXPECT_NEAR(transfer_minutes(290.0, kR2), 247.467, 0.001);
  EXPECT_EQ(transfer_minutes(0.0, 3.0), 0.0);
  EXPECT_NEAR(transfer_minutes(86.7608, kR1), 9.871, 0.001);
  EXPECT_THROW(transfer_minutes(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(transfer_minutes(1.0, -2.0), std::invalid_argument);
  EXPECT_THROW(transfer_minutes(-1.0, 2.0), std::invalid_argument);
}

TEST(ExpectedDelay, FixturePlanReportedFigures) {
  const auto s = paper_scenario();
  const auto plan = plan_scenario(s, PlacementMode::paper_fixture());
  const auto r = expected_delay_report(plan, s.locations, s.rates);
  EXPECT_NEAR(r.best_minutes, kEdgeBest, 1e-9);
  EXPECT_NEAR(r.worst_minutes, kEdgeWorst, 1e-9);
  EXPECT_NEAR(r.best_minutes, 9.872, 0.01);
  EXPECT_NEAR(r.worst_minutes, 26.855, 0.02);
  ASSERT_EQ(r.terms.size(), 5u);
  for (const auto& t : r.terms) {
    EXPECT_GE(t.primary_minutes, 0.0);
    EXPECT_GE(t.residual_minutes, 0.0);
  }
}

TEST(ExpectedDelay, MatchesTermByTermOracle) {
  const auto s = paper_scenario();
  const auto plan = plan_scenario(s, PlacementMode::omission());
  std::vector<double> cached, residual;
  for (const auto& e : plan.entries) {
    cached.push_back(e.cached_gb);
    residual.push_back(e.residual_gb);
  }
  EXPECT_NEAR(expected_delay(plan, s.locations, s.rates, DelayCase::Best),
              oracle::eq4_minutes(probs(s), cached, residual, kR1, kR2, false), 1e-9);
  EXPECT_NEAR(expected_delay(plan, s.locations, s.rates, DelayCase::Worst),
              oracle::eq4_minutes(probs(s), cached, residual, kR1, kR2, true), 1e-9);
}

TEST(ExpectedDelay, NothingCachedBestIsZero) {
  auto s = paper_scenario();
  for (auto& d : s.devices) d.capacity_gb = 0.0;
  const auto plan = plan_scenario(s, PlacementMode::min_combo());
  EXPECT_EQ(expected_delay(plan, s.locations, s.rates, DelayCase::Best), 0.0);
  EXPECT_NEAR(expected_delay(plan, s.locations, s.rates, DelayCase::Worst),
              transfer_minutes(106.66, kR2), 1e-9);
}

TEST(ExpectedDelay, MissingLocationRejected) {
  auto s = paper_scenario();
  auto plan = plan_scenario(s, PlacementMode::paper_fixture());
  plan.entries.pop_back();
  EXPECT_THROW(expected_delay(plan, s.locations, s.rates, DelayCase::Best), std::invalid_argument);
}

TEST(FemtocacheDelay, ReportedFigures) {
  const auto s = paper_scenario();
  const auto plan = femtocache_plan(s);
  const FileSet ti{FileClass::Text, FileClass::Image};
  EXPECT_EQ(plan.find_device("EA")->cached, ti);
  EXPECT_EQ(plan.find_device("EB")->cached, FileSet::all());
  EXPECT_EQ(plan.find_device("EC")->cached, ti);
  EXPECT_EQ(plan.find_device("ED")->cached, FileSet{FileClass::Text});
  EXPECT_EQ(plan.find_device("EE")->cached, FileSet{FileClass::Text});
  const auto r = femtocache_delay(s);
  EXPECT_NEAR(r.best_minutes, kFemtoBest, 1e-9);
  EXPECT_NEAR(r.worst_minutes, kFemtoWorst, 1e-9);
  EXPECT_NEAR(r.best_minutes, 16.59, 0.05);
  EXPECT_NEAR(r.worst_minutes, 139.652, 0.05);
}

TEST(FemtocacheDelay, DoublingRatesHalvesDelay) {
  auto s = paper_scenario();
  const auto base = femtocache_delay(s);
  s.rates = {2 * kR1, 2 * kR2};
  const auto fast = femtocache_delay(s);
  EXPECT_NEAR(fast.best_minutes, base.best_minutes / 2, 1e-9);
  EXPECT_NEAR(fast.worst_minutes, base.worst_minutes / 2, 1e-9);
}

TEST(BaselineDelay, ReportedFigures) {
  const auto s = paper_scenario();
  EXPECT_NEAR(baseline_delay(s.demand, s.records, s.locations, s.rates, DelayCase::Best), kBaseBest, 1e-9);
  EXPECT_NEAR(baseline_delay(s.demand, s.records, s.locations, s.rates, DelayCase::Worst), kBaseWorst, 1e-9);
  EXPECT_NEAR(kBaseBest, 145.73, 0.05);
  EXPECT_NEAR(kBaseWorst, 247.467, 0.01);
}

TEST(BaselineDelay, EmptyDemandBestIsZero) {
  auto s = paper_scenario();
  for (auto& [loc, sub] : s.demand) sub = FileSet{};
  EXPECT_EQ(baseline_delay(s.demand, s.records, s.locations, s.rates, DelayCase::Best), 0.0);
  s.demand.erase("home");
  EXPECT_THROW(baseline_delay(s), std::invalid_argument);
}

TEST(ImprovementPct, Examples) {
  EXPECT_NEAR(improvement_pct(145.73, 9.872), 93.23, 0.05);
  EXPECT_EQ(improvement_pct(12.5, 12.5), 0.0);
  EXPECT_NEAR(improvement_pct(139.652, 26.855), 80.77, 0.05);
  EXPECT_THROW(improvement_pct(0.0, 1.0), std::invalid_argument);
}

TEST(CalibrateRates, RecoversRatesFromTwoReportedFigures) {
  const auto s = paper_scenario();
  const auto fixture = plan_scenario(s, PlacementMode::paper_fixture());
  const auto rates = calibrate_rates({
      observe_plan(fixture, s.locations, DelayCase::Best, 9.872),
      observe_baseline(s.demand, s.records, s.locations, DelayCase::Worst, 247.467),
  });
  EXPECT_NEAR(rates.edge_gb_per_s, 0.146484, 1e-4);
  EXPECT_NEAR(rates.macro_gb_per_s, 0.01953125, 1e-6);
}

TEST(CalibrateRates, DegenerateRejected) {
  EXPECT_THROW(calibrate_rates({{0.0, 0.0, 5.0}}), CalibrationError);
  EXPECT_THROW(calibrate_rates({{10.0, 0.0, 5.0}}), CalibrationError);
  // Two proportional observations cannot separate the rates.
  EXPECT_THROW(calibrate_rates({{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}}), CalibrationError);
}

TEST(CalibrateRates, SyntheticRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> gb(1.0, 300.0), rate(0.001, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double r1 = rate(rng), r2 = rate(rng);
    std::vector<DelayObservation> obs;
    for (int k = 0; k < 4; ++k) {
      const double a = gb(rng), b = gb(rng);
      obs.push_back({a, b, (a / r1 + b / r2) / 60.0});
    }
    const auto got = calibrate_rates(obs);
    EXPECT_NEAR(got.edge_gb_per_s, r1, 1e-9 * r1 * 1e3);
    EXPECT_NEAR(got.macro_gb_per_s, r2, 1e-9 * r2 * 1e3);
  }
}

TEST(DelayProperty, WorstAtLeastBestAndLinear) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> grid(0, 12);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 300; ++trial) {
    auto s = paper_scenario();
    for (auto& d : s.devices) d.capacity_gb = grid(rng) * 15.0;
    const auto plan = plan_scenario(s, PlacementMode::omission());
    const auto r = expected_delay_report(plan, s.locations, s.rates);
    EXPECT_GE(r.worst_minutes, r.best_minutes);
    const auto fem = femtocache_delay(s);
    EXPECT_GE(fem.worst_minutes, fem.best_minutes);
    const auto base = baseline_delay(s);
    EXPECT_GE(base.worst_minutes, base.best_minutes);

    // Scale every size by c: same placement shape, delays scale by c.
    const double c = scale(rng);
    auto scaled = plan;
    for (auto& e : scaled.entries) {
      e.cached_gb *= c;
      e.residual_gb *= c;
    }
    const auto rs = expected_delay_report(scaled, s.locations, s.rates);
    EXPECT_NEAR(rs.best_minutes, c * r.best_minutes, 1e-9 * (1 + rs.best_minutes));
    EXPECT_NEAR(rs.worst_minutes, c * r.worst_minutes, 1e-9 * (1 + rs.worst_minutes));

    // Scale both rates by c: delays scale by 1/c.
    const LinkRates faster{s.rates.edge_gb_per_s * c, s.rates.macro_gb_per_s * c};
    const auto rf = expected_delay_report(plan, s.locations, faster);
    EXPECT_NEAR(rf.best_minutes, r.best_minutes / c, 1e-9 * (1 + r.best_minutes));
    EXPECT_NEAR(rf.worst_minutes, r.worst_minutes / c, 1e-9 * (1 + r.worst_minutes));
  }
}

TEST(DelayProperty, CachingMoreNeverHurtsWorstCase) {
  const auto s = paper_scenario();
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> mask(0, 7);
  for (int trial = 0; trial < 500; ++trial) {
    std::map<std::string, FileSet> small, big;
    for (const auto& d : s.devices) {
      const auto a = FileSet::from_mask(static_cast<std::uint8_t>(mask(rng)));
      const auto b = a | FileSet::from_mask(static_cast<std::uint8_t>(mask(rng)));
      small[d.id] = a;
      big[d.id] = b;
    }
    std::vector<EdgeDevice> roomy = s.devices;
    for (auto& d : roomy) d.capacity_gb = 1e6;
    const auto p_small = plan_from_subsets(roomy, small, s.records, VideoMode::Dvs, PlacementKind::CustomWeights);
    const auto p_big = plan_from_subsets(roomy, big, s.records, VideoMode::Dvs, PlacementKind::CustomWeights);
    EXPECT_LE(expected_delay(p_big, s.locations, s.rates, DelayCase::Worst),
              expected_delay(p_small, s.locations, s.rates, DelayCase::Worst) + 1e-12);
  }
}
