#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "emr_edge/delay.hpp"

namespace emr_edge {

enum class SamplerKind {
  // One request per sample, at a location drawn with weight dwell_rates.
  Location,
  // Per sample, each location sees K ~ Poisson(rate) requests, capped at
  // the truncation count.
  PoissonCount,
};

struct MonteCarloConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  // Per-location weights / Poisson means, in location order. Empty means
  // use each location's probability.
  std::vector<double> dwell_rates;
  int truncation = 64;
  SamplerKind sampler = SamplerKind::Location;
  // Independent sub-streams; results depend on (seed, samples, partitions).
  unsigned partitions = 1;
};

struct MonteCarloEstimate {
  double mean_minutes = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
};

namespace detail {

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t n = 0;
  // Draws per location (location sampler only).
  std::vector<std::uint64_t> hits;
};

inline std::mt19937_64 substream(std::uint64_t seed, unsigned index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

inline Moments sample_stream(const std::vector<double>& term_minutes,
                             const std::vector<double>& rates, const MonteCarloConfig& cfg,
                             unsigned index, std::uint64_t count) {
  auto rng = substream(cfg.seed, index);
  Moments m;
  if (cfg.sampler == SamplerKind::Location) {
    std::discrete_distribution<std::size_t> pick(rates.begin(), rates.end());
    m.hits.assign(term_minutes.size(), 0);
    for (std::uint64_t i = 0; i < count; ++i) ++m.hits[pick(rng)];
  } else {
    std::vector<std::poisson_distribution<int>> arrivals;
    for (double r : rates) arrivals.emplace_back(r > 0.0 ? r : 1e-300);
    for (std::uint64_t i = 0; i < count; ++i) {
      double x = 0.0;
      for (std::size_t l = 0; l < arrivals.size(); ++l) {
        if (rates[l] <= 0.0) continue;
        const int k = std::min(arrivals[l](rng), cfg.truncation);
        x += k * term_minutes[l];
      }
      m.sum += x;
      m.sum_sq += x * x;
    }
  }
  m.n = count;
  return m;
}

}  // namespace detail

// Sampled expected delay. Its mean converges to expected_delay() when the
// rates equal the location probabilities.
inline MonteCarloEstimate monte_carlo_delay(const AllocationPlan& plan,
                                            const std::vector<LocationProfile>& locations,
                                            const MonteCarloConfig& cfg, const LinkRates& rates,
                                            DelayCase c) {
  if (cfg.samples == 0) throw std::invalid_argument("monte carlo needs at least one sample");
  if (cfg.truncation < 0) throw std::invalid_argument("truncation must be >= 0");
  if (cfg.partitions == 0) throw std::invalid_argument("partitions must be >= 1");

  if (!cfg.dwell_rates.empty() && cfg.dwell_rates.size() != locations.size())
    throw std::invalid_argument("dwell_rates must have one entry per location");

  const auto report = expected_delay_report(plan, locations, rates);
  std::vector<double> terms;
  std::vector<double> weights;
  for (std::size_t i = 0; i < report.terms.size(); ++i) {
    terms.push_back(report.terms[i].minutes(c));
    weights.push_back(cfg.dwell_rates.empty() ? report.terms[i].probability
                                              : cfg.dwell_rates.at(i));
  }
  double total_weight = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("dwell rates must be >= 0");
    total_weight += w;
  }
  if (!(total_weight > 0.0)) throw std::invalid_argument("dwell rates must not all be zero");

  const unsigned parts = cfg.partitions;
  std::vector<detail::Moments> partial(parts);
  std::vector<std::uint64_t> counts(parts, cfg.samples / parts);
  for (std::uint64_t i = 0; i < cfg.samples % parts; ++i) ++counts[i];

  if (parts == 1) {
    partial[0] = detail::sample_stream(terms, weights, cfg, 0, counts[0]);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned p = 0; p < parts; ++p)
      workers.emplace_back([&, p] { partial[p] = detail::sample_stream(terms, weights, cfg, p, counts[p]); });
  }

  std::uint64_t total = 0;
  for (const auto& m : partial) total += m.n;
  const double n = static_cast<double>(total);
  double mean = 0.0;
  double mean_sq = 0.0;
  if (cfg.sampler == SamplerKind::Location) {
    for (std::size_t l = 0; l < terms.size(); ++l) {
      std::uint64_t hits = 0;
      for (const auto& m : partial) hits += m.hits[l];
      const double share = static_cast<double>(hits) / n;
      mean += share * terms[l];
      mean_sq += share * terms[l] * terms[l];
    }
  } else {
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& m : partial) {
      sum += m.sum;
      sum_sq += m.sum_sq;
    }
    mean = sum / n;
    mean_sq = sum_sq / n;
  }
  const double var = total > 1 ? std::max(0.0, (mean_sq - mean * mean) * n / (n - 1.0)) : 0.0;
  return {mean, std::sqrt(var / n), total};
}

}  // namespace emr_edge
