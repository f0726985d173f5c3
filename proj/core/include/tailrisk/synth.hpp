#pragma once

#include <cstdint>
#include <vector>

#include "tailrisk/corpus.hpp"
#include "tailrisk/random.hpp"

namespace tailrisk {

/// Configuration of the synthetic-history generator. Severities are drawn
/// as GPD excesses over `threshold` in dual space and mapped back through
/// phi_inverse, so generated values always respect the [L, H] support.
struct SynthConfig {
  double xi = 1.5;
  double sigma = 90620.0;
  double threshold = 25000.0;  // L, also the severity floor
  double upper_bound = kDefaultReferencePopulation;  // H
  double events_per_year = 1.0;
  YearWindow window{1500, 2015};
  double fuzz = 0.0;  // triplet half-width as a fraction of the mid value
  std::uint64_t seed = 0;
  double reference_population = kDefaultReferencePopulation;

  void validate() const;
};

/// Inverse-CDF GPD sampling: w = sigma ((1-U)^{-xi} - 1) / xi, exponential
/// in the xi = 0 limit.
std::vector<double> sample_gpd(double xi, double sigma, std::size_t n, std::uint64_t seed);
std::vector<double> sample_gpd(double xi, double sigma, std::size_t n, Rng& rng);

/// Synthetic event history: homogeneous-Poisson arrival years on the window
/// and bounded dual-consistent severities, emitted in the ingestion record
/// schema (population fixed to the reference so rescaling is the identity).
std::vector<ConflictRecord> sample_history(const SynthConfig& config);

}  // namespace tailrisk
