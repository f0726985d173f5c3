#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tailrisk/corpus.hpp"
#include "tailrisk/gpd.hpp"

namespace tailrisk {

enum class ResampleScheme { bootstrap, jackknife, fuzzy };

std::string to_string(ResampleScheme s);

/// Distribution of the shape estimate across resampling runs. Failed refits
/// are listed but do not abort the experiment.
struct ResampleSummary {
  ResampleScheme scheme = ResampleScheme::bootstrap;
  std::size_t n_runs = 0;
  std::uint64_t base_seed = 0;
  std::vector<double> xi_values;  // run order, failures excluded
  std::vector<std::pair<std::size_t, std::string>> failures;
  double fraction_xi_leq_1 = 0.0;
  double median_xi = 0.0;
  std::map<double, double> xi_quantiles;  // probability -> quantile
};

/// How exceedances are formed before each refit.
struct FitConfig {
  double threshold = 0.0;  // in the units of the observation values
  FitOptions options;
};

/// Resamples the exceedance set with replacement (same size) and refits,
/// n_runs times. Run i derives its seed as base_seed XOR i, so summaries
/// are reproducible and independent of the thread count.
ResampleSummary bootstrap_xi(const ObservationSet& obs, const FitConfig& config,
                             std::size_t n_runs, std::uint64_t seed, int threads = 1);

/// Random-deletion jackknife: each run removes a uniform count in
/// [1, floor(fraction * n)] of the above-threshold observations (chosen
/// uniformly without replacement) and refits. A zero removal budget
/// degenerates to the base fit.
ResampleSummary jackknife_xi(const ObservationSet& obs, const FitConfig& config,
                             double max_removal_fraction, std::size_t n_runs,
                             std::uint64_t seed, int threads = 1);

/// Imprecise-records Monte Carlo: each run draws every event's casualty
/// count uniformly from its [min, max] interval, rebuilds the view and
/// refits. Degenerate triplets reproduce the base fit exactly.
ResampleSummary fuzzy_mc_xi(const std::vector<ConflictRecord>& records,
                            const ViewSpec& view_spec, const FitConfig& config,
                            std::size_t n_runs, std::uint64_t seed, int threads = 1);

struct SensitivityResult {
  GpdFit fit_min;
  GpdFit fit_mid;
  GpdFit fit_max;
  double max_abs_xi_delta = 0.0;
};

/// Refits with every event pinned to its minimum, middle and maximum
/// estimate in turn.
SensitivityResult estimate_sensitivity(const std::vector<ConflictRecord>& records,
                                       const ViewSpec& view_spec, const FitConfig& config);

}  // namespace tailrisk
