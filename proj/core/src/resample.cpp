#include "tailrisk/resample.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>

#include "tailrisk/random.hpp"
#include "tailrisk/stats.hpp"

namespace tailrisk {
namespace {

constexpr double kQuantileProbes[] = {0.005, 0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99, 0.995};

struct RunOutcome {
  std::optional<double> xi;
  std::string error;
};

/// Executes runs [0, n_runs) with the given per-run body, optionally across
/// threads. Each run derives its own generator, so partitioning does not
/// change results; outcomes are collected by run index.
std::vector<RunOutcome> run_all(std::size_t n_runs, int threads,
                                const std::function<RunOutcome(std::size_t)>& body) {
  std::vector<RunOutcome> outcomes(n_runs);
  const int n_threads = std::max(1, threads);
  if (n_threads == 1) {
    for (std::size_t i = 0; i < n_runs; ++i) outcomes[i] = body(i);
    return outcomes;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = static_cast<std::size_t>(t); i < n_runs;
           i += static_cast<std::size_t>(n_threads))
        outcomes[i] = body(i);
    });
  }
  for (auto& th : pool) th.join();
  return outcomes;
}

ResampleSummary summarize(ResampleScheme scheme, std::uint64_t seed,
                          std::vector<RunOutcome> outcomes) {
  ResampleSummary summary;
  summary.scheme = scheme;
  summary.base_seed = seed;
  summary.n_runs = outcomes.size();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].xi) summary.xi_values.push_back(*outcomes[i].xi);
    else summary.failures.emplace_back(i, outcomes[i].error);
  }
  if (!summary.xi_values.empty()) {
    std::vector<double> sorted = summary.xi_values;
    std::sort(sorted.begin(), sorted.end());
    std::size_t leq1 = 0;
    for (double xi : sorted)
      if (xi <= 1.0) ++leq1;
    summary.fraction_xi_leq_1 =
        static_cast<double>(leq1) / static_cast<double>(sorted.size());
    summary.median_xi = stats::quantile_sorted(sorted, 0.5);
    for (double p : kQuantileProbes) summary.xi_quantiles[p] = stats::quantile_sorted(sorted, p);
  }
  return summary;
}

std::vector<double> exceedances(const ObservationSet& obs, double threshold) {
  std::vector<double> w;
  for (double v : obs.values)
    if (v >= threshold) w.push_back(v - threshold);
  return w;
}

}  // namespace

std::string to_string(ResampleScheme s) {
  switch (s) {
    case ResampleScheme::bootstrap: return "bootstrap";
    case ResampleScheme::jackknife: return "jackknife";
    case ResampleScheme::fuzzy: return "fuzzy";
  }
  return "bootstrap";
}

ResampleSummary bootstrap_xi(const ObservationSet& obs, const FitConfig& config,
                             std::size_t n_runs, std::uint64_t seed, int threads) {
  if (n_runs < 1000) throw std::invalid_argument("bootstrap_xi: n_runs must be >= 1000");
  const std::vector<double> w = exceedances(obs, config.threshold);
  if (w.size() < config.options.min_exceedances)
    throw std::invalid_argument("bootstrap_xi: too few exceedances above the threshold");

  auto body = [&](std::size_t i) -> RunOutcome {
    Rng rng = Rng::derived(seed, i);
    std::vector<double> resampled(w.size());
    for (double& x : resampled) x = w[rng.uniform_index(w.size())];
    try {
      return {fit_mle(std::move(resampled), config.options, config.threshold).params.xi, ""};
    } catch (const std::exception& e) {
      return {std::nullopt, e.what()};
    }
  };
  return summarize(ResampleScheme::bootstrap, seed, run_all(n_runs, threads, body));
}

ResampleSummary jackknife_xi(const ObservationSet& obs, const FitConfig& config,
                             double max_removal_fraction, std::size_t n_runs,
                             std::uint64_t seed, int threads) {
  if (!(max_removal_fraction >= 0.0 && max_removal_fraction < 1.0))
    throw std::invalid_argument("jackknife_xi: removal fraction must be in [0, 1)");
  const std::vector<double> w = exceedances(obs, config.threshold);
  const std::size_t n = w.size();
  const auto max_removals = static_cast<std::size_t>(max_removal_fraction * static_cast<double>(n));
  if (n < config.options.min_exceedances + max_removals)
    throw std::invalid_argument(
        "jackknife_xi: maximum removal would leave too few exceedances");

  if (max_removals == 0) {
    // Nothing to delete; the experiment collapses to the base fit.
    RunOutcome base;
    base.xi = fit_mle(w, config.options, config.threshold).params.xi;
    return summarize(ResampleScheme::jackknife, seed, {base});
  }

  auto body = [&](std::size_t i) -> RunOutcome {
    Rng rng = Rng::derived(seed, i);
    const auto removals = static_cast<std::size_t>(rng.uniform_int(1, static_cast<long>(max_removals)));
    // partial Fisher-Yates: the first `removals` slots pick the deleted set
    std::vector<std::size_t> idx(n);
    for (std::size_t j = 0; j < n; ++j) idx[j] = j;
    for (std::size_t j = 0; j < removals; ++j)
      std::swap(idx[j], idx[j + rng.uniform_index(n - j)]);
    std::vector<double> kept;
    kept.reserve(n - removals);
    for (std::size_t j = removals; j < n; ++j) kept.push_back(w[idx[j]]);
    try {
      return {fit_mle(std::move(kept), config.options, config.threshold).params.xi, ""};
    } catch (const std::exception& e) {
      return {std::nullopt, e.what()};
    }
  };
  return summarize(ResampleScheme::jackknife, seed, run_all(n_runs, threads, body));
}

ResampleSummary fuzzy_mc_xi(const std::vector<ConflictRecord>& records,
                            const ViewSpec& view_spec, const FitConfig& config,
                            std::size_t n_runs, std::uint64_t seed, int threads) {
  if (records.empty()) throw std::invalid_argument("fuzzy_mc_xi: no records");

  auto body = [&](std::size_t i) -> RunOutcome {
    Rng rng = Rng::derived(seed, i);
    std::vector<ConflictRecord> drawn = records;
    for (ConflictRecord& rec : drawn) {
      const double lo = rec.lower_or_mid();
      const double hi = rec.upper_or_mid();
      rec.casualties_mid = lo < hi ? rng.uniform(lo, hi) : rec.casualties_mid;
      rec.casualties_min = rec.casualties_mid;
      rec.casualties_max = rec.casualties_mid;
    }
    try {
      ViewSpec spec = view_spec;
      spec.threshold = config.threshold;
      const ObservationSet obs = build_observation_set(drawn, spec);
      std::vector<double> w;
      w.reserve(obs.size());
      const double u = obs.view == View::dual ? obs.bounds->lower : config.threshold;
      for (double v : obs.values) w.push_back(v - u);
      return {fit_mle(std::move(w), config.options, u).params.xi, ""};
    } catch (const std::exception& e) {
      return {std::nullopt, e.what()};
    }
  };
  return summarize(ResampleScheme::fuzzy, seed, run_all(n_runs, threads, body));
}

SensitivityResult estimate_sensitivity(const std::vector<ConflictRecord>& records,
                                       const ViewSpec& view_spec, const FitConfig& config) {
  auto fit_with = [&](Estimate e) {
    ViewSpec spec = view_spec;
    spec.estimate = e;
    spec.threshold = config.threshold;
    const ObservationSet obs = build_observation_set(records, spec);
    std::vector<double> w;
    w.reserve(obs.size());
    const double u = obs.view == View::dual ? obs.bounds->lower : config.threshold;
    for (double v : obs.values) w.push_back(v - u);
    return fit_mle(std::move(w), config.options, u);
  };
  SensitivityResult result;
  result.fit_min = fit_with(Estimate::min);
  result.fit_mid = fit_with(Estimate::mid);
  result.fit_max = fit_with(Estimate::max);
  const double d1 = std::abs(result.fit_min.params.xi - result.fit_mid.params.xi);
  const double d2 = std::abs(result.fit_mid.params.xi - result.fit_max.params.xi);
  const double d3 = std::abs(result.fit_min.params.xi - result.fit_max.params.xi);
  result.max_abs_xi_delta = std::max({d1, d2, d3});
  return result;
}

}  // namespace tailrisk
