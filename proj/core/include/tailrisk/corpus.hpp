#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tailrisk/dual.hpp"

namespace tailrisk {

enum class View { raw, rescaled, dual };
enum class Estimate { min, mid, max };
enum class Anchor { start, mid, end };

std::string to_string(View v);
std::string to_string(Estimate e);
std::string to_string(Anchor a);
View view_from_string(const std::string& s);
Estimate estimate_from_string(const std::string& s);
Anchor anchor_from_string(const std::string& s);

/// Inclusive year range.
struct YearWindow {
  int first = 0;
  int last = 0;
  bool contains(int year) const { return year >= first && year <= last; }
};

/// One historical event. Casualty figures are in persons; min/max are the
/// bounds of the estimate interval when the sources disagree.
struct ConflictRecord {
  std::string name;
  int start_year = 0;
  int end_year = 0;
  std::optional<double> casualties_min;
  double casualties_mid = 0.0;
  std::optional<double> casualties_max;
  std::optional<double> population;  // coeval world population

  int anchor_year(Anchor a) const {
    switch (a) {
      case Anchor::start: return start_year;
      case Anchor::mid: return start_year + (end_year - start_year) / 2;
      case Anchor::end: return end_year;
    }
    return start_year;
  }

  double lower_or_mid() const { return casualties_min.value_or(casualties_mid); }
  double upper_or_mid() const { return casualties_max.value_or(casualties_mid); }
  double estimate_value(Estimate e) const {
    switch (e) {
      case Estimate::min: return lower_or_mid();
      case Estimate::mid: return casualties_mid;
      case Estimate::max: return upper_or_mid();
    }
    return casualties_mid;
  }
};

/// World-population lookup, year -> persons. The bundled table carries
/// century resolution up to 1599, half-century to 1899, decades to 1949
/// and yearly values from 1950 on.
class PopulationTable {
 public:
  struct Entry {
    int year;
    double population;
  };

  explicit PopulationTable(std::vector<Entry> entries);

  static PopulationTable from_csv(const std::filesystem::path& path);

  /// Population at the table year nearest to `year`; an exact tie between
  /// two equidistant years resolves to the earlier one. Years outside the
  /// table range clamp to the endpoints.
  double resolve(int year) const;

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

/// Nominal spacing, in years, of the bundled population table around `year`.
int population_resolution_years(int year);

struct RejectedRow {
  std::size_t line_number = 0;
  std::string name;
  std::string reason;
};

struct LoadResult {
  std::vector<ConflictRecord> records;
  std::vector<RejectedRow> rejects;
  double unit_scale = 1.0;
  std::size_t input_rows = 0;
};

/// Reads the event CSV (`name,start,end,min,mid,max[,population]` with an
/// optional `# unit_scale=<int>` directive). Rows violating the record
/// invariants land in the reject list with their file line and reason;
/// nothing is dropped silently. Throws if the file is missing, has a bad
/// header, or contains no data rows.
LoadResult load_corpus(const std::filesystem::path& path,
                       const PopulationTable* population_table = nullptr,
                       Anchor population_anchor = Anchor::start);

struct RescaledTriplet {
  double value;
  double lower;
  double upper;
};

/// Expresses a record's casualties as an equivalent share of
/// reference_population: each figure is multiplied by
/// reference_population / record.population.
RescaledTriplet rescale(const ConflictRecord& record, double reference_population);

constexpr double kDefaultReferencePopulation = 7.2e9;

/// How to materialize a data view from loaded records.
struct ViewSpec {
  View view = View::raw;
  Estimate estimate = Estimate::mid;
  double threshold = 0.0;  // keep records with value >= threshold (view units)
  std::optional<YearWindow> window;
  Anchor anchor = Anchor::start;
  double reference_population = kDefaultReferencePopulation;
  /// Dual-transform support; defaults to [threshold, reference_population]
  /// when the dual view is requested.
  std::optional<DualBounds> bounds;
};

/// Aligned severity triplets for one view of the corpus. `records` keeps the
/// originating events so downstream code can reach dates and triplets.
struct ObservationSet {
  View view = View::raw;
  Anchor anchor = Anchor::start;
  double threshold = 0.0;
  std::optional<DualBounds> bounds;  // set for the dual view
  std::vector<ConflictRecord> records;
  std::vector<double> values;
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t input_count = 0;  // records considered before thresholding

  std::size_t size() const { return values.size(); }
};

/// Builds the requested view: raw keeps person counts, rescaled applies the
/// population rescaling, dual additionally maps through phi. Thresholding
/// happens in view units (for the dual view, on the rescaled values, which
/// is equivalent since phi is increasing and phi(L) = L). Throws if no
/// record survives the threshold.
ObservationSet build_observation_set(const std::vector<ConflictRecord>& records,
                                     const ViewSpec& spec);

/// Elementwise phi over a rescaled observation set. All of value/lower/upper
/// must already lie inside [L, H); violations raise a domain error naming
/// the record.
ObservationSet dualize(const ObservationSet& rescaled, const DualBounds& bounds);

/// Serializes records back to the ingestion CSV schema (unit scale 1).
std::string to_csv(const std::vector<ConflictRecord>& records);

}  // namespace tailrisk
