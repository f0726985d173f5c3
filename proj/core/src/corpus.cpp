#include "tailrisk/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "tailrisk/csv.hpp"

namespace tailrisk {
namespace {

constexpr double kCasualtyFloor = 3000.0;

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_missing(const std::string& cell) {
  const std::string v = lower(cell);
  return v.empty() || v == "-" || v == "na" || v == "nan";
}

std::optional<double> parse_number(const std::string& cell) {
  if (is_missing(cell)) return std::nullopt;
  std::size_t pos = 0;
  double v = std::stod(cell, &pos);
  if (pos != cell.size()) throw std::invalid_argument("trailing characters in number '" + cell + "'");
  return v;
}

int parse_year(const std::string& cell) {
  std::size_t pos = 0;
  const int v = std::stoi(cell, &pos);
  if (pos != cell.size()) throw std::invalid_argument("trailing characters in year '" + cell + "'");
  return v;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(View v) {
  switch (v) {
    case View::raw: return "raw";
    case View::rescaled: return "rescaled";
    case View::dual: return "dual";
  }
  return "raw";
}

std::string to_string(Estimate e) {
  switch (e) {
    case Estimate::min: return "min";
    case Estimate::mid: return "mid";
    case Estimate::max: return "max";
  }
  return "mid";
}

std::string to_string(Anchor a) {
  switch (a) {
    case Anchor::start: return "start";
    case Anchor::mid: return "mid";
    case Anchor::end: return "end";
  }
  return "start";
}

View view_from_string(const std::string& s) {
  const std::string v = lower(s);
  if (v == "raw") return View::raw;
  if (v == "rescaled") return View::rescaled;
  if (v == "dual") return View::dual;
  throw std::invalid_argument("unknown view '" + s + "' (expected raw|rescaled|dual)");
}

Estimate estimate_from_string(const std::string& s) {
  const std::string v = lower(s);
  if (v == "min") return Estimate::min;
  if (v == "mid") return Estimate::mid;
  if (v == "max") return Estimate::max;
  throw std::invalid_argument("unknown estimate '" + s + "' (expected min|mid|max)");
}

Anchor anchor_from_string(const std::string& s) {
  const std::string v = lower(s);
  if (v == "start") return Anchor::start;
  if (v == "mid") return Anchor::mid;
  if (v == "end") return Anchor::end;
  throw std::invalid_argument("unknown anchor '" + s + "' (expected start|mid|end)");
}

PopulationTable::PopulationTable(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("population table is empty");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!(entries_[i].population > 0.0))
      throw std::invalid_argument("population table: non-positive population at year " +
                                  std::to_string(entries_[i].year));
    if (i > 0 && entries_[i].year <= entries_[i - 1].year)
      throw std::invalid_argument("population table: years must be strictly increasing");
  }
}

PopulationTable PopulationTable::from_csv(const std::filesystem::path& path) {
  const csv::Table table = csv::read_file(path);
  double scale = 1.0;
  if (auto it = table.directives.find("unit_scale"); it != table.directives.end())
    scale = std::stod(it->second);
  if (table.header.size() < 2)
    throw std::runtime_error("population table needs a year,population header");
  std::vector<Entry> entries;
  entries.reserve(table.rows.size());
  for (const auto& [line, cells] : table.rows) {
    if (cells.size() < 2)
      throw std::runtime_error("population table line " + std::to_string(line) + ": expected 2 columns");
    entries.push_back({parse_year(cells[0]), std::stod(cells[1]) * scale});
  }
  return PopulationTable(std::move(entries));
}

double PopulationTable::resolve(int year) const {
  // entries_ is sorted by year; clamp outside the range, otherwise take the
  // nearest entry, preferring the earlier year on an exact tie.
  auto it = std::lower_bound(entries_.begin(), entries_.end(), year,
                             [](const Entry& e, int y) { return e.year < y; });
  if (it == entries_.end()) return entries_.back().population;
  if (it == entries_.begin()) return entries_.front().population;
  const Entry& above = *it;
  const Entry& below = *(it - 1);
  const int d_above = above.year - year;
  const int d_below = year - below.year;
  return d_below <= d_above ? below.population : above.population;
}

int population_resolution_years(int year) {
  if (year < 1600) return 100;
  if (year < 1900) return 50;
  if (year < 1950) return 10;
  return 1;
}

LoadResult load_corpus(const std::filesystem::path& path,
                       const PopulationTable* population_table,
                       Anchor population_anchor) {
  const csv::Table table = csv::read_file(path);

  double unit_scale = 1.0;
  if (auto it = table.directives.find("unit_scale"); it != table.directives.end())
    unit_scale = std::stod(it->second);
  if (!(unit_scale > 0.0)) throw std::runtime_error("unit_scale must be positive");

  std::vector<std::string> header;
  header.reserve(table.header.size());
  for (const auto& h : table.header) header.push_back(lower(h));
  const bool has_population = header.size() >= 7 && header[6] == "population";
  if (header.size() < 6 || header[0] != "name" || header[1] != "start" || header[2] != "end" ||
      header[3] != "min" || header[4] != "mid" || header[5] != "max")
    throw std::runtime_error("unexpected header in " + path.string() +
                             " (expected name,start,end,min,mid,max[,population])");

  LoadResult result;
  result.unit_scale = unit_scale;
  result.input_rows = table.rows.size();
  if (table.rows.empty()) throw std::runtime_error("no data rows in " + path.string());

  for (const auto& [line, cells] : table.rows) {
    auto reject = [&](const std::string& name, const std::string& reason) {
      result.rejects.push_back({line, name, reason});
    };
    if (cells.size() != header.size()) {
      reject(cells.empty() ? "" : cells[0],
             "malformed row: expected " + std::to_string(header.size()) + " columns, got " +
                 std::to_string(cells.size()));
      continue;
    }
    ConflictRecord rec;
    rec.name = cells[0];
    try {
      rec.start_year = parse_year(cells[1]);
      rec.end_year = parse_year(cells[2]);
      rec.casualties_min = parse_number(cells[3]);
      const auto mid = parse_number(cells[4]);
      if (!mid) throw std::invalid_argument("mid estimate is required");
      rec.casualties_mid = *mid;
      rec.casualties_max = parse_number(cells[5]);
      if (has_population) rec.population = parse_number(cells[6]);
    } catch (const std::exception& e) {
      reject(rec.name, std::string("malformed row: ") + e.what());
      continue;
    }

    if (rec.casualties_min) *rec.casualties_min *= unit_scale;
    rec.casualties_mid *= unit_scale;
    if (rec.casualties_max) *rec.casualties_max *= unit_scale;
    if (rec.population) *rec.population *= unit_scale;

    if (rec.name.empty()) {
      reject(rec.name, "empty event name");
      continue;
    }
    if (rec.start_year > rec.end_year) {
      reject(rec.name, "start year " + std::to_string(rec.start_year) + " after end year " +
                           std::to_string(rec.end_year));
      continue;
    }
    if (rec.casualties_mid < kCasualtyFloor) {
      reject(rec.name, "mid estimate " + format_number(rec.casualties_mid) +
                           " below the 3000-casualty floor");
      continue;
    }
    if (rec.casualties_min && *rec.casualties_min > rec.casualties_mid) {
      reject(rec.name, "estimate triplet out of order: min " + format_number(*rec.casualties_min) +
                           " > mid " + format_number(rec.casualties_mid));
      continue;
    }
    if (rec.casualties_max && rec.casualties_mid > *rec.casualties_max) {
      reject(rec.name, "estimate triplet out of order: mid " + format_number(rec.casualties_mid) +
                           " > max " + format_number(*rec.casualties_max));
      continue;
    }
    if (!rec.population) {
      if (!population_table) {
        reject(rec.name, "population missing and no population table supplied");
        continue;
      }
      rec.population = population_table->resolve(rec.anchor_year(population_anchor));
    }
    if (*rec.population <= rec.upper_or_mid()) {
      reject(rec.name, "population " + format_number(*rec.population) +
                           " not greater than the casualty estimate " +
                           format_number(rec.upper_or_mid()));
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

RescaledTriplet rescale(const ConflictRecord& record, double reference_population) {
  if (!record.population || !(*record.population > 0.0))
    throw std::invalid_argument("rescale: record '" + record.name +
                                "' has no positive population");
  if (!(reference_population > 0.0))
    throw std::invalid_argument("rescale: reference population must be positive");
  const double factor = reference_population / *record.population;
  return {record.casualties_mid * factor, record.lower_or_mid() * factor,
          record.upper_or_mid() * factor};
}

ObservationSet build_observation_set(const std::vector<ConflictRecord>& records,
                                     const ViewSpec& spec) {
  ObservationSet obs;
  obs.view = spec.view;
  obs.anchor = spec.anchor;
  obs.threshold = spec.threshold;

  DualBounds bounds;
  if (spec.view == View::dual) {
    bounds = spec.bounds.value_or(DualBounds{spec.threshold, spec.reference_population});
    bounds.validate();
    if (spec.threshold < bounds.lower)
      throw std::invalid_argument("dual view: threshold below the lower support bound L");
    obs.bounds = bounds;
  }

  for (const ConflictRecord& rec : records) {
    if (spec.window && !spec.window->contains(rec.anchor_year(spec.anchor))) continue;
    ++obs.input_count;

    double value, lo, hi;
    if (spec.view == View::raw) {
      value = rec.estimate_value(spec.estimate);
      lo = rec.lower_or_mid();
      hi = rec.upper_or_mid();
    } else {
      const RescaledTriplet t = rescale(rec, spec.reference_population);
      switch (spec.estimate) {
        case Estimate::min: value = t.lower; break;
        case Estimate::max: value = t.upper; break;
        default: value = t.value; break;
      }
      lo = t.lower;
      hi = t.upper;
    }
    if (value < spec.threshold) continue;

    if (spec.view == View::dual) {
      // Interval bounds below the modeled support are truncated to L;
      // phi is undefined below it.
      lo = std::max(lo, bounds.lower);
      const double v = value;
      try {
        value = phi(value, bounds);
        lo = phi(lo, bounds);
        hi = phi(hi, bounds);
      } catch (const std::domain_error& e) {
        throw std::domain_error("dual transform failed for record '" + rec.name + "' (value " +
                                format_number(v) + "): " + e.what());
      }
    }
    obs.records.push_back(rec);
    obs.values.push_back(value);
    obs.lower.push_back(lo);
    obs.upper.push_back(hi);
  }

  if (obs.values.empty())
    throw std::runtime_error("no observations at or above threshold " +
                             format_number(spec.threshold) + " in the " + to_string(spec.view) +
                             " view; lower the threshold");
  return obs;
}

ObservationSet dualize(const ObservationSet& rescaled, const DualBounds& bounds) {
  if (rescaled.view != View::rescaled)
    throw std::invalid_argument("dualize expects a rescaled observation set");
  bounds.validate();
  ObservationSet out = rescaled;
  out.view = View::dual;
  out.bounds = bounds;
  for (std::size_t i = 0; i < rescaled.size(); ++i) {
    try {
      out.values[i] = phi(rescaled.values[i], bounds);
      out.lower[i] = phi(rescaled.lower[i], bounds);
      out.upper[i] = phi(rescaled.upper[i], bounds);
    } catch (const std::domain_error& e) {
      throw std::domain_error("dual transform failed for record '" + rescaled.records[i].name +
                              "': " + e.what());
    }
  }
  return out;
}

std::string to_csv(const std::vector<ConflictRecord>& records) {
  std::ostringstream out;
  out << "name,start,end,min,mid,max,population\n";
  for (const ConflictRecord& r : records) {
    out << csv::escape(r.name) << ',' << r.start_year << ',' << r.end_year << ','
        << (r.casualties_min ? format_number(*r.casualties_min) : "-") << ','
        << format_number(r.casualties_mid) << ','
        << (r.casualties_max ? format_number(*r.casualties_max) : "-") << ','
        << (r.population ? format_number(*r.population) : "-") << '\n';
  }
  return out.str();
}

}  // namespace tailrisk
