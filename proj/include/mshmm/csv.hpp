#ifndef MSHMM_CSV_HPP
#define MSHMM_CSV_HPP

#include <string>
#include <vector>

#include "mshmm/dates.hpp"

namespace mshmm {

// One dated observation column. Prices/levels as provided; transforms are
// applied later by the pipeline.
struct RawSeries {
  std::string name;
  std::vector<Date> dates;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }

  // Strictly increasing dates, finite values, dates/values same length.
  void validate() const;
};

// Reads a two-column CSV: header row required, column 1 an ISO-8601 date,
// column 2 a decimal value. Empty cells and calendar duplicates are errors;
// no imputation happens at ingestion.
RawSeries read_series_csv(const std::string& path, const std::string& name);

}  // namespace mshmm

#endif
