#include "mshmm/csv.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mshmm/errors.hpp"

namespace mshmm {

namespace {

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_value(const std::string& cell, const std::string& path, std::size_t line_no) {
  if (cell.empty())
    throw DataError(path + ":" + std::to_string(line_no) + ": missing value");
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || !std::isfinite(v))
    throw DataError(path + ":" + std::to_string(line_no) + ": bad value '" + cell + "'");
  return v;
}

}  // namespace

void RawSeries::validate() const {
  if (dates.size() != values.size())
    throw DimensionError("series '" + name + "': dates/values length mismatch");
  if (values.empty()) throw DataError("series '" + name + "': empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw DataError("series '" + name + "': non-finite value at index " + std::to_string(i));
    if (i > 0 && dates[i] <= dates[i - 1])
      throw DataError("series '" + name + "': dates not strictly increasing at index " +
                      std::to_string(i) + " (" + format_iso_date(dates[i]) + ")");
  }
}

RawSeries read_series_csv(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open CSV file: " + path);

  RawSeries out;
  out.name = name;

  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = strip(line);
    if (trimmed.empty()) continue;
    if (!saw_header) {
      // Header row is mandatory; its labels are not interpreted.
      saw_header = true;
      continue;
    }
    const std::size_t comma = trimmed.find(',');
    if (comma == std::string::npos)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 'date,value'");
    const std::string date_cell = strip(trimmed.substr(0, comma));
    std::string value_cell = strip(trimmed.substr(comma + 1));
    // Extra trailing columns are ignored.
    const std::size_t next = value_cell.find(',');
    if (next != std::string::npos) value_cell = strip(value_cell.substr(0, next));
    out.dates.push_back(parse_iso_date(date_cell));
    out.values.push_back(parse_value(value_cell, path, line_no));
  }
  if (!saw_header) throw DataError(path + ": empty file (header row required)");
  if (out.values.empty()) throw DataError(path + ": no data rows");
  out.validate();
  return out;
}

}  // namespace mshmm
