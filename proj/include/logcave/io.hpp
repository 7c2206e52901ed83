#ifndef LOGCAVE_IO_HPP
#define LOGCAVE_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "logcave/active_set.hpp"
#include "logcave/density.hpp"
#include "logcave/linalg.hpp"

namespace logcave {

// Fit artifact schema: knots, log_density, slopes, loglik,
// iterations{outer,inner}, kkt_max, mean, variance. Numbers round-trip
// losslessly through the serializer.
nlohmann::json fit_report_to_json(const FitReport& rep);
nlohmann::json density_to_json(const PiecewiseLogLinear& d);
PiecewiseLogLinear density_from_json(const nlohmann::json& j);

struct ColumnData {
  std::vector<double> values;
  std::vector<double> weights;  // empty when the file is single-column
};

// One value per line, optionally "value,weight" (or whitespace separated)
// when weighted is set. Throws ParseError with the offending line number.
ColumnData read_column_file(const std::string& path, bool weighted);

// Comma-separated n x d matrix, one row per line.
Matrix read_csv_matrix(const std::string& path);

struct GridSpec {
  double lo = 0.0, hi = 1.0;
  long count = 2;
};

// "min:max:count" with count >= 2
GridSpec parse_grid(const std::string& text);

}  // namespace logcave

#endif
