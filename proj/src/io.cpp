#include "logcave/io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "logcave/errors.hpp"

namespace logcave {

nlohmann::json density_to_json(const PiecewiseLogLinear& d) {
  return {{"knots", d.knots()}, {"log_density", d.log_values()}, {"slopes", d.slopes()}};
}

nlohmann::json fit_report_to_json(const FitReport& rep) {
  nlohmann::json j = density_to_json(rep.density);
  const Moments m = rep.density.moments();
  j["loglik"] = rep.loglik;
  j["iterations"] = {{"outer", rep.outer_iterations}, {"inner", rep.inner_iterations}};
  j["kkt_max"] = rep.kkt_max;
  j["mean"] = m.mean;
  j["variance"] = m.variance;
  return j;
}

PiecewiseLogLinear density_from_json(const nlohmann::json& j) {
  if (!j.contains("knots") || !j.contains("log_density"))
    throw ParseError("fit JSON lacks 'knots'/'log_density'", 0);
  return PiecewiseLogLinear(j.at("knots").get<std::vector<double>>(),
                            j.at("log_density").get<std::vector<double>>());
}

namespace {

double parse_double(const std::string& tok, long line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  while (end && *end == ' ') ++end;
  if (end == tok.c_str() || (end && *end != '\0'))
    throw ParseError("cannot parse number '" + tok + "' (line " +
                         std::to_string(line) + ")",
                     line);
  if (!std::isfinite(v))
    throw ParseError("non-finite value on line " + std::to_string(line), line);
  return v;
}

std::vector<std::string> split_fields(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

ColumnData read_column_file(const std::string& path, bool weighted) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  ColumnData out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> f = split_fields(line);
    if (f.empty()) continue;
    if (weighted) {
      if (f.size() != 2)
        throw ParseError("expected 'value,weight' on line " + std::to_string(lineno),
                         lineno);
      out.values.push_back(parse_double(f[0], lineno));
      out.weights.push_back(parse_double(f[1], lineno));
    } else {
      if (f.size() != 1)
        throw ParseError("expected one value on line " + std::to_string(lineno),
                         lineno);
      out.values.push_back(parse_double(f[0], lineno));
    }
  }
  if (out.values.empty()) throw ParseError("'" + path + "' contains no data", lineno);
  return out;
}

Matrix read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> f = split_fields(line);
    if (f.empty()) continue;
    std::vector<double> row;
    row.reserve(f.size());
    for (const std::string& tok : f) row.push_back(parse_double(tok, lineno));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("ragged row on line " + std::to_string(lineno), lineno);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("'" + path + "' contains no data", lineno);
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
  return m;
}

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  std::istringstream is(text);
  std::string a, b, c;
  if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c))
    throw ParseError("grid must be 'min:max:count'", 0);
  g.lo = parse_double(a, 0);
  g.hi = parse_double(b, 0);
  g.count = std::strtol(c.c_str(), nullptr, 10);
  if (g.count < 2 || !(g.hi > g.lo))
    throw ParseError("grid needs max > min and count >= 2", 0);
  return g;
}

}  // namespace logcave
