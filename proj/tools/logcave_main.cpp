// logcave: log-concave density estimation on the real line.
//
// Subcommands: fit, eval, sample, smooth, radial, ica, verify, reproduce.
// Exit codes: 0 success, 2 parse/usage error, 3 no estimate exists for the
// input, 4 solver failure, 5 verification failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "logcave/active_set.hpp"
#include "logcave/errors.hpp"
#include "logcave/experiments.hpp"
#include "logcave/ica.hpp"
#include "logcave/io.hpp"
#include "logcave/projection_lab.hpp"
#include "logcave/radial.hpp"
#include "logcave/smoothing.hpp"

namespace {

using namespace logcave;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'", 0);
  out << text;
}

WeightedSample load_sample(const std::string& path, bool weighted) {
  const ColumnData data = read_column_file(path, weighted);
  if (weighted) return WeightedSample::from_raw_weighted(data.values, data.weights);
  return WeightedSample::from_raw(data.values);
}

std::string csv_line(double a, double b, double c, bool three) {
  char buf[128];
  if (three)
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", a, b, c);
  else
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", a, b);
  return buf;
}

int cmd_fit(const std::string& input, const std::string& output, bool weighted,
            double tol_kkt) {
  FitOptions opts;
  opts.tol_kkt = tol_kkt;
  const FitReport rep = fit(load_sample(input, weighted), opts);
  write_output(output, fit_report_to_json(rep).dump(2) + "\n");
  return 0;
}

int cmd_eval(const std::string& fit_path, const std::string& grid_text,
             const std::string& format, const std::string& output) {
  std::ifstream in(fit_path);
  if (!in) throw ParseError("cannot open '" + fit_path + "'", 0);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad fit JSON: ") + e.what(), 0);
  }
  const PiecewiseLogLinear d = density_from_json(j);
  const GridSpec grid = parse_grid(grid_text);
  if (format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (long i = 0; i < grid.count; ++i) {
      const double x = grid.lo + (grid.hi - grid.lo) * i / (grid.count - 1);
      rows.push_back({{"x", x}, {"f", d.evaluate(x)}, {"F", d.cdf(x)}});
    }
    write_output(output, rows.dump(2) + "\n");
  } else {
    std::string text;
    for (long i = 0; i < grid.count; ++i) {
      const double x = grid.lo + (grid.hi - grid.lo) * i / (grid.count - 1);
      text += csv_line(x, d.evaluate(x), d.cdf(x), true);
    }
    write_output(output, text);
  }
  return 0;
}

int cmd_sample(const std::string& fit_path, long n, std::uint64_t seed,
               const std::string& output) {
  std::ifstream in(fit_path);
  if (!in) throw ParseError("cannot open '" + fit_path + "'", 0);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad fit JSON: ") + e.what(), 0);
  }
  const PiecewiseLogLinear d = density_from_json(j);
  std::string text;
  char buf[64];
  for (double x : d.draw(static_cast<std::size_t>(n), seed)) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    text += buf;
  }
  write_output(output, text);
  return 0;
}

int cmd_smooth(const std::string& input, const std::string& output, bool weighted,
               const std::string& grid_text) {
  const WeightedSample sample = load_sample(input, weighted);
  const FitReport rep = fit(sample);
  const SmoothedDensity sm = smooth(rep, sample);
  if (!grid_text.empty()) {
    const GridSpec grid = parse_grid(grid_text);
    std::string text;
    for (long i = 0; i < grid.count; ++i) {
      const double x = grid.lo + (grid.hi - grid.lo) * i / (grid.count - 1);
      text += csv_line(x, sm.evaluate(x), 0.0, false);
    }
    write_output(output, text);
    return 0;
  }
  nlohmann::json j;
  j["base"] = fit_report_to_json(rep);
  j["bandwidth_var"] = sm.bandwidth_var();
  const Moments m = sm.moments();
  j["mean"] = m.mean;
  j["variance"] = m.variance;
  write_output(output, j.dump(2) + "\n");
  return 0;
}

int cmd_radial(const std::string& input, const std::string& output) {
  const RadialDensity rd = radial_fit(read_csv_matrix(input));
  nlohmann::json j;
  j["dim"] = rd.dim;
  j["c_d"] = rd.c_d();
  j["h"] = density_to_json(rd.h);
  write_output(output, j.dump(2) + "\n");
  return 0;
}

int cmd_ica(const std::string& input, const std::string& output, int restarts,
            std::uint64_t seed) {
  IcaOptions opts;
  opts.restarts = restarts;
  opts.seed = seed;
  const IcaModel model = ica_fit(read_csv_matrix(input), opts);
  nlohmann::json j;
  auto mat = [](const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t k = 0; k < m.cols; ++k) row.push_back(m(i, k));
      rows.push_back(row);
    }
    return rows;
  };
  j["unmixing"] = mat(model.unmixing);
  j["rotation"] = mat(model.rotation);
  nlohmann::json marg = nlohmann::json::array();
  for (const PiecewiseLogLinear& g : model.marginals) marg.push_back(density_to_json(g));
  j["marginals"] = marg;
  j["loglik"] = model.loglik;
  j["loglik_trace"] = model.loglik_trace;
  j["restarts_used"] = model.restarts_used;
  j["converged"] = model.converged;
  write_output(output, j.dump(2) + "\n");
  return 0;
}

int cmd_verify(const std::string& fit_path, const std::string& data_path,
               bool weighted, double tol, const std::string& output) {
  std::ifstream in(fit_path);
  if (!in) throw ParseError("cannot open '" + fit_path + "'", 0);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad fit JSON: ") + e.what(), 0);
  }
  const PiecewiseLogLinear d = density_from_json(j);
  const WeightedSample sample = load_sample(data_path, weighted);
  const CharacterizationReport rep = verify_characterization(d, StepCdf(sample), tol);
  nlohmann::json out;
  out["max_excess"] = rep.max_excess;
  out["max_knot_abs"] = rep.max_knot_abs;
  out["tol"] = rep.tol;
  out["pass"] = rep.pass;
  write_output(output, out.dump(2) + "\n");
  return rep.pass ? 0 : 5;
}

int cmd_reproduce(const std::string& name, std::uint64_t seed) {
  const ExperimentReport rep = run_experiment(name, seed);
  std::printf("%-16s target=%.6g computed=%.6g tolerance=%.6g  %s  (%.2fs)\n",
              rep.name.c_str(), rep.target, rep.computed, rep.tolerance,
              rep.pass ? "PASS" : "FAIL", rep.seconds);
  std::printf("  %s\n", rep.detail.c_str());
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"log-concave density estimation on the real line"};
  app.require_subcommand(1);

  std::string input, output, grid, format = "csv", name, fit_path, data_path;
  bool weighted = false;
  double tol_kkt = 1e-8, tol_verify = 1e-6;
  long n = 1;
  std::uint64_t seed = 0;
  int restarts = 10;

  auto* fit_cmd = app.add_subcommand("fit", "fit the log-concave MLE to data");
  fit_cmd->add_option("input", input, "one value per line")->required();
  fit_cmd->add_option("-o,--output", output, "output path (default stdout)");
  fit_cmd->add_flag("--weights", weighted, "input rows are 'value,weight'");
  fit_cmd->add_option("--tol-kkt", tol_kkt, "optimality tolerance")
      ->check(CLI::PositiveNumber);

  auto* eval_cmd = app.add_subcommand("eval", "tabulate density and CDF of a fit");
  eval_cmd->add_option("fit", fit_path, "fit JSON")->required();
  eval_cmd->add_option("--grid", grid, "min:max:count")->required();
  eval_cmd->add_option("--format", format, "csv or json");
  eval_cmd->add_option("-o,--output", output, "output path");

  auto* sample_cmd = app.add_subcommand("sample", "draw from a fitted density");
  sample_cmd->add_option("fit", fit_path, "fit JSON")->required();
  sample_cmd->add_option("-n", n, "number of draws")
      ->required()
      ->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", seed, "random seed");
  sample_cmd->add_option("-o,--output", output, "output path");

  auto* smooth_cmd = app.add_subcommand("smooth", "fit and smooth by the moment gap");
  smooth_cmd->add_option("input", input, "one value per line")->required();
  smooth_cmd->add_flag("--weights", weighted, "input rows are 'value,weight'");
  smooth_cmd->add_option("--grid", grid, "emit x,f rows on this grid instead of JSON");
  smooth_cmd->add_option("-o,--output", output, "output path");

  auto* radial_cmd = app.add_subcommand("radial", "spherically symmetric estimate");
  radial_cmd->add_option("input", input, "CSV matrix, one point per row")->required();
  radial_cmd->add_option("-o,--output", output, "output path");

  auto* ica_cmd = app.add_subcommand("ica", "independent component fit");
  ica_cmd->add_option("input", input, "CSV matrix, one point per row")->required();
  ica_cmd->add_option("--restarts", restarts, "random restarts")
      ->check(CLI::PositiveNumber);
  ica_cmd->add_option("--seed", seed, "random seed");
  ica_cmd->add_option("-o,--output", output, "output path");

  auto* verify_cmd =
      app.add_subcommand("verify", "check a fit against its data by the CDF test");
  verify_cmd->add_option("fit", fit_path, "fit JSON")->required();
  verify_cmd->add_option("data", data_path, "original data file")->required();
  verify_cmd->add_flag("--weights", weighted, "data rows are 'value,weight'");
  verify_cmd->add_option("--tol", tol_verify, "verification tolerance")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("-o,--output", output, "output path");

  auto* repro_cmd = app.add_subcommand("reproduce", "run a named experiment");
  repro_cmd->add_option("name", name, "experiment name")->required();
  repro_cmd->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  try {
    if (*fit_cmd) return cmd_fit(input, output, weighted, tol_kkt);
    if (*eval_cmd) return cmd_eval(fit_path, grid, format, output);
    if (*sample_cmd) return cmd_sample(fit_path, n, seed, output);
    if (*smooth_cmd) return cmd_smooth(input, output, weighted, grid);
    if (*radial_cmd) return cmd_radial(input, output);
    if (*ica_cmd) return cmd_ica(input, output, restarts, seed);
    if (*verify_cmd) return cmd_verify(fit_path, data_path, weighted, tol_verify, output);
    if (*repro_cmd) return cmd_reproduce(name, seed);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ExistenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const SolverFailure& e) {
    std::fprintf(stderr, "error: %s (iterations=%d, residual=%g)\n", e.what(),
                 e.iterations(), e.residual());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
