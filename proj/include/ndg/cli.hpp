#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ndg/degeneracy.hpp"
#include "ndg/distributions.hpp"
#include "ndg/error.hpp"
#include "ndg/geometry.hpp"
#include "ndg/montecarlo.hpp"
#include "ndg/sample.hpp"
#include "ndg/spec_json.hpp"

namespace ndg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

// Round-trip representation of a double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& field, std::size_t line) {
  const std::string t = trim(field);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": not a number: \"" + t + "\"");
  return v;
}

// Header `x,y`, then one pair per row.
inline std::vector<RawPair> read_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, "empty CSV input");
  ++lineno;
  if (trim(line) != "x,y") throw Error(ErrorCode::ParseError, "CSV header must be \"x,y\"");
  std::vector<RawPair> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected two fields");
    rows.emplace_back(parse_number(line.substr(0, comma), lineno), parse_number(line.substr(comma + 1), lineno));
  }
  return rows;
}

inline std::string write_csv(const PairedSample& s) {
  std::string out = "x,y\n";
  for (std::size_t i = 0; i < s.size(); ++i) out += format_double(s.xs()[i]) + "," + format_double(s.ys()[i]) + "\n";
  return out;
}

struct SpecArgs {
  std::string name;
  std::string file;
  std::vector<double> weights;
  double w = 0.5;
  int depth = 8;

  void attach(CLI::App& sub) {
    sub.add_option("--spec", name, "builtin spec name");
    sub.add_option("--spec-file", file, "JSON spec file");
    sub.add_option("--weights", weights, "fig1b-weights piece weights")->delimiter(',');
    sub.add_option("--w", w, "two-segments diagonal weight");
    sub.add_option("--depth", depth, "fat-cantor depth");
  }

  [[nodiscard]] std::string describe() const { return name.empty() ? file : name; }

  [[nodiscard]] DistributionSpec resolve() const {
    if (name.empty() == file.empty()) throw CLI::ValidationError("exactly one of --spec and --spec-file is required");
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw Error(ErrorCode::ParseError, "cannot open spec file " + file);
      std::stringstream ss;
      ss << in.rdbuf();
      return spec_from_text(ss.str());
    }
    BuiltinParams p;
    if (!weights.empty()) p.weights = weights;
    p.w = w;
    p.depth = depth;
    return builtin_spec(name, p);
  }
};

inline Json header(const std::string& command, bool deterministic) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  if (!deterministic) j["generated_at"] = utc_timestamp();
  return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// d̂_tau(x, y) on a size×size grid spanning the sample's bounding box.
inline std::string d_tau_grid_csv(const PairedSample& s, std::size_t size) {
  const auto [xlo, xhi] = std::minmax_element(s.xs().begin(), s.xs().end());
  const auto [ylo, yhi] = std::minmax_element(s.ys().begin(), s.ys().end());
  const EmpiricalCdf fx(s.xs()), fy(s.ys());
  std::string out = "x,y,d_tau\n";
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b < size; ++b) {
      const double t = size > 1 ? static_cast<double>(a) / static_cast<double>(size - 1) : 0.0;
      const double u = size > 1 ? static_cast<double>(b) / static_cast<double>(size - 1) : 0.0;
      const double x = *xlo + t * (*xhi - *xlo);
      const double y = *ylo + u * (*yhi - *ylo);
      const double d = joint_ecdf_eval(s, x, y) - 0.5 * (ecdf_eval(fx, x) + ecdf_eval(fy, y));
      out += format_double(x) + "," + format_double(y) + "," + format_double(d) + "\n";
    }
  }
  return out;
}

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSpecName:
    case ErrorCode::BadParams:
    case ErrorCode::TooManyPoints: return kExitUsage;
    default: return kExitData;
  }
}

// Parses args (without the program name), runs the subcommand and writes its report to `out`.
// Nothing is written to `out` unless the whole report was produced.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank-correlation degeneracy toolkit", "ndg"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  bool deterministic = false;
  app.add_flag("--deterministic", deterministic, "omit the timestamp field");

  std::string format;
  std::uint64_t seed = 0;
  std::size_t n = 0, reps = 0, threads = 0;

  auto* sample_cmd = app.add_subcommand("sample", "draw a sample from a spec as CSV");
  SpecArgs sample_spec;
  sample_spec.attach(*sample_cmd);
  sample_cmd->add_option("--n", n, "sample size")->required()->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  sample_cmd->add_option("--seed", seed, "64-bit seed");
  sample_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* estimate_cmd = app.add_subcommand("estimate", "estimate tau, rho and their variance functionals");
  std::string input, tie_policy = "strict", grid_dump;
  double threshold = kDefaultDegeneracyThreshold;
  std::size_t grid_size = 50;
  estimate_cmd->add_option("--input", input, "CSV file with header x,y ('-' for stdin)")->required();
  estimate_cmd->add_option("--threshold", threshold, "degeneracy threshold")->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--tie-policy", tie_policy, "strict or midrank")->check(CLI::IsMember({"strict", "midrank"}));
  estimate_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"csv", "json"}));
  estimate_cmd->add_option("--grid-dump", grid_dump, "write a d_tau heatmap grid CSV to this path");
  estimate_cmd->add_option("--grid-size", grid_size, "grid points per axis")->check(CLI::Range(std::size_t{2}, std::size_t{2000}));

  auto* support_cmd = app.add_subcommand("support", "rectangle-witness and occupancy analysis of a spec's support");
  SpecArgs support_spec;
  support_spec.attach(*support_cmd);
  double resolution = 0.005, cell = 0.02, occupancy_cell = 0.1;
  support_cmd->add_option("--resolution", resolution, "support discretization spacing")->check(CLI::PositiveNumber);
  support_cmd->add_option("--cell", cell, "snap cell size")->check(CLI::PositiveNumber);
  support_cmd->add_option("--occupancy-cell", occupancy_cell, "occupancy grid cell size")->check(CLI::PositiveNumber);

  auto* mc_cmd = app.add_subcommand("mc", "replicated sampling: n·Var(tau_hat), n·Var(rho_hat)");
  SpecArgs mc_spec;
  mc_spec.attach(*mc_cmd);
  mc_cmd->add_option("--n", n, "sample size per replicate")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  mc_cmd->add_option("--reps", reps, "replicate count")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  mc_cmd->add_option("--seed", seed, "base seed");
  mc_cmd->add_option("--threads", threads, "worker threads (default NDG_THREADS or all cores)");
  mc_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"csv", "json"}));

  auto* curve_cmd = app.add_subcommand("curve", "scaled-variance trajectory over increasing n");
  SpecArgs curve_spec;
  curve_spec.attach(*curve_cmd);
  std::vector<std::size_t> n_list{500, 2000, 8000};
  curve_cmd->add_option("--n-list", n_list, "comma-separated increasing sample sizes")->delimiter(',');
  curve_cmd->add_option("--reps", reps, "replicates per size")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  curve_cmd->add_option("--seed", seed, "base seed");
  curve_cmd->add_option("--threads", threads, "worker threads");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  std::string report;
  try {
    if (sample_cmd->parsed()) {
      const auto spec = sample_spec.resolve();
      const auto s = draw(spec, n, seed);
      if (format == "json") {
        Json j = header("sample", deterministic);
        j["spec"] = sample_spec.describe();
        j["n"] = n;
        j["seed"] = seed;
        Json pts = Json::array();
        for (std::size_t i = 0; i < s.size(); ++i) pts.push_back({s.xs()[i], s.ys()[i]});
        j["points"] = std::move(pts);
        report = dump(j);
      } else {
        report = write_csv(s);
      }
    } else if (estimate_cmd->parsed()) {
      std::vector<RawPair> rows;
      if (input == "-") {
        rows = read_csv(std::cin);
      } else {
        std::ifstream in(input);
        if (!in) throw Error(ErrorCode::ParseError, "cannot open " + input);
        rows = read_csv(in);
      }
      const auto policy = tie_policy == "midrank" ? TiePolicy::midrank : TiePolicy::strict;
      const auto s = validate_sample(rows, policy);
      const auto r = degeneracy_report(s, threshold);
      auto cls = [](bool degenerate) { return degenerate ? "degenerate" : "nondegenerate"; };
      if (format == "csv") {
        report = "field,value\n";
        report += "n," + std::to_string(s.size()) + "\n";
        report += "tau_hat," + format_double(r.tau_hat) + "\n";
        report += "rho_hat," + format_double(r.rho_hat) + "\n";
        report += "sigma2_tau," + format_double(r.sigma2_tau) + "\n";
        report += "sigma2_rho," + format_double(r.sigma2_rho) + "\n";
        report += "d_tau_min," + format_double(r.d_tau_range.first) + "\n";
        report += "d_tau_max," + format_double(r.d_tau_range.second) + "\n";
        report += "d_rho_min," + format_double(r.d_rho_range.first) + "\n";
        report += "d_rho_max," + format_double(r.d_rho_range.second) + "\n";
        report += "threshold," + format_double(r.threshold_used) + "\n";
        report += std::string("classification_tau,") + cls(r.degenerate_tau) + "\n";
        report += std::string("classification_rho,") + cls(r.degenerate_rho) + "\n";
      } else {
        Json j = header("estimate", deterministic);
        j["n"] = s.size();
        j["tie_policy"] = tie_policy;
        j["ties_x"] = s.ties_in_x();
        j["ties_y"] = s.ties_in_y();
        j["tau_hat"] = r.tau_hat;
        j["rho_hat"] = r.rho_hat;
        j["sigma2_tau"] = r.sigma2_tau;
        j["sigma2_rho"] = r.sigma2_rho;
        j["d_tau_range"] = {r.d_tau_range.first, r.d_tau_range.second};
        j["d_rho_range"] = {r.d_rho_range.first, r.d_rho_range.second};
        j["threshold"] = r.threshold_used;
        j["classification_tau"] = cls(r.degenerate_tau);
        j["classification_rho"] = cls(r.degenerate_rho);
        report = dump(j);
      }
      if (!grid_dump.empty()) {
        std::ofstream g(grid_dump);
        if (!g) throw Error(ErrorCode::ParseError, "cannot write " + grid_dump);
        g << d_tau_grid_csv(s, grid_size);
      }
    } else if (support_cmd->parsed()) {
      const auto spec = support_spec.resolve();
      const auto pts = support_points(spec, resolution);
      const auto snapped = snap(pts, cell);
      const auto witness = find_rectangle_witness(snapped);
      const auto box = bounding_box(pts);
      Json j = header("support", deterministic);
      j["spec"] = support_spec.describe();
      j["method"] = "snapped-lattice";
      j["resolution"] = resolution;
      j["cell"] = cell;
      j["origin"] = {snapped.origin.x, snapped.origin.y};
      j["support_points"] = pts.size();
      j["snapped_points"] = snapped.points.size();
      if (witness) {
        j["witness"] = {{"corners", {{witness->x1, witness->y1}, {witness->x1, witness->y2},
                                     {witness->x2, witness->y1}, {witness->x2, witness->y2}}},
                        {"interior", {witness->interior_point.x, witness->interior_point.y}}};
      } else {
        j["witness"] = nullptr;
      }
      j["bbox"] = {{"x", {box.x0, box.x1}}, {"y", {box.y0, box.y1}}};
      j["occupancy_cell"] = occupancy_cell;
      const bool flat = !(box.x1 > box.x0) || !(box.y1 > box.y0);
      j["occupied_fraction"] = flat ? 0.0 : occupied_fraction(pts, occupancy_cell, box);
      report = dump(j);
    } else if (mc_cmd->parsed()) {
      const auto spec = mc_spec.resolve();
      const McConfig cfg{spec, n ? n : 2000, reps ? reps : 500, seed, threads};
      const auto r = replicate_statistics(cfg);
      if (format == "csv") {
        report = "replicate,tau,rho,sigma2_tau,sigma2_rho\n";
        for (std::size_t k = 0; k < r.taus.size(); ++k)
          report += std::to_string(k) + "," + format_double(r.taus[k]) + "," + format_double(r.rhos[k]) + "," +
                    format_double(r.sigma2_taus[k]) + "," + format_double(r.sigma2_rhos[k]) + "\n";
      } else {
        Json j = header("mc", deterministic);
        j["spec"] = mc_spec.describe();
        j["n"] = cfg.n;
        j["reps"] = cfg.reps;
        j["seed"] = seed;
        j["scaled_var_tau"] = r.scaled_var_tau;
        j["scaled_var_rho"] = r.scaled_var_rho;
        j["mean_sigma2_tau"] = r.mean_sigma2_tau;
        j["mean_sigma2_rho"] = r.mean_sigma2_rho;
        j["scaled_var_tau_se"] = r.scaled_var_tau_se;
        j["scaled_var_rho_se"] = r.scaled_var_rho_se;
        j["mean_sigma2_tau_se"] = r.mean_sigma2_tau_se;
        j["mean_sigma2_rho_se"] = r.mean_sigma2_rho_se;
        report = dump(j);
      }
    } else if (curve_cmd->parsed()) {
      const auto spec = curve_spec.resolve();
      const auto c = degeneracy_curve(spec, n_list, reps ? reps : 300, seed, threads);
      Json j = header("curve", deterministic);
      j["spec"] = curve_spec.describe();
      j["reps"] = reps ? reps : 300;
      j["seed"] = seed;
      Json pts = Json::array();
      for (const auto& p : c.points)
        pts.push_back({{"n", p.n}, {"scaled_var_tau", p.scaled_var_tau}, {"scaled_var_rho", p.scaled_var_rho}});
      j["points"] = std::move(pts);
      j["slope_tau"] = c.slope_tau;
      j["slope_rho"] = c.slope_rho;
      report = dump(j);
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  out << report;
  return kExitOk;
}

}  // namespace ndg::cli
