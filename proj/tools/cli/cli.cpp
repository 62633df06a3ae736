#include "cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/config.hpp"
#include "cli/output.hpp"
#include "cli/verify.hpp"

namespace schwartz::cli {

namespace {

using nlohmann::json;

std::uint64_t seed_from_env() {
  const char* s = std::getenv("SCHWARTZ_SEED");
  if (!s || !*s) return 42;
  std::uint64_t v = 0;
  const std::string_view sv(s);
  const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (ec != std::errc() || ptr != sv.data() + sv.size())
    throw ConfigError("SCHWARTZ_SEED must be a non-negative integer, got '" + std::string(sv) + "'");
  return v;
}

json base_report(const std::string& command, const RunConfig& cfg) {
  json r;
  r["command"] = command;
  r["grid"] = grid_json(cfg.grid);
  if (cfg.op) r["operator"] = {{"kind", cfg.op->kind}, {"description", cfg.op->description}};
  if (cfg.datum) r["datum"] = cfg.datum_description;
  r["policy"] = policy_json(cfg.policy);
  return r;
}

const OperatorChoice& require_operator(const RunConfig& cfg) {
  if (!cfg.op) throw ConfigError("config has no \"operator\"");
  return *cfg.op;
}

const GridDistribution<double>& require_datum(const RunConfig& cfg) {
  if (!cfg.datum) throw ConfigError("config has no \"datum\"");
  return *cfg.datum;
}

void prepare_output(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.output_dir.string() + "'");
}

int cmd_solve(const std::string& config_path, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(config_path);
  const auto& op = require_operator(cfg);
  const auto& d = require_datum(cfg);
  prepare_output(cfg);
  json report = base_report("solve", cfg);
  const auto report_path = cfg.output_dir / "solve.json";
  try {
    const auto result = solve(op.family, op.symbol, d, cfg.policy);
    write_csv(cfg.output_dir / "solve.csv", result.solution);
    report["status"] = "ok";
    report["divisibility"] = {{"divisible", true}};
    report["residual"] = result.residual;
    report["relative_residual"] = result.relative_residual;
    report["outputs"] = {{"solution", "solve.csv"}};
    write_json(report_path, report);
    out << "solved: relative residual " << format_double(result.relative_residual) << "\n";
    return kOk;
  } catch (const NotDivisible& e) {
    report["status"] = "not_divisible";
    report["divisibility"] = {{"divisible", false},
                              {"worst_index", location_json(e.worst_index())},
                              {"offending_mass", e.offending_mass()}};
    write_json(report_path, report);
    err << "not divisible: " << e.what() << "\n";
    return kNotSolvable;
  }
}

Point<double> parse_index_point(const std::string& s, std::size_t dim) {
  Point<double> p(static_cast<Eigen::Index>(dim));
  std::stringstream ss(s);
  std::string cell;
  std::size_t i = 0;
  while (std::getline(ss, cell, ',')) {
    if (i >= dim) throw ConfigError("index '" + s + "' has more than " + std::to_string(dim) + " coordinates");
    double v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
      throw ConfigError("cannot parse index coordinate '" + cell + "'");
    p[Eigen::Index(i++)] = v;
  }
  if (i != dim) throw ConfigError("index '" + s + "' needs " + std::to_string(dim) + " coordinates");
  return p;
}

json residuals_json(const std::vector<WeakResidual>& rs) {
  json a = json::array();
  for (const auto& r : rs) a.push_back({{"flat", r.flat_index}, {"p", r.point}, {"residual", r.residual}});
  return a;
}

int cmd_green(const std::string& config_path, const std::vector<std::string>& indices,
              std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(config_path);
  const auto& op = require_operator(cfg);
  const auto& lambda = op.family;
  std::vector<std::size_t> flat;
  for (const auto& s : indices) {
    const Point<double> p = parse_index_point(s, lambda.space_dim());
    try {
      flat.push_back(lambda.space_grid().index_of(std::span<const double>(p.data(), lambda.space_dim())));
    } catch (const IndexOffGrid& e) {
      throw ConfigError(std::string("--index: ") + e.what());
    }
  }
  prepare_output(cfg);
  json report = base_report("green", cfg);
  report["probes"] = {{"kind", "gaussian"}, {"count", 8}, {"width_in_spacings", 4}};
  const auto report_path = cfg.output_dir / "green.json";
  const auto mu = left_inverse_family(lambda);

  std::optional<GreenFamilyResult<double>> result;
  try {
    result = green_family(lambda, op.symbol, mu, cfg.policy);
    report["construction"] = "inverse";
  } catch (const NotInvertible& e) {
    report["invertibility"] = {{"invertible", false},
                               {"worst_index", location_json(e.worst_index())},
                               {"min_abs", e.min_abs()}};
    try {
      result = green_family_divided(lambda, op.symbol, mu, cfg.policy);
      report["construction"] = "divided";
    } catch (const NotDivisible& d) {
      report["status"] = "not_solvable";
      report["divisibility"] = {{"divisible", false},
                                {"family_index", d.family_index()},
                                {"worst_index", location_json(d.worst_index())},
                                {"offending_mass", d.offending_mass()}};
      write_json(report_path, report);
      err << "symbol is not invertible (" << e.what() << ") and the left inverse is not divisible by it ("
          << d.what() << ")\n";
      return kNotSolvable;
    }
  }

  const GreenFamilyResult<double>& G = *result;
  auto probes = gaussian_probes(G.family.space_grid());
  const auto requested = weak_residuals(G.family, op.symbol, lambda, flat, probes);
  json members = json::array();
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const std::string file = "green_" + std::to_string(flat[i]) + ".csv";
    write_csv(cfg.output_dir / file, member(G.family, flat[i]));
    members.push_back({{"index", location_json(locate_index(lambda.space_grid(), flat[i]))},
                       {"file", file},
                       {"weak_residual", requested[i].residual}});
  }
  report["status"] = "ok";
  report["members"] = members;
  report["weak_residuals"] = residuals_json(G.residuals);
  report["max_weak_residual"] = G.max_residual();
  write_json(report_path, report);
  out << "green family: " << flat.size() << " member(s) written, max weak residual "
      << format_double(G.max_residual()) << "\n";
  return kOk;
}

int cmd_expand(const std::string& config_path, std::ostream& out) {
  const RunConfig cfg = load_config(config_path);
  const auto& op = require_operator(cfg);
  const auto& u = require_datum(cfg);
  prepare_output(cfg);
  const auto image = spectral_apply(op.symbol, op.family, u);
  const auto integrand =
      as_distribution(eigenspectrum_measure(u, op.family, op.symbol).evaluate(spectrum_identity<double>()));
  write_csv(cfg.output_dir / "expand_image.csv", image);
  write_csv(cfg.output_dir / "expand_coordinates.csv", integrand);
  json report = base_report("expand", cfg);
  report["status"] = "ok";
  report["index_grid"] = grid_json(op.family.index_grid());
  report["image_max_norm"] = max_norm(image);
  report["coordinates_max_norm"] = max_norm(integrand);
  report["outputs"] = {{"image", "expand_image.csv"}, {"coordinates", "expand_coordinates.csv"}};
  write_json(cfg.output_dir / "expand.json", report);
  out << "expanded: |A(u)|_max " << format_double(max_norm(image)) << "\n";
  return kOk;
}

int cmd_verify(const std::string& suite, const std::string& json_path, std::ostream& out,
               std::ostream& err) {
  if (!is_suite(suite)) {
    err << "unknown suite '" << suite << "'; expected one of:";
    for (const auto& n : suite_names()) err << " " << n;
    err << " all\n";
    return kConfigError;
  }
  const std::uint64_t seed = seed_from_env();
  const auto checks = run_suite(suite, seed);
  out << "seed " << seed << "\n" << format_table(checks);
  if (!json_path.empty()) write_json(json_path, checks_json(checks, seed));
  const bool ok = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral solves, expansions and Green families on periodic grids", "schwartz"};
  app.require_subcommand(1);

  std::string config, suite, json_path;
  std::vector<std::string> indices;

  auto* solve_cmd = app.add_subcommand("solve", "Solve A(u) = d for the configured operator and datum");
  solve_cmd->add_option("--config", config, "JSON run configuration")->required();

  auto* green_cmd = app.add_subcommand("green", "Build the Green family and write the requested members");
  green_cmd->add_option("--config", config, "JSON run configuration")->required();
  green_cmd->add_option("--index", indices, "Grid point(s) p, comma separated per axis")->required();

  auto* expand_cmd = app.add_subcommand("expand", "Apply the operator and write its eigen-coordinates");
  expand_cmd->add_option("--config", config, "JSON run configuration")->required();

  auto* verify_cmd = app.add_subcommand("verify", "Run a property suite: identity, homomorphism, eigen, green, solver, all");
  verify_cmd->add_option("suite", suite, "Suite name")->required();
  verify_cmd->add_option("--json", json_path, "Also write the results as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*solve_cmd) return cmd_solve(config, out, err);
    if (*green_cmd) return cmd_green(config, indices, out, err);
    if (*expand_cmd) return cmd_expand(config, out);
    if (*verify_cmd) return cmd_verify(suite, json_path, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace schwartz::cli
