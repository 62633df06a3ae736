#include "cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace schwartz::cli {

using nlohmann::json;
using C = std::complex<double>;

namespace {

double parse_number(std::string_view s, const std::string& context) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(context + ": cannot parse number '" + std::string(s) + "'");
  return v;
}

const json& require(const json& j, const char* key, const std::string& context) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(context + ": missing \"" + key + "\"");
  return j.at(key);
}

std::string kind_of(const json& j, const std::string& context) {
  const json& k = require(j, "kind", context);
  if (!k.is_string()) throw ConfigError(context + ": \"kind\" must be a string");
  return k.get<std::string>();
}

double number_field(const json& j, const char* key, const std::string& context,
                    std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(context + ": missing \"" + key + "\"");
  }
  if (!j.at(key).is_number()) throw ConfigError(context + ": \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

std::size_t axis_field(const json& j, std::size_t dim, const std::string& context) {
  if (!j.contains("axis")) return 0;
  const json& a = j.at("axis");
  if (!a.is_number_unsigned() || a.get<std::size_t>() >= dim)
    throw ConfigError(context + ": \"axis\" must be an integer in [0, " + std::to_string(dim) + ")");
  return a.get<std::size_t>();
}

/// A point given as a number (1D) or an array of length dim.
Point<double> parse_point(const json& j, std::size_t dim, const std::string& context) {
  Point<double> p(static_cast<Eigen::Index>(dim));
  if (j.is_number() && dim == 1) {
    p[0] = j.get<double>();
    return p;
  }
  if (!j.is_array() || j.size() != dim)
    throw ConfigError(context + ": expected a point with " + std::to_string(dim) + " coordinates");
  for (std::size_t i = 0; i < dim; ++i) {
    if (!j[i].is_number()) throw ConfigError(context + ": point coordinates must be numbers");
    p[Eigen::Index(i)] = j[i].get<double>();
  }
  return p;
}

std::vector<unsigned> parse_multi_index(const json& j, std::size_t dim, const std::string& context) {
  if (!j.is_array() || j.size() != dim)
    throw ConfigError(context + ": multi-index must be an array of length " + std::to_string(dim));
  std::vector<unsigned> out;
  for (const auto& e : j) {
    if (!e.is_number_unsigned()) throw ConfigError(context + ": multi-index entries must be non-negative integers");
    out.push_back(e.get<unsigned>());
  }
  return out;
}

GridDistribution<double> read_samples(const std::filesystem::path& path, const Grid<double>& grid) {
  std::ifstream in(path);
  if (!in) throw ConfigError("datum file '" + path.string() + "' cannot be opened");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("datum file '" + path.string() + "' is empty");
  const std::size_t columns = grid.dim() + 2;
  Samples<double> s(static_cast<Eigen::Index>(grid.size()));
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (row >= grid.size()) throw ConfigError("datum file has more rows than grid points");
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) fields.push_back(parse_number(cell, "datum file row " + std::to_string(row + 1)));
    if (fields.size() != columns)
      throw ConfigError("datum file row " + std::to_string(row + 1) + ": expected " +
                        std::to_string(columns) + " columns");
    const Point<double> x = grid.point(row);
    for (std::size_t i = 0; i < grid.dim(); ++i)
      if (std::abs(fields[i] - x[Eigen::Index(i)]) > 1e-6 * grid.spacing(i))
        throw ConfigError("datum file row " + std::to_string(row + 1) + " is not at grid node " +
                          std::to_string(row));
    s[Eigen::Index(row)] = C(fields[grid.dim()], fields[grid.dim() + 1]);
    ++row;
  }
  if (row != grid.size())
    throw ConfigError("datum file has " + std::to_string(row) + " rows, grid has " +
                      std::to_string(grid.size()) + " points");
  try {
    return {grid, s};
  } catch (const InvalidDistribution& e) {
    throw ConfigError(std::string("datum file: ") + e.what());
  }
}

}  // namespace

double parse_extent(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw ConfigError("grid: half extent must be a number or a string like \"pi\"");
  const std::string s = j.get<std::string>();
  const auto at = s.find("pi");
  if (at == std::string::npos) return parse_number(s, "grid half extent");
  std::string_view before(s.data(), at), after(s.data() + at + 2, s.size() - at - 2);
  while (!before.empty() && (before.back() == '*' || before.back() == ' ')) before.remove_suffix(1);
  double v = std::numbers::pi;
  if (!before.empty()) v *= parse_number(before, "grid half extent");
  while (!after.empty() && after.front() == ' ') after.remove_prefix(1);
  if (!after.empty()) {
    if (after.front() != '/') throw ConfigError("grid: cannot parse half extent '" + s + "'");
    after.remove_prefix(1);
    v /= parse_number(after, "grid half extent");
  }
  return v;
}

std::complex<double> parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && j.contains("re"))
    return {j.at("re").get<double>(), j.value("im", 0.0)};
  throw ConfigError("expected a complex number: x, [re, im] or {\"re\": x, \"im\": y}");
}

Grid<double> parse_grid(const json& j) {
  const std::string ctx = "grid";
  const json& counts = require(j, "counts", ctx);
  const json& extents = require(j, "half_extents", ctx);
  if (!counts.is_array() || !extents.is_array())
    throw ConfigError("grid: \"counts\" and \"half_extents\" must be arrays");
  const std::size_t dim = j.contains("dim") ? j.at("dim").get<std::size_t>() : counts.size();
  std::vector<std::size_t> n;
  std::vector<double> L;
  for (const auto& c : counts) {
    if (!c.is_number_unsigned()) throw ConfigError("grid: counts must be positive integers");
    n.push_back(c.get<std::size_t>());
  }
  for (const auto& e : extents) L.push_back(parse_extent(e));
  try {
    return make_grid<double>(dim, n, L);
  } catch (const InvalidGrid& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

DifferentialOperatorSpec<double> parse_differential(const json& terms, std::size_t dim) {
  if (!terms.is_array()) throw ConfigError("differential: \"terms\" must be an array");
  DifferentialOperatorSpec<double> spec(dim);
  for (const auto& t : terms)
    spec.add(parse_multi_index(require(t, "index", "differential term"), dim, "differential term"),
             parse_complex(require(t, "coeff", "differential term")));
  return spec;
}

SymbolFunction<double> parse_symbol(const json& j, std::size_t arity) {
  const std::string ctx = "symbol";
  const std::string kind = kind_of(j, ctx);
  if (kind == "constant") return constant_symbol<double>(arity, parse_complex(require(j, "value", ctx)));
  if (kind == "polynomial") {
    const json& terms = require(j, "terms", ctx);
    if (!terms.is_array()) throw ConfigError("symbol: \"terms\" must be an array");
    SymbolFunction<double> sum = constant_symbol<double>(arity, 0.0);
    for (const auto& t : terms) {
      const auto idx = parse_multi_index(require(t, "index", ctx), arity, ctx);
      SymbolFunction<double> term = constant_symbol<double>(arity, parse_complex(require(t, "coeff", ctx)));
      for (std::size_t i = 0; i < arity; ++i)
        for (unsigned k = 0; k < idx[i]; ++k) term = term * coordinate_symbol<double>(arity, i);
      sum = sum + term;
    }
    return sum;
  }
  if (kind == "cos" || kind == "sin") {
    const double k = number_field(j, "k", ctx, 1.0);
    const std::size_t axis = axis_field(j, arity, ctx);
    const bool is_cos = kind == "cos";
    return {arity,
            [=](std::span<const double> p) {
              return C(is_cos ? std::cos(k * p[axis]) : std::sin(k * p[axis]));
            },
            kind + "(" + std::to_string(k) + "*p" + std::to_string(axis) + ")"};
  }
  if (kind == "differential") return differential_symbol(parse_differential(require(j, "terms", ctx), arity));
  throw ConfigError("symbol: unknown kind '" + kind + "'");
}

OperatorChoice parse_operator(const json& j, const Grid<double>& grid) {
  const std::string ctx = "operator";
  const std::string kind = kind_of(j, ctx);
  if (kind == "differential") {
    const auto spec = parse_differential(require(j, "terms", ctx), grid.dim());
    const auto v = fourier_family(grid);
    return {kind, v, differential_symbol(spec, v.index_grid()), "differential " + spec.describe()};
  }
  if (kind == "diagonal") {
    const std::string fam = j.value("family", std::string("fourier"));
    SchwartzFamily<double> v = fam == "fourier" ? fourier_family(grid)
                               : fam == "dirac" ? dirac_family(grid)
                                                : throw ConfigError("operator: unknown family '" + fam + "'");
    auto a = parse_symbol(require(j, "symbol", ctx), v.index_dim());
    std::string desc = "diagonal in " + v.describe() + " with symbol " + a.descriptor();
    return {kind, std::move(v), std::move(a), std::move(desc)};
  }
  if (kind == "multiplication") {
    auto f = parse_symbol(require(j, "symbol", ctx), grid.dim());
    std::string desc = "multiplication by " + f.descriptor();
    return {kind, dirac_family(grid), std::move(f), std::move(desc)};
  }
  throw ConfigError("operator: unknown kind '" + kind + "'");
}

GridDistribution<double> parse_datum(const json& j, const Grid<double>& grid,
                                     const std::filesystem::path& base, std::string& description) {
  const std::string ctx = "datum";
  const std::string kind = kind_of(j, ctx);
  const std::size_t n = grid.dim();
  if (kind == "gaussian") {
    const double sigma = number_field(j, "sigma", ctx, 1.0);
    if (!(sigma > 0)) throw ConfigError("datum: gaussian sigma must be positive");
    const Point<double> c = j.contains("center") ? parse_point(j.at("center"), n, ctx)
                                                 : Point<double>(Point<double>::Zero(Eigen::Index(n)));
    description = "gaussian(sigma=" + std::to_string(sigma) + ")";
    return tabulate(grid, [&](const Point<double>& x) {
      return std::exp(-(x - c).squaredNorm() / (2 * sigma * sigma));
    });
  }
  if (kind == "sin" || kind == "cos") {
    const double k = number_field(j, "k", ctx, 1.0);
    const std::size_t axis = axis_field(j, n, ctx);
    description = kind + "(" + std::to_string(k) + "*x" + std::to_string(axis) + ")";
    const bool is_cos = kind == "cos";
    return tabulate(grid, [&](const Point<double>& x) {
      const double t = k * x[Eigen::Index(axis)];
      return is_cos ? std::cos(t) : std::sin(t);
    });
  }
  if (kind == "constant") {
    const C c = parse_complex(require(j, "value", ctx));
    description = "constant";
    return {grid, Samples<double>::Constant(Eigen::Index(grid.size()), c)};
  }
  if (kind == "delta") {
    const Point<double> p = parse_point(require(j, "point", ctx), n, ctx);
    try {
      const std::size_t k = grid.index_of(std::span<const double>(p.data(), n));
      description = "delta at node " + std::to_string(k);
      return member(dirac_family(grid), k);
    } catch (const IndexOffGrid& e) {
      throw ConfigError(std::string("datum: ") + e.what());
    }
  }
  if (kind == "file") {
    const json& path = require(j, "path", ctx);
    if (!path.is_string()) throw ConfigError("datum: \"path\" must be a string");
    std::filesystem::path p = path.get<std::string>();
    if (p.is_relative()) p = base / p;
    description = "file " + path.get<std::string>();
    return read_samples(p, grid);
  }
  throw ConfigError("datum: unknown kind '" + kind + "'");
}

DivisionPolicy parse_policy(const json& j) {
  DivisionPolicy p;
  if (j.is_null()) return p;
  if (!j.is_object()) throw ConfigError("policy must be an object");
  if (j.contains("zero_threshold")) {
    const json& z = j.at("zero_threshold");
    if (z.is_string() && (z == "inf" || z == "infinity"))
      p.zero_threshold = std::numeric_limits<double>::infinity();
    else
      p.zero_threshold = number_field(j, "zero_threshold", "policy");
  }
  p.relative_zero_threshold = j.value("relative_zero_threshold", p.relative_zero_threshold);
  p.residual_threshold = number_field(j, "residual_threshold", "policy", p.residual_threshold);
  if (!(p.zero_threshold > 0) || !(p.residual_threshold >= 0) || !std::isfinite(p.residual_threshold))
    throw ConfigError("policy: thresholds must satisfy zero_threshold > 0, residual_threshold >= 0");
  return p;
}

RunConfig parse_config(const json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    RunConfig cfg{parse_grid(require(j, "grid", "config")), {}, {}, {}, {}, {}};
    if (j.contains("operator")) cfg.op = parse_operator(j.at("operator"), cfg.grid);
    if (j.contains("datum")) cfg.datum = parse_datum(j.at("datum"), cfg.grid, base, cfg.datum_description);
    cfg.policy = parse_policy(j.value("policy", json()));
    std::filesystem::path out = ".";
    if (j.contains("output")) out = require(j.at("output"), "directory", "output").get<std::string>();
    cfg.output_dir = out.is_relative() ? base / out : out;
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ArityMismatch& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config '" + file.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + file.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(j, file.parent_path());
}

}  // namespace schwartz::cli
