#include "cli/verify.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "schwartz/schwartz.hpp"

namespace schwartz::cli {

namespace {

using C = std::complex<double>;
using std::numbers::pi;

using Suite = std::function<void(std::vector<Check>&, ProbeGenerator<double>&)>;

void record(std::vector<Check>& out, const std::string& suite, std::string name,
            double value, double tolerance) {
  out.push_back({suite, std::move(name), value, tolerance, value <= tolerance});
}

/// 0 when `f` throws E, 1 otherwise.
template <typename E, typename F>
double fails_unless_throws(F&& f) {
  try {
    f();
  } catch (const E&) {
    return 0;
  }
  return 1;
}

Grid<double> line(std::size_t n, double L) { return make_grid<double>(1, {n}, {L}); }

GridDistribution<double> gaussian(const Grid<double>& g) {
  return tabulate(g, [](const Point<double>& x) { return std::exp(-x.squaredNorm()); });
}

SymbolFunction<double> p1() { return coordinate_symbol<double>(1, 0); }
SymbolFunction<double> cos_p() {
  return {1, [](std::span<const double> p) { return C(std::cos(p[0])); }, "cos(p)"};
}
SymbolFunction<double> minus_ip() { return C(0, -1) * p1(); }
SymbolFunction<double> helmholtz() { return constant_symbol<double>(1, 1.0) + p1() * p1(); }

void identity_suite(std::vector<Check>& out, ProbeGenerator<double>& probes) {
  const std::string s = "identity";
  const auto g = line(256, 8.0);
  const auto v = fourier_family(g);
  const auto u = gaussian(g);
  record(out, s, "fourier reconstruction of gaussian", relative_max_error(superpose(coordinates(u, v), v), u), 1e-10);
  double worst = 0;
  for (int t = 0; t < 8; ++t) {
    const auto w = probes.bandlimited(g);
    worst = std::max(worst, relative_max_error(superpose(coordinates(w, v), v), w));
  }
  record(out, s, "fourier reconstruction of 8 probes", worst, 1e-10);
  const auto d = dirac_family(g);
  const auto w = probes.white(g);
  record(out, s, "dirac coordinates are the identity", relative_max_error(coordinates(w, d), w), 1e-14);
  const auto g2 = make_grid<double>(2, {32, 32}, {6.0, 6.0});
  const auto u2 = gaussian(g2);
  const auto v2 = fourier_family(g2);
  record(out, s, "2d fourier reconstruction", relative_max_error(superpose(coordinates(u2, v2), v2), u2), 1e-10);
}

void homomorphism_suite(std::vector<Check>& out, ProbeGenerator<double>& probes) {
  const std::string s = "homomorphism";
  const auto g = line(128, 8.0);
  const auto v = fourier_family(g);
  const auto mu = spectral_distribution(v);
  const auto f = p1() * p1(), h = cos_p();
  double worst = 0, lin = 0;
  for (int t = 0; t < 8; ++t) {
    const auto u = probes.bandlimited(g);
    const auto lhs = as_operator(mu.evaluate(f * h))(u);
    const auto rhs = as_operator(mu.evaluate(f))(as_operator(mu.evaluate(h))(u));
    worst = std::max(worst, relative_max_error(lhs, rhs));
    const auto sum = as_operator(mu.evaluate(f + h))(u);
    lin = std::max(lin, relative_max_error(sum, as_operator(mu.evaluate(f))(u) + as_operator(mu.evaluate(h))(u)));
  }
  record(out, s, "mu(f g) = mu(f) mu(g), f=p^2, g=cos p", worst, 1e-10);
  record(out, s, "mu(f + g) = mu(f) + mu(g)", lin, 1e-10);
  const auto unit = compare_operators(as_operator(mu.evaluate(constant_symbol<double>(1, 1.0))),
                                      identity_operator<double>(), v, probes, 1e-10);
  record(out, s, "mu(1) = identity", std::max(unit.max_member_residual, unit.max_probe_residual), 1e-10);
  const auto md = spectral_distribution(dirac_family(g));
  const auto fx = constant_symbol<double>(1, 1.0) + p1() * p1();
  const auto u = probes.white(g);
  record(out, s, "dirac measure is multiplication",
         relative_max_error(as_operator(md.evaluate(fx))(u), multiplication_operator(fx)(u)), 1e-14);
}

void eigen_suite(std::vector<Check>& out, ProbeGenerator<double>& probes) {
  const std::string s = "eigen";
  const auto g = line(256, pi);
  const auto v = fourier_family(g);
  const auto D = oracle::finite_difference(partial<double>(1, 0), g, 4).as_operator();
  record(out, s, "fd derivative diagonal on |p| <= 4",
         is_eigenfamily(D, v, minus_ip(), 1e-4, index_band(v.index_grid(), 4.0)).max_residual, 1e-4);
  record(out, s, "d/dx has eigenvalues -ip",
         is_eigenfamily(differential_operator(partial<double>(1, 0)), v, minus_ip(), 1e-10).max_residual, 1e-10);

  const auto g8 = line(128, 8.0);
  const auto v8 = fourier_family(g8);
  const auto a = minus_ip();
  double expansion = 0;
  for (int t = 0; t < 4; ++t) {
    const auto u = probes.bandlimited(g8);
    const auto lhs = coordinates(spectral_apply(a, v8, u), v8);
    const auto rhs = as_distribution(eigenspectrum_measure(u, v8, a).evaluate(spectrum_identity<double>()));
    expansion = std::max(expansion, relative_max_error(lhs, rhs));
  }
  record(out, s, "coordinates of A(u) = eigenspectrum measure at j_S", expansion, 1e-12);
  const auto cmp = compare_operators(as_operator(integrate_measure(operator_spectral_measure(a, v8))),
                                     identity_operator<double>(), v8, probes, 1e-10, 8);
  record(out, s, "operator spectral measure integrates to identity",
         std::max(cmp.max_member_residual, cmp.max_probe_residual), 1e-10);
  const auto dense = oracle::dense_from_diagonal(v8, a);
  double oracle_gap = 0;
  for (int t = 0; t < 16; ++t) {
    const auto u = probes.bandlimited(g8);
    oracle_gap = std::max(oracle_gap, max_norm(dense(u) - spectral_apply(a, v8, u)) / max_norm(u));
  }
  record(out, s, "dense oracle matches spectral apply", oracle_gap, 1e-12);
}

void green_suite(std::vector<Check>& out, ProbeGenerator<double>&) {
  const std::string s = "green";
  const auto g = line(256, 20.0);
  const auto lambda = fourier_family(g);
  const auto mu = left_inverse_family(lambda);
  const auto prod = family_product(mu, lambda);
  const auto phi = tabulate(g, [](const Point<double>& x) { return std::exp(-x[0] * x[0] / 8); });
  double pairing_gap = 0;
  for (std::size_t p : spread_indices(g)) pairing_gap = std::max(pairing_gap, std::abs(pairing(member(prod, p), phi) - phi[p]));
  record(out, s, "left inverse pairs like point evaluation", pairing_gap, 1e-8);
  const auto result = green_family(lambda, helmholtz(), mu);
  record(out, s, "weak residual of (I - d^2) green family", result.max_residual(), 1e-6);
  const auto delta = dirac_family(g);
  double consistency = 0;
  for (std::size_t p : spread_indices(g))
    consistency = std::max(consistency, relative_max_error(solve(lambda, helmholtz(), member(delta, p)).solution,
                                                           member(result.family, p)));
  record(out, s, "green member = solve with delta datum", consistency, 1e-12);
  record(out, s, "d/dx is not invertible",
         fails_unless_throws<NotInvertible>([&] { (void)green_family(lambda, minus_ip(), mu); }), 0);
}

void solver_suite(std::vector<Check>& out, ProbeGenerator<double>& probes) {
  const std::string s = "solver";
  const auto g = line(64, pi);
  const auto v = fourier_family(g);
  const auto sin_x = tabulate(g, [](const Point<double>& x) { return std::sin(x[0]); });
  const auto cos_x = tabulate(g, [](const Point<double>& x) { return std::cos(x[0]); });
  record(out, s, "u' = sin gives -cos", relative_max_error(solve(v, minus_ip(), sin_x).solution, C(-1) * cos_x), 1e-10);
  const auto one = GridDistribution<double>(g, Samples<double>::Ones(64));
  record(out, s, "u' = 1 is not divisible",
         fails_unless_throws<NotDivisible>([&] { (void)solve(v, minus_ip(), one); }), 0);

  const auto g8 = line(128, 8.0);
  const auto v8 = fourier_family(g8);
  const auto d = gaussian(g8);
  const auto spec = helmholtz_identity_minus_laplacian<double>(1);
  const auto r = solve(v8, helmholtz(), d);
  record(out, s, "(I - d^2) gaussian residual", r.relative_residual, 1e-10);
  record(out, s, "(I - d^2) agrees with order-2 fd solve",
         relative_max_error(oracle::finite_difference_solve(spec, d, 2), r.solution), 1e-3);
  double round_trip = 0, representation = 0;
  const auto as = sample(helmholtz(), v8.index_grid());
  for (int t = 0; t < 4; ++t) {
    const auto datum = probes.bandlimited(g8);
    const auto u = solve(v8, helmholtz(), datum).solution;
    round_trip = std::max(round_trip, relative_l2_error(spectral_apply(helmholtz(), v8, u), datum));
    const Samples<double> lhs = as.cwiseProduct(coordinates(u, v8).samples());
    const auto rhs = coordinates(datum, v8);
    representation = std::max(representation, relative_max_error(GridDistribution<double>(v8.index_grid(), lhs), rhs));
  }
  record(out, s, "round trip A(solve(d)) = d", round_trip, 1e-10);
  record(out, s, "a [u|v] = [d|v]", representation, 1e-12);
}

const std::vector<std::pair<std::string, Suite>>& suites() {
  static const std::vector<std::pair<std::string, Suite>> all = {
      {"identity", identity_suite},
      {"homomorphism", homomorphism_suite},
      {"eigen", eigen_suite},
      {"green", green_suite},
      {"solver", solver_suite},
  };
  return all;
}

std::string scientific(double x) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::scientific, 2);
  return ec == std::errc() ? std::string(buf.data(), ptr) : std::string("?");
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, _] : suites()) n.push_back(name);
    return n;
  }();
  return names;
}

bool is_suite(const std::string& name) {
  if (name == "all") return true;
  for (const auto& n : suite_names())
    if (n == name) return true;
  return false;
}

std::vector<Check> run_suite(const std::string& name, std::uint64_t seed) {
  if (!is_suite(name)) throw std::invalid_argument("unknown suite '" + name + "'");
  std::vector<Check> out;
  for (std::size_t i = 0; i < suites().size(); ++i) {
    const auto& [suite, fn] = suites()[i];
    if (name != "all" && name != suite) continue;
    // Each suite gets its own stream so that suites do not perturb each other.
    ProbeGenerator<double> probes(seed + i);
    try {
      fn(out, probes);
    } catch (const std::exception& e) {
      out.push_back({suite, std::string("aborted: ") + e.what(), 1, 0, false});
    }
  }
  return out;
}

std::string format_table(const std::vector<Check>& checks) {
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.suite.size() + 2 + c.name.size());
  std::string out;
  for (const auto& c : checks) {
    std::string label = c.suite + "  " + c.name;
    label.resize(width, ' ');
    out += (c.passed ? "PASS  " : "FAIL  ") + label + "  " + scientific(c.value) + " <= " + scientific(c.tolerance) + "\n";
  }
  std::size_t passed = 0;
  for (const auto& c : checks) passed += c.passed;
  out += std::to_string(passed) + "/" + std::to_string(checks.size()) + " checks passed\n";
  return out;
}

nlohmann::json checks_json(const std::vector<Check>& checks, std::uint64_t seed) {
  nlohmann::json rows = nlohmann::json::array();
  bool all = true;
  for (const auto& c : checks) {
    rows.push_back({{"suite", c.suite}, {"name", c.name}, {"value", c.value},
                    {"tolerance", c.tolerance}, {"passed", c.passed}});
    all = all && c.passed;
  }
  return {{"seed", seed}, {"passed", all}, {"checks", rows}};
}

}  // namespace schwartz::cli
