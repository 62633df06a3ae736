#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "schwartz/oracle.hpp"
#include "schwartz/solver.hpp"
#include "support/literal_sums.hpp"

using namespace schwartz;
using std::numbers::pi;
using C = std::complex<double>;

namespace {

Grid<double> line(std::size_t n, double L) { return make_grid<double>(1, {n}, {L}); }

GridDistribution<double> sin_k(const Grid<double>& g, double k = 1) {
  return tabulate(g, [k](const Point<double>& x) { return std::sin(k * x[0]); });
}
GridDistribution<double> cos_k(const Grid<double>& g, double k = 1) {
  return tabulate(g, [k](const Point<double>& x) { return std::cos(k * x[0]); });
}

SymbolFunction<double> minus_ip() { return C(0, -1) * coordinate_symbol<double>(1, 0); }

std::size_t node(const Grid<double>& g, double p) { return g.index_of(std::span<const double>(&p, 1)); }

}  // namespace

TEST(DifferentialSymbol, FirstDerivative) {
  const auto P = differential_symbol(partial<double>(1, 0));
  for (double p : {-3.0, 0.0, 0.5, 7.0}) EXPECT_EQ(P(p), C(0, -p));
}

TEST(DifferentialSymbol, IdentityMinusSecondDerivative) {
  const auto P = differential_symbol(helmholtz_identity_minus_laplacian<double>(1));
  for (double p : {-3.0, 0.0, 0.5, 7.0}) EXPECT_NEAR(std::abs(P(p) - C(1 + p * p)), 0.0, 1e-12);
  // Same eigenvalue as the FD matrix on a low mode, up to the stencil error.
  const auto g = line(512, pi);
  const auto v = fourier_family(g);
  const auto D = oracle::finite_difference(helmholtz_identity_minus_laplacian<double>(1), g, 4);
  const auto u = member_at(v, 3.0);
  EXPECT_LE(relative_max_error(D(u), P(3.0) * u), 1e-6);
}

TEST(DifferentialSymbol, EmptySpecIsZero) {
  const auto P = differential_symbol(DifferentialOperatorSpec<double>(2));
  const Point<double> p = Point<double>::Constant(2, 1.5);
  EXPECT_EQ(P(p), C(0));
}

TEST(DifferentialSymbol, MixedPartialAndArity) {
  const auto spec = DifferentialOperatorSpec<double>(2).add({1, 1}, C(2, 0)).add({0, 3}, 1);
  const auto P = differential_symbol(spec);
  Point<double> p(2);
  p << 2.0, -1.0;
  // 2 (-i)^2 p0 p1 + (-i)^3 p1^3 = -2 p0 p1 + i p1^3
  EXPECT_NEAR(std::abs(P(p) - C(4, -1)), 0.0, 1e-14);
  EXPECT_THROW(differential_symbol(spec, line(8, 1.0)), ArityMismatch);
}

TEST(Divide, SineByDerivativeSymbol) {
  const auto g = line(64, pi);
  const auto v = fourier_family(g);
  const auto q = divide(coordinates(sin_k(g), v), minus_ip(), DivisionPolicy{});
  const auto& index = v.index_grid();
  // sin has coordinates +-1/(2i dp) at p = -+1; the quotient by -ip is -1/(2 dp).
  const double dp = index.spacing(0);
  for (std::size_t j = 0; j < index.size(); ++j) {
    const double p = index.point(j)[0];
    const C expected = (std::abs(std::abs(p) - 1) < 1e-9) ? C(-0.5 / dp) : C(0);
    EXPECT_NEAR(std::abs(q[j] - expected), 0.0, 1e-12) << p;
  }
  EXPECT_NEAR(q[node(index, 1.0)].real() * dp, -0.5, 1e-13);
  EXPECT_NEAR(q[node(index, -1.0)].real() * dp, -0.5, 1e-13);
}

TEST(Divide, ConstantByDerivativeSymbolFailsAtOrigin) {
  const auto g = line(64, pi);
  const auto v = fourier_family(g);
  const auto one = GridDistribution<double>(g, Samples<double>::Ones(64));
  try {
    (void)divide(coordinates(one, v), minus_ip(), DivisionPolicy{});
    FAIL() << "expected NotDivisible";
  } catch (const NotDivisible& e) {
    EXPECT_EQ(e.worst_index().flat, node(v.index_grid(), 0.0));
    ASSERT_EQ(e.worst_index().point.size(), 1u);
    EXPECT_EQ(e.worst_index().point[0], 0.0);
    EXPECT_GT(e.offending_mass(), 0.1);
  }
}

TEST(Divide, UnitSymbolReturnsDatum) {
  const auto g = line(32, 2.0);
  ProbeGenerator<double> probes(3);
  const auto d = probes.white(g);
  const auto q = divide(d, constant_symbol<double>(1, 1.0), DivisionPolicy{});
  EXPECT_EQ(max_norm(q - d), 0.0);
}

TEST(Divide, InfiniteZeroThresholdRejectsAnyMass) {
  const auto g = line(16, 1.0);
  ProbeGenerator<double> probes(4);
  DivisionPolicy policy;
  policy.zero_threshold = std::numeric_limits<double>::infinity();
  EXPECT_THROW(divide(probes.white(g), constant_symbol<double>(1, 1.0), policy), NotDivisible);
  const auto q = divide(GridDistribution<double>::zeros(g), constant_symbol<double>(1, 1.0), policy);
  EXPECT_EQ(max_norm(q), 0.0);
}

TEST(Divide, AbsoluteThreshold) {
  const auto g = line(8, 1.0);
  DivisionPolicy policy;
  policy.relative_zero_threshold = false;
  policy.zero_threshold = 0.5;
  Samples<double> a(8), d(8);
  a << 0.1, 1, 2, 3, 4, 5, 6, 0.4;
  d << 0, 1, 1, 1, 1, 1, 1, 0;
  const auto q = divide(GridDistribution<double>(g, d), a, policy);
  EXPECT_EQ(q[0], C(0));
  EXPECT_EQ(q[7], C(0));
  EXPECT_EQ(q[2], C(0.5));
  d[7] = 1;
  EXPECT_THROW(divide(GridDistribution<double>(g, d), a, policy), NotDivisible);
}

TEST(Solve, AntiderivativeOfSine) {
  const auto g = line(64, pi);
  const auto r = solve(fourier_family(g), minus_ip(), sin_k(g));
  EXPECT_LE(relative_max_error(r.solution, C(-1) * cos_k(g)), 1e-10);
  EXPECT_LE(r.relative_residual, 1e-12);
}

TEST(Solve, HelmholtzGaussianAgainstFiniteDifferences) {
  const auto g = line(128, 8.0);
  const auto d = literal::gaussian_1d(g);
  const auto spec = helmholtz_identity_minus_laplacian<double>(1);
  const auto r = solve(fourier_family(g), differential_symbol(spec), d);
  EXPECT_LE(r.relative_residual, 1e-10);
  const auto fd = oracle::finite_difference_solve(spec, d, 2);
  EXPECT_LE(relative_max_error(fd, r.solution), 1e-3);
}

TEST(Solve, UnitSymbolIsIdentity) {
  const auto g = line(32, 2.0);
  ProbeGenerator<double> probes(5);
  const auto d = probes.white(g);
  const auto r = solve(fourier_family(g), constant_symbol<double>(1, 1.0), d);
  EXPECT_LE(relative_max_error(r.solution, d), 1e-13);
  const auto rd = solve(dirac_family(g), constant_symbol<double>(1, 1.0), d);
  EXPECT_EQ(max_norm(rd.solution - d), 0.0);
}

TEST(Solve, RequiresBasis) {
  const auto g = line(8, 1.0);
  const auto k = kernel_family(g, g, KernelMatrix<double>::Identity(8, 8));
  EXPECT_THROW(solve(k, constant_symbol<double>(1, 1.0), GridDistribution<double>::zeros(g)),
               NotABasis);
  EXPECT_THROW(solve(fourier_family(g), constant_symbol<double>(2, 1.0),
                     GridDistribution<double>::zeros(g)),
               ArityMismatch);
}

TEST(SolvePde, Examples) {
  const auto g = line(64, pi);
  const auto r1 = solve_pde(partial<double>(1, 0), sin_k(g));
  EXPECT_LE(relative_max_error(r1.solution, C(-1) * cos_k(g)), 1e-10);
  const auto r2 = solve_pde(helmholtz_identity_minus_laplacian<double>(1), cos_k(g));
  EXPECT_LE(relative_max_error(r2.solution, C(0.5) * cos_k(g)), 1e-12);
  const auto one = GridDistribution<double>(g, Samples<double>::Ones(64));
  EXPECT_THROW(solve_pde(partial<double>(1, 0), one), NotDivisible);
}

TEST(SolvePde, TwoDimensionalPoisson) {
  const auto g = make_grid<double>(2, {32, 32}, {pi, pi});
  const auto d = tabulate(g, [](const Point<double>& x) { return std::sin(x[0]) * std::cos(2 * x[1]); });
  const auto spec = DifferentialOperatorSpec<double>(2).add({2, 0}, -1).add({0, 2}, -1);
  const auto r = solve_pde(spec, d);
  EXPECT_LE(relative_max_error(r.solution, C(0.2) * d), 1e-12);
}

TEST(SolverProperties, EigenRepresentationIdentity) {
  ProbeGenerator<double> probes(31);
  const auto g = line(128, 8.0);
  const auto v = fourier_family(g);
  const std::vector<SymbolFunction<double>> symbols = {
      minus_ip(),
      differential_symbol(helmholtz_identity_minus_laplacian<double>(1)),
      SymbolFunction<double>(1, [](std::span<const double> p) { return C(2 + std::cos(p[0]), p[0]); }, "2+cos p+ip"),
  };
  for (const auto& a : symbols) {
    for (int trial = 0; trial < 3; ++trial) {
      // Remove the zero mode so that every datum is divisible.
      Samples<double> dv = coordinates(probes.bandlimited(g), v).samples();
      const auto as = sample(a, v.index_grid());
      for (Eigen::Index j = 0; j < dv.size(); ++j)
        if (std::abs(as[j]) <= 1e-12 * as.cwiseAbs().maxCoeff()) dv[j] = 0;
      const auto d = superpose(GridDistribution<double>(v.index_grid(), dv), v);
      const auto r = solve(v, a, d);
      const auto cu = coordinates(r.solution, v);
      const auto cd = coordinates(d, v);
      const double eps = 1e-12 * as.cwiseAbs().maxCoeff();
      double worst = 0;
      for (std::size_t j = 0; j < cu.size(); ++j)
        if (std::abs(as[Eigen::Index(j)]) > eps)
          worst = std::max(worst, std::abs(as[Eigen::Index(j)] * cu[j] - cd[j]));
      EXPECT_LE(worst, 1e-12 * max_norm(cd)) << a.descriptor();
    }
  }
}

TEST(SolverProperties, RoundTrip) {
  ProbeGenerator<double> probes(32);
  const auto g = line(128, 8.0);
  const auto v = fourier_family(g);
  const auto a = differential_symbol(helmholtz_identity_minus_laplacian<double>(1));
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = probes.bandlimited(g);
    const auto r = solve(v, a, d);
    EXPECT_LE(relative_l2_error(spectral_apply(a, v, r.solution), d), 1e-10);
  }
}

TEST(SolverProperties, GaugeFreedomOnZeroSet) {
  ProbeGenerator<double> probes(33);
  const auto g = line(64, pi);
  const auto v = fourier_family(g);
  // p^2 - 1 vanishes exactly at p = -1, 1 on this grid.
  const auto p = coordinate_symbol<double>(1, 0);
  const auto a = p * p - constant_symbol<double>(1, 1.0);
  const auto as = sample(a, v.index_grid());
  const double eps = DivisionPolicy{}.effective_zero_threshold(as.cwiseAbs().maxCoeff());
  const auto d = sin_k(g, 3) + C(0.5) * cos_k(g, 5);
  const auto base = solve(v, a, d);
  for (int trial = 0; trial < 4; ++trial) {
    auto q = coordinates(base.solution, v);
    Samples<double> mass = Samples<double>::Zero(64);
    for (double zero : {-1.0, 1.0}) mass[Eigen::Index(node(v.index_grid(), zero))] = probes.scalar();
    const GridDistribution<double> added(v.index_grid(), mass);
    q += added;
    const auto u = superpose(q, v);
    const double res = l2_norm(spectral_apply(a, v, u) - d);
    EXPECT_LE(std::abs(res - base.residual), eps * l2_norm(superpose(added, v)) + 1e-14);
  }
}

TEST(SolverProperties, ConcurrentSolvesAgree) {
  const auto g = line(128, 8.0);
  const auto v = fourier_family(g);
  const auto a = differential_symbol(helmholtz_identity_minus_laplacian<double>(1));
  const auto d = literal::gaussian_1d(g);
  const auto ref = solve(v, a, d).solution;
  std::vector<Samples<double>> out(4);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) threads.emplace_back([&, t] { out[t] = solve(v, a, d).solution.samples(); });
  for (auto& t : threads) t.join();
  for (const auto& s : out) EXPECT_TRUE(s == ref.samples());
}
