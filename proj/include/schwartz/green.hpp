#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "schwartz/families.hpp"
#include "schwartz/solver.hpp"
#include "schwartz/spectral.hpp"

namespace schwartz {

/// Gaussian test functions exp(-sum_i ((x_i - c_i) / w_i)^2) with w_i = 4 dx_i.
/// Centers are evenly spaced along the box diagonal:
/// c_i = -L_i + (k + 1/2) 2 L_i / count.
template <typename Real>
std::vector<GridDistribution<Real>> gaussian_probes(const Grid<Real>& grid,
                                                    std::size_t count = 8) {
  std::vector<GridDistribution<Real>> probes;
  probes.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Point<Real> center(grid.dim()), width(grid.dim());
    for (std::size_t i = 0; i < grid.dim(); ++i) {
      const Real L = grid.half_extent(i);
      center[Eigen::Index(i)] = -L + (Real(k) + Real(0.5)) * Real(2) * L / Real(count);
      width[Eigen::Index(i)] = Real(4) * grid.spacing(i);
    }
    probes.push_back(tabulate(grid, [&](const Point<Real>& x) {
      return std::exp(-((x - center).cwiseQuotient(width)).squaredNorm());
    }));
  }
  return probes;
}

/// Each probe minus its box average, so that it pairs to zero with constants.
template <typename Real>
std::vector<GridDistribution<Real>> mean_removed(std::vector<GridDistribution<Real>> probes) {
  for (auto& phi : probes) {
    const auto mean = phi.samples().mean();
    phi = GridDistribution<Real>(phi.grid(),
                                 (phi.samples().array() - mean).matrix());
  }
  return probes;
}

/// `count` flat indices spread evenly over the grid: (k + 1/2) size / count.
template <typename Real>
std::vector<std::size_t> spread_indices(const Grid<Real>& grid, std::size_t count = 8) {
  std::vector<std::size_t> out;
  const std::size_t n = grid.size();
  count = std::min(count, n);
  for (std::size_t k = 0; k < count; ++k) out.push_back((2 * k + 1) * n / (2 * count));
  return out;
}

struct WeakResidual {
  std::size_t flat_index = 0;
  std::vector<double> point;
  double residual = 0;
};

template <typename Real>
struct GreenFamilyResult {
  SchwartzFamily<Real> family;
  /// Quotient family nu with l nu_p = mu_p (or (1/l) mu_p); G = nu.lambda.
  SchwartzFamily<Real> quotients;
  std::vector<WeakResidual> residuals;

  double max_residual() const {
    double m = 0;
    for (const auto& r : residuals) m = std::max(m, r.residual);
    return m;
  }
};

struct GreenOptions {
  std::size_t residual_indices = 8;
  std::size_t probe_count = 8;
  /// Pair against mean-free probes (needed when mu_p carries no constant mode).
  bool mean_free_probes = false;
};

/// r_p = max_phi |<L G_p, phi> - phi(p)| with L applied as spectral_apply(l, lambda, .).
template <typename Real>
std::vector<WeakResidual> weak_residuals(const SchwartzFamily<Real>& G,
                                         const SymbolFunction<Real>& l,
                                         const SchwartzFamily<Real>& lambda,
                                         const std::vector<std::size_t>& indices,
                                         const std::vector<GridDistribution<Real>>& probes) {
  std::vector<WeakResidual> out;
  for (std::size_t p : indices) {
    const auto LG = spectral_apply(l, lambda, member(G, p));
    Real worst = 0;
    for (const auto& phi : probes)
      worst = std::max(worst, std::abs(pairing(LG, phi) - phi[p]));
    out.push_back({p, locate_index(G.index_grid(), p).point, double(worst)});
  }
  return out;
}

/// Left inverse mu of lambda under the family product: mu_p = [delta_p | lambda].
template <typename Real>
SchwartzFamily<Real> left_inverse_family(const SchwartzFamily<Real>& lambda) {
  if (lambda.kind() == FamilyKind::Dirac) return dirac_family(lambda.space_grid());
  if (const auto* k = lambda.kernel(); k && k->index.size() < k->space.size())
    throw NotABasis("left_inverse_family: kernel family has fewer members than nodes");
  const auto delta = dirac_family(lambda.space_grid());
  return family_from_members(lambda.space_grid(), lambda.index_grid(),
                             [&](std::size_t p) { return coordinates(member(delta, p), lambda); });
}

namespace detail {

template <typename Real>
GreenFamilyResult<Real> finish_green(SchwartzFamily<Real> nu,
                                     const SchwartzFamily<Real>& lambda,
                                     const SymbolFunction<Real>& l,
                                     const GreenOptions& opts) {
  SchwartzFamily<Real> G = family_product(nu, lambda);
  auto probes = gaussian_probes(G.space_grid(), opts.probe_count);
  if (opts.mean_free_probes) probes = mean_removed(std::move(probes));
  auto residuals = weak_residuals(G, l, lambda,
                                  spread_indices(G.index_grid(), opts.residual_indices),
                                  probes);
  return {std::move(G), std::move(nu), std::move(residuals)};
}

}  // namespace detail

/// Green family G_p = superpose((1/l) mu_p, lambda) for lambda an eigenfamily
/// of L with nowhere-vanishing eigenvalue system l and mu.lambda = delta.
template <typename Real>
GreenFamilyResult<Real> green_family(const SchwartzFamily<Real>& lambda,
                                     const SymbolFunction<Real>& l,
                                     const SchwartzFamily<Real>& mu,
                                     const DivisionPolicy& policy = {},
                                     const GreenOptions& opts = {}) {
  require_arity(l, lambda.index_dim(), "green_family");
  require_same_grid(mu.space_grid(), lambda.index_grid(), "green_family");
  const Samples<Real> values = sample(l, lambda.index_grid());
  const Eigen::Matrix<Real, Eigen::Dynamic, 1> mags = values.cwiseAbs();
  Eigen::Index worst = 0;
  const Real min_abs = mags.size() ? mags.minCoeff(&worst) : Real(0);
  const double eps = policy.effective_zero_threshold(double(mags.size() ? mags.maxCoeff() : Real(0)));
  if (!(double(min_abs) > eps))
    throw NotInvertible("eigenvalue system '" + l.descriptor() + "' has |l| = " +
                            std::to_string(double(min_abs)) +
                            " at or below the zero threshold",
                        locate_index(lambda.index_grid(), std::size_t(worst)),
                        double(min_abs));
  KernelMatrix<Real> rows = kernel_rows(mu) * values.cwiseInverse().asDiagonal();
  auto nu = kernel_family(mu.index_grid(), mu.space_grid(), std::move(rows));
  return detail::finish_green(std::move(nu), lambda, l, opts);
}

/// Green family from divisibility: nu_p = mu_p / l (thresholded) for every p,
/// G = nu.lambda. Fails with NotDivisible naming the first member that carries
/// mass on the zero set of l.
template <typename Real>
GreenFamilyResult<Real> green_family_divided(const SchwartzFamily<Real>& lambda,
                                             const SymbolFunction<Real>& l,
                                             const SchwartzFamily<Real>& mu,
                                             const DivisionPolicy& policy = {},
                                             const GreenOptions& opts = {}) {
  require_arity(l, lambda.index_dim(), "green_family_divided");
  require_same_grid(mu.space_grid(), lambda.index_grid(), "green_family_divided");
  const Samples<Real> values = sample(l, lambda.index_grid());
  auto nu = family_from_members(mu.index_grid(), mu.space_grid(), [&](std::size_t p) {
    try {
      return divide(member(mu, p), values, policy);
    } catch (const NotDivisible& e) {
      throw NotDivisible("family member " + std::to_string(p) + ": " + e.what(),
                         e.worst_index(), e.offending_mass(),
                         static_cast<std::ptrdiff_t>(p));
    }
  });
  return detail::finish_green(std::move(nu), lambda, l, opts);
}

}  // namespace schwartz
