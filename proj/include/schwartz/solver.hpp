#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>

#include "schwartz/differential.hpp"
#include "schwartz/families.hpp"
#include "schwartz/spectral.hpp"

namespace schwartz {

/// Thresholds for pointwise division by a sampled symbol.
///
/// A symbol value counts as zero when |a(p)| <= zero_threshold, scaled by
/// max|a| over the index grid when `relative_zero_threshold` is set. At such
/// points the datum may carry at most residual_threshold * max|d_v| mass.
struct DivisionPolicy {
  double zero_threshold = 1e-12;
  bool relative_zero_threshold = true;
  double residual_threshold = 1e-10;

  /// Absolute zero threshold for a symbol whose largest magnitude is `max_abs`.
  double effective_zero_threshold(double max_abs) const {
    if (std::isinf(zero_threshold)) return zero_threshold;
    return relative_zero_threshold ? zero_threshold * max_abs : zero_threshold;
  }
};

/// Quotient q = d_v / a with q = 0 on the symbol's zero set.
///
/// Throws NotDivisible when d_v has more than the allowed mass at a zero of a;
/// the reported index is the offending node with the largest |d_v|.
template <typename Real>
CoordinateDistribution<Real> divide(const CoordinateDistribution<Real>& d_v,
                                    const Samples<Real>& a,
                                    const DivisionPolicy& policy) {
  if (static_cast<std::size_t>(a.size()) != d_v.size())
    throw GridMismatch("divide: symbol samples do not match the coordinate grid");
  const double a_max = a.size() ? double(a.cwiseAbs().maxCoeff()) : 0.0;
  const double eps_div = policy.effective_zero_threshold(a_max);
  const double d_max = double(max_norm(d_v));
  const double allowed = policy.residual_threshold * d_max;

  Samples<Real> q(d_v.size());
  double worst_mass = -1;
  std::size_t worst = 0;
  for (std::size_t k = 0; k < d_v.size(); ++k) {
    const auto ak = a[Eigen::Index(k)];
    const auto dk = d_v[k];
    if (double(std::abs(ak)) > eps_div) {
      q[Eigen::Index(k)] = dk / ak;
      continue;
    }
    q[Eigen::Index(k)] = 0;
    const double mass = double(std::abs(dk));
    if (mass > allowed && mass > worst_mass) {
      worst_mass = mass;
      worst = k;
    }
  }
  if (worst_mass >= 0) {
    auto loc = locate_index(d_v.grid(), worst);
    std::string where;
    for (double c : loc.point) where += (where.empty() ? "" : ",") + std::to_string(c);
    throw NotDivisible("datum has coefficient mass " + std::to_string(worst_mass) +
                           " on the symbol's zero set at p=(" + where + ")",
                       std::move(loc), worst_mass);
  }
  return {d_v.grid(), std::move(q)};
}

template <typename Real>
CoordinateDistribution<Real> divide(const CoordinateDistribution<Real>& d_v,
                                    const SymbolFunction<Real>& a,
                                    const DivisionPolicy& policy) {
  return divide(d_v, sample(a, d_v.grid()), policy);
}

template <typename Real>
struct SolveResult {
  GridDistribution<Real> solution;
  /// |A(u) - d| in the quadrature L2 norm.
  double residual = 0;
  /// residual / |d|, or the absolute residual when d vanishes.
  double relative_residual = 0;
};

/// Solves A(u) = d for A diagonal in the basis v with eigenvalue system a:
/// u is the superposition in v of the quotient [d|v] / a.
template <typename Real>
SolveResult<Real> solve(const SchwartzFamily<Real>& v, const SymbolFunction<Real>& a,
                        const GridDistribution<Real>& d,
                        const DivisionPolicy& policy = {}) {
  if (!v.is_basis()) throw NotABasis("solve: family '" + v.describe() + "' is not a basis");
  require_arity(a, v.index_dim(), "solve");
  const auto q = divide(coordinates(d, v), a, policy);
  GridDistribution<Real> u = superpose(q, v);
  const GridDistribution<Real> r = spectral_apply(a, v, u) - d;
  const double res = double(l2_norm(r));
  const double scale = double(l2_norm(d));
  return {std::move(u), res, scale > 0 ? res / scale : res};
}

/// Constant-coefficient PDE D u = d through the Fourier basis of d's grid.
/// The box is periodic, so this is the periodic solution.
template <typename Real>
SolveResult<Real> solve_pde(const DifferentialOperatorSpec<Real>& spec,
                            const GridDistribution<Real>& d,
                            const DivisionPolicy& policy = {}) {
  const auto v = fourier_family(d.grid());
  return solve(v, differential_symbol(spec, v.index_grid()), d, policy);
}

}  // namespace schwartz
