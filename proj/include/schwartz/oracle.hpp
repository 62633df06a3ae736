#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "schwartz/differential.hpp"
#include "schwartz/families.hpp"
#include "schwartz/spectral.hpp"

namespace schwartz::oracle {

/// Brute-force operators capped at this many grid points (O(N^2) storage).
inline constexpr std::size_t kMaxDensePoints = 4096;

template <typename Real = double>
struct DenseOperator {
  Grid<Real> grid;
  KernelMatrix<Real> matrix;

  GridDistribution<Real> operator()(const GridDistribution<Real>& u) const {
    require_same_grid(u.grid(), grid, "dense oracle");
    return {grid, matrix * u.samples()};
  }

  LinearOperator<Real> as_operator() const { return dense_operator(grid, matrix); }
};

template <typename Real>
void require_small(const Grid<Real>& g) {
  if (g.size() > kMaxDensePoints)
    throw TooLarge("oracle grid has " + std::to_string(g.size()) +
                   " points; limit is " + std::to_string(kMaxDensePoints));
}

/// Matrix of u -> spectral_apply(a, v, u), assembled column by column from
/// unit samples.
template <typename Real>
DenseOperator<Real> dense_from_diagonal(const SchwartzFamily<Real>& v,
                                        const SymbolFunction<Real>& a) {
  const Grid<Real>& g = v.space_grid();
  require_small(g);
  KernelMatrix<Real> m(g.size(), g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    Samples<Real> e = Samples<Real>::Zero(g.size());
    e[Eigen::Index(k)] = 1;
    m.col(Eigen::Index(k)) = spectral_apply(a, v, GridDistribution<Real>(g, e)).samples();
  }
  return {g, std::move(m)};
}

namespace detail {

/// Central-difference weights {offset, weight} for the derivative of order
/// `deriv` at accuracy `order`, before division by dx^deriv.
inline std::vector<std::pair<int, double>> stencil(unsigned deriv, int order) {
  if (order != 2 && order != 4)
    throw UnsupportedOrder("finite differences support accuracy order 2 or 4, got " +
                           std::to_string(order));
  switch (deriv) {
    case 0: return {{0, 1.0}};
    case 1:
      if (order == 2) return {{-1, -0.5}, {1, 0.5}};
      return {{-2, 1.0 / 12}, {-1, -2.0 / 3}, {1, 2.0 / 3}, {2, -1.0 / 12}};
    case 2:
      if (order == 2) return {{-1, 1.0}, {0, -2.0}, {1, 1.0}};
      return {{-2, -1.0 / 12}, {-1, 4.0 / 3}, {0, -2.5}, {1, 4.0 / 3}, {2, -1.0 / 12}};
    case 3:
      if (order == 2) return {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}};
      return {{-3, 1.0 / 8}, {-2, -1.0}, {-1, 13.0 / 8}, {1, -13.0 / 8}, {2, 1.0}, {3, -1.0 / 8}};
    case 4:
      if (order == 2) return {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}};
      return {{-3, -1.0 / 6}, {-2, 2.0}, {-1, -6.5}, {0, 28.0 / 3},
              {1, -6.5}, {2, 2.0}, {3, -1.0 / 6}};
    default:
      throw UnsupportedOrder("finite differences support derivative orders up to 4, got " +
                             std::to_string(deriv));
  }
}

template <typename Real>
Samples<Real> apply_along_axis(const Samples<Real>& u, const Grid<Real>& g,
                               std::size_t axis, unsigned deriv, int order) {
  if (deriv == 0) return u;
  const auto weights = stencil(deriv, order);
  const Real scale = Real(1) / std::pow(g.spacing(axis), Real(deriv));
  const auto n = static_cast<std::ptrdiff_t>(g.count(axis));
  const std::size_t stride = g.stride(axis);
  Samples<Real> out = Samples<Real>::Zero(u.size());
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const auto k = static_cast<std::ptrdiff_t>((flat / stride) % g.count(axis));
    const std::size_t base = flat - std::size_t(k) * stride;
    std::complex<Real> acc = 0;
    for (const auto& [offset, w] : weights) {
      const auto j = ((k + offset) % n + n) % n;
      acc += Real(w) * u[Eigen::Index(base + std::size_t(j) * stride)];
    }
    out[Eigen::Index(flat)] = scale * acc;
  }
  return out;
}

}  // namespace detail

/// Periodic central-difference matrix of sum_j c_j d^j at accuracy 2 or 4.
template <typename Real>
DenseOperator<Real> finite_difference(const DifferentialOperatorSpec<Real>& spec,
                                      const Grid<Real>& grid, int order) {
  if (order != 2 && order != 4)
    throw UnsupportedOrder("finite differences support accuracy order 2 or 4, got " +
                           std::to_string(order));
  if (spec.dim() != grid.dim())
    throw ArityMismatch("differential spec dimension does not match grid");
  require_small(grid);
  KernelMatrix<Real> m = KernelMatrix<Real>::Zero(grid.size(), grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Samples<Real> e = Samples<Real>::Zero(grid.size());
    e[Eigen::Index(k)] = 1;
    for (const auto& [j, c] : spec.coeffs()) {
      Samples<Real> col = e;
      for (std::size_t axis = 0; axis < grid.dim(); ++axis)
        col = detail::apply_along_axis(col, grid, axis, j[axis], order);
      m.col(Eigen::Index(k)) += c * col;
    }
  }
  return {grid, std::move(m)};
}

/// Solves D u = d with the finite-difference matrix by dense LU.
template <typename Real>
GridDistribution<Real> finite_difference_solve(const DifferentialOperatorSpec<Real>& spec,
                                               const GridDistribution<Real>& d,
                                               int order) {
  const auto D = finite_difference(spec, d.grid(), order);
  Samples<Real> u = D.matrix.partialPivLu().solve(d.samples());
  return {d.grid(), std::move(u)};
}

}  // namespace schwartz::oracle
