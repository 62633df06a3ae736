#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "schwartz/errors.hpp"

namespace schwartz {

template <typename Real>
using Samples = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using Point = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Truncated uniform lattice on the box [-L_0, L_0) x ... x [-L_{n-1}, L_{n-1}).
///
/// Axis i carries N_i points x_k = (k - N_i/2) * dx_i with dx_i = 2 L_i / N_i.
/// Points are enumerated row-major with axis 0 slowest, so the flat index of
/// (k_0, ..., k_{n-1}) is ((k_0 * N_1 + k_1) * N_2 + ...) + k_{n-1}.
template <typename Real = double>
class Grid {
 public:
  Grid(std::vector<std::size_t> counts, std::vector<Real> half_extents)
      : counts_(std::move(counts)), half_extents_(std::move(half_extents)) {
    if (counts_.empty()) throw InvalidGrid("grid needs at least one axis");
    if (counts_.size() != half_extents_.size())
      throw InvalidGrid("counts and half_extents differ in length");
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      if (counts_[i] < 4 || counts_[i] % 2 != 0)
        throw InvalidGrid("axis " + std::to_string(i) + ": count " +
                          std::to_string(counts_[i]) +
                          " must be even and at least 4");
      if (!(half_extents_[i] > Real(0)) || !std::isfinite(double(half_extents_[i])))
        throw InvalidGrid("axis " + std::to_string(i) +
                          ": half extent must be positive and finite");
    }
  }

  std::size_t dim() const { return counts_.size(); }

  std::size_t size() const {
    std::size_t total = 1;
    for (auto n : counts_) total *= n;
    return total;
  }

  const std::vector<std::size_t>& counts() const { return counts_; }
  const std::vector<Real>& half_extents() const { return half_extents_; }

  std::size_t count(std::size_t axis) const { return counts_.at(axis); }
  Real half_extent(std::size_t axis) const { return half_extents_.at(axis); }

  Real spacing(std::size_t axis) const {
    return Real(2) * half_extents_.at(axis) / Real(counts_.at(axis));
  }

  /// Spacing pi / L_i of the matched frequency lattice.
  Real dual_spacing(std::size_t axis) const {
    return std::numbers::pi_v<Real> / half_extents_.at(axis);
  }

  Real coordinate(std::size_t axis, std::size_t k) const {
    const auto half = static_cast<std::ptrdiff_t>(counts_[axis] / 2);
    return Real(static_cast<std::ptrdiff_t>(k) - half) * spacing(axis);
  }

  /// Stride of `axis` in the row-major enumeration.
  std::size_t stride(std::size_t axis) const {
    std::size_t s = 1;
    for (std::size_t i = axis + 1; i < counts_.size(); ++i) s *= counts_[i];
    return s;
  }

  std::vector<std::size_t> multi_index(std::size_t flat) const {
    std::vector<std::size_t> idx(dim());
    for (std::size_t i = dim(); i-- > 0;) {
      idx[i] = flat % counts_[i];
      flat /= counts_[i];
    }
    return idx;
  }

  std::size_t flat_index(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < dim(); ++i) flat = flat * counts_[i] + idx[i];
    return flat;
  }

  Point<Real> point(std::size_t flat) const {
    Point<Real> x(dim());
    for (std::size_t i = dim(); i-- > 0;) {
      x[i] = coordinate(i, flat % counts_[i]);
      flat /= counts_[i];
    }
    return x;
  }

  /// Flat index of the node at `p`, or nothing when `p` is not within
  /// `rel_tol * spacing` of a node on every axis.
  std::optional<std::size_t> locate(std::span<const Real> p,
                                    Real rel_tol = Real(1e-9)) const {
    if (p.size() != dim()) return std::nullopt;
    std::size_t flat = 0;
    for (std::size_t i = 0; i < dim(); ++i) {
      const Real h = spacing(i);
      const Real shifted = p[i] / h + Real(counts_[i] / 2);
      const Real nearest = std::round(shifted);
      if (std::abs(shifted - nearest) > rel_tol) return std::nullopt;
      if (nearest < Real(0) || nearest >= Real(counts_[i])) return std::nullopt;
      flat = flat * counts_[i] + static_cast<std::size_t>(nearest);
    }
    return flat;
  }

  std::size_t index_of(std::span<const Real> p) const {
    if (p.size() != dim())
      throw ArityMismatch("index point has " + std::to_string(p.size()) +
                          " coordinates, grid has " + std::to_string(dim()) +
                          " axes");
    if (auto k = locate(p)) return *k;
    throw IndexOffGrid("point is not a node of the grid");
  }

  /// Counts must agree exactly; half extents to 1e-12 relative, so a grid
  /// and the dual of its dual compare equal.
  friend bool operator==(const Grid& a, const Grid& b) {
    if (a.counts_ != b.counts_) return false;
    for (std::size_t i = 0; i < a.half_extents_.size(); ++i) {
      const Real x = a.half_extents_[i], y = b.half_extents_[i];
      if (std::abs(x - y) > Real(1e-12) * std::max(std::abs(x), std::abs(y)))
        return false;
    }
    return true;
  }

 private:
  std::vector<std::size_t> counts_;
  std::vector<Real> half_extents_;
};

template <typename Real = double>
Grid<Real> make_grid(std::size_t dim, std::vector<std::size_t> counts,
                     std::vector<Real> half_extents) {
  if (dim == 0 || counts.size() != dim || half_extents.size() != dim)
    throw InvalidGrid("counts and half_extents must both have length dim");
  return Grid<Real>(std::move(counts), std::move(half_extents));
}

/// Frequency lattice matched to `g`: same counts, nodes p_j = j * pi / L_i for
/// j in [-N_i/2, N_i/2). Its half extent is N_i * pi / (2 L_i), so applying
/// dual_grid twice restores the original extents.
template <typename Real>
Grid<Real> dual_grid(const Grid<Real>& g) {
  std::vector<Real> extents(g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i)
    extents[i] = Real(g.count(i)) * std::numbers::pi_v<Real> /
                 (Real(2) * g.half_extent(i));
  return Grid<Real>(g.counts(), std::move(extents));
}

/// Volume element prod_i dx_i of the quadrature rule.
template <typename Real>
Real quadrature_weight(const Grid<Real>& g) {
  Real w = 1;
  for (std::size_t i = 0; i < g.dim(); ++i) w *= g.spacing(i);
  return w;
}

template <typename Real>
void require_same_grid(const Grid<Real>& a, const Grid<Real>& b,
                       const char* context) {
  if (!(a == b)) throw GridMismatch(std::string(context) + ": grids differ");
}

/// Complex samples on a grid; the finite stand-in for a tempered distribution.
template <typename Real = double>
class GridDistribution {
 public:
  using Complex = std::complex<Real>;

  GridDistribution(Grid<Real> grid, Samples<Real> samples)
      : grid_(std::move(grid)), samples_(std::move(samples)) {
    if (static_cast<std::size_t>(samples_.size()) != grid_.size())
      throw InvalidDistribution("sample count " +
                                std::to_string(samples_.size()) +
                                " does not match grid size " +
                                std::to_string(grid_.size()));
    if (!samples_.allFinite())
      throw InvalidDistribution("distribution samples must be finite");
  }

  static GridDistribution zeros(const Grid<Real>& grid) {
    return GridDistribution(grid, Samples<Real>::Zero(grid.size()));
  }

  const Grid<Real>& grid() const { return grid_; }
  const Samples<Real>& samples() const { return samples_; }
  std::size_t size() const { return grid_.size(); }
  Complex operator[](std::size_t k) const { return samples_[k]; }

  GridDistribution& operator+=(const GridDistribution& o) {
    require_same_grid(grid_, o.grid_, "distribution sum");
    samples_ += o.samples_;
    return *this;
  }
  GridDistribution& operator-=(const GridDistribution& o) {
    require_same_grid(grid_, o.grid_, "distribution difference");
    samples_ -= o.samples_;
    return *this;
  }
  GridDistribution& operator*=(Complex c) {
    samples_ *= c;
    return *this;
  }

  friend GridDistribution operator+(GridDistribution a, const GridDistribution& b) { return a += b; }
  friend GridDistribution operator-(GridDistribution a, const GridDistribution& b) { return a -= b; }
  friend GridDistribution operator*(Complex c, GridDistribution a) { return a *= c; }
  friend GridDistribution operator*(GridDistribution a, Complex c) { return a *= c; }

 private:
  Grid<Real> grid_;
  Samples<Real> samples_;
};

/// Coefficients of a distribution with respect to a family, living on the
/// family's index grid.
template <typename Real = double>
using CoordinateDistribution = GridDistribution<Real>;

/// Builds a distribution from a pointwise callable `f(Point) -> complex`.
template <typename Real, typename F>
GridDistribution<Real> tabulate(const Grid<Real>& grid, F&& f) {
  Samples<Real> s(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Point<Real> x = grid.point(k);
    s[k] = std::complex<Real>(f(x));
  }
  return GridDistribution<Real>(grid, std::move(s));
}

/// Quadrature pairing <u, phi> = sum_k u(x_k) phi(x_k) dV (bilinear, no conjugate).
template <typename Real>
std::complex<Real> pairing(const GridDistribution<Real>& u,
                           const GridDistribution<Real>& phi) {
  require_same_grid(u.grid(), phi.grid(), "pairing");
  return (u.samples().array() * phi.samples().array()).sum() *
         quadrature_weight(u.grid());
}

template <typename Real>
Real max_norm(const GridDistribution<Real>& u) {
  return u.size() == 0 ? Real(0) : u.samples().cwiseAbs().maxCoeff();
}

/// Quadrature L2 norm sqrt(sum |u_k|^2 dV).
template <typename Real>
Real l2_norm(const GridDistribution<Real>& u) {
  return std::sqrt(u.samples().squaredNorm() * quadrature_weight(u.grid()));
}

/// max|u - w| / max|w|, or the absolute error when w vanishes.
template <typename Real>
Real relative_max_error(const GridDistribution<Real>& u,
                        const GridDistribution<Real>& w) {
  const Real err = max_norm(u - w);
  const Real scale = max_norm(w);
  return scale > Real(0) ? err / scale : err;
}

template <typename Real>
Real relative_l2_error(const GridDistribution<Real>& u,
                       const GridDistribution<Real>& w) {
  const Real err = l2_norm(u - w);
  const Real scale = l2_norm(w);
  return scale > Real(0) ? err / scale : err;
}

/// Smooth slowly increasing function on R^m, evaluable at any point.
template <typename Real = double>
class SymbolFunction {
 public:
  using Complex = std::complex<Real>;
  using Evaluator = std::function<Complex(std::span<const Real>)>;

  SymbolFunction(std::size_t arity, Evaluator f, std::string descriptor)
      : arity_(arity), f_(std::move(f)), descriptor_(std::move(descriptor)) {}

  std::size_t arity() const { return arity_; }
  const std::string& descriptor() const { return descriptor_; }

  Complex operator()(std::span<const Real> p) const {
    if (p.size() != arity_)
      throw ArityMismatch("symbol '" + descriptor_ + "' has arity " +
                          std::to_string(arity_) + ", got " +
                          std::to_string(p.size()) + " coordinates");
    return f_(p);
  }
  Complex operator()(const Point<Real>& p) const {
    return (*this)(std::span<const Real>(p.data(), std::size_t(p.size())));
  }
  Complex operator()(Real p) const { return (*this)(std::span<const Real>(&p, 1)); }

 private:
  std::size_t arity_;
  Evaluator f_;
  std::string descriptor_;
};

template <typename Real>
void require_arity(const SymbolFunction<Real>& a, std::size_t arity,
                   const char* context) {
  if (a.arity() != arity)
    throw ArityMismatch(std::string(context) + ": symbol '" + a.descriptor() +
                        "' has arity " + std::to_string(a.arity()) +
                        ", expected " + std::to_string(arity));
}

template <typename Real = double>
SymbolFunction<Real> constant_symbol(std::size_t arity, std::complex<Real> c) {
  return {arity, [c](std::span<const Real>) { return c; },
          "const(" + std::to_string(double(c.real())) +
              (c.imag() != Real(0) ? "+" + std::to_string(double(c.imag())) + "i" : "") + ")"};
}

/// p -> p_axis.
template <typename Real = double>
SymbolFunction<Real> coordinate_symbol(std::size_t arity, std::size_t axis) {
  if (axis >= arity) throw ArityMismatch("coordinate axis out of range");
  return {arity,
          [axis](std::span<const Real> p) { return std::complex<Real>(p[axis]); },
          "p" + std::to_string(axis)};
}

template <typename Real>
SymbolFunction<Real> operator*(const SymbolFunction<Real>& a,
                               const SymbolFunction<Real>& b) {
  require_arity(b, a.arity(), "symbol product");
  return {a.arity(),
          [a, b](std::span<const Real> p) { return a(p) * b(p); },
          "(" + a.descriptor() + ")*(" + b.descriptor() + ")"};
}

template <typename Real>
SymbolFunction<Real> operator+(const SymbolFunction<Real>& a,
                               const SymbolFunction<Real>& b) {
  require_arity(b, a.arity(), "symbol sum");
  return {a.arity(),
          [a, b](std::span<const Real> p) { return a(p) + b(p); },
          "(" + a.descriptor() + ")+(" + b.descriptor() + ")"};
}

template <typename Real>
SymbolFunction<Real> operator-(const SymbolFunction<Real>& a,
                               const SymbolFunction<Real>& b) {
  require_arity(b, a.arity(), "symbol difference");
  return {a.arity(),
          [a, b](std::span<const Real> p) { return a(p) - b(p); },
          "(" + a.descriptor() + ")-(" + b.descriptor() + ")"};
}

template <typename Real>
SymbolFunction<Real> operator*(std::complex<Real> c, const SymbolFunction<Real>& a) {
  return {a.arity(), [c, a](std::span<const Real> p) { return c * a(p); },
          "c*(" + a.descriptor() + ")"};
}

/// Pointwise 1/a. Callers are responsible for a being nowhere zero.
template <typename Real>
SymbolFunction<Real> reciprocal(const SymbolFunction<Real>& a) {
  return {a.arity(),
          [a](std::span<const Real> p) { return std::complex<Real>(1) / a(p); },
          "1/(" + a.descriptor() + ")"};
}

/// Values of `a` at every node of `grid`, row-major.
template <typename Real>
Samples<Real> sample(const SymbolFunction<Real>& a, const Grid<Real>& grid) {
  require_arity(a, grid.dim(), "sample");
  Samples<Real> s(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) s[k] = a(grid.point(k));
  if (!s.allFinite())
    throw InvalidDistribution("symbol '" + a.descriptor() +
                              "' is not finite on the grid");
  return s;
}

template <typename Real>
IndexLocation locate_index(const Grid<Real>& grid, std::size_t flat) {
  IndexLocation loc;
  loc.flat = flat;
  const Point<Real> p = grid.point(flat);
  for (Eigen::Index i = 0; i < p.size(); ++i) loc.point.push_back(double(p[i]));
  return loc;
}

}  // namespace schwartz
