#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "schwartz/grid.hpp"

namespace schwartz {

/// Constant-coefficient differential operator D = sum_j c_j d^j on R^n.
///
/// Keys are multi-indices of length n (one derivative order per axis).
template <typename Real = double>
class DifferentialOperatorSpec {
 public:
  using MultiIndex = std::vector<unsigned>;

  explicit DifferentialOperatorSpec(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw ArityMismatch("differential operator needs dim >= 1");
  }

  DifferentialOperatorSpec& add(MultiIndex j, std::complex<Real> c) {
    if (j.size() != dim_)
      throw ArityMismatch("multi-index length " + std::to_string(j.size()) +
                          " does not match dimension " + std::to_string(dim_));
    coeffs_[std::move(j)] += c;
    return *this;
  }

  std::size_t dim() const { return dim_; }
  const std::map<MultiIndex, std::complex<Real>>& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }

  std::string describe() const {
    std::string s;
    for (const auto& [j, c] : coeffs_) {
      if (!s.empty()) s += " + ";
      s += "(" + std::to_string(double(c.real())) + "," +
           std::to_string(double(c.imag())) + ")d^[";
      for (std::size_t i = 0; i < j.size(); ++i)
        s += (i ? "," : "") + std::to_string(j[i]);
      s += "]";
    }
    return s.empty() ? "0" : s;
  }

 private:
  std::size_t dim_;
  std::map<MultiIndex, std::complex<Real>> coeffs_;
};

/// d/dx_axis in `dim` dimensions.
template <typename Real = double>
DifferentialOperatorSpec<Real> partial(std::size_t dim, std::size_t axis,
                                       unsigned order = 1) {
  DifferentialOperatorSpec<Real> d(dim);
  typename DifferentialOperatorSpec<Real>::MultiIndex j(dim, 0);
  j.at(axis) = order;
  d.add(std::move(j), 1);
  return d;
}

/// I - Laplacian in `dim` dimensions.
template <typename Real = double>
DifferentialOperatorSpec<Real> helmholtz_identity_minus_laplacian(std::size_t dim) {
  DifferentialOperatorSpec<Real> d(dim);
  d.add(typename DifferentialOperatorSpec<Real>::MultiIndex(dim, 0), 1);
  for (std::size_t i = 0; i < dim; ++i) {
    typename DifferentialOperatorSpec<Real>::MultiIndex j(dim, 0);
    j[i] = 2;
    d.add(std::move(j), -1);
  }
  return d;
}

/// Fourier symbol P(p) = sum_j c_j (-i)^|j| p^j, since
/// d^j exp(-i p.x) = (-i)^|j| p^j exp(-i p.x).
template <typename Real>
SymbolFunction<Real> differential_symbol(const DifferentialOperatorSpec<Real>& spec) {
  auto coeffs = spec.coeffs();
  return {spec.dim(),
          [coeffs](std::span<const Real> p) {
            using C = std::complex<Real>;
            C total(0);
            for (const auto& [j, c] : coeffs) {
              unsigned order = 0;
              Real monomial = 1;
              for (std::size_t i = 0; i < j.size(); ++i) {
                order += j[i];
                for (unsigned e = 0; e < j[i]; ++e) monomial *= p[i];
              }
              // (-i)^order cycles through 1, -i, -1, i.
              static const C cycle[4] = {C(1, 0), C(0, -1), C(-1, 0), C(0, 1)};
              total += c * cycle[order % 4] * monomial;
            }
            return total;
          },
          "symbol[" + spec.describe() + "]"};
}

/// Same symbol, after checking the spec against the index grid it will be
/// sampled on.
template <typename Real>
SymbolFunction<Real> differential_symbol(const DifferentialOperatorSpec<Real>& spec,
                                         const Grid<Real>& index_grid) {
  if (spec.dim() != index_grid.dim())
    throw ArityMismatch("differential spec has dimension " +
                        std::to_string(spec.dim()) + ", index grid has " +
                        std::to_string(index_grid.dim()));
  return differential_symbol(spec);
}

}  // namespace schwartz
