#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "schwartz/grid.hpp"

namespace schwartz::detail {

enum class Direction { Coordinates, Superpose };

/// Applies the per-axis transform of the Fourier family v_p(x) = exp(-i p.x).
///
/// Coordinates: c(p_j) = (2 pi)^-n sum_k u(x_k) exp(+i p_j.x_k) dx.
/// Superpose:   u(x_k) = sum_j c(p_j) exp(-i p_j.x_k) dp.
///
/// With x_k = (k - N/2) dx and p_j = (j - N/2) dp the phases factor into
/// (-1)^k (-1)^(j - N/2) exp(+-2 pi i j k / N), so each axis is one
/// unnormalised DFT bracketed by sign flips.
template <typename Real>
Samples<Real> fourier_transform(const Samples<Real>& in,
                                const Grid<Real>& space,
                                const Grid<Real>& index, Direction dir) {
  using Complex = std::complex<Real>;
  Samples<Real> data = in;
  // A fresh FFT object per call keeps plan caches private to the caller.
  Eigen::FFT<Real> fft;
  fft.SetFlag(Eigen::FFT<Real>::Unscaled);

  for (std::size_t axis = 0; axis < space.dim(); ++axis) {
    const std::size_t n = space.count(axis);
    const std::size_t stride = space.stride(axis);
    const std::size_t outer = space.size() / (n * stride);
    const Real scale =
        dir == Direction::Coordinates
            ? space.spacing(axis) / (Real(2) * std::numbers::pi_v<Real>)
            : index.spacing(axis);
    const std::size_t half = n / 2;

    std::vector<Complex> line(n), out(n);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t s = 0; s < stride; ++s) {
        const std::size_t base = o * n * stride + s;
        for (std::size_t k = 0; k < n; ++k) {
          Complex value = data[Eigen::Index(base + k * stride)];
          const bool flip = dir == Direction::Coordinates ? (k % 2 == 1)
                                                          : ((k + half) % 2 == 1);
          line[k] = flip ? -value : value;
        }
        if (dir == Direction::Coordinates)
          fft.inv(out, line);
        else
          fft.fwd(out, line);
        for (std::size_t k = 0; k < n; ++k) {
          const bool flip = dir == Direction::Coordinates ? ((k + half) % 2 == 1)
                                                          : (k % 2 == 1);
          data[Eigen::Index(base + k * stride)] = (flip ? -scale : scale) * out[k];
        }
      }
    }
  }
  return data;
}

}  // namespace schwartz::detail
