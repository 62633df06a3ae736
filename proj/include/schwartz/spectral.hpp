#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "schwartz/differential.hpp"
#include "schwartz/families.hpp"
#include "schwartz/grid.hpp"

namespace schwartz {

/// A(u) = superposition of a[u|v] in v, for the operator diagonal in v with
/// eigenvalue system a.
template <typename Real>
GridDistribution<Real> spectral_apply(const SymbolFunction<Real>& a,
                                      const SchwartzFamily<Real>& v,
                                      const GridDistribution<Real>& u) {
  require_arity(a, v.index_dim(), "spectral_apply");
  CoordinateDistribution<Real> c = coordinates(u, v);
  Samples<Real> weighted = sample(a, v.index_grid()).cwiseProduct(c.samples());
  return superpose(CoordinateDistribution<Real>(v.index_grid(), std::move(weighted)), v);
}

/// S-linear operator on grid distributions.
template <typename Real = double>
class LinearOperator {
 public:
  using Apply = std::function<GridDistribution<Real>(const GridDistribution<Real>&)>;

  struct DiagonalInFamily {
    SchwartzFamily<Real> v;
    SymbolFunction<Real> a;
  };
  /// u -> f u, with f evaluated at the nodes of u's grid.
  struct Multiplication {
    SymbolFunction<Real> f;
  };
  /// Applied through the Fourier family of the argument's grid.
  struct DifferentialConstCoeff {
    DifferentialOperatorSpec<Real> spec;
  };
  struct Dense {
    Grid<Real> grid;
    KernelMatrix<Real> matrix;
  };
  /// Anything else: compositions, measure values, coordinate maps.
  struct Functional {
    Apply apply;
    std::string description;
  };

  using Rep = std::variant<DiagonalInFamily, Multiplication, DifferentialConstCoeff,
                           Dense, Functional>;

  explicit LinearOperator(Rep rep) : rep_(std::move(rep)) {}

  GridDistribution<Real> operator()(const GridDistribution<Real>& u) const {
    return std::visit([&u](const auto& r) { return apply_rep(r, u); }, rep_);
  }

  const Rep& rep() const { return rep_; }

  std::string describe() const {
    return std::visit(
        [](const auto& r) -> std::string {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, DiagonalInFamily>)
            return "diag[" + r.v.describe() + "," + r.a.descriptor() + "]";
          else if constexpr (std::is_same_v<T, Multiplication>)
            return "mul[" + r.f.descriptor() + "]";
          else if constexpr (std::is_same_v<T, DifferentialConstCoeff>)
            return "diff[" + r.spec.describe() + "]";
          else if constexpr (std::is_same_v<T, Dense>)
            return "dense[" + std::to_string(r.matrix.rows()) + "]";
          else
            return r.description;
        },
        rep_);
  }

 private:
  static GridDistribution<Real> apply_rep(const DiagonalInFamily& r,
                                          const GridDistribution<Real>& u) {
    return spectral_apply(r.a, r.v, u);
  }
  static GridDistribution<Real> apply_rep(const Multiplication& r,
                                          const GridDistribution<Real>& u) {
    return {u.grid(), sample(r.f, u.grid()).cwiseProduct(u.samples())};
  }
  static GridDistribution<Real> apply_rep(const DifferentialConstCoeff& r,
                                          const GridDistribution<Real>& u) {
    const auto v = fourier_family(u.grid());
    return spectral_apply(differential_symbol(r.spec, v.index_grid()), v, u);
  }
  static GridDistribution<Real> apply_rep(const Dense& r,
                                          const GridDistribution<Real>& u) {
    require_same_grid(u.grid(), r.grid, "dense operator");
    return {r.grid, r.matrix * u.samples()};
  }
  static GridDistribution<Real> apply_rep(const Functional& r,
                                          const GridDistribution<Real>& u) {
    return r.apply(u);
  }

  Rep rep_;
};

template <typename Real>
LinearOperator<Real> diagonal_operator(const SchwartzFamily<Real>& v,
                                       const SymbolFunction<Real>& a) {
  require_arity(a, v.index_dim(), "diagonal_operator");
  return LinearOperator<Real>(typename LinearOperator<Real>::DiagonalInFamily{v, a});
}

template <typename Real>
LinearOperator<Real> multiplication_operator(const SymbolFunction<Real>& f) {
  return LinearOperator<Real>(typename LinearOperator<Real>::Multiplication{f});
}

template <typename Real>
LinearOperator<Real> differential_operator(const DifferentialOperatorSpec<Real>& spec) {
  return LinearOperator<Real>(typename LinearOperator<Real>::DifferentialConstCoeff{spec});
}

template <typename Real>
LinearOperator<Real> dense_operator(const Grid<Real>& grid, KernelMatrix<Real> m) {
  if (static_cast<std::size_t>(m.rows()) != grid.size() || m.rows() != m.cols())
    throw GridMismatch("dense operator matrix does not match grid size");
  return LinearOperator<Real>(
      typename LinearOperator<Real>::Dense{grid, std::move(m)});
}

template <typename Real>
LinearOperator<Real> functional_operator(typename LinearOperator<Real>::Apply f,
                                         std::string description) {
  return LinearOperator<Real>(typename LinearOperator<Real>::Functional{
      std::move(f), std::move(description)});
}

template <typename Real = double>
LinearOperator<Real> identity_operator() {
  return functional_operator<Real>([](const GridDistribution<Real>& u) { return u; },
                                   "identity");
}

/// Zero map onto `codomain`.
template <typename Real>
LinearOperator<Real> zero_operator(const Grid<Real>& codomain) {
  return functional_operator<Real>(
      [codomain](const GridDistribution<Real>&) {
        return GridDistribution<Real>::zeros(codomain);
      },
      "zero");
}

/// The coordinate operator [.|v], space grid -> index grid.
template <typename Real>
LinearOperator<Real> coordinate_operator(const SchwartzFamily<Real>& v) {
  return functional_operator<Real>(
      [v](const GridDistribution<Real>& u) { return coordinates(u, v); },
      "coords[" + v.describe() + "]");
}

/// Composition (A * B)(u) = A(B(u)).
template <typename Real>
LinearOperator<Real> operator*(const LinearOperator<Real>& a,
                               const LinearOperator<Real>& b) {
  return functional_operator<Real>(
      [a, b](const GridDistribution<Real>& u) { return a(b(u)); },
      a.describe() + "*" + b.describe());
}

template <typename Real>
LinearOperator<Real> operator+(const LinearOperator<Real>& a,
                               const LinearOperator<Real>& b) {
  return functional_operator<Real>(
      [a, b](const GridDistribution<Real>& u) { return a(u) + b(u); },
      a.describe() + "+" + b.describe());
}

template <typename Real>
LinearOperator<Real> operator*(std::complex<Real> c, const LinearOperator<Real>& a) {
  return functional_operator<Real>(
      [c, a](const GridDistribution<Real>& u) { return c * a(u); },
      "c*" + a.describe());
}

struct EigenfamilyReport {
  double max_residual = 0;
  IndexLocation worst_index;
  bool passed = false;
};

/// Flat indices of index-grid nodes with |p_i| <= radius on every axis.
template <typename Real>
std::vector<std::size_t> index_band(const Grid<Real>& index, Real radius) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < index.size(); ++k)
    if (index.point(k).cwiseAbs().maxCoeff() <= radius) out.push_back(k);
  return out;
}

template <typename Real>
std::vector<std::size_t> all_indices(const Grid<Real>& index) {
  std::vector<std::size_t> out(index.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = k;
  return out;
}

/// Eigen-relation check max_p |A(v_p) - a(p) v_p|_inf / max(1, |v_p|_inf)
/// over the selected index nodes.
template <typename Real>
EigenfamilyReport is_eigenfamily(const LinearOperator<Real>& A,
                                 const SchwartzFamily<Real>& v,
                                 const SymbolFunction<Real>& a, Real tol,
                                 const std::vector<std::size_t>& indices) {
  require_arity(a, v.index_dim(), "is_eigenfamily");
  EigenfamilyReport report;
  std::size_t worst = indices.empty() ? 0 : indices.front();
  Real max_residual = 0;
  for (std::size_t p : indices) {
    const GridDistribution<Real> vp = member(v, p);
    const GridDistribution<Real> Avp = A(vp);
    require_same_grid(Avp.grid(), vp.grid(), "is_eigenfamily");
    const auto ap = a(v.index_grid().point(p));
    const Real r = max_norm(Avp - ap * vp) / std::max(Real(1), max_norm(vp));
    if (r > max_residual) {
      max_residual = r;
      worst = p;
    }
  }
  report.max_residual = double(max_residual);
  report.worst_index = locate_index(v.index_grid(), worst);
  report.passed = max_residual <= tol;
  return report;
}

template <typename Real>
EigenfamilyReport is_eigenfamily(const LinearOperator<Real>& A,
                                 const SchwartzFamily<Real>& v,
                                 const SymbolFunction<Real>& a, Real tol) {
  return is_eigenfamily(A, v, a, tol, all_indices(v.index_grid()));
}

/// Seeded source of random band-limited probe distributions.
///
/// A probe superposes Fourier modes with |j_i| < N_i/4 and uniform random
/// complex coefficients, normalised to unit max norm.
template <typename Real = double>
class ProbeGenerator {
 public:
  static constexpr std::uint64_t kDefaultSeed = 42;

  explicit ProbeGenerator(std::uint64_t seed = kDefaultSeed) : rng_(seed) {}

  GridDistribution<Real> bandlimited(const Grid<Real>& grid) {
    const auto v = fourier_family(grid);
    const Grid<Real>& index = v.index_grid();
    Samples<Real> c = Samples<Real>::Zero(index.size());
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (std::size_t k = 0; k < index.size(); ++k) {
      const auto j = index.multi_index(k);
      bool inside = true;
      for (std::size_t i = 0; i < j.size(); ++i) {
        const auto n = index.count(i);
        const auto offset = static_cast<std::ptrdiff_t>(j[i]) -
                            static_cast<std::ptrdiff_t>(n / 2);
        if (4 * std::abs(offset) >= static_cast<std::ptrdiff_t>(n)) inside = false;
      }
      const double re = uniform(rng_), im = uniform(rng_);
      if (inside) c[Eigen::Index(k)] = std::complex<Real>(Real(re), Real(im));
    }
    GridDistribution<Real> u = superpose(CoordinateDistribution<Real>(index, c), v);
    const Real scale = max_norm(u);
    return scale > Real(0) ? std::complex<Real>(Real(1) / scale) * u : u;
  }

  /// Uniform random complex samples on every node (not band-limited).
  GridDistribution<Real> white(const Grid<Real>& grid) {
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Samples<Real> s(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double re = uniform(rng_), im = uniform(rng_);
      s[Eigen::Index(k)] = std::complex<Real>(Real(re), Real(im));
    }
    return {grid, std::move(s)};
  }

  std::complex<Real> scalar() {
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    const double re = uniform(rng_), im = uniform(rng_);
    return {Real(re), Real(im)};
  }

 private:
  std::mt19937_64 rng_;
};

struct OperatorComparison {
  double max_member_residual = 0;
  double max_probe_residual = 0;
  bool agree = false;
};

/// |A w - B w|_inf relative to the larger of the two images.
template <typename Real>
Real relative_image_gap(const GridDistribution<Real>& x,
                        const GridDistribution<Real>& y) {
  const Real gap = max_norm(x - y);
  const Real scale = std::max(max_norm(x), max_norm(y));
  return scale > Real(0) ? gap / scale : gap;
}

/// Operator equality by probing: every member of `v` (on its space grid) plus
/// `probe_count` random band-limited probes, all at relative tolerance `tol`.
template <typename Real>
OperatorComparison compare_operators(const LinearOperator<Real>& A,
                                     const LinearOperator<Real>& B,
                                     const SchwartzFamily<Real>& v,
                                     ProbeGenerator<Real>& probes, Real tol,
                                     std::size_t probe_count = 16) {
  OperatorComparison out;
  Real member_gap = 0, probe_gap = 0;
  for (std::size_t p = 0; p < v.index_grid().size(); ++p) {
    const auto w = member(v, p);
    member_gap = std::max(member_gap, relative_image_gap(A(w), B(w)));
  }
  for (std::size_t k = 0; k < probe_count; ++k) {
    const auto w = probes.bandlimited(v.space_grid());
    probe_gap = std::max(probe_gap, relative_image_gap(A(w), B(w)));
  }
  out.max_member_residual = double(member_gap);
  out.max_probe_residual = double(probe_gap);
  out.agree = member_gap <= tol && probe_gap <= tol;
  return out;
}

}  // namespace schwartz
