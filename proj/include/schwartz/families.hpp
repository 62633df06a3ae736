#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "schwartz/detail/transform.hpp"
#include "schwartz/grid.hpp"

namespace schwartz {

template <typename Real>
using KernelMatrix =
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Default condition-number ceiling for least-squares kernel coordinates.
inline constexpr double kDefaultConditionLimit = 1e8;

/// Largest kernel (index count x space count) the library will materialise.
inline constexpr std::size_t kMaxKernelEntries = std::size_t(1) << 26;

namespace detail {

/// Kernel rows plus a lazily computed SVD of the synthesis matrix dp * K^T.
/// The factorisation is built at most once, under std::call_once.
template <typename Real>
struct KernelData {
  explicit KernelData(KernelMatrix<Real> k) : rows(std::move(k)) {}

  KernelMatrix<Real> rows;

  const Eigen::BDCSVD<KernelMatrix<Real>>& svd(Real index_weight) const {
    std::call_once(once, [&] {
      KernelMatrix<Real> synthesis = index_weight * rows.transpose();
      decomposition.compute(synthesis, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sv = decomposition.singularValues();
      const Real smax = sv.size() ? sv[0] : Real(0);
      const Real smin = sv.size() ? sv[sv.size() - 1] : Real(0);
      condition = smin > Real(0) ? smax / smin : std::numeric_limits<Real>::infinity();
    });
    return decomposition;
  }

  Real condition_number(Real index_weight) const {
    svd(index_weight);
    return condition;
  }

 private:
  mutable std::once_flag once;
  mutable Eigen::BDCSVD<KernelMatrix<Real>> decomposition;
  mutable Real condition = 0;
};

}  // namespace detail

enum class FamilyKind { Dirac, Fourier, Kernel };

/// A Schwartz family p -> v_p, p on an index grid, v_p a distribution on a
/// space grid.
///
/// Dirac: v_p is the nearest-node delta with height 1/dV, index = space grid.
/// Fourier: v_p(x) = exp(-i p.x), index grid = dual of the space grid.
/// Kernel: v_p is row p of an explicit (index count x space count) matrix.
template <typename Real = double>
class SchwartzFamily {
 public:
  struct Dirac {
    Grid<Real> space;
  };
  struct Fourier {
    Grid<Real> space;
    Grid<Real> index;
  };
  struct Kernel {
    Grid<Real> index;
    Grid<Real> space;
    std::shared_ptr<const detail::KernelData<Real>> data;
    bool basis = false;
  };

  explicit SchwartzFamily(Dirac d) : rep_(std::move(d)) {}
  explicit SchwartzFamily(Fourier f) : rep_(std::move(f)) {}
  explicit SchwartzFamily(Kernel k) : rep_(std::move(k)) {}

  FamilyKind kind() const { return static_cast<FamilyKind>(rep_.index()); }

  const Grid<Real>& index_grid() const {
    return std::visit(
        [](const auto& r) -> const Grid<Real>& {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, Dirac>) return r.space;
          else return r.index;
        },
        rep_);
  }

  const Grid<Real>& space_grid() const {
    return std::visit([](const auto& r) -> const Grid<Real>& { return r.space; },
                      rep_);
  }

  std::size_t index_dim() const { return index_grid().dim(); }
  std::size_t space_dim() const { return space_grid().dim(); }

  /// Dirac and Fourier are bases by construction; kernels only when flagged.
  bool is_basis() const {
    if (auto k = std::get_if<Kernel>(&rep_)) return k->basis;
    return true;
  }

  const Kernel* kernel() const { return std::get_if<Kernel>(&rep_); }

  std::string describe() const {
    switch (kind()) {
      case FamilyKind::Dirac: return "dirac";
      case FamilyKind::Fourier: return "fourier";
      case FamilyKind::Kernel: return is_basis() ? "kernel(basis)" : "kernel";
    }
    return "?";
  }

 private:
  std::variant<Dirac, Fourier, Kernel> rep_;
};

template <typename Real>
SchwartzFamily<Real> dirac_family(const Grid<Real>& space) {
  return SchwartzFamily<Real>(typename SchwartzFamily<Real>::Dirac{space});
}

template <typename Real>
SchwartzFamily<Real> fourier_family(const Grid<Real>& space) {
  return SchwartzFamily<Real>(
      typename SchwartzFamily<Real>::Fourier{space, dual_grid(space)});
}

template <typename Real>
SchwartzFamily<Real> kernel_family(const Grid<Real>& index,
                                   const Grid<Real>& space,
                                   KernelMatrix<std::type_identity_t<Real>> rows,
                                   bool basis = false) {
  if (static_cast<std::size_t>(rows.rows()) != index.size() ||
      static_cast<std::size_t>(rows.cols()) != space.size())
    throw GridMismatch("kernel shape " + std::to_string(rows.rows()) + "x" +
                       std::to_string(rows.cols()) + " does not match grids " +
                       std::to_string(index.size()) + "x" +
                       std::to_string(space.size()));
  if (!rows.allFinite()) throw InvalidDistribution("kernel entries must be finite");
  return SchwartzFamily<Real>(typename SchwartzFamily<Real>::Kernel{
      index, space,
      std::make_shared<const detail::KernelData<Real>>(std::move(rows)), basis});
}

/// Condition estimate sigma_max / sigma_min of the kernel synthesis matrix.
/// Dirac and Fourier families are perfectly conditioned.
template <typename Real>
Real kernel_condition(const SchwartzFamily<Real>& v) {
  if (auto k = v.kernel())
    return k->data->condition_number(quadrature_weight(k->index));
  return Real(1);
}

/// Returns `v` flagged as a basis after checking that its kernel is square and
/// its coordinate system is well conditioned.
template <typename Real>
SchwartzFamily<Real> mark_as_basis(const SchwartzFamily<Real>& v,
                                   Real condition_limit = Real(kDefaultConditionLimit)) {
  const auto* k = v.kernel();
  if (!k) return v;
  if (k->index.size() != k->space.size())
    throw NotABasis("kernel family is not square");
  const Real cond = kernel_condition(v);
  if (!(cond <= condition_limit))
    throw NotABasis("kernel family condition " + std::to_string(double(cond)) +
                    " exceeds limit");
  auto flagged = *k;
  flagged.basis = true;
  return SchwartzFamily<Real>(std::move(flagged));
}

template <typename Real>
GridDistribution<Real> member(const SchwartzFamily<Real>& v, std::size_t flat) {
  const Grid<Real>& index = v.index_grid();
  const Grid<Real>& space = v.space_grid();
  if (flat >= index.size()) throw IndexOffGrid("family index out of range");
  switch (v.kind()) {
    case FamilyKind::Dirac: {
      Samples<Real> s = Samples<Real>::Zero(space.size());
      s[Eigen::Index(flat)] = Real(1) / quadrature_weight(space);
      return {space, std::move(s)};
    }
    case FamilyKind::Fourier: {
      const Point<Real> p = index.point(flat);
      Samples<Real> s(space.size());
      for (std::size_t k = 0; k < space.size(); ++k) {
        const Real phase = p.dot(space.point(k));
        s[Eigen::Index(k)] = std::polar(Real(1), -phase);
      }
      return {space, std::move(s)};
    }
    case FamilyKind::Kernel:
      return {space, v.kernel()->data->rows.row(Eigen::Index(flat)).transpose()};
  }
  throw Error("unreachable family kind");
}

/// Member at an index point; the point must be a node of the index grid.
template <typename Real>
GridDistribution<Real> member(const SchwartzFamily<Real>& v,
                              std::span<const Real> p) {
  return member(v, v.index_grid().index_of(p));
}

template <typename Real>
GridDistribution<Real> member_at(const SchwartzFamily<Real>& v, Real p) {
  return member(v, std::span<const Real>(&p, 1));
}

/// Coordinate distribution [u|v]: coefficients c with superpose(c, v) = u.
///
/// Fourier coordinates are the forward transform of the fixed convention;
/// kernel coordinates are the least-squares solution of dp * K^T c = u and
/// fail with IllConditioned beyond `condition_limit`.
template <typename Real>
CoordinateDistribution<Real> coordinates(
    const GridDistribution<Real>& u, const SchwartzFamily<Real>& v,
    Real condition_limit = Real(kDefaultConditionLimit)) {
  require_same_grid(u.grid(), v.space_grid(), "coordinates");
  switch (v.kind()) {
    case FamilyKind::Dirac:
      return {v.index_grid(), u.samples()};
    case FamilyKind::Fourier:
      return {v.index_grid(),
              detail::fourier_transform(u.samples(), v.space_grid(), v.index_grid(),
                                        detail::Direction::Coordinates)};
    case FamilyKind::Kernel: {
      const auto& k = *v.kernel();
      const Real w = quadrature_weight(k.index);
      const auto& svd = k.data->svd(w);
      const Real cond = k.data->condition_number(w);
      if (!(cond <= condition_limit))
        throw IllConditioned("kernel coordinates: condition estimate " +
                                 std::to_string(double(cond)) + " exceeds " +
                                 std::to_string(double(condition_limit)),
                             double(cond));
      Samples<Real> c = svd.solve(u.samples());
      return {k.index, std::move(c)};
    }
  }
  throw Error("unreachable family kind");
}

/// Superposition sum_j c(p_j) v_{p_j} dp.
template <typename Real>
GridDistribution<Real> superpose(const CoordinateDistribution<Real>& c,
                                 const SchwartzFamily<Real>& v) {
  require_same_grid(c.grid(), v.index_grid(), "superpose");
  switch (v.kind()) {
    case FamilyKind::Dirac:
      return {v.space_grid(), c.samples()};
    case FamilyKind::Fourier:
      return {v.space_grid(),
              detail::fourier_transform(c.samples(), v.space_grid(), v.index_grid(),
                                        detail::Direction::Superpose)};
    case FamilyKind::Kernel: {
      const auto& k = *v.kernel();
      Samples<Real> s =
          quadrature_weight(k.index) * (k.data->rows.transpose() * c.samples());
      return {k.space, std::move(s)};
    }
  }
  throw Error("unreachable family kind");
}

/// Dense (index count x space count) matrix whose rows are the members of `v`.
template <typename Real>
KernelMatrix<Real> kernel_rows(const SchwartzFamily<Real>& v) {
  if (auto k = v.kernel()) return k->data->rows;
  const std::size_t rows = v.index_grid().size(), cols = v.space_grid().size();
  if (rows * cols > kMaxKernelEntries)
    throw TooLarge("family too large to materialise as a kernel");
  KernelMatrix<Real> m(rows, cols);
  for (std::size_t p = 0; p < rows; ++p)
    m.row(Eigen::Index(p)) = member(v, p).samples().transpose();
  return m;
}

/// Family p -> a(p) v_p, returned as a kernel family.
template <typename Real>
SchwartzFamily<Real> scale_family(const SymbolFunction<Real>& a,
                                  const SchwartzFamily<Real>& v) {
  require_arity(a, v.index_dim(), "scale_family");
  KernelMatrix<Real> rows = kernel_rows(v);
  const Samples<Real> values = sample(a, v.index_grid());
  rows = values.asDiagonal() * rows;
  return kernel_family(v.index_grid(), v.space_grid(), std::move(rows));
}

/// Product mu.lambda: member p is the superposition of mu_p in lambda.
template <typename Real>
SchwartzFamily<Real> family_product(const SchwartzFamily<Real>& mu,
                                    const SchwartzFamily<Real>& lambda) {
  require_same_grid(mu.space_grid(), lambda.index_grid(), "family_product");
  const Grid<Real>& index = mu.index_grid();
  const Grid<Real>& space = lambda.space_grid();
  if (index.size() * space.size() > kMaxKernelEntries)
    throw TooLarge("family product too large to materialise");
  KernelMatrix<Real> rows(index.size(), space.size());
  if (const auto* k = lambda.kernel()) {
    rows = quadrature_weight(k->index) * (kernel_rows(mu) * k->data->rows);
  } else {
    for (std::size_t p = 0; p < index.size(); ++p)
      rows.row(Eigen::Index(p)) =
          superpose(member(mu, p), lambda).samples().transpose();
  }
  return kernel_family(index, space, std::move(rows));
}

/// Family whose members are the given distributions read as coordinates on
/// `space` (one row per node of `index`).
template <typename Real, typename MemberFn>
SchwartzFamily<Real> family_from_members(const Grid<Real>& index,
                                         const Grid<Real>& space,
                                         MemberFn&& make_member) {
  if (index.size() * space.size() > kMaxKernelEntries)
    throw TooLarge("family too large to materialise");
  KernelMatrix<Real> rows(index.size(), space.size());
  for (std::size_t p = 0; p < index.size(); ++p) {
    const GridDistribution<Real> m = make_member(p);
    require_same_grid(m.grid(), space, "family member");
    rows.row(Eigen::Index(p)) = m.samples().transpose();
  }
  return kernel_family(index, space, std::move(rows));
}

}  // namespace schwartz
