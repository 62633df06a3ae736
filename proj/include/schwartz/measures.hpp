#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>

#include "schwartz/families.hpp"
#include "schwartz/spectral.hpp"

namespace schwartz {

/// Function on the eigenvalue spectrum S = a(R^m) in C.
///
/// The spectrum is never materialised: a spectrum function is only ever
/// evaluated through its composite f o a on an index grid.
template <typename Real = double>
class SpectrumFunction {
 public:
  using Complex = std::complex<Real>;
  using Evaluator = std::function<Complex(Complex)>;

  SpectrumFunction(Evaluator f, std::string descriptor)
      : f_(std::move(f)), descriptor_(std::move(descriptor)) {}

  Complex operator()(Complex s) const { return f_(s); }
  const std::string& descriptor() const { return descriptor_; }

 private:
  Evaluator f_;
  std::string descriptor_;
};

/// The canonical injection j_S : s -> s.
template <typename Real = double>
SpectrumFunction<Real> spectrum_identity() {
  return {[](std::complex<Real> s) { return s; }, "j_S"};
}

template <typename Real = double>
SpectrumFunction<Real> spectrum_constant(std::complex<Real> c) {
  return {[c](std::complex<Real>) { return c; },
          c == std::complex<Real>(1) ? "1_S" : "const_S"};
}

template <typename Real>
SpectrumFunction<Real> operator*(const SpectrumFunction<Real>& f,
                                 const SpectrumFunction<Real>& g) {
  return {[f, g](std::complex<Real> s) { return f(s) * g(s); },
          "(" + f.descriptor() + ")*(" + g.descriptor() + ")"};
}

template <typename Real>
SpectrumFunction<Real> operator+(const SpectrumFunction<Real>& f,
                                 const SpectrumFunction<Real>& g) {
  return {[f, g](std::complex<Real> s) { return f(s) + g(s); },
          "(" + f.descriptor() + ")+(" + g.descriptor() + ")"};
}

/// f o a, a symbol on a's index space.
template <typename Real>
SymbolFunction<Real> compose(const SpectrumFunction<Real>& f,
                             const SymbolFunction<Real>& a) {
  return {a.arity(), [f, a](std::span<const Real> p) { return f(a(p)); },
          "(" + f.descriptor() + ")o(" + a.descriptor() + ")"};
}

template <typename Real = double>
using MeasureArgument = std::variant<SymbolFunction<Real>, SpectrumFunction<Real>>;

template <typename Real = double>
using MeasureValue = std::variant<GridDistribution<Real>, LinearOperator<Real>>;

template <typename Real>
const LinearOperator<Real>& as_operator(const MeasureValue<Real>& v) {
  if (auto op = std::get_if<LinearOperator<Real>>(&v)) return *op;
  throw Error("measure value is a distribution, not an operator");
}

template <typename Real>
const GridDistribution<Real>& as_distribution(const MeasureValue<Real>& v) {
  if (auto d = std::get_if<GridDistribution<Real>>(&v)) return *d;
  throw Error("measure value is an operator, not a distribution");
}

/// Which kind of function a measure integrates.
enum class MeasureDomain { Index, Spectrum };

/// Generalized (operator- or distribution-valued) measure: a linear map from
/// functions to operators or distributions.
template <typename Real = double>
class GeneralizedMeasure {
 public:
  /// mu_v(f) = u -> superpose(f [u|v], v).
  struct Basis {
    SchwartzFamily<Real> v;
  };
  /// (B.v)(f) = u -> superpose(f B(u), v).
  struct SpectralProduct {
    LinearOperator<Real> B;
    SchwartzFamily<Real> v;
  };
  /// (g.mu)(f) = mu(g f).
  struct Scaled {
    MeasureArgument<Real> g;
    std::shared_ptr<const GeneralizedMeasure> inner;
  };
  /// mu_a(u,v)(f) = (f o a)[u|v]; coordinates are computed once.
  struct EigenspectrumVector {
    CoordinateDistribution<Real> coords;
    SchwartzFamily<Real> v;
    SymbolFunction<Real> a;
  };
  /// mu_(a,v)(f) = u -> superpose((f o a)[u|v], v).
  struct EigenspectrumOperator {
    SymbolFunction<Real> a;
    SchwartzFamily<Real> v;
  };

  using Rep = std::variant<Basis, SpectralProduct, Scaled, EigenspectrumVector,
                           EigenspectrumOperator>;

  explicit GeneralizedMeasure(Rep rep) : rep_(std::move(rep)) {}

  const Rep& rep() const { return rep_; }

  MeasureDomain domain() const {
    if (auto s = std::get_if<Scaled>(&rep_)) return s->inner->domain();
    if (std::holds_alternative<EigenspectrumVector>(rep_) ||
        std::holds_alternative<EigenspectrumOperator>(rep_))
      return MeasureDomain::Spectrum;
    return MeasureDomain::Index;
  }

  /// Arity of the symbols an index-domain measure accepts.
  std::size_t arity() const {
    return std::visit(
        [](const auto& r) -> std::size_t {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, Scaled>) return r.inner->arity();
          else return r.v.index_dim();
        },
        rep_);
  }

  MeasureValue<Real> evaluate(const MeasureArgument<Real>& f) const {
    return std::visit([&](const auto& r) { return eval(r, f); }, rep_);
  }
  MeasureValue<Real> evaluate(const SymbolFunction<Real>& f) const {
    return evaluate(MeasureArgument<Real>(f));
  }
  MeasureValue<Real> evaluate(const SpectrumFunction<Real>& f) const {
    return evaluate(MeasureArgument<Real>(f));
  }

  /// The constant function 1 on this measure's domain.
  MeasureArgument<Real> unit() const {
    if (domain() == MeasureDomain::Spectrum)
      return spectrum_constant<Real>(std::complex<Real>(1));
    return constant_symbol<Real>(arity(), std::complex<Real>(1));
  }

 private:
  static const SymbolFunction<Real>& symbol_arg(const MeasureArgument<Real>& f) {
    if (auto s = std::get_if<SymbolFunction<Real>>(&f)) return *s;
    throw ArityMismatch("measure integrates index-space symbols, got a spectrum function");
  }
  static const SpectrumFunction<Real>& spectrum_arg(const MeasureArgument<Real>& f) {
    if (auto s = std::get_if<SpectrumFunction<Real>>(&f)) return *s;
    throw ArityMismatch("measure integrates spectrum functions, got an index symbol");
  }

  static MeasureValue<Real> eval(const Basis& r, const MeasureArgument<Real>& f) {
    const auto& sym = symbol_arg(f);
    require_arity(sym, r.v.index_dim(), "spectral distribution");
    return diagonal_operator(r.v, sym);
  }

  static MeasureValue<Real> eval(const SpectralProduct& r,
                                 const MeasureArgument<Real>& f) {
    const auto& sym = symbol_arg(f);
    require_arity(sym, r.v.index_dim(), "spectral product");
    auto B = r.B;
    auto v = r.v;
    return functional_operator<Real>(
        [B, v, sym](const GridDistribution<Real>& u) {
          const GridDistribution<Real> b = B(u);
          require_same_grid(b.grid(), v.index_grid(), "spectral product");
          Samples<Real> weighted = sample(sym, v.index_grid()).cwiseProduct(b.samples());
          return superpose(CoordinateDistribution<Real>(v.index_grid(), std::move(weighted)), v);
        },
        "(" + B.describe() + "." + v.describe() + ")(" + sym.descriptor() + ")");
  }

  static MeasureValue<Real> eval(const Scaled& r, const MeasureArgument<Real>& f) {
    return std::visit(
        [&](const auto& g) -> MeasureValue<Real> {
          using G = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<G, SymbolFunction<Real>>)
            return r.inner->evaluate(MeasureArgument<Real>(g * symbol_arg(f)));
          else
            return r.inner->evaluate(MeasureArgument<Real>(g * spectrum_arg(f)));
        },
        r.g);
  }

  static MeasureValue<Real> eval(const EigenspectrumVector& r,
                                 const MeasureArgument<Real>& f) {
    const auto fa = compose(spectrum_arg(f), r.a);
    Samples<Real> s = sample(fa, r.v.index_grid()).cwiseProduct(r.coords.samples());
    return CoordinateDistribution<Real>(r.v.index_grid(), std::move(s));
  }

  static MeasureValue<Real> eval(const EigenspectrumOperator& r,
                                 const MeasureArgument<Real>& f) {
    return diagonal_operator(r.v, compose(spectrum_arg(f), r.a));
  }

  Rep rep_;
};

template <typename Real>
void require_basis(const SchwartzFamily<Real>& v, const char* context) {
  if (!v.is_basis())
    throw NotABasis(std::string(context) + ": family '" + v.describe() +
                    "' is not flagged as a basis");
}

/// mu_v, the generalized spectral measure of a basis.
template <typename Real>
GeneralizedMeasure<Real> spectral_distribution(const SchwartzFamily<Real>& v) {
  require_basis(v, "spectral_distribution");
  return GeneralizedMeasure<Real>(typename GeneralizedMeasure<Real>::Basis{v});
}

/// (B.v), for B mapping v's space grid onto v's index grid.
template <typename Real>
GeneralizedMeasure<Real> spectral_product(const LinearOperator<Real>& B,
                                          const SchwartzFamily<Real>& v) {
  return GeneralizedMeasure<Real>(
      typename GeneralizedMeasure<Real>::SpectralProduct{B, v});
}

template <typename Real>
GeneralizedMeasure<Real> scale_measure(const SymbolFunction<Real>& g,
                                       const GeneralizedMeasure<Real>& mu) {
  if (mu.domain() != MeasureDomain::Index)
    throw ArityMismatch("scale_measure: index symbol applied to a spectrum measure");
  require_arity(g, mu.arity(), "scale_measure");
  return GeneralizedMeasure<Real>(typename GeneralizedMeasure<Real>::Scaled{
      g, std::make_shared<const GeneralizedMeasure<Real>>(mu)});
}

template <typename Real>
GeneralizedMeasure<Real> scale_measure(const SpectrumFunction<Real>& g,
                                       const GeneralizedMeasure<Real>& mu) {
  if (mu.domain() != MeasureDomain::Spectrum)
    throw ArityMismatch("scale_measure: spectrum function applied to an index measure");
  return GeneralizedMeasure<Real>(typename GeneralizedMeasure<Real>::Scaled{
      g, std::make_shared<const GeneralizedMeasure<Real>>(mu)});
}

/// Integral of the measure: its value at the unit constant.
template <typename Real>
MeasureValue<Real> integrate_measure(const GeneralizedMeasure<Real>& mu) {
  return mu.evaluate(mu.unit());
}

/// mu_a(u,v): f -> (f o a)[u|v].
template <typename Real>
GeneralizedMeasure<Real> eigenspectrum_measure(const GridDistribution<Real>& u,
                                               const SchwartzFamily<Real>& v,
                                               const SymbolFunction<Real>& a) {
  require_arity(a, v.index_dim(), "eigenspectrum_measure");
  return GeneralizedMeasure<Real>(typename GeneralizedMeasure<Real>::EigenspectrumVector{
      coordinates(u, v), v, a});
}

/// mu_(a,v): f -> the operator with eigenbasis v and eigenvalue system f o a.
template <typename Real>
GeneralizedMeasure<Real> operator_spectral_measure(const SymbolFunction<Real>& a,
                                                   const SchwartzFamily<Real>& v) {
  require_basis(v, "operator_spectral_measure");
  require_arity(a, v.index_dim(), "operator_spectral_measure");
  return GeneralizedMeasure<Real>(
      typename GeneralizedMeasure<Real>::EigenspectrumOperator{a, v});
}

}  // namespace schwartz
