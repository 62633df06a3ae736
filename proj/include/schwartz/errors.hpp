#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace schwartz {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGrid : public Error {
 public:
  using Error::Error;
};

class InvalidDistribution : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOffGrid : public Error {
 public:
  using Error::Error;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class IllConditioned : public Error {
 public:
  IllConditioned(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

class NotABasis : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

/// Locates a failure on an index grid: flat row-major position plus the
/// coordinates of that grid point.
struct IndexLocation {
  std::size_t flat = 0;
  std::vector<double> point;
};

/// The datum carries coefficient mass where the symbol vanishes.
///
/// `worst` is the index-grid point with the largest offending coefficient.
/// When raised while building a Green family, `family_index` names the family
/// member whose division failed.
class NotDivisible : public Error {
 public:
  NotDivisible(const std::string& what, IndexLocation worst,
               double offending_mass,
               std::ptrdiff_t family_index = -1)
      : Error(what),
        worst_(std::move(worst)),
        offending_mass_(offending_mass),
        family_index_(family_index) {}

  const IndexLocation& worst_index() const { return worst_; }
  double offending_mass() const { return offending_mass_; }
  std::ptrdiff_t family_index() const { return family_index_; }

 private:
  IndexLocation worst_;
  double offending_mass_;
  std::ptrdiff_t family_index_;
};

/// The eigenvalue system dips below the zero threshold somewhere.
class NotInvertible : public Error {
 public:
  NotInvertible(const std::string& what, IndexLocation worst, double min_abs)
      : Error(what), worst_(std::move(worst)), min_abs_(min_abs) {}

  const IndexLocation& worst_index() const { return worst_; }
  double min_abs() const { return min_abs_; }

 private:
  IndexLocation worst_;
  double min_abs_;
};

}  // namespace schwartz
