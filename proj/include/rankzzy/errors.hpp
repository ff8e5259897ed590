#ifndef RANKZZY_ERRORS_HPP
#define RANKZZY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rankzzy {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- fuzzy arithmetic ------------------------------------------------------

struct InvalidTrapezoid : Error {
  using Error::Error;
};

struct NonPositiveOperand : Error {
  using Error::Error;
};

struct EmptySet : Error {
  using Error::Error;
};

// -- decision matrix assembly ----------------------------------------------

struct EmptySamples : Error {
  using Error::Error;
};

struct UnknownLabel : Error {
  using Error::Error;
};

struct ProportionsNotNormalized : Error {
  using Error::Error;
};

struct MissingAssessment : Error {
  using Error::Error;
};

struct KindMismatch : Error {
  using Error::Error;
};

// -- weight domain ----------------------------------------------------------

struct BoundsOutOfOrder : Error {
  using Error::Error;
};

struct InfeasibleCoreSum : Error {
  InfeasibleCoreSum(std::string msg, double sum_lower_b, double sum_upper_c)
      : Error(std::move(msg)), sum_lower_b(sum_lower_b), sum_upper_c(sum_upper_c) {}
  double sum_lower_b;
  double sum_upper_c;
};

struct NotNormalized : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// -- scoring and optimization ------------------------------------------------

struct NonPositiveEntry : Error {
  using Error::Error;
};

struct EmptyRow : Error {
  using Error::Error;
};

struct InfeasibleDomain : Error {
  using Error::Error;
};

struct NonPositiveRow : Error {
  using Error::Error;
};

struct GridTooLarge : Error {
  using Error::Error;
};

// -- evaluation harness -------------------------------------------------------

struct NonPositiveValue : Error {
  using Error::Error;
};

struct LengthMismatch : Error {
  using Error::Error;
};

// -- i/o -----------------------------------------------------------------------

struct ParseError : Error {
  using Error::Error;
};

}  // namespace rankzzy

#endif  // RANKZZY_ERRORS_HPP
