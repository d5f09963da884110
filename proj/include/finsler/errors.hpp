#ifndef FINSLER_ERRORS_HPP
#define FINSLER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace finsler {

/// Base class for all errors raised by the engine.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: dimension mismatches, bad axes, schema violations.
class InputError : public Error {
public:
  explicit InputError(const std::string& what) : Error(what) {}
};

/// The point (x, y) is outside the domain where the metric is defined:
/// A(x,y) <= 0, F^2 <= 0, or g fails positive definiteness without the
/// pseudo-Finsler flag.
class InadmissiblePointError : public Error {
public:
  InadmissiblePointError(const std::string& what, double a_value, double f2_value)
      : Error(what), a_value(a_value), f2_value(f2_value) {}
  double a_value;
  double f2_value;
};

class SingularMatrixError : public Error {
public:
  SingularMatrixError(const std::string& what, double condition)
      : Error(what), condition(condition) {}
  double condition;
};

/// Sherman-Morrison denominator 1 + A^{pq} C_p D_q within the singular band.
class DegenerateUpdateError : public Error {
public:
  DegenerateUpdateError(const std::string& what, double denominator)
      : Error(what), denominator(denominator) {}
  double denominator;
};

/// A finite-difference oracle could not produce a trustworthy value.
class OracleFailureError : public Error {
public:
  explicit OracleFailureError(const std::string& what) : Error(what) {}
};

class IntegrationError : public Error {
public:
  explicit IntegrationError(const std::string& what) : Error(what) {}
};

}  // namespace finsler

#endif
