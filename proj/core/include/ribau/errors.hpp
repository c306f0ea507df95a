#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ribau {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// jetcore
class DivisionByZeroJet : public Error {
 public:
  using Error::Error;
};
class DomainErrorJet : public Error {
 public:
  using Error::Error;
};
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

// liegeom / charts
class ContactViolation : public Error {
 public:
  ContactViolation(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};
class NotImmersed : public Error {
 public:
  using Error::Error;
};
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset,
             std::vector<std::string> expected)
      : Error(what), offset(offset), expected(std::move(expected)) {}
  std::size_t offset;
  std::vector<std::string> expected;
};

// ribaucour
/// The point violates regularity: -dxi + tau df is degenerate there.
class NotRegular : public Error {
 public:
  NotRegular(const std::string& what, std::array<double, 2> where = {0.0, 0.0})
      : Error(what), where(where) {}
  std::array<double, 2> where;
};
class NotHypersurface : public Error {
 public:
  using Error::Error;
};
class InvolutionFailure : public Error {
 public:
  InvolutionFailure(const std::string& what, double discrepancy)
      : Error(what), discrepancy(discrepancy) {}
  double discrepancy;
};
class NotRibaucour : public Error {
 public:
  NotRibaucour(const std::string& what, double max_dalpha)
      : Error(what), max_dalpha(max_dalpha) {}
  double max_dalpha;
};

// demoulin
class PathDependence : public Error {
 public:
  PathDependence(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};
class IllPosed : public Error {
 public:
  using Error::Error;
};
class NotPointwiseDistinct : public Error {
 public:
  using Error::Error;
};
class FullyMasked : public Error {
 public:
  FullyMasked(const std::string& what, double masked_fraction)
      : Error(what), masked_fraction(masked_fraction) {}
  double masked_fraction;
};
class BlowUp : public Error {
 public:
  using Error::Error;
};
class BianchiViolation : public Error {
 public:
  BianchiViolation(const std::string& what, double commutator_norm)
      : Error(what), commutator_norm(commutator_norm) {}
  double commutator_norm;
};

// gridio
class StencilOutOfDomain : public Error {
 public:
  using Error::Error;
};

}  // namespace ribau
