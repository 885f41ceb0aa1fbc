#pragma once

#include <stdexcept>
#include <string>

namespace delzant {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad JSON, out-of-range arguments, mismatched operands.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A sign could not be certified at the available precision.
class Undecidable : public Error {
 public:
  Undecidable(const std::string& what, int precision_reached)
      : Error("undecidable comparison: " + what + " (precision reached: " +
              std::to_string(precision_reached) + " rounds)"),
        precision_reached_(precision_reached) {}

  int precision_reached() const noexcept { return precision_reached_; }

 private:
  int precision_reached_;
};

enum class NotDelzantReason { TooFewVertices, DegenerateEdge, IrrationalSlope, NonConvex, NonUnimodular };

inline const char* to_string(NotDelzantReason r) {
  switch (r) {
    case NotDelzantReason::TooFewVertices: return "too few vertices";
    case NotDelzantReason::DegenerateEdge: return "degenerate edge";
    case NotDelzantReason::IrrationalSlope: return "irrational slope";
    case NotDelzantReason::NonConvex: return "non-convex";
    case NotDelzantReason::NonUnimodular: return "non-unimodular vertex";
  }
  return "unknown";
}

class NotDelzant : public InvalidInput {
 public:
  NotDelzant(NotDelzantReason reason, std::size_t location, const std::string& detail)
      : InvalidInput(std::string("not a Delzant polygon: ") + to_string(reason) + " at index " +
                     std::to_string(location) + (detail.empty() ? "" : " (" + detail + ")")),
        reason_(reason),
        location_(location) {}

  NotDelzantReason reason() const noexcept { return reason_; }
  /// Vertex index for vertex conditions, edge index for edge conditions.
  std::size_t location() const noexcept { return location_; }

 private:
  NotDelzantReason reason_;
  std::size_t location_;
};

class ChopTooLarge : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class NotBlowDownable : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class TooFewEdges : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class NotTrapezoid : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// The quadratic form is not positive on the symplectic class.
class NotProperInput : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A resource limit requested by the caller was hit.
class ResourceCapExceeded : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed; indicates a bug rather than bad input.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace delzant
