#pragma once

#include <stdexcept>
#include <string>

namespace uentropy {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input validation (bad arguments, malformed vectors).
class InvalidGamma : public Error { public: using Error::Error; };
class InvalidScale : public Error { public: using Error::Error; };
class InvalidAlpha : public Error { public: using Error::Error; };
class NegativeArgument : public Error { public: using Error::Error; };
class BadGrid : public Error { public: using Error::Error; };
class InvalidProbVector : public Error { public: using Error::Error; };
class LengthMismatch : public Error { public: using Error::Error; };

// Domain preconditions of the entropy operations.
class DegenerateInput : public Error { public: using Error::Error; };
class NotAbsolutelyContinuous : public Error { public: using Error::Error; };
class NotNormalized : public Error { public: using Error::Error; };
class TooLarge : public Error { public: using Error::Error; };

// Solver failures.
class NoConvergence : public Error { public: using Error::Error; };
class UnboundedAbove : public Error { public: using Error::Error; };

}  // namespace uentropy
