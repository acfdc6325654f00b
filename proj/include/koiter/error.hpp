#pragma once

#include <stdexcept>
#include <string>

namespace koiter {

// Base of every error raised by the library. Validation errors map to CLI
// exit code 2, everything else to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error { using Error::Error; };
class InvariantError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class EllipticityError : public Error { using Error::Error; };
class StructureError : public Error { using Error::Error; };
class DegenerateModeError : public Error { using Error::Error; };
class ResolutionError : public Error { using Error::Error; };
class KernelModeError : public Error { using Error::Error; };
class ValidationError : public Error { using Error::Error; };

} // namespace koiter
