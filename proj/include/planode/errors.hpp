#pragma once

#include <stdexcept>

namespace planode {

/// Base class for all planode errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A builtin-system or configuration parameter lies outside its admissible range.
struct ParameterOutOfRange : Error {
    using Error::Error;
};

/// An evaluation point or window argument is outside the valid domain.
struct DomainError : Error {
    using Error::Error;
};

/// Normal form requested for a spectrum with an eigenvalue at zero.
struct DegenerateSpectrum : Error {
    using Error::Error;
};

/// Normal form requested for a spectrum that is not repeated.
struct WrongStructure : Error {
    using Error::Error;
};

/// Empirical classification precondition on eigenvalue signs failed.
struct SpectrumMismatch : Error {
    using Error::Error;
};

/// Bound parameters violate their mutual consistency constraints.
struct InconsistentParams : Error {
    using Error::Error;
};

}  // namespace planode
