#pragma once
#include <stdexcept>
#include <string>

namespace geoflow {

/// Base class for all geoflow errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A caller violated a precondition (model mismatch, malformed argument).
struct UsageError : Error {
  using Error::Error;
};

/// A time stepper failed; carries the flow time and step at the failure.
struct IntegrationError : Error {
  double time;
  double step;
  IntegrationError(const std::string& what, double t, double h)
      : Error(what), time(t), step(h) {}
};

/// Evaluation was requested on the singular set (pG ~ 0 for Nil, kappa ~ 0 for Sol).
struct SingularSetError : Error {
  using Error::Error;
};

/// A bounded search ran past its stated bound.
struct CapacityError : Error {
  using Error::Error;
};

/// Lattice reduction could not produce a fundamental-domain representative.
struct ReductionError : Error {
  using Error::Error;
};

/// Non-finite value appeared inside a finite-difference stencil.
struct StencilError : Error {
  using Error::Error;
};

/// Benettin companion left the linear regime between renormalizations.
struct SeparationError : Error {
  using Error::Error;
};

}  // namespace geoflow
