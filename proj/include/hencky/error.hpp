#pragma once

#include <stdexcept>
#include <string>

namespace hencky {

/// Base for all errors raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// det F <= 0, a nonpositive eigenvalue of B/C, or any other inadmissible kinematic state.
class InvalidDeformation : public Error
{
public:
  using Error::Error;
};

/// Reference-configuration Jacobian is not positive.
class DegenerateElement : public Error
{
public:
  using Error::Error;
};

/// Gent energy evaluated at or beyond the limiting chain extensibility.
class LockingLimit : public InvalidDeformation
{
public:
  using InvalidDeformation::InvalidDeformation;
};

/// Bad material parameters or an inconsistent run configuration.
class ConfigError : public Error
{
public:
  using Error::Error;
};

class SingularTangent : public Error
{
public:
  using Error::Error;
};

class NonConvergence : public Error
{
public:
  using Error::Error;
};

class FitFailure : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

} // namespace hencky
