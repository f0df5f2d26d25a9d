#pragma once

#include <stdexcept>
#include <string>

namespace monolab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A model was queried outside its domain: non-positive-definite metric,
/// point outside a chart, singular gauge, chart-set mismatch.
class ModelDomainError : public Error {
  public:
    explicit ModelDomainError(const std::string& msg) : Error(msg) {}
};

/// A finite-difference stencil came closer than 2*step to the puncture or
/// to a chart boundary.
class StencilError : public ModelDomainError {
  public:
    explicit StencilError(const std::string& msg) : ModelDomainError(msg) {}
};

/// Integrator or fit failure.
class NumericalError : public Error {
  public:
    explicit NumericalError(const std::string& msg) : Error(msg) {}
};

/// Malformed run configuration. `where` carries a field path or line number.
class ConfigError : public Error {
  public:
    ConfigError(const std::string& where, const std::string& msg)
        : Error(where.empty() ? msg : where + ": " + msg), where_(where) {}

    const std::string& where() const noexcept { return where_; }

  private:
    std::string where_;
};

}  // namespace monolab
