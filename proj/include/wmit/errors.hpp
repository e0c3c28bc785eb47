#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace wmit {

/// Base of every error the library throws. `category()` drives the CLI exit code.
class Error : public std::runtime_error {
  public:
    enum class Category { validation, numerical, unsupported };

    Error(Category cat, const std::string& what) : std::runtime_error(what), cat_(cat) {}
    Category category() const noexcept { return cat_; }

  private:
    Category cat_;
};

/// Unknown family/kind, missing context, malformed spec.
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& what) : Error(Category::validation, what) {}
};

/// Argument outside the mathematical domain (negative rate, p outside (0,1), t below the floor).
class DomainError : public Error {
  public:
    explicit DomainError(const std::string& what, std::optional<double> at = std::nullopt)
        : Error(Category::validation, what), at_(at) {}
    std::optional<double> at() const noexcept { return at_; }

  private:
    std::optional<double> at_;
};

/// A documented precondition failed on a grid; `witness` names a point where it fails.
class PreconditionViolation : public Error {
  public:
    PreconditionViolation(const std::string& what, double witness)
        : Error(Category::validation, what), witness_(witness) {}
    double witness() const noexcept { return witness_; }

  private:
    double witness_;
};

/// Operation needs something the input does not provide (pdf of an empirical law).
class UnsupportedError : public Error {
  public:
    explicit UnsupportedError(const std::string& what) : Error(Category::unsupported, what) {}
};

/// Quadrature did not converge, an integrand produced NaN, a tail diverged.
class NumericalError : public Error {
  public:
    NumericalError(const std::string& what, double best_estimate, std::optional<double> at = std::nullopt)
        : Error(Category::numerical, what), best_(best_estimate), at_(at) {}
    double best_estimate() const noexcept { return best_; }
    std::optional<double> at() const noexcept { return at_; }

  private:
    double best_;
    std::optional<double> at_;
};

}  // namespace wmit
