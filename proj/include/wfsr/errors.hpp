#pragma once

#include <stdexcept>
#include <string>

namespace wfsr {

/// Base class for numerical failures (SCF divergence, non-finite losses,
/// eigensolver breakdown). The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NonConvergence : public NumericalError {
  public:
    NonConvergence(const std::string &what, int iterations)
        : NumericalError(what), iterations_(iterations) {}
    [[nodiscard]] int iterations() const { return iterations_; }

  private:
    int iterations_;
};

class NonFiniteError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class InvalidOccupation : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class NormalizationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class IndexOverflow : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

class DimensionMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

} // namespace wfsr
