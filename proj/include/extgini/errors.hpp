#pragma once

#include <stdexcept>
#include <string>

namespace extgini {

/// Invalid parameters or data. CLI maps these to exit code 2.
class invalid_input : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Fewer observations than the subset size m requires.
class insufficient_sample_error : public invalid_input {
  public:
    using invalid_input::invalid_input;
};

/// Sample carries no usable dispersion (all-zero sum, or all values equal
/// where a fit needs spread).
class degenerate_sample_error : public invalid_input {
  public:
    using invalid_input::invalid_input;
};

/// A guarded computation would exceed its size budget. CLI exit code 3.
class capacity_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature ran out of subdivisions before reaching the requested
/// tolerance. Carries the partial estimate and its error bound. CLI exit code 3.
class quadrature_error : public std::runtime_error {
  public:
    quadrature_error(const std::string& what, double partial_estimate, double error_estimate)
        : std::runtime_error(what),
          partial_estimate_(partial_estimate),
          error_estimate_(error_estimate) {}

    double partial_estimate() const noexcept { return partial_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

  private:
    double partial_estimate_;
    double error_estimate_;
};

}  // namespace extgini
