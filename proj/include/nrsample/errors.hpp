#ifndef NRSAMPLE_ERRORS_HPP
#define NRSAMPLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nrsample {

// Argument-contract violations use std::invalid_argument. The two types below
// cover data that is well-formed but unusable.

/// Pixel data that cannot be processed, e.g. NaN or infinite intensities.
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

/// Too few (or only collinear) samples to build an interpolant.
class DegenerateInput : public std::runtime_error {
 public:
  explicit DegenerateInput(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace nrsample

#endif  // NRSAMPLE_ERRORS_HPP
