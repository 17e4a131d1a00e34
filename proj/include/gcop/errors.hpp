#pragma once

#include <stdexcept>
#include <string>

namespace gcop {

// Numerically degenerate input: singular/ill-conditioned matrix, vanishing
// determinant, failed factorization.
class singularity_error : public std::runtime_error {
 public:
  explicit singularity_error(const std::string& what) : std::runtime_error(what) {}
};

// Operation asked of a copula family that does not support it.
class unsupported_family_error : public std::invalid_argument {
 public:
  explicit unsupported_family_error(const std::string& what) : std::invalid_argument(what) {}
};

// Caller violated a documented data precondition (e.g. non-standardized
// input where standardized columns are required).
class precondition_error : public std::invalid_argument {
 public:
  explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace gcop
