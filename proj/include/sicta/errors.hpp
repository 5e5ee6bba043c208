#pragma once

#include <stdexcept>
#include <string>

namespace sicta {

/// Rejected user input: bad flags, invalid policy parameters.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke a precondition (e.g. occupancy does not sum to n).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Tree generation went deeper than the configured bound.
class DepthExceeded : public std::runtime_error {
 public:
  DepthExceeded(int depth, int max_depth)
      : std::runtime_error("split tree depth " + std::to_string(depth) +
                           " exceeds max_depth " + std::to_string(max_depth)),
        depth_(depth) {}

  int depth() const noexcept { return depth_; }

 private:
  int depth_;
};

/// Exact table request larger than the composition budget allows.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sicta
