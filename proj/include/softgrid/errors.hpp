#pragma once

#include <stdexcept>
#include <string>

namespace softgrid {

// A force-law denominator collapsed: the configuration left the range the
// closed-form spring laws are valid on.
class SingularConfigError : public std::runtime_error {
 public:
  explicit SingularConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite position or velocity during time integration.
class DivergedError : public std::runtime_error {
 public:
  DivergedError(int iteration_, int node_, double dt_)
      : std::runtime_error("simulation diverged at iteration " + std::to_string(iteration_) +
                           ", node " + std::to_string(node_) + ", dt " + std::to_string(dt_)),
        iteration(iteration_),
        node(node_),
        dt(dt_) {}

  int iteration;
  int node;
  double dt;
};

// Static root finding could not bracket a solution (e.g. stress beyond the
// range the material can carry).
class BracketError : public std::runtime_error {
 public:
  explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace softgrid
