#pragma once

#include <stdexcept>
#include <string>

namespace jointvec {

// Non-finite training loss. The trainer rethrows with the iteration filled
// in so the CLI can report which checkpoint is the last good one.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what, int iteration = -1)
      : std::runtime_error(what), iteration(iteration) {}
  int iteration;
};

}  // namespace jointvec
