#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gcm {

// Invalid input: violates a documented precondition. The CLI maps this to exit code 2.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to converge. Carries the last iterate for inspection.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, std::vector<double> last_iterate)
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

}  // namespace gcm
