#pragma once

#include <stdexcept>
#include <string>

namespace svp {

// Quadrature / transform failed to reach the requested tolerance.
// Carries the error bound that was actually achieved.
class accuracy_error : public std::runtime_error {
 public:
  accuracy_error(const std::string& what, double achieved, double requested)
      : std::runtime_error(what + " (achieved " + std::to_string(achieved) + ", requested " +
                           std::to_string(requested) + ")"),
        achieved_(achieved),
        requested_(requested) {}
  double achieved() const { return achieved_; }
  double requested() const { return requested_; }

 private:
  double achieved_;
  double requested_;
};

}  // namespace svp
