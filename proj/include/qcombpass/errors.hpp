#ifndef QCOMBPASS_ERRORS_HPP
#define QCOMBPASS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qcombpass {

// Raised when a truncated series or an adaptive basis cannot reach the
// requested tolerance. Maps to exit code 3 in the CLI.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double tail)
      : std::runtime_error(what), tail_(tail) {}
  double tail() const noexcept { return tail_; }

 private:
  double tail_;
};

// Closed-form identities that produced a physically impossible value.
class consistency_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class scenario_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qcombpass

#endif  // QCOMBPASS_ERRORS_HPP
