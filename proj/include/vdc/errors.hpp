#pragma once

#include <stdexcept>
#include <string>

namespace vdc {

// Invalid family parameters, bad (C, L) choices, malformed configs.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the admissible range; the message names the range.
class RangeError : public std::out_of_range {
 public:
  RangeError(const std::string& what, double lo, double hi)
      : std::out_of_range(what + " (admissible range [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "])"),
        lo_(lo),
        hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_, hi_;
};

// Requested accuracy not reachable under the configured work cap.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved bound " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

}  // namespace vdc
