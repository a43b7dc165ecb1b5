#pragma once

#include <cmath>
#include <limits>

#include "histat/errors.hpp"

namespace histat {

/// A probability carried as its natural logarithm.
///
/// Negative infinity encodes probability zero; it propagates through tail
/// scans without error, so out-of-support queries stay cheap. The stored
/// value is always <= 0.
class LogProb {
 public:
  LogProb() = default;  // probability zero

  static LogProb from_log(double lg) {
    if (std::isnan(lg)) throw DomainError("LogProb: log-probability is NaN");
    if (lg > 0.0) {
      // Tolerate rounding noise from upstream log-space arithmetic.
      if (lg > 1e-9) throw DomainError("LogProb: log-probability must be <= 0");
      lg = 0.0;
    }
    return LogProb(lg);
  }

  static LogProb from_linear(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("LogProb: probability outside [0,1]");
    return LogProb(std::log(p));
  }

  static LogProb zero() { return LogProb(); }
  static LogProb one() { return LogProb(0.0); }

  double log() const { return log_; }
  double linear() const { return std::exp(log_); }
  bool is_zero() const { return std::isinf(log_) && log_ < 0.0; }

 private:
  explicit LogProb(double lg) : log_(lg) {}

  double log_ = -std::numeric_limits<double>::infinity();
};

}  // namespace histat
