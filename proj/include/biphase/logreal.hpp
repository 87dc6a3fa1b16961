#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace biphase {

// Nonnegative real held as its natural logarithm, for quantities spanning
// hundreds of orders of magnitude (expected counts, enumeration bounds).
// Addition uses log-sum-exp; zero is tracked explicitly.
class LogReal {
 public:
  LogReal() : log_mag_(0.0), zero_(true) {}

  static LogReal zero() { return LogReal(); }

  static LogReal from_log(double log_magnitude) {
    LogReal r;
    r.log_mag_ = log_magnitude;
    r.zero_ = false;
    return r;
  }

  static LogReal from_value(double v) {
    if (v < 0.0) throw std::domain_error("LogReal: negative value");
    if (v == 0.0) return zero();
    return from_log(std::log(v));
  }

  bool is_zero() const { return zero_; }

  double log_magnitude() const {
    return zero_ ? -std::numeric_limits<double>::infinity() : log_mag_;
  }

  // May overflow to +inf; exact zero maps to 0.
  double value() const { return zero_ ? 0.0 : std::exp(log_mag_); }

  LogReal operator*(const LogReal& o) const {
    if (zero_ || o.zero_) return zero();
    return from_log(log_mag_ + o.log_mag_);
  }

  LogReal operator/(const LogReal& o) const {
    if (o.zero_) throw std::domain_error("LogReal: division by zero");
    if (zero_) return zero();
    return from_log(log_mag_ - o.log_mag_);
  }

  LogReal operator+(const LogReal& o) const {
    if (zero_) return o;
    if (o.zero_) return *this;
    double hi = log_mag_, lo = o.log_mag_;
    if (hi < lo) std::swap(hi, lo);
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }

  bool operator<(const LogReal& o) const {
    if (zero_) return !o.zero_;
    if (o.zero_) return false;
    return log_mag_ < o.log_mag_;
  }
  bool operator<=(const LogReal& o) const { return !(o < *this); }

  // "mEe" decimal-scientific rendering, e.g. "3.141593e+12".
  std::string to_scientific(int digits = 6) const {
    if (zero_) return "0";
    double l10 = log_mag_ / std::log(10.0);
    double e = std::floor(l10);
    double m = std::pow(10.0, l10 - e);
    // round at the printed precision before the carry check
    double scale = std::pow(10.0, digits);
    m = std::round(m * scale) / scale;
    if (m >= 10.0) {
      m /= 10.0;
      e += 1.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*fe%+03d", digits, m,
                  static_cast<int>(e));
    return buf;
  }

 private:
  double log_mag_;
  bool zero_;
};

}  // namespace biphase
