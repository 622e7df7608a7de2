#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <optional>

namespace smp {

/// Signed real stored as (sign, ln|x|).
///
/// Moments such as exp((n+1-c)^2 / 4d) leave the double range long before
/// they become uninteresting, so every moment and every quadrature result is
/// carried in this form. Zero is the only value with sign 0, and its
/// magnitude is -infinity.
class LogReal
{
  public:
    constexpr LogReal() = default;

    static LogReal from_log(double ln_mag, int sign = 1);
    static LogReal from_double(double x);
    static LogReal zero() { return {}; }

    int sign() const noexcept { return sign_; }
    double ln_mag() const noexcept { return ln_mag_; }
    bool is_zero() const noexcept { return sign_ == 0; }

    // May overflow to +-inf; use representable() for reporting.
    double to_double() const noexcept;

    // Decimal value when ln|x| is below the reporting threshold.
    std::optional<double> representable(double max_ln = 700.0) const;

    LogReal operator-() const noexcept;
    LogReal abs() const noexcept;

    friend LogReal operator+(const LogReal& a, const LogReal& b);
    friend LogReal operator-(const LogReal& a, const LogReal& b);
    friend LogReal operator*(const LogReal& a, const LogReal& b);
    friend LogReal operator/(const LogReal& a, const LogReal& b);

    LogReal& operator+=(const LogReal& o) { return *this = *this + o; }
    LogReal& operator*=(const LogReal& o) { return *this = *this * o; }

    // Multiply by a positive scale given as its logarithm.
    LogReal scaled_by_log(double ln_scale) const noexcept;

  private:
    int sign_ = 0;
    double ln_mag_ = -std::numeric_limits<double>::infinity();
};

/// |exp(a) - exp(b)| / |exp(b)| evaluated without leaving log space.
/// Returns +inf when the signs differ or exactly one side is zero.
double relative_difference(const LogReal& a, const LogReal& b);

/// log(exp(a) + exp(b)) for extended reals (-inf allowed).
double log_add_exp(double a, double b) noexcept;

std::ostream& operator<<(std::ostream& os, const LogReal& x);

}  // namespace smp
