#include "smp/logreal.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace smp {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

LogReal LogReal::from_log(double ln_mag, int sign)
{
    if (std::isnan(ln_mag) || ln_mag == std::numeric_limits<double>::infinity())
        throw std::domain_error("LogReal: magnitude must be finite or -inf");
    LogReal r;
    if (sign == 0 || ln_mag == kNegInf)
        return r;
    r.sign_ = sign > 0 ? 1 : -1;
    r.ln_mag_ = ln_mag;
    return r;
}

LogReal LogReal::from_double(double x)
{
    if (!std::isfinite(x))
        throw std::domain_error("LogReal: non-finite double");
    if (x == 0.0)
        return {};
    return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
}

double LogReal::to_double() const noexcept
{
    return sign_ == 0 ? 0.0 : sign_ * std::exp(ln_mag_);
}

std::optional<double> LogReal::representable(double max_ln) const
{
    if (ln_mag_ >= max_ln)
        return std::nullopt;
    return to_double();
}

LogReal LogReal::operator-() const noexcept
{
    LogReal r = *this;
    r.sign_ = -r.sign_;
    return r;
}

LogReal LogReal::abs() const noexcept
{
    LogReal r = *this;
    r.sign_ = r.sign_ == 0 ? 0 : 1;
    return r;
}

LogReal LogReal::scaled_by_log(double ln_scale) const noexcept
{
    if (sign_ == 0)
        return *this;
    LogReal r = *this;
    r.ln_mag_ += ln_scale;
    return r;
}

LogReal operator+(const LogReal& a, const LogReal& b)
{
    if (a.sign_ == 0)
        return b;
    if (b.sign_ == 0)
        return a;
    const LogReal& big = a.ln_mag_ >= b.ln_mag_ ? a : b;
    const LogReal& small = a.ln_mag_ >= b.ln_mag_ ? b : a;
    const double delta = small.ln_mag_ - big.ln_mag_;  // <= 0
    if (a.sign_ == b.sign_)
        return LogReal::from_log(big.ln_mag_ + std::log1p(std::exp(delta)), big.sign_);
    if (delta == 0.0)
        return {};
    return LogReal::from_log(big.ln_mag_ + std::log(-std::expm1(delta)), big.sign_);
}

LogReal operator-(const LogReal& a, const LogReal& b)
{
    return a + (-b);
}

LogReal operator*(const LogReal& a, const LogReal& b)
{
    if (a.sign_ == 0 || b.sign_ == 0)
        return {};
    return LogReal::from_log(a.ln_mag_ + b.ln_mag_, a.sign_ * b.sign_);
}

LogReal operator/(const LogReal& a, const LogReal& b)
{
    if (b.sign_ == 0)
        throw std::domain_error("LogReal: division by zero");
    if (a.sign_ == 0)
        return {};
    return LogReal::from_log(a.ln_mag_ - b.ln_mag_, a.sign_ * b.sign_);
}

double relative_difference(const LogReal& a, const LogReal& b)
{
    if (a.is_zero() && b.is_zero())
        return 0.0;
    if (a.sign() != b.sign())
        return std::numeric_limits<double>::infinity();
    return std::fabs(std::expm1(a.ln_mag() - b.ln_mag()));
}

double log_add_exp(double a, double b) noexcept
{
    if (a == kNegInf)
        return b;
    if (b == kNegInf)
        return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

std::ostream& operator<<(std::ostream& os, const LogReal& x)
{
    if (x.is_zero())
        return os << "0";
    return os << (x.sign() < 0 ? "-" : "") << "exp(" << x.ln_mag() << ")";
}

}  // namespace smp
