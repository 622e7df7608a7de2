#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include "smp/domain.hpp"
#include "smp/logreal.hpp"

namespace smp::quad {

struct QuadratureConfig
{
    double rel_tol = 1e-10;
    // Log-integrand cutoff, relative to the integrand peak, used to truncate
    // infinite ranges.
    double abs_ln_floor = -745.0;
    // Maximum bisection depth of a panel below the initial partition.
    int max_levels = 12;
    // Growth factor of the truncation window between levels, for callers
    // that integrate over growing windows.
    double truncation_growth = 2.0;

    void validate() const;
};

/// Thrown when the refinement limit is reached with the error estimate still
/// above tolerance. estimate() is the relative error estimate reached.
class NonConvergence : public std::runtime_error
{
  public:
    NonConvergence(const std::string& what, double estimate)
        : std::runtime_error(what), estimate_(estimate)
    {
    }
    double estimate() const noexcept { return estimate_; }

  private:
    double estimate_;
};

/// Log of a nonnegative integrand; -inf where the integrand vanishes.
using LogIntegrand = std::function<double(double)>;
/// Sign of a signed integrand: -1, 0 or +1.
using SignMap = std::function<int(double)>;

struct LogIntegral
{
    LogReal value;
    double rel_err = 0.0;
};

struct SignedIntegral
{
    LogReal value;
    LogReal abs_err;
    // Integral of |f|. Not error-controlled: a panel straddling a sign change
    // sees the kink in |f|, so expect ~1e-3 relative accuracy. Use it as a scale.
    LogReal l1;
    // The positive and negative parts agreed within the error estimate;
    // value is then exactly zero and abs_err bounds the true value.
    bool cancelled = false;
};

/// Integral of exp(log_integrand) over the domain.
///
/// For PositiveHalfLine the substitution t = ln u is applied first. Terms are
/// accumulated relative to the integrand peak, so adding a constant C to the
/// log-integrand shifts the result's ln_mag by C. The u-space form covers
/// |ln u| < 709; callers that need more work in log coordinates through
/// integrate_log_line.
LogIntegral integrate_log(const LogIntegrand& log_integrand, Domain domain,
                          const QuadratureConfig& cfg = {});

/// Signed integral; positive and negative node contributions are summed
/// separately and combined in LogReal arithmetic.
SignedIntegral integrate_signed(const LogIntegrand& log_abs_integrand, const SignMap& sign,
                                Domain domain, const QuadratureConfig& cfg = {});

/// Integral over the whole real line of a log-integrand given directly in
/// the integration variable. Breakpoints mark kinks or jumps.
LogIntegral integrate_log_line(const LogIntegrand& log_integrand,
                               std::span<const double> breakpoints,
                               const QuadratureConfig& cfg = {});

SignedIntegral integrate_signed_line(const LogIntegrand& log_abs_integrand, const SignMap& sign,
                                     std::span<const double> breakpoints,
                                     const QuadratureConfig& cfg = {});

/// Signed integral over the finite interval [a, b].
SignedIntegral integrate_signed_interval(const LogIntegrand& log_abs_integrand,
                                         const SignMap& sign, double a, double b,
                                         std::span<const double> breakpoints,
                                         const QuadratureConfig& cfg = {});

}  // namespace smp::quad
