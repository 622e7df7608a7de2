#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "smp/domain.hpp"

namespace smp {

struct PointMass
{
    double location;
    double mass;
};

/// Log-density in log coordinates: the value at u = side * exp(t), where
/// side is +1 or -1. Returns -inf where the density vanishes.
using LogCoordDensity = std::function<double(int side, double t)>;

/// Nonnegative density on a domain plus finitely many point masses.
///
/// The density is always evaluated in log space. Internally it is a function
/// of (side, ln|u|) so that tails far beyond the double range of u stay
/// evaluable; log_density(u) is the u-space view. Values are immutable and
/// cheap to copy.
class Density
{
  public:
    Density(Domain domain, LogCoordDensity log_density, std::vector<PointMass> point_masses = {},
            std::string label = {}, std::vector<double> breakpoints = {});

    /// Build from a log-density in u. Only valid while |ln u| < 709.
    static Density from_u(Domain domain, std::function<double(double)> log_density_u,
                          std::vector<PointMass> point_masses = {}, std::string label = {},
                          std::vector<double> breakpoints = {});

    static Density point_masses_only(Domain domain, std::vector<PointMass> point_masses,
                                     std::string label = {});

    Domain domain() const noexcept { return data_->domain; }

    /// -inf at the origin and outside the domain.
    double log_density(double u) const;
    double log_density_at(int side, double t) const;

    const std::vector<PointMass>& point_masses() const noexcept { return data_->masses; }
    /// u-locations where the density has a kink or a jump.
    const std::vector<double>& breakpoints() const noexcept { return data_->breakpoints; }
    const std::string& label() const noexcept { return data_->label; }
    bool absolutely_continuous() const noexcept { return data_->masses.empty(); }

    /// Half-lines making up the domain: {+1} or {+1, -1}.
    std::vector<int> sides() const;

  private:
    struct Data
    {
        Domain domain;
        LogCoordDensity log_density;
        std::vector<PointMass> masses;
        std::string label;
        std::vector<double> breakpoints;
    };
    std::shared_ptr<const Data> data_;
};

/// Pushforward of the measure under u -> 1/u: w*(u) = w(1/u) / u^2.
Density invert_pushforward(const Density& w);

struct SymmetryCheck
{
    bool symmetric;
    double max_deviation;
};

/// Compares log w(u) with log w(1/u) - 2 ln|u| on the grid (both half-lines
/// on RealLine). Point masses must be closed under inversion.
SymmetryCheck is_symmetric(const Density& w, std::span<const double> grid, double tol);

/// n points log-spaced on [lo, hi], lo > 0.
std::vector<double> log_spaced_grid(double lo, double hi, int n);

/// Multiplier g for apply_perturbation, |g| <= 1.
using Modulation = std::function<double(double u)>;
/// Same, in log coordinates (side, ln|u|).
using LogCoordModulation = std::function<double(int side, double t)>;

/// beta = sigma * (1 + s g). Requires |s| <= 1 and an absolutely continuous
/// base; zeros of 1 + s g become -inf in the log-density.
Density apply_perturbation(const Density& w, double s, const Modulation& g);
Density apply_perturbation_log(const Density& w, double s, LogCoordModulation g);

/// w(u) exp(ln_factor(side, t)) for callers that can evaluate the log of the
/// multiplier more accurately than log1p(s g) near its zeros.
Density reweight_log(const Density& w, LogCoordModulation ln_factor, std::string label);

/// Part of a Stieltjes density on [1, inf).
Density restrict_to_unit_tail(const Density& w);

/// Extends a density supported on [1, inf) to (0, inf) by reflecting it
/// through u -> 1/u. A point mass at 1 is kept once.
Density symmetric_extension(const Density& alpha1);

}  // namespace smp
