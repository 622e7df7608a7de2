#include "smp/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace smp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> inverted(const std::vector<double>& points)
{
    std::vector<double> out;
    out.reserve(points.size());
    for (double x : points)
        if (x != 0.0)
            out.push_back(1.0 / x);
    return out;
}

std::vector<double> merged(std::vector<double> a, const std::vector<double>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

bool same_location(double x, double y)
{
    return std::fabs(x - y) <= 1e-12 * std::max(std::fabs(x), std::fabs(y));
}

}  // namespace

Density::Density(Domain domain, LogCoordDensity log_density, std::vector<PointMass> point_masses,
                 std::string label, std::vector<double> breakpoints)
{
    for (const PointMass& pm : point_masses) {
        if (!(pm.mass > 0.0) || !std::isfinite(pm.mass))
            throw std::invalid_argument("point mass must be positive and finite");
        if (!std::isfinite(pm.location) || pm.location == 0.0)
            throw std::invalid_argument("point mass location must be finite and nonzero");
        if (domain == Domain::PositiveHalfLine && pm.location < 0.0)
            throw std::invalid_argument("point mass outside the positive half-line");
    }
    data_ = std::make_shared<const Data>(Data{domain, std::move(log_density),
                                              std::move(point_masses), std::move(label),
                                              merged(std::move(breakpoints), {})});
}

Density Density::from_u(Domain domain, std::function<double(double)> log_density_u,
                        std::vector<PointMass> point_masses, std::string label,
                        std::vector<double> breakpoints)
{
    auto in_coords = [f = std::move(log_density_u)](int side, double t) {
        const double u = side * std::exp(t);
        if (u == 0.0 || !std::isfinite(u))
            return kNegInf;
        return f(u);
    };
    return Density(domain, std::move(in_coords), std::move(point_masses), std::move(label),
                   std::move(breakpoints));
}

Density Density::point_masses_only(Domain domain, std::vector<PointMass> point_masses,
                                   std::string label)
{
    return Density(domain, [](int, double) { return kNegInf; }, std::move(point_masses),
                   std::move(label));
}

double Density::log_density_at(int side, double t) const
{
    if (side < 0 && data_->domain == Domain::PositiveHalfLine)
        return kNegInf;
    if (std::isnan(t))
        throw std::domain_error("log_density_at: NaN coordinate");
    const double v = data_->log_density(side < 0 ? -1 : 1, t);
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
        throw std::domain_error("log-density is undefined at t = " + std::to_string(t) + " in " +
                                data_->label);
    return v;
}

double Density::log_density(double u) const
{
    if (u == 0.0 || !std::isfinite(u))
        return kNegInf;
    return log_density_at(u > 0 ? 1 : -1, std::log(std::fabs(u)));
}

std::vector<int> Density::sides() const
{
    if (data_->domain == Domain::PositiveHalfLine)
        return {1};
    return {1, -1};
}

Density invert_pushforward(const Density& w)
{
    std::vector<PointMass> masses;
    for (const PointMass& pm : w.point_masses())
        masses.push_back({1.0 / pm.location, pm.mass});
    auto f = [w](int side, double t) {
        const double v = w.log_density_at(side, -t);
        return v == kNegInf ? kNegInf : v - 2.0 * t;
    };
    return Density(w.domain(), std::move(f), std::move(masses), "inverted(" + w.label() + ")",
                   inverted(w.breakpoints()));
}

SymmetryCheck is_symmetric(const Density& w, std::span<const double> grid, double tol)
{
    if (grid.empty())
        throw std::invalid_argument("is_symmetric: empty grid");
    double worst = 0.0;
    for (int side : w.sides()) {
        for (double u : grid) {
            if (!(u > 0.0) || !std::isfinite(u))
                throw std::invalid_argument("is_symmetric: grid points must be positive");
            const double t = std::log(u);
            const double direct = w.log_density_at(side, t);
            const double reflected_raw = w.log_density_at(side, -t);
            const double reflected = reflected_raw == kNegInf ? kNegInf : reflected_raw - 2.0 * t;
            double dev = 0.0;
            if (direct == kNegInf || reflected == kNegInf) {
                dev = direct == reflected ? 0.0 : std::numeric_limits<double>::infinity();
            } else {
                dev = std::fabs(direct - reflected) /
                      std::max({1.0, std::fabs(direct), std::fabs(reflected)});
            }
            worst = std::max(worst, dev);
        }
    }
    for (const PointMass& pm : w.point_masses()) {
        const auto& masses = w.point_masses();
        const bool closed = std::any_of(masses.begin(), masses.end(), [&](const PointMass& q) {
            return same_location(q.location, 1.0 / pm.location) &&
                   std::fabs(q.mass - pm.mass) <= tol * pm.mass;
        });
        if (!closed)
            worst = std::numeric_limits<double>::infinity();
    }
    return {worst < tol, worst};
}

std::vector<double> log_spaced_grid(double lo, double hi, int n)
{
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw std::invalid_argument("log_spaced_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> grid(static_cast<std::size_t>(n));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < n; ++i)
        grid[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    return grid;
}

Density apply_perturbation_log(const Density& w, double s, LogCoordModulation g)
{
    if (!(std::fabs(s) <= 1.0))
        throw std::invalid_argument("apply_perturbation: |s| must not exceed 1");
    if (!w.absolutely_continuous())
        throw std::invalid_argument("apply_perturbation: base must be absolutely continuous");
    auto f = [w, s, g = std::move(g)](int side, double t) {
        const double base = w.log_density_at(side, t);
        if (base == kNegInf || s == 0.0)
            return base;
        const double gv = g(side, t);
        if (std::fabs(gv) > 1.0 + 1e-12)
            throw std::domain_error("apply_perturbation: |g| exceeds 1");
        const double sg = s * gv;
        if (1.0 + sg <= 0.0)
            return kNegInf;
        return base + std::log1p(sg);
    };
    return Density(w.domain(), std::move(f), {}, "perturbed(" + w.label() + ")", w.breakpoints());
}

Density apply_perturbation(const Density& w, double s, const Modulation& g)
{
    // Beyond the double range of u the multiplier is taken as 1.
    return apply_perturbation_log(w, s, [g](int side, double t) {
        const double u = side * std::exp(t);
        if (u == 0.0 || !std::isfinite(u))
            return 0.0;
        return g(u);
    });
}

Density reweight_log(const Density& w, LogCoordModulation ln_factor, std::string label)
{
    if (!w.absolutely_continuous())
        throw std::invalid_argument("reweight_log: base must be absolutely continuous");
    auto f = [w, ln_factor = std::move(ln_factor)](int side, double t) {
        const double base = w.log_density_at(side, t);
        if (base == kNegInf)
            return base;
        const double v = ln_factor(side, t);
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
            throw std::domain_error("reweight_log: factor is NaN or +inf");
        return base + v;
    };
    return Density(w.domain(), std::move(f), {}, std::move(label), w.breakpoints());
}

Density restrict_to_unit_tail(const Density& w)
{
    if (w.domain() != Domain::PositiveHalfLine)
        throw std::invalid_argument("restrict_to_unit_tail: requires a positive half-line density");
    std::vector<PointMass> masses;
    for (const PointMass& pm : w.point_masses())
        if (pm.location >= 1.0)
            masses.push_back(pm);
    std::vector<double> bps{1.0};
    for (double b : w.breakpoints())
        if (b >= 1.0)
            bps.push_back(b);
    auto f = [w](int side, double t) { return t >= 0.0 ? w.log_density_at(side, t) : kNegInf; };
    return Density(Domain::PositiveHalfLine, std::move(f), std::move(masses),
                   "restricted(" + w.label() + ")", std::move(bps));
}

Density symmetric_extension(const Density& alpha1)
{
    if (alpha1.domain() != Domain::PositiveHalfLine)
        throw std::invalid_argument("symmetric_extension: requires a positive half-line density");
    for (int i = 1; i <= 400; ++i) {
        const double t = -40.0 * i / 400.0;
        if (alpha1.log_density_at(1, t) != kNegInf)
            throw std::invalid_argument("symmetric_extension: density is not supported on [1, inf)");
    }
    std::vector<PointMass> masses;
    for (const PointMass& pm : alpha1.point_masses()) {
        if (pm.location < 1.0)
            throw std::invalid_argument("symmetric_extension: point mass below 1");
        masses.push_back(pm);
        if (pm.location != 1.0)
            masses.push_back({1.0 / pm.location, pm.mass});
    }
    auto f = [alpha1](int side, double t) {
        if (t >= 0.0)
            return alpha1.log_density_at(side, t);
        const double v = alpha1.log_density_at(side, -t);
        return v == kNegInf ? kNegInf : v - 2.0 * t;
    };
    return Density(Domain::PositiveHalfLine, std::move(f), std::move(masses),
                   "extended(" + alpha1.label() + ")",
                   merged(merged(alpha1.breakpoints(), inverted(alpha1.breakpoints())), {1.0}));
}

}  // namespace smp
