#include "smp/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "smp/moments.hpp"

namespace smp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// w(u) + w(1/u)/u^2 in log coordinates, shifted by ln_scale.
LogCoordDensity folded(const Density& w, double ln_scale)
{
    return [w, ln_scale](int side, double t) {
        const double direct = w.log_density_at(side, t);
        const double back = w.log_density_at(side, -t);
        const double reflected = back == kNegInf ? kNegInf : back - 2.0 * t;
        const double v = log_add_exp(direct, reflected);
        return v == kNegInf ? kNegInf : v + ln_scale;
    };
}

std::vector<double> with_inverses(const std::vector<double>& points)
{
    std::vector<double> out = points;
    for (double x : points)
        out.push_back(1.0 / x);
    return out;
}

}  // namespace

Density symmetrize(const Density& w)
{
    std::vector<PointMass> masses;
    for (const PointMass& pm : w.point_masses()) {
        for (double x : {pm.location, 1.0 / pm.location}) {
            auto it = std::find_if(masses.begin(), masses.end(), [x](const PointMass& q) {
                return std::fabs(q.location - x) <= 1e-12 * std::fabs(x);
            });
            if (it != masses.end())
                it->mass += 0.5 * pm.mass;
            else
                masses.push_back({x, 0.5 * pm.mass});
        }
    }
    return Density(w.domain(), folded(w, -std::log(2.0)), std::move(masses),
                   "symmetrized(" + w.label() + ")", with_inverses(w.breakpoints()));
}

Density strong_from_classical(const Density& alpha1, const quad::QuadratureConfig& cfg, int n_check)
{
    for (int n = 0; n <= n_check; ++n) {
        try {
            const MomentValue mv = moment_with_error(alpha1, n, cfg);
            if (!(mv.value.sign() > 0))
                throw std::invalid_argument("moment is not positive");
        } catch (const std::exception& ex) {
            throw std::invalid_argument("strong_from_classical: moment of order " +
                                        std::to_string(n) + " is not available: " + ex.what());
        }
    }
    return symmetric_extension(alpha1);
}

Remark51Comparison remark51_compare(const Density& w, const CriteriaConfig& cfg)
{
    if (w.domain() != Domain::RealLine)
        throw std::invalid_argument("remark51_compare: requires a real-line density");
    Remark51Comparison out;
    out.lhs = krein_hamburger(symmetrize(w), cfg);
    const Density unhalved(w.domain(), folded(w, 0.0), {}, "folded(" + w.label() + ")",
                           with_inverses(w.breakpoints()));
    out.rhs = krein_hamburger(unhalved, cfg);
    if (out.lhs.finite() && out.rhs.finite())
        out.gap = out.rhs.value - out.lhs.value;
    return out;
}

}  // namespace smp
