#include "smp/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "smp/moments.hpp"

namespace smp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

DistributionSpec lognormal_witness_spec(double d, double s, int k)
{
    DistributionSpec spec{LognormalStieltjes{1.0, d}, {SinPerturbation{s, k}}};
    spec.validate();
    return spec;
}

Density lognormal_witness(double d, double s, int k)
{
    return realize(lognormal_witness_spec(d, s, k));
}

double l1_grid_distance(const Density& w1, const Density& w2, const WitnessConfig& wcfg)
{
    if (wcfg.grid_points < 2 || !(wcfg.grid_half_width > 0.0))
        throw std::invalid_argument("l1_grid_distance: bad grid");
    const double h = 2.0 * wcfg.grid_half_width / (wcfg.grid_points - 1);
    double sum = 0.0;
    for (int side : {1, -1}) {
        for (int i = 0; i < wcfg.grid_points; ++i) {
            const double t = -wcfg.grid_half_width + i * h;
            const double a = w1.log_density_at(side, t);
            const double b = w2.log_density_at(side, t);
            if (a == kNegInf && b == kNegInf)
                continue;
            // |e^a - e^b| e^t, kept in log space until the end.
            const double hi = std::max(a, b);
            const double lo = std::min(a, b);
            const double diff = lo == kNegInf ? 1.0 : -std::expm1(lo - hi);
            const double weight = (i == 0 || i == wcfg.grid_points - 1) ? 0.5 : 1.0;
            sum += weight * diff * std::exp(hi + t) * h;
        }
    }
    return sum;
}

WitnessReport verify_same_moments(const Density& w1, const Density& w2, int n_min, int n_max,
                                  const quad::QuadratureConfig& cfg, const WitnessConfig& wcfg)
{
    if (n_min > n_max)
        throw std::invalid_argument("verify_same_moments: n_min > n_max");
    WitnessReport r;
    r.n_min = n_min;
    r.n_max = n_max;
    r.tolerance = wcfg.tolerance;
    r.separation_floor = wcfg.separation_floor;
    for (int n = n_min; n <= n_max; ++n) {
        try {
            const LogReal a = moment(w1, n, cfg);
            const LogReal b = moment(w2, n, cfg);
            const double dev = a.is_zero() && b.is_zero() ? 0.0 : relative_difference(b, a);
            r.moments[n] = a;
            r.deviations[n] = dev;
            r.max_deviation = std::max(r.max_deviation, dev);
        } catch (const std::exception& ex) {
            r.failures[n] = ex.what();
            r.max_deviation = std::numeric_limits<double>::infinity();
        }
    }
    r.distinctness = l1_grid_distance(w1, w2, wcfg);
    r.passed = r.failures.empty() && r.max_deviation < wcfg.tolerance &&
               r.distinctness > wcfg.separation_floor;
    return r;
}

ExtendedValue krein_of_witness(double d, double s, int k, const CriteriaConfig& cfg)
{
    return krein_stieltjes(lognormal_witness(d, s, k), cfg);
}

}  // namespace smp
