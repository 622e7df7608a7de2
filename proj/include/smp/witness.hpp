#pragma once

#include <map>
#include <optional>
#include <string>

#include "smp/criteria.hpp"
#include "smp/density.hpp"
#include "smp/quad.hpp"
#include "smp/spec.hpp"

namespace smp {

/// Log-normal base with c = 1 times 1 + s sin(2 pi d k ln u). The frequency
/// 2 pi d k is the one for which the perturbation integrates to zero against
/// every u^n, n in Z.
DistributionSpec lognormal_witness_spec(double d, double s, int k);
Density lognormal_witness(double d, double s, int k);

struct WitnessConfig
{
    double tolerance = 1e-8;
    double separation_floor = 1e-3;
    // Grid in t = ln|u| for the L1 distance.
    double grid_half_width = 40.0;
    int grid_points = 8001;
};

struct WitnessReport
{
    std::optional<DistributionSpec> spec;
    double s = 0.0;
    int k = 0;
    int n_min = 0;
    int n_max = 0;
    // Moments of the first density, and their relative deviation from the
    // second.
    std::map<int, LogReal> moments;
    std::map<int, double> deviations;
    // Orders whose moments could not be computed.
    std::map<int, std::string> failures;
    double max_deviation = 0.0;
    double distinctness = 0.0;
    double tolerance = 0.0;
    double separation_floor = 0.0;
    bool passed = false;
};

/// Moments of both densities by quadrature, compared order by order, plus
/// the L1 distance of the densities on a log-spaced grid.
WitnessReport verify_same_moments(const Density& w1, const Density& w2, int n_min, int n_max,
                                  const quad::QuadratureConfig& cfg = {},
                                  const WitnessConfig& wcfg = {});

/// L1 distance of two densities, sum of |w1 - w2| du over the grid.
double l1_grid_distance(const Density& w1, const Density& w2, const WitnessConfig& wcfg = {});

ExtendedValue krein_of_witness(double d, double s, int k, const CriteriaConfig& cfg = {});

}  // namespace smp
