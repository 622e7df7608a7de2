#pragma once

#include <optional>

#include "smp/criteria.hpp"
#include "smp/density.hpp"
#include "smp/quad.hpp"

namespace smp {

/// Average of a measure and its inversion pushforward:
/// w~(u) = (w(u) + w(1/u)/u^2) / 2, point masses split between x and 1/x.
/// On the real line each half-line is symmetrized on its own (1/u keeps the
/// sign of u). Total mass is preserved and the result is symmetric.
Density symmetrize(const Density& w);

/// Strong Stieltjes problem built from a classical one on [1, inf): returns
/// the symmetric extension after checking that the moments of orders
/// 0..n_check of alpha1 exist.
Density strong_from_classical(const Density& alpha1, const quad::QuadratureConfig& cfg = {},
                              int n_check = 8);

struct Remark51Comparison
{
    // Krein integral of the symmetrized density.
    ExtendedValue lhs;
    // Same integral of w(u) + w(1/u)/u^2 (no factor 1/2).
    ExtendedValue rhs;
    // rhs - lhs when both are finite; analytically pi ln 2.
    std::optional<double> gap;
};

Remark51Comparison remark51_compare(const Density& w, const CriteriaConfig& cfg = {});

}  // namespace smp
