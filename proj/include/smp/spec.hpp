#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "smp/density.hpp"

namespace smp {

/// 1/2 sqrt(d/pi) exp(-d ln^2|u|) |u|^-c on the real line.
struct LognormalHamburger
{
    double c = 1.0;
    double d = 1.0;
    bool operator==(const LognormalHamburger&) const = default;
};

/// sqrt(d/pi) exp(-d ln^2 u) u^-c on (0, inf). Normalized so that
/// mu_n = exp((n+1-c)^2 / 4d).
struct LognormalStieltjes
{
    double c = 1.0;
    double d = 1.0;
    bool operator==(const LognormalStieltjes&) const = default;
};

/// exp(-x^(-1/(2+d))) on (0,1), exp(-x^(1/(2+d))) on [1, inf); 0 <= d <= 1.
struct ExpPowerFamily9
{
    double d = 1.0;
    bool operator==(const ExpPowerFamily9&) const = default;
};

/// Named classical seed densities:
///   "uniform"  {a, b}        constant 1/(b-a) on [a, b]
///   "exp-tail" {rate, lower} exp(-rate x) on [lower, inf), lower > 0
struct ClassicalSeed
{
    std::string name;
    std::map<std::string, double> params;
    bool operator==(const ClassicalSeed&) const = default;
};

using Family = std::variant<LognormalHamburger, LognormalStieltjes, ExpPowerFamily9, ClassicalSeed>;

/// beta = sigma (1 + s sin(2 pi d k ln u)), d taken from the root family.
struct SinPerturbation
{
    double s = 0.0;
    int k = 1;
    bool operator==(const SinPerturbation&) const = default;
};

struct Symmetrized
{
    bool operator==(const Symmetrized&) const = default;
};

/// Restrict to [1, inf), then reflect through u -> 1/u.
struct SymmetricExtension
{
    bool operator==(const SymmetricExtension&) const = default;
};

using Modifier = std::variant<SinPerturbation, Symmetrized, SymmetricExtension>;

/// Declarative, serializable description of a distribution.
struct DistributionSpec
{
    Family family;
    std::vector<Modifier> modifiers;

    /// Throws std::invalid_argument on any violated parameter rule.
    void validate() const;
    /// Domain after applying every modifier.
    Domain domain() const;
    /// Canonical path-like key, e.g. "lognormal-s/c=1/d=0.25/sin(s=0.5,k=1)".
    std::string key() const;

    bool operator==(const DistributionSpec&) const = default;
};

std::string family_name(const Family& family);

/// The frequency parameter d of the root family, if it has one.
std::optional<double> root_d(const Family& family);

/// Shortest round-tripping-enough decimal used in keys and labels.
std::string format_number(double x);

/// Materialize the density; modifiers are applied left to right.
Density realize(const DistributionSpec& spec);

}  // namespace smp
