#include "smp/spec.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "smp/symmetry.hpp"

namespace smp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template<class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template<class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& msg)
{
    if (!ok)
        throw std::invalid_argument(msg);
}

double seed_param(const ClassicalSeed& seed, const std::string& name)
{
    const auto it = seed.params.find(name);
    require(it != seed.params.end(), "seed '" + seed.name + "' needs parameter '" + name + "'");
    require(std::isfinite(it->second), "seed parameter '" + name + "' must be finite");
    return it->second;
}

void validate_seed(const ClassicalSeed& seed)
{
    std::set<std::string> allowed;
    if (seed.name == "uniform") {
        allowed = {"a", "b"};
        require(seed_param(seed, "a") < seed_param(seed, "b"), "uniform seed needs a < b");
    } else if (seed.name == "exp-tail") {
        allowed = {"rate", "lower"};
        require(seed_param(seed, "rate") > 0.0, "exp-tail seed needs rate > 0");
        require(seed_param(seed, "lower") > 0.0, "exp-tail seed needs lower > 0");
    } else {
        throw std::invalid_argument("unknown seed family '" + seed.name + "'");
    }
    for (const auto& [k, v] : seed.params)
        require(allowed.count(k) == 1, "seed '" + seed.name + "' has no parameter '" + k + "'");
}

Domain base_domain(const Family& family)
{
    return std::visit(overloaded{
                          [](const LognormalHamburger&) { return Domain::RealLine; },
                          [](const LognormalStieltjes&) { return Domain::PositiveHalfLine; },
                          [](const ExpPowerFamily9&) { return Domain::PositiveHalfLine; },
                          [](const ClassicalSeed& s) {
                              if (s.name == "uniform" && seed_param(s, "a") < 0.0)
                                  return Domain::RealLine;
                              return Domain::PositiveHalfLine;
                          },
                      },
                      family);
}

Density realize_family(const Family& family)
{
    using std::numbers::pi;
    return std::visit(
        overloaded{
            [](const LognormalHamburger& f) {
                const double norm = std::log(0.5 * std::sqrt(f.d / pi));
                return Density(
                    Domain::RealLine,
                    [c = f.c, d = f.d, norm](int, double t) { return norm - d * t * t - c * t; },
                    {}, "lognormal-h(c=" + format_number(f.c) + ",d=" + format_number(f.d) + ")");
            },
            [](const LognormalStieltjes& f) {
                const double norm = 0.5 * std::log(f.d / pi);
                return Density(
                    Domain::PositiveHalfLine,
                    [c = f.c, d = f.d, norm](int, double t) { return norm - d * t * t - c * t; },
                    {}, "lognormal-s(c=" + format_number(f.c) + ",d=" + format_number(f.d) + ")");
            },
            [](const ExpPowerFamily9& f) {
                const double p = 1.0 / (2.0 + f.d);
                return Density(
                    Domain::PositiveHalfLine,
                    [p](int, double t) { return -std::exp(p * std::fabs(t)); }, {},
                    "family9(d=" + format_number(f.d) + ")", {1.0});
            },
            [](const ClassicalSeed& s) {
                if (s.name == "uniform") {
                    const double a = seed_param(s, "a");
                    const double b = seed_param(s, "b");
                    const double level = -std::log(b - a);
                    std::vector<double> bps;
                    for (double x : {a, b})
                        if (x != 0.0)
                            bps.push_back(x);
                    return Density::from_u(
                        a < 0.0 ? Domain::RealLine : Domain::PositiveHalfLine,
                        [a, b, level](double u) { return u >= a && u <= b ? level : kNegInf; }, {},
                        "uniform(a=" + format_number(a) + ",b=" + format_number(b) + ")", bps);
                }
                const double rate = seed_param(s, "rate");
                const double lower = seed_param(s, "lower");
                const double t_lower = std::log(lower);
                return Density(
                    Domain::PositiveHalfLine,
                    [rate, t_lower](int, double t) {
                        return t >= t_lower ? -rate * std::exp(t) : kNegInf;
                    },
                    {},
                    "exp-tail(rate=" + format_number(rate) + ",lower=" + format_number(lower) + ")",
                    {lower});
            },
        },
        family);
}

}  // namespace

std::string format_number(double x)
{
    if (x == 0.0)
        return "0";
    std::ostringstream os;
    os << std::setprecision(15) << x;
    return os.str();
}

std::string family_name(const Family& family)
{
    return std::visit(overloaded{
                          [](const LognormalHamburger&) { return std::string("lognormal-h"); },
                          [](const LognormalStieltjes&) { return std::string("lognormal-s"); },
                          [](const ExpPowerFamily9&) { return std::string("family9"); },
                          [](const ClassicalSeed& s) { return s.name; },
                      },
                      family);
}

std::optional<double> root_d(const Family& family)
{
    return std::visit(overloaded{
                          [](const LognormalHamburger& f) { return std::optional<double>(f.d); },
                          [](const LognormalStieltjes& f) { return std::optional<double>(f.d); },
                          [](const ExpPowerFamily9& f) { return std::optional<double>(f.d); },
                          [](const ClassicalSeed&) { return std::optional<double>(); },
                      },
                      family);
}

void DistributionSpec::validate() const
{
    std::visit(overloaded{
                   [](const LognormalHamburger& f) {
                       require(std::isfinite(f.c), "lognormal-h: c must be finite");
                       require(std::isfinite(f.d) && f.d > 0.0, "lognormal-h: d must be positive");
                   },
                   [](const LognormalStieltjes& f) {
                       require(std::isfinite(f.c), "lognormal-s: c must be finite");
                       require(std::isfinite(f.d) && f.d > 0.0, "lognormal-s: d must be positive");
                   },
                   [](const ExpPowerFamily9& f) {
                       require(f.d >= 0.0 && f.d <= 1.0, "family9: d must lie in [0, 1]");
                   },
                   [](const ClassicalSeed& s) { validate_seed(s); },
               },
               family);

    Domain domain = base_domain(family);
    for (const Modifier& m : modifiers) {
        std::visit(overloaded{
                       [&](const SinPerturbation& p) {
                           require(std::fabs(p.s) <= 1.0, "sin-perturbation: |s| must not exceed 1");
                           require(p.k >= 1, "sin-perturbation: k must be a positive integer");
                           require(domain == Domain::PositiveHalfLine,
                                   "sin-perturbation requires a positive half-line base");
                           require(root_d(family).has_value(),
                                   "sin-perturbation needs a root family with parameter d");
                       },
                       [](const Symmetrized&) {},
                       [&](const SymmetricExtension&) {
                           require(domain == Domain::PositiveHalfLine,
                                   "symmetric-extension requires a positive half-line base");
                       },
                   },
                   m);
    }
}

Domain DistributionSpec::domain() const
{
    return base_domain(family);
}

std::string DistributionSpec::key() const
{
    std::string k = family_name(family);
    std::visit(overloaded{
                   [&](const LognormalHamburger& f) {
                       k += "/c=" + format_number(f.c) + "/d=" + format_number(f.d);
                   },
                   [&](const LognormalStieltjes& f) {
                       k += "/c=" + format_number(f.c) + "/d=" + format_number(f.d);
                   },
                   [&](const ExpPowerFamily9& f) { k += "/d=" + format_number(f.d); },
                   [&](const ClassicalSeed& s) {
                       for (const auto& [name, v] : s.params)
                           k += "/" + name + "=" + format_number(v);
                   },
               },
               family);
    for (const Modifier& m : modifiers) {
        std::visit(overloaded{
                       [&](const SinPerturbation& p) {
                           k += "/sin(s=" + format_number(p.s) + ",k=" + std::to_string(p.k) + ")";
                       },
                       [&](const Symmetrized&) { k += "/symmetrized"; },
                       [&](const SymmetricExtension&) { k += "/symmetric-extension"; },
                   },
                   m);
    }
    return k;
}

Density realize(const DistributionSpec& spec)
{
    spec.validate();
    Density w = realize_family(spec.family);
    for (const Modifier& m : spec.modifiers) {
        w = std::visit(overloaded{
                           [&](const SinPerturbation& p) {
                               const double freq = 2.0 * std::numbers::pi * *root_d(spec.family) * p.k;
                               if (p.s == 0.0)
                                   return w;
                               // 1 + s sin x = (1 - |s|) + 2|s| cos^2(x/2 - pi/4), x signed
                               // with s. No cancellation next to the zeros when |s| = 1.
                               const double a = std::fabs(p.s);
                               const double sigma = p.s > 0.0 ? 1.0 : -1.0;
                               return reweight_log(
                                   w,
                                   [freq, a, sigma](int, double t) {
                                       const double c = std::cos(0.5 * sigma * freq * t -
                                                                 0.25 * std::numbers::pi);
                                       return std::log((1.0 - a) + 2.0 * a * c * c);
                                   },
                                   "perturbed(" + w.label() + ")");
                           },
                           [&](const Symmetrized&) { return symmetrize(w); },
                           [&](const SymmetricExtension&) {
                               return symmetric_extension(restrict_to_unit_tail(w));
                           },
                       },
                       m);
    }
    return w;
}

}  // namespace smp
