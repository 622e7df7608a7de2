#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smp/density.hpp"
#include "smp/logreal.hpp"
#include "smp/quad.hpp"
#include "smp/spec.hpp"

namespace smp {

enum class MomentMethod { ClosedForm, Quadrature };
enum class MethodChoice { Auto, ClosedForm, Quadrature };

std::string to_string(MomentMethod m);

struct MomentEntry
{
    int n = 0;
    LogReal value;
    MomentMethod method = MomentMethod::Quadrature;
    // Error estimate relative to the integral of |u|^n against the measure.
    // For positive moments this is the relative error of value.
    double err_est = 0.0;
    // Set when this entry could not be computed; value is then meaningless.
    std::optional<std::string> error;

    bool ok() const noexcept { return !error; }
};

struct MomentTable
{
    std::optional<DistributionSpec> spec;
    int n_min = 0;
    int n_max = 0;
    std::vector<MomentEntry> entries;

    /// Entry for order n; throws std::out_of_range outside [n_min, n_max].
    const MomentEntry& at(int n) const;
    bool contains(int n) const noexcept { return n >= n_min && n <= n_max; }
    bool all_ok() const;
};

struct MomentValue
{
    LogReal value;
    double err_est = 0.0;
};

/// Log-normal closed forms. Available for the two log-normal families
/// without modifiers, and for the Stieltjes family with c = 1 under sine
/// perturbations (whose moments are unchanged).
std::optional<LogReal> closed_form_moment(const DistributionSpec& spec, int n);

/// mu_n = integral of u^n over the density plus the point-mass sum. On the
/// real line the two half-lines are combined as P + (-1)^n N.
MomentValue moment_with_error(const Density& w, int n, const quad::QuadratureConfig& cfg = {});
LogReal moment(const Density& w, int n, const quad::QuadratureConfig& cfg = {});

/// Throws std::invalid_argument when n_min > n_max, or when the closed form
/// is forced on a spec that has none. Individual entry failures are recorded
/// on the entry.
MomentTable moment_table(const DistributionSpec& spec, int n_min, int n_max,
                         MethodChoice method = MethodChoice::Auto,
                         const quad::QuadratureConfig& cfg = {});
MomentTable moment_table(const Density& w, int n_min, int n_max,
                         const quad::QuadratureConfig& cfg = {});

/// Entry n becomes (mu_n + mu_{-n}) / 2. Needs n_min = -n_max.
MomentTable symmetrized_moments(const MomentTable& table);

}  // namespace smp
