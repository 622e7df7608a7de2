#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smp/density.hpp"
#include "smp/logreal.hpp"
#include "smp/moments.hpp"
#include "smp/quad.hpp"
#include "smp/spec.hpp"

namespace smp {

/// Real value extended by a -infinity verdict. Inconclusive covers numerical
/// failure; detail then says why.
struct ExtendedValue
{
    enum class Kind { Finite, MinusInfinity, Inconclusive };

    Kind kind = Kind::Inconclusive;
    double value = 0.0;
    double err_est = 0.0;
    std::string detail;

    bool finite() const noexcept { return kind == Kind::Finite; }
    static ExtendedValue make_finite(double v, double err);
    static ExtendedValue minus_infinity(std::string why);
    static ExtendedValue inconclusive(std::string why);
};

std::string to_string(ExtendedValue::Kind k);

enum class CarlemanVariant { ClassicalStieltjes, ClassicalHamburger, StrongStieltjes, StrongHamburger };
enum class SeriesVerdict { ConvergesLikely, DivergesLikely, Inconclusive };
enum class Classification { Determinate, Indeterminate, Unknown, Inconsistent };

std::string to_string(CarlemanVariant v);
std::string to_string(SeriesVerdict v);
std::string to_string(Classification c);

struct SeriesDiagnostics
{
    CarlemanVariant variant = CarlemanVariant::StrongStieltjes;
    double xi = 1.0;
    // Largest index reached; terms run over 1 <= |n| <= n_max.
    int n_max = 0;
    // ln_terms[m - 1] is the log of the |n| = m term (pair sum for the
    // strong variants).
    std::vector<double> ln_terms;
    // partial_sums[m - 1] sums all terms with |n| <= m.
    std::vector<double> partial_sums;
    // The same sums in log space; they stay finite when the terms overflow.
    std::vector<double> ln_partial_sums;
    // Decay exponent p of the per-|n| term (pairs n, -n summed for the
    // strong variants), fitted as ln term ~ ln C - p ln |n| on [n_max/2, n_max].
    double fitted_exponent = 0.0;
    double fit_ln_constant = 0.0;
    // Every successive ratio in the fit window is below the geometric bound.
    bool geometric = false;
    // Relative growth of the partial sum over the fit window.
    double window_growth = 0.0;
    SeriesVerdict verdict = SeriesVerdict::Inconclusive;

    double partial_sum() const { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
};

/// mu^(-1/(2|n|)) = exp(-ln mu / (2|n|)). Throws std::domain_error unless mu
/// is positive and n nonzero.
double carleman_term(const LogReal& mu, int n);
double ln_carleman_term(const LogReal& mu, int n);

/// Throws std::invalid_argument when the table misses an index the variant
/// needs or holds a failed entry there.
SeriesDiagnostics carleman_sum(const MomentTable& table, CarlemanVariant variant);

/// Strong Stieltjes terms weighted by xi^|n|.
SeriesDiagnostics weighted_carleman_sum(const MomentTable& table, double xi);

struct PowerFit
{
    double exponent;
    double ln_constant;
};

/// Least-squares fit of ln_terms[m - 1] ~ ln C - p ln m over m in [lo, hi].
PowerFit fit_decay(const std::vector<double>& ln_terms, int lo, int hi);

struct CriteriaConfig
{
    // Used for moments.
    quad::QuadratureConfig quad{};
    // Used for the criterion integrals, whose integrands may carry logarithmic
    // singularities; hence the deep bisection.
    quad::QuadratureConfig integral{1e-8, -745.0, 40, 2.0};
    // Half-width of the first truncation window, in ln|u|, and how many
    // times it may grow by integral.truncation_growth.
    double initial_truncation = 8.0;
    int truncation_levels = 12;
    // Absolute change between truncation levels accepted as converged.
    double integral_tol = 1e-7;
    // A log-density that is -inf at three points this far apart counts as
    // vanishing on an interval.
    double null_interval = 1e-3;
    // Carleman window: moments up to this order, per pricing.
    int series_n_closed_form = 400;
    int series_n_quadrature = 60;

    void validate() const;
};

ExtendedValue krein_hamburger(const Density& w, const CriteriaConfig& cfg = {});
ExtendedValue krein_stieltjes(const Density& w, const CriteriaConfig& cfg = {});
ExtendedValue berg_integral(const Density& w, const CriteriaConfig& cfg = {});

struct CriterionReport
{
    std::optional<DistributionSpec> spec;
    std::optional<SeriesDiagnostics> carleman_classical;
    std::optional<SeriesDiagnostics> carleman_strong;
    // "krein-hamburger" or "krein-stieltjes", by domain.
    std::string krein_criterion;
    ExtendedValue krein;
    // Half-line problems only; reported, never used to classify.
    std::optional<ExtendedValue> berg;
    Classification classification = Classification::Unknown;
    std::vector<std::string> justification;
    std::vector<std::string> diagnostics;
};

/// Krein finite -> Indeterminate; strong Carleman DivergesLikely ->
/// Determinate; both -> Inconsistent; otherwise Unknown.
CriterionReport classify(const DistributionSpec& spec, const CriteriaConfig& cfg = {});

/// The classification rule alone.
Classification combine(const ExtendedValue& krein, SeriesVerdict strong_carleman);

}  // namespace smp
