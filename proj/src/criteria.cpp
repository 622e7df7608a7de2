#include "smp/criteria.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace smp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Verdict thresholds for the series heuristics.
constexpr double kDivergentExponent = 1.05;
constexpr double kConvergentExponent = 1.2;
constexpr double kGeometricRatio = 0.95;
constexpr double kMinWindowGrowth = 0.01;
// Decrease per truncation level that counts toward the -inf verdict, and how
// many consecutive levels it must persist.
constexpr double kDivergentStep = 1.0;
constexpr int kDivergentLevels = 3;

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

bool is_hamburger(CarlemanVariant v)
{
    return v == CarlemanVariant::ClassicalHamburger || v == CarlemanVariant::StrongHamburger;
}

bool is_strong(CarlemanVariant v)
{
    return v == CarlemanVariant::StrongStieltjes || v == CarlemanVariant::StrongHamburger;
}

double ln_term_at(const MomentTable& table, CarlemanVariant variant, int m, double ln_xi)
{
    const int order = is_hamburger(variant) ? 2 * m : m;
    if (!table.contains(order))
        throw std::invalid_argument("carleman_sum: table lacks moment order " + std::to_string(order));
    const MomentEntry& e = table.at(order);
    if (!e.ok())
        throw std::invalid_argument("carleman_sum: moment order " + std::to_string(order) +
                                    " failed: " + *e.error);
    return ln_carleman_term(e.value, m) + std::abs(m) * ln_xi;
}

int available_n(const MomentTable& table, CarlemanVariant variant)
{
    int reach = is_strong(variant) ? std::min(table.n_max, -table.n_min) : table.n_max;
    if (is_hamburger(variant))
        reach /= 2;
    if (reach < 4)
        throw std::invalid_argument("carleman_sum: table too short for a series fit");
    return reach;
}

SeriesDiagnostics series(const MomentTable& table, CarlemanVariant variant, double xi)
{
    if (!(xi > 0.0) || !std::isfinite(xi))
        throw std::invalid_argument("carleman_sum: weight must be positive");
    const double ln_xi = std::log(xi);
    SeriesDiagnostics d;
    d.variant = variant;
    d.xi = xi;
    d.n_max = available_n(table, variant);

    double ln_sum = kNegInf;
    for (int m = 1; m <= d.n_max; ++m) {
        double ln_t = ln_term_at(table, variant, m, ln_xi);
        if (is_strong(variant))
            ln_t = log_add_exp(ln_t, ln_term_at(table, variant, -m, ln_xi));
        d.ln_terms.push_back(ln_t);
        ln_sum = log_add_exp(ln_sum, ln_t);
        d.ln_partial_sums.push_back(ln_sum);
        d.partial_sums.push_back(std::exp(ln_sum));
    }

    const int lo = std::max(1, d.n_max / 2);
    const PowerFit fit = fit_decay(d.ln_terms, lo, d.n_max);
    d.fitted_exponent = fit.exponent;
    d.fit_ln_constant = fit.ln_constant;
    d.geometric = true;
    for (int m = lo; m < d.n_max; ++m)
        if (!(d.ln_terms[m] - d.ln_terms[m - 1] < std::log(kGeometricRatio)))
            d.geometric = false;
    d.window_growth = -std::expm1(d.ln_partial_sums[lo - 1] - d.ln_partial_sums.back());

    if (d.fitted_exponent >= kConvergentExponent || d.geometric)
        d.verdict = SeriesVerdict::ConvergesLikely;
    else if (d.fitted_exponent <= kDivergentExponent && d.window_growth > kMinWindowGrowth)
        d.verdict = SeriesVerdict::DivergesLikely;
    else
        d.verdict = SeriesVerdict::Inconclusive;
    return d;
}

// ln(1 / (2 cosh t)), the weight du / (1 + u^2) in t = ln u.
double ln_cauchy_weight(double t)
{
    const double a = std::fabs(t);
    return -a - std::log1p(std::exp(-2.0 * a));
}

// ln(u / (1 + u^1.5)) in t = ln u.
double ln_berg_weight(double t)
{
    if (t > 0.0)
        return -0.5 * t - std::log1p(std::exp(-1.5 * t));
    return t - std::log1p(std::exp(1.5 * t));
}

// Integral over the real t-line of L(t) e^{W(t)}, where L is a sum of
// log-densities, each possibly -inf. Evaluated on growing windows.
class CriterionIntegral
{
  public:
    using Part = std::function<double(double)>;

    CriterionIntegral(std::vector<Part> parts, std::function<double(double)> ln_weight,
                      std::vector<double> breakpoints, const CriteriaConfig& cfg)
        : parts_(std::move(parts)), ln_weight_(std::move(ln_weight)),
          breakpoints_(std::move(breakpoints)), cfg_(cfg)
    {
    }

    ExtendedValue evaluate()
    {
        const quad::LogIntegrand log_abs = [this](double t) {
            return std::log(std::fabs(log_factor(t))) + ln_weight_(t);
        };
        const quad::SignMap sign = [this](double t) {
            const double v = log_factor(t);
            return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        };

        double total = 0.0;
        double err = 0.0;
        double lo = -cfg_.initial_truncation;
        double hi = cfg_.initial_truncation;
        int falling = 0;
        try {
            const quad::SignedIntegral core =
                quad::integrate_signed_interval(log_abs, sign, lo, hi, breakpoints_, cfg_.integral);
            total = core.value.to_double();
            err = core.abs_err.to_double();
            if (vanishes_)
                return ExtendedValue::minus_infinity("log-density is -inf on an interval");
            for (int level = 1; level <= cfg_.truncation_levels; ++level) {
                const double new_lo = lo * cfg_.integral.truncation_growth;
                const double new_hi = hi * cfg_.integral.truncation_growth;
                const quad::SignedIntegral left = quad::integrate_signed_interval(
                    log_abs, sign, new_lo, lo, breakpoints_, cfg_.integral);
                const quad::SignedIntegral right = quad::integrate_signed_interval(
                    log_abs, sign, hi, new_hi, breakpoints_, cfg_.integral);
                lo = new_lo;
                hi = new_hi;
                if (vanishes_)
                    return ExtendedValue::minus_infinity("log-density is -inf on an interval");
                const double shell = left.value.to_double() + right.value.to_double();
                total += shell;
                err += left.abs_err.to_double() + right.abs_err.to_double();
                if (!std::isfinite(total))
                    return ExtendedValue::minus_infinity("truncated integral overflowed");
                falling = shell < -kDivergentStep ? falling + 1 : 0;
                if (falling >= kDivergentLevels)
                    return ExtendedValue::minus_infinity(
                        "truncated integral decreases without bound (|t| <= " + fmt(hi) + ")");
                if (std::fabs(shell) <= cfg_.integral_tol * std::max(1.0, std::fabs(total)))
                    return ExtendedValue::make_finite(total, err + std::fabs(shell));
            }
        } catch (const quad::NonConvergence& ex) {
            return ExtendedValue::inconclusive(std::string(ex.what()) +
                                               " (error estimate " + fmt(ex.estimate()) + ")");
        }
        return ExtendedValue::inconclusive("truncation levels exhausted at |t| <= " + fmt(hi) +
                                           ", value " + fmt(total));
    }

  private:
    double log_factor(double t)
    {
        double sum = 0.0;
        for (const Part& p : parts_) {
            double v = p(t);
            if (v == kNegInf) {
                const double h = cfg_.null_interval;
                if (p(t - h) == kNegInf && p(t + h) == kNegInf)
                    vanishes_ = true;
                v = cfg_.integral.abs_ln_floor;
            }
            sum += v;
        }
        return sum;
    }

    std::vector<Part> parts_;
    std::function<double(double)> ln_weight_;
    std::vector<double> breakpoints_;
    const CriteriaConfig& cfg_;
    bool vanishes_ = false;
};

std::vector<double> log_breakpoints(const Density& w, int side, double scale)
{
    std::vector<double> out;
    for (double b : w.breakpoints())
        if (b * side > 0.0)
            out.push_back(std::log(std::fabs(b)) * scale);
    return out;
}

}  // namespace

ExtendedValue ExtendedValue::make_finite(double v, double err)
{
    return {Kind::Finite, v, err, {}};
}

ExtendedValue ExtendedValue::minus_infinity(std::string why)
{
    return {Kind::MinusInfinity, kNegInf, 0.0, std::move(why)};
}

ExtendedValue ExtendedValue::inconclusive(std::string why)
{
    return {Kind::Inconclusive, std::numeric_limits<double>::quiet_NaN(), 0.0, std::move(why)};
}

std::string to_string(ExtendedValue::Kind k)
{
    switch (k) {
    case ExtendedValue::Kind::Finite:
        return "finite";
    case ExtendedValue::Kind::MinusInfinity:
        return "minus_infinity";
    case ExtendedValue::Kind::Inconclusive:
        return "inconclusive";
    }
    return "?";
}

std::string to_string(CarlemanVariant v)
{
    switch (v) {
    case CarlemanVariant::ClassicalStieltjes:
        return "classical_stieltjes";
    case CarlemanVariant::ClassicalHamburger:
        return "classical_hamburger";
    case CarlemanVariant::StrongStieltjes:
        return "strong_stieltjes";
    case CarlemanVariant::StrongHamburger:
        return "strong_hamburger";
    }
    return "?";
}

std::string to_string(SeriesVerdict v)
{
    switch (v) {
    case SeriesVerdict::ConvergesLikely:
        return "converges_likely";
    case SeriesVerdict::DivergesLikely:
        return "diverges_likely";
    case SeriesVerdict::Inconclusive:
        return "inconclusive";
    }
    return "?";
}

std::string to_string(Classification c)
{
    switch (c) {
    case Classification::Determinate:
        return "determinate";
    case Classification::Indeterminate:
        return "indeterminate";
    case Classification::Unknown:
        return "unknown";
    case Classification::Inconsistent:
        return "inconsistent";
    }
    return "?";
}

double ln_carleman_term(const LogReal& mu, int n)
{
    if (n == 0)
        throw std::domain_error("carleman_term: n must be nonzero");
    if (mu.sign() != 1)
        throw std::domain_error("carleman_term: moment must be positive");
    return -mu.ln_mag() / (2.0 * std::abs(n));
}

double carleman_term(const LogReal& mu, int n)
{
    return std::exp(ln_carleman_term(mu, n));
}

PowerFit fit_decay(const std::vector<double>& ln_terms, int lo, int hi)
{
    if (lo < 1 || hi > static_cast<int>(ln_terms.size()) || hi - lo < 2)
        throw std::invalid_argument("fit_decay: window needs at least three terms");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double k = hi - lo + 1;
    for (int m = lo; m <= hi; ++m) {
        const double x = std::log(static_cast<double>(m));
        const double y = ln_terms[static_cast<std::size_t>(m - 1)];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return {-slope, (sy - slope * sx) / k};
}

SeriesDiagnostics carleman_sum(const MomentTable& table, CarlemanVariant variant)
{
    return series(table, variant, 1.0);
}

SeriesDiagnostics weighted_carleman_sum(const MomentTable& table, double xi)
{
    return series(table, CarlemanVariant::StrongStieltjes, xi);
}

void CriteriaConfig::validate() const
{
    quad.validate();
    integral.validate();
    if (!(initial_truncation > 0.0) || !(integral_tol > 0.0) || !(null_interval > 0.0))
        throw std::invalid_argument("CriteriaConfig: truncation, tolerance and interval must be positive");
    if (truncation_levels < 1)
        throw std::invalid_argument("CriteriaConfig: truncation_levels must be positive");
    if (series_n_closed_form < 4 || series_n_quadrature < 4)
        throw std::invalid_argument("CriteriaConfig: series windows need at least 4 terms");
}

ExtendedValue krein_hamburger(const Density& w, const CriteriaConfig& cfg)
{
    if (w.domain() != Domain::RealLine)
        throw std::invalid_argument("krein_hamburger: requires a real-line density");
    cfg.validate();
    std::vector<double> bps = log_breakpoints(w, 1, 1.0);
    const std::vector<double> neg = log_breakpoints(w, -1, 1.0);
    bps.insert(bps.end(), neg.begin(), neg.end());
    CriterionIntegral ci({[&w](double t) { return w.log_density_at(1, t); },
                          [&w](double t) { return w.log_density_at(-1, t); }},
                         ln_cauchy_weight, std::move(bps), cfg);
    return ci.evaluate();
}

ExtendedValue krein_stieltjes(const Density& w, const CriteriaConfig& cfg)
{
    if (w.domain() != Domain::PositiveHalfLine)
        throw std::invalid_argument("krein_stieltjes: requires a positive half-line density");
    cfg.validate();
    // log sigma'(u^2) with u = e^t is the log-density at 2t.
    CriterionIntegral ci({[&w](double t) { return w.log_density_at(1, 2.0 * t); }},
                         ln_cauchy_weight, log_breakpoints(w, 1, 0.5), cfg);
    return ci.evaluate();
}

ExtendedValue berg_integral(const Density& w, const CriteriaConfig& cfg)
{
    if (w.domain() != Domain::PositiveHalfLine)
        throw std::invalid_argument("berg_integral: requires a positive half-line density");
    cfg.validate();
    CriterionIntegral ci({[&w](double t) { return w.log_density_at(1, t); }}, ln_berg_weight,
                         log_breakpoints(w, 1, 1.0), cfg);
    return ci.evaluate();
}

Classification combine(const ExtendedValue& krein, SeriesVerdict strong_carleman)
{
    const bool krein_fires = krein.finite();
    const bool carleman_fires = strong_carleman == SeriesVerdict::DivergesLikely;
    if (krein_fires && carleman_fires)
        return Classification::Inconsistent;
    if (krein_fires)
        return Classification::Indeterminate;
    if (carleman_fires)
        return Classification::Determinate;
    return Classification::Unknown;
}

CriterionReport classify(const DistributionSpec& spec, const CriteriaConfig& cfg)
{
    spec.validate();
    cfg.validate();
    CriterionReport report;
    report.spec = spec;
    const Density w = realize(spec);
    const bool hamburger = w.domain() == Domain::RealLine;
    const std::string krein_name = hamburger ? "krein-hamburger" : "krein-stieltjes";
    report.krein_criterion = krein_name;

    const bool closed = closed_form_moment(spec, 0).has_value();
    const int n = closed ? cfg.series_n_closed_form : cfg.series_n_quadrature;
    const int reach = hamburger ? 2 * n : n;
    const CarlemanVariant strong_v =
        hamburger ? CarlemanVariant::StrongHamburger : CarlemanVariant::StrongStieltjes;
    const CarlemanVariant classical_v =
        hamburger ? CarlemanVariant::ClassicalHamburger : CarlemanVariant::ClassicalStieltjes;

    SeriesVerdict strong_verdict = SeriesVerdict::Inconclusive;
    try {
        const MomentTable table = moment_table(spec, -reach, reach, MethodChoice::Auto, cfg.quad);
        try {
            report.carleman_strong = carleman_sum(table, strong_v);
            strong_verdict = report.carleman_strong->verdict;
        } catch (const std::exception& ex) {
            report.diagnostics.push_back(std::string("strong carleman series: ") + ex.what());
        }
        try {
            report.carleman_classical = carleman_sum(table, classical_v);
        } catch (const std::exception& ex) {
            report.diagnostics.push_back(std::string("classical carleman series: ") + ex.what());
        }
    } catch (const std::exception& ex) {
        report.diagnostics.push_back(std::string("moments: ") + ex.what());
    }

    try {
        report.krein = hamburger ? krein_hamburger(w, cfg) : krein_stieltjes(w, cfg);
    } catch (const std::exception& ex) {
        report.krein = ExtendedValue::inconclusive(ex.what());
    }
    if (!report.krein.detail.empty())
        report.diagnostics.push_back(krein_name + ": " + report.krein.detail);
    if (!hamburger) {
        try {
            report.berg = berg_integral(w, cfg);
        } catch (const std::exception& ex) {
            report.berg = ExtendedValue::inconclusive(ex.what());
        }
    }

    report.classification = combine(report.krein, strong_verdict);
    const std::string strong_name = hamburger ? "strong carleman (hamburger)" : "strong carleman (stieltjes)";
    if (report.krein.finite())
        report.justification.push_back(krein_name + " integral finite (" + fmt(report.krein.value) +
                                       "), sufficient for indeterminacy");
    else
        report.justification.push_back(krein_name + " integral " + to_string(report.krein.kind));
    if (report.carleman_strong)
        report.justification.push_back(strong_name + " " + to_string(strong_verdict) +
                                       ", fitted exponent " +
                                       fmt(report.carleman_strong->fitted_exponent) +
                                       (strong_verdict == SeriesVerdict::DivergesLikely
                                            ? ", sufficient for determinacy (heuristic)"
                                            : ""));
    if (report.classification == Classification::Inconsistent)
        report.justification.push_back("both criteria fired; numerical contradiction");
    return report;
}

}  // namespace smp
