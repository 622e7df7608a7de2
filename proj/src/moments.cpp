#include "smp/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>

namespace smp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct HalfLine
{
    LogReal value;
    double abs_err_ln = kNegInf;
};

// Integral of |u|^n w(u) over one half-line, in t = ln|u|.
HalfLine half_line_moment(const Density& w, int side, int n, const quad::QuadratureConfig& cfg)
{
    std::vector<double> bps;
    for (double b : w.breakpoints())
        if (b * side > 0.0)
            bps.push_back(std::log(std::fabs(b)));
    const double order = n + 1.0;
    auto f = [&w, side, order](double t) {
        const double v = w.log_density_at(side, t);
        return v == kNegInf ? kNegInf : v + order * t;
    };
    const quad::LogIntegral r = quad::integrate_log_line(f, bps, cfg);
    HalfLine out{r.value, kNegInf};
    if (!r.value.is_zero() && r.rel_err > 0.0)
        out.abs_err_ln = r.value.ln_mag() + std::log(r.rel_err);
    return out;
}

bool closed_form_eligible(const DistributionSpec& spec)
{
    if (std::holds_alternative<LognormalHamburger>(spec.family))
        return spec.modifiers.empty();
    if (const auto* f = std::get_if<LognormalStieltjes>(&spec.family)) {
        if (spec.modifiers.empty())
            return true;
        if (f->c != 1.0)
            return false;
        return std::all_of(spec.modifiers.begin(), spec.modifiers.end(),
                           [](const Modifier& m) { return std::holds_alternative<SinPerturbation>(m); });
    }
    return false;
}

MomentEntry failed_entry(int n, MomentMethod method, const std::string& why)
{
    MomentEntry e;
    e.n = n;
    e.method = method;
    e.error = why;
    return e;
}

MomentEntry quadrature_entry(const Density& w, int n, const quad::QuadratureConfig& cfg)
{
    try {
        const MomentValue mv = moment_with_error(w, n, cfg);
        return {n, mv.value, MomentMethod::Quadrature, mv.err_est, std::nullopt};
    } catch (const std::exception& ex) {
        return failed_entry(n, MomentMethod::Quadrature, ex.what());
    }
}

}  // namespace

std::string to_string(MomentMethod m)
{
    return m == MomentMethod::ClosedForm ? "closed_form" : "quadrature";
}

const MomentEntry& MomentTable::at(int n) const
{
    if (!contains(n))
        throw std::out_of_range("moment order " + std::to_string(n) + " outside table range");
    return entries.at(static_cast<std::size_t>(n - n_min));
}

bool MomentTable::all_ok() const
{
    return std::all_of(entries.begin(), entries.end(), [](const MomentEntry& e) { return e.ok(); });
}

std::optional<LogReal> closed_form_moment(const DistributionSpec& spec, int n)
{
    if (!closed_form_eligible(spec))
        return std::nullopt;
    spec.validate();
    if (const auto* h = std::get_if<LognormalHamburger>(&spec.family)) {
        if (n % 2 != 0)
            return LogReal::zero();
        const double a = n + 1 - h->c;
        return LogReal::from_log(a * a / (4.0 * h->d));
    }
    const auto& s = std::get<LognormalStieltjes>(spec.family);
    const double a = n + 1 - s.c;
    return LogReal::from_log(a * a / (4.0 * s.d));
}

MomentValue moment_with_error(const Density& w, int n, const quad::QuadratureConfig& cfg)
{
    LogReal total;
    double abs_err_ln = kNegInf;
    LogReal l1;
    for (int side : w.sides()) {
        const HalfLine h = half_line_moment(w, side, n, cfg);
        const bool flip = side < 0 && n % 2 != 0;
        total += flip ? -h.value : h.value;
        l1 += h.value;
        abs_err_ln = log_add_exp(abs_err_ln, h.abs_err_ln);
    }
    for (const PointMass& pm : w.point_masses()) {
        const int sign = pm.location < 0.0 && n % 2 != 0 ? -1 : 1;
        const LogReal term =
            LogReal::from_log(n * std::log(std::fabs(pm.location)) + std::log(pm.mass), sign);
        total += term;
        l1 += term.abs();
    }
    // Two half-lines cancelling to within their error is an exact zero
    // (odd moments of an even density).
    if (!total.is_zero() && total.ln_mag() <= abs_err_ln)
        total = LogReal::zero();
    const double err = l1.is_zero() ? 0.0 : std::exp(abs_err_ln - l1.ln_mag());
    return {total, err};
}

LogReal moment(const Density& w, int n, const quad::QuadratureConfig& cfg)
{
    return moment_with_error(w, n, cfg).value;
}

MomentTable moment_table(const DistributionSpec& spec, int n_min, int n_max, MethodChoice method,
                         const quad::QuadratureConfig& cfg)
{
    if (n_min > n_max)
        throw std::invalid_argument("moment_table: n_min > n_max");
    spec.validate();
    const bool closed = closed_form_eligible(spec);
    if (method == MethodChoice::ClosedForm && !closed)
        throw std::invalid_argument("no closed form for " + spec.key());

    MomentTable table;
    table.spec = spec;
    table.n_min = n_min;
    table.n_max = n_max;
    if (closed && method != MethodChoice::Quadrature) {
        for (int n = n_min; n <= n_max; ++n)
            table.entries.push_back({n, *closed_form_moment(spec, n), MomentMethod::ClosedForm, 0.0,
                                     std::nullopt});
        return table;
    }
    cfg.validate();
    const Density w = realize(spec);
    for (int n = n_min; n <= n_max; ++n)
        table.entries.push_back(quadrature_entry(w, n, cfg));
    return table;
}

MomentTable moment_table(const Density& w, int n_min, int n_max, const quad::QuadratureConfig& cfg)
{
    if (n_min > n_max)
        throw std::invalid_argument("moment_table: n_min > n_max");
    cfg.validate();
    MomentTable table;
    table.n_min = n_min;
    table.n_max = n_max;
    for (int n = n_min; n <= n_max; ++n)
        table.entries.push_back(quadrature_entry(w, n, cfg));
    return table;
}

MomentTable symmetrized_moments(const MomentTable& table)
{
    if (table.n_min != -table.n_max)
        throw std::invalid_argument("symmetrized_moments: table range must be symmetric about 0");
    MomentTable out;
    if (table.spec) {
        DistributionSpec s = *table.spec;
        s.modifiers.push_back(Symmetrized{});
        out.spec = s;
    }
    out.n_min = table.n_min;
    out.n_max = table.n_max;
    const LogReal half = LogReal::from_log(-std::log(2.0));
    for (int n = table.n_min; n <= table.n_max; ++n) {
        const MomentEntry& a = table.at(n);
        const MomentEntry& b = table.at(-n);
        const MomentMethod method = a.method == MomentMethod::ClosedForm &&
                                            b.method == MomentMethod::ClosedForm
                                        ? MomentMethod::ClosedForm
                                        : MomentMethod::Quadrature;
        if (!a.ok() || !b.ok()) {
            out.entries.push_back(failed_entry(n, method, a.ok() ? *b.error : *a.error));
            continue;
        }
        out.entries.push_back(
            {n, (a.value + b.value) * half, method, std::max(a.err_est, b.err_est), std::nullopt});
    }
    return out;
}

}  // namespace smp
