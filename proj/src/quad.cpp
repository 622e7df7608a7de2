#include "smp/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

namespace smp::quad {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Signed integrals are converged once the error is below rel_tol times this
// fraction of the L1 norm, even when the signed value itself is ~0.
constexpr double kL1ToleranceFraction = 1e-3;
constexpr std::size_t kMaxPanels = 400000;
constexpr double kTruncationCap = 1e6;
constexpr double kMaxExponent = 700.0;

struct ShiftTooLow
{
    double peak;
};

class Integrand
{
  public:
    Integrand(const LogIntegrand& log_abs, const SignMap* sign) : log_abs_(log_abs), sign_(sign) {}

    // log|f(t)|, or -inf where f vanishes.
    double log_value(double t) const
    {
        if (sign_ != nullptr && (*sign_)(t) == 0)
            return kNegInf;
        const double v = log_abs_(t);
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
            throw std::domain_error("log-integrand is NaN or +inf at t = " + std::to_string(t));
        return v;
    }

    double scaled_value(double t, double shift) const
    {
        const double v = log_value(t);
        if (v == kNegInf)
            return 0.0;
        const double e = v - shift;
        if (e > kMaxExponent)
            throw ShiftTooLow{v};
        const int s = sign_ != nullptr ? (*sign_)(t) : 1;
        return s * std::exp(e);
    }

  private:
    const LogIntegrand& log_abs_;
    const SignMap* sign_;
};

struct Panel
{
    double a;
    double b;
    int depth;
    double pos;
    double neg;
    double err;
};

struct ByError
{
    bool operator()(const Panel& x, const Panel& y) const { return x.err < y.err; }
};

Panel evaluate(const Integrand& f, double shift, double a, double b, int depth)
{
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& xk = gauss_kronrod<double, 21>::abscissa();
    const auto& wk = gauss_kronrod<double, 21>::weights();
    const auto& wg = gauss<double, 10>::weights();

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double pos = 0.0;
    double neg = 0.0;
    double kronrod = 0.0;
    double gauss_sum = 0.0;
    for (std::size_t i = 0; i < xk.size(); ++i) {
        const int copies = i == 0 ? 1 : 2;
        for (int r = 0; r < copies; ++r) {
            const double x = r == 0 ? c + h * xk[i] : c - h * xk[i];
            const double v = f.scaled_value(x, shift);
            const double wv = wk[i] * v;
            kronrod += wv;
            if (v > 0)
                pos += wv;
            else
                neg -= wv;
            if (i % 2 == 1)
                gauss_sum += wg[i / 2] * v;
        }
    }
    Panel p{a, b, depth, pos * h, neg * h, 0.0};
    p.err = std::max(std::fabs(kronrod - gauss_sum) * h, 50.0 * kEps * (p.pos + p.neg));
    return p;
}

struct Sums
{
    double pos = 0.0;
    double neg = 0.0;
    double err = 0.0;
};

struct RunResult
{
    double shift = 0.0;
    Sums sums;
    bool converged = true;
};

double tolerance(const Sums& s, const QuadratureConfig& cfg)
{
    return cfg.rel_tol * std::max(std::fabs(s.pos - s.neg), kL1ToleranceFraction * (s.pos + s.neg));
}

RunResult run_adaptive(const Integrand& f, double shift,
                       const std::vector<std::pair<double, double>>& initial,
                       const QuadratureConfig& cfg)
{
    std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
    std::vector<Panel> frozen;
    Sums running;
    for (const auto& [a, b] : initial) {
        Panel p = evaluate(f, shift, a, b, 0);
        running.pos += p.pos;
        running.neg += p.neg;
        running.err += p.err;
        heap.push(p);
    }

    bool converged = false;
    double frozen_err = 0.0;
    std::size_t count = heap.size();
    while (true) {
        const double tol = tolerance(running, cfg);
        if (running.err <= tol) {
            converged = true;
            break;
        }
        if (heap.empty() || frozen_err > tol || count > kMaxPanels)
            break;
        const Panel p = heap.top();
        heap.pop();
        if (p.depth >= cfg.max_levels) {
            frozen_err += p.err;
            frozen.push_back(p);
            continue;
        }
        const double mid = 0.5 * (p.a + p.b);
        Panel left = evaluate(f, shift, p.a, mid, p.depth + 1);
        Panel right = evaluate(f, shift, mid, p.b, p.depth + 1);
        running.pos += left.pos + right.pos - p.pos;
        running.neg += left.neg + right.neg - p.neg;
        running.err += left.err + right.err - p.err;
        heap.push(left);
        heap.push(right);
        count += 2;
    }

    // Final sums in a fixed (positional) order so results do not depend on
    // the refinement history beyond the final partition.
    std::vector<Panel> all = std::move(frozen);
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    RunResult out;
    out.shift = shift;
    for (const Panel& p : all) {
        out.sums.pos += p.pos;
        out.sums.neg += p.neg;
        out.sums.err += p.err;
    }
    out.converged = converged || out.sums.err <= tolerance(out.sums, cfg);
    return out;
}

template<class Fn>
RunResult with_shift_retry(double shift, Fn&& fn)
{
    for (int attempt = 0; attempt < 8; ++attempt) {
        try {
            return fn(shift);
        } catch (const ShiftTooLow& s) {
            shift = s.peak;
        }
    }
    throw std::runtime_error("quadrature: integrand peak could not be located");
}

struct Peak
{
    double t;
    double value;
    double scale;
};

std::optional<Peak> find_peak(const Integrand& f, std::vector<double> candidates)
{
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::size_t best = candidates.size();
    double best_value = kNegInf;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double v = f.log_value(candidates[i]);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    if (best == candidates.size())
        return std::nullopt;

    double t_best = candidates[best];
    const double lo = candidates[best == 0 ? 0 : best - 1];
    const double hi = candidates[std::min(best + 1, candidates.size() - 1)];
    if (hi > lo) {
        auto negated = [&](double t) {
            const double v = f.log_value(t);
            return v == kNegInf ? std::numeric_limits<double>::max() : -v;
        };
        const auto [t_min, neg_min] = boost::math::tools::brent_find_minima(negated, lo, hi, 40);
        if (-neg_min > best_value) {
            best_value = -neg_min;
            t_best = t_min;
        }
    }

    double scale = std::numeric_limits<double>::quiet_NaN();
    constexpr double h = 1e-3;
    const double up = f.log_value(t_best + h);
    const double down = f.log_value(t_best - h);
    const double curvature = -(up - 2.0 * best_value + down) / (h * h);
    if (std::isfinite(curvature) && curvature > 0.0)
        scale = 1.0 / std::sqrt(curvature);
    return Peak{t_best, best_value, scale};
}

std::vector<double> line_candidates(std::span<const double> breakpoints)
{
    std::vector<double> c{0.0};
    for (int k = 1; k <= 256; ++k) {
        c.push_back(0.25 * k);
        c.push_back(-0.25 * k);
    }
    for (int j = 7; j <= 14; ++j) {
        c.push_back(std::ldexp(1.0, j));
        c.push_back(-std::ldexp(1.0, j));
    }
    c.insert(c.end(), breakpoints.begin(), breakpoints.end());
    return c;
}

// March away from the peak until the integrand has been below peak + floor
// at two consecutive points.
double march(const Integrand& f, double start, double direction, double step, double& peak,
             const QuadratureConfig& cfg)
{
    double t = start;
    int below = 0;
    while (true) {
        t += direction * step;
        step *= 1.2;
        if (std::fabs(t) > kTruncationCap)
            throw NonConvergence("quadrature: integrand does not decay on an infinite range",
                                 std::numeric_limits<double>::infinity());
        const double v = f.log_value(t);
        if (v > peak)
            peak = v;
        if (v < peak + cfg.abs_ln_floor) {
            if (++below >= 2)
                return t;
        } else {
            below = 0;
        }
    }
}

std::vector<std::pair<double, double>> partition(double a, double b,
                                                 std::span<const double> breakpoints, double scale)
{
    std::vector<double> cuts{a, b};
    for (double bp : breakpoints)
        if (bp > a && bp < b)
            cuts.push_back(bp);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<std::pair<double, double>> panels;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double x0 = cuts[i];
        const double x1 = cuts[i + 1];
        const double len = x1 - x0;
        const auto m = static_cast<int>(std::clamp(std::ceil(len / scale), 2.0, 2048.0));
        for (int j = 0; j < m; ++j) {
            const double p0 = x0 + len * j / m;
            const double p1 = j + 1 == m ? x1 : x0 + len * (j + 1) / m;
            panels.emplace_back(p0, p1);
        }
    }
    return panels;
}

RunResult run_line(const Integrand& f, std::span<const double> breakpoints,
                   const QuadratureConfig& cfg)
{
    const auto peak = find_peak(f, line_candidates(breakpoints));
    if (!peak)
        return {};
    double shift = peak->value;
    const double width = std::isnan(peak->scale) ? 1.0 : peak->scale;
    const double step = std::clamp(0.25 * width, 1e-3, 1.0);
    const double hi = march(f, peak->t, 1.0, step, shift, cfg);
    const double lo = march(f, peak->t, -1.0, step, shift, cfg);
    const double scale = std::clamp(width, 1e-3, std::max((hi - lo) / 8.0, 1e-3));
    const auto panels = partition(lo, hi, breakpoints, scale);
    return with_shift_retry(shift, [&](double s) { return run_adaptive(f, s, panels, cfg); });
}

RunResult run_interval(const Integrand& f, double a, double b,
                       std::span<const double> breakpoints, const QuadratureConfig& cfg)
{
    if (!(b > a))
        return {};
    std::vector<double> candidates;
    constexpr int kSamples = 256;
    for (int i = 0; i <= kSamples; ++i)
        candidates.push_back(a + (b - a) * i / kSamples);
    for (double bp : breakpoints)
        if (bp > a && bp < b)
            candidates.push_back(bp);
    const auto peak = find_peak(f, candidates);
    if (!peak)
        return {};
    const double fallback = (b - a) / 16.0;
    const double scale =
        std::clamp(std::isnan(peak->scale) ? fallback : peak->scale, 1e-3, std::max(fallback, 1e-3));
    const auto panels = partition(a, b, breakpoints, scale);
    return with_shift_retry(peak->value,
                            [&](double s) { return run_adaptive(f, s, panels, cfg); });
}

LogReal scaled(double x, double shift)
{
    return x > 0.0 ? LogReal::from_log(std::log(x) + shift) : LogReal{};
}

SignedIntegral to_signed(const RunResult& r)
{
    SignedIntegral out;
    const double l1 = r.sums.pos + r.sums.neg;
    out.l1 = scaled(l1, r.shift);
    out.abs_err = scaled(r.sums.err, r.shift);
    if (l1 == 0.0)
        return out;
    const double diff = r.sums.pos - r.sums.neg;
    if (std::fabs(diff) <= r.sums.err) {
        out.cancelled = true;
        return out;
    }
    out.value = scaled(r.sums.pos, r.shift) - scaled(r.sums.neg, r.shift);
    return out;
}

SignedIntegral finish_signed(const RunResult& r, const char* what)
{
    if (!r.converged) {
        const double denom = std::max(std::fabs(r.sums.pos - r.sums.neg),
                                      kL1ToleranceFraction * (r.sums.pos + r.sums.neg));
        throw NonConvergence(std::string(what) + ": refinement limit reached",
                             denom > 0 ? r.sums.err / denom : std::numeric_limits<double>::infinity());
    }
    return to_signed(r);
}

LogIntegral finish_log(const RunResult& r, const char* what)
{
    if (!r.converged)
        throw NonConvergence(std::string(what) + ": refinement limit reached",
                             r.sums.pos > 0 ? r.sums.err / r.sums.pos
                                            : std::numeric_limits<double>::infinity());
    LogIntegral out;
    out.value = scaled(r.sums.pos, r.shift);
    out.rel_err = r.sums.pos > 0 ? r.sums.err / r.sums.pos : 0.0;
    return out;
}

LogIntegrand substituted(const LogIntegrand& f)
{
    return [&f](double t) {
        const double u = std::exp(t);
        if (u == 0.0 || !std::isfinite(u))
            return kNegInf;
        return f(u) + t;
    };
}

SignMap substituted(const SignMap& s)
{
    return [&s](double t) {
        const double u = std::exp(t);
        if (u == 0.0 || !std::isfinite(u))
            return 0;
        return s(u);
    };
}

}  // namespace

void QuadratureConfig::validate() const
{
    if (!(rel_tol > 0.0))
        throw std::invalid_argument("QuadratureConfig: rel_tol must be positive");
    if (max_levels < 1)
        throw std::invalid_argument("QuadratureConfig: max_levels must be >= 1");
    if (!(abs_ln_floor < 0.0))
        throw std::invalid_argument("QuadratureConfig: abs_ln_floor must be negative");
    if (!(truncation_growth > 1.0))
        throw std::invalid_argument("QuadratureConfig: truncation_growth must exceed 1");
}

LogIntegral integrate_log_line(const LogIntegrand& log_integrand,
                               std::span<const double> breakpoints, const QuadratureConfig& cfg)
{
    cfg.validate();
    const Integrand f(log_integrand, nullptr);
    return finish_log(run_line(f, breakpoints, cfg), "integrate_log");
}

SignedIntegral integrate_signed_line(const LogIntegrand& log_abs_integrand, const SignMap& sign,
                                     std::span<const double> breakpoints,
                                     const QuadratureConfig& cfg)
{
    cfg.validate();
    const Integrand f(log_abs_integrand, &sign);
    return finish_signed(run_line(f, breakpoints, cfg), "integrate_signed");
}

SignedIntegral integrate_signed_interval(const LogIntegrand& log_abs_integrand,
                                         const SignMap& sign, double a, double b,
                                         std::span<const double> breakpoints,
                                         const QuadratureConfig& cfg)
{
    cfg.validate();
    const Integrand f(log_abs_integrand, &sign);
    return finish_signed(run_interval(f, a, b, breakpoints, cfg), "integrate_signed");
}

LogIntegral integrate_log(const LogIntegrand& log_integrand, Domain domain,
                          const QuadratureConfig& cfg)
{
    if (domain == Domain::RealLine)
        return integrate_log_line(log_integrand, {}, cfg);
    return integrate_log_line(substituted(log_integrand), {}, cfg);
}

SignedIntegral integrate_signed(const LogIntegrand& log_abs_integrand, const SignMap& sign,
                                Domain domain, const QuadratureConfig& cfg)
{
    if (domain == Domain::RealLine)
        return integrate_signed_line(log_abs_integrand, sign, {}, cfg);
    return integrate_signed_line(substituted(log_abs_integrand), substituted(sign), {}, cfg);
}

}  // namespace smp::quad
