// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when a
// line fails, except for lines marked as a known conflict (see README).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "smp/criteria.hpp"
#include "smp/golden.hpp"
#include "smp/moments.hpp"
#include "smp/spec.hpp"
#include "smp/symmetry.hpp"
#include "smp/witness.hpp"

using namespace smp;
using std::numbers::pi;

namespace {

const double kCs[] = {0.0, 1.0, 2.0};
const double kDs[] = {0.25, 1.0, 4.0};

struct Line
{
    bool pass = true;
    std::ostringstream detail;
    // failures here do not change the exit status
    bool known_conflict = false;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            if (pass)
                detail << "; first failure: " << what;
            pass = false;
        }
    }
};

int g_failed = 0;

void report(const std::string& name, const std::function<void(Line&)>& body)
{
    Line line;
    try {
        body(line);
    } catch (const std::exception& e) {
        line.pass = false;
        line.detail << "; exception: " << e.what();
    }
    std::string detail = line.detail.str();
    if (detail.starts_with("; "))
        detail.erase(0, 2);
    std::printf("%s %s: %s%s\n", line.pass ? "PASS" : "FAIL", name.c_str(), detail.c_str(),
                !line.pass && line.known_conflict ? " [known conflict, see README]" : "");
    std::fflush(stdout);
    if (!line.pass && !line.known_conflict)
        ++g_failed;
}

double ln_rel(double a, double b)
{
    return std::fabs(a - b) / std::max(1.0, std::fabs(b));
}

std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void closed_form_vs_quadrature(Line& line)
{
    double worst = 0.0;
    int compared = 0;
    for (double c : kCs)
        for (double d : kDs)
            for (const DistributionSpec& spec :
                 {DistributionSpec{LognormalStieltjes{c, d}, {}}, DistributionSpec{LognormalHamburger{c, d}, {}}}) {
                const MomentTable cf = moment_table(spec, -8, 8, MethodChoice::ClosedForm);
                const MomentTable q = moment_table(spec, -8, 8, MethodChoice::Quadrature);
                for (int n = -8; n <= 8; ++n) {
                    const std::string at = spec.key() + " n=" + std::to_string(n);
                    line.require(q.at(n).ok(), at + " quadrature failed");
                    const LogReal a = cf.at(n).value;
                    const LogReal b = q.at(n).value;
                    line.require(a.sign() == b.sign(), at + " sign");
                    if (a.is_zero() || b.is_zero())
                        continue;
                    const double dev = ln_rel(b.ln_mag(), a.ln_mag());
                    worst = std::max(worst, dev);
                    ++compared;
                    line.require(dev <= 1e-8, at + " dev " + num(dev));
                }
            }
    line.detail << compared << " lnMag pairs, max relative deviation " << num(worst) << " (tol 1e-8)";
}

void krein_value(Line& line, const DistributionSpec& spec, double expected)
{
    const CriterionReport r = classify(spec);
    line.require(r.krein.finite(), "not finite");
    const double err = std::fabs(r.krein.value - expected);
    line.detail << spec.key() << " -> " << num(r.krein.value) << ", expected " << num(expected)
                << ", |diff| " << num(err) << " (tol 1e-3)";
    line.require(err <= 1e-3, "outside tolerance");
}

void witness_suite(Line& line)
{
    double worst = 0.0;
    double min_ratio = INFINITY;
    int cases = 0;
    for (double d : kDs) {
        const Density base = realize({LognormalStieltjes{1, d}, {}});
        for (int k : {1, 2})
            for (double s : {-1.0, -0.5, 0.5, 1.0}) {
                const DistributionSpec spec = lognormal_witness_spec(d, s, k);
                const std::string at = spec.key();
                const WitnessReport r = verify_same_moments(realize(spec), base, -8, 8);
                line.require(r.failures.empty(), at + " moment failures");
                worst = std::max(worst, r.max_deviation);
                line.require(r.max_deviation <= 1e-8, at + " deviation " + num(r.max_deviation));
                min_ratio = std::min(min_ratio, r.distinctness / std::fabs(s));
                line.require(r.distinctness > 0.1 * std::fabs(s), at + " distinctness " + num(r.distinctness));
                const Classification cl = classify(spec).classification;
                line.require(cl == Classification::Indeterminate, at + " classified " + to_string(cl));
                ++cases;
            }
    }
    line.detail << cases << " witnesses, max moment deviation " << num(worst)
                << " (tol 1e-8), min L1/|s| " << num(min_ratio) << " (> 0.1), all indeterminate";
}

void carleman_geometric(Line& line)
{
    const DistributionSpec spec{LognormalStieltjes{1, 0.25}, {}};
    const SeriesDiagnostics s = carleman_sum(moment_table(spec, -40, 40), CarlemanVariant::StrongStieltjes);
    const double q = std::exp(-0.5);
    const double limit = 2 * q / (1 - q);
    const double partial = s.partial_sums.at(39);
    const double err = std::fabs(partial - limit) / limit;
    line.require(err <= 1e-8, "partial sum");
    const CriterionReport r = classify(spec);
    line.require(r.carleman_strong && r.carleman_strong->verdict == SeriesVerdict::ConvergesLikely, "verdict");
    line.detail << "S_40 = " << num(partial) << ", limit " << num(limit) << ", rel " << num(err)
                << " (tol 1e-8), verdict "
                << (r.carleman_strong ? to_string(r.carleman_strong->verdict) : std::string("missing"));
}

void family9_exponent(Line& line, const GoldenFile& golden)
{
    double worst_golden = 0.0;
    for (double d : {0.0, 0.5, 1.0}) {
        const DistributionSpec spec{ExpPowerFamily9{d}, {}};
        const MomentTable t = moment_table(spec, -60, 60, MethodChoice::Quadrature);
        line.require(t.all_ok(), spec.key() + " quadrature failed");
        for (int n = -6; n <= 60; ++n) {
            const GoldenEntry* g = golden.find("moment/" + spec.key() + "/n=" + std::to_string(n));
            line.require(g != nullptr, spec.key() + " golden entry missing at n=" + std::to_string(n));
            if (!g)
                continue;
            const double dev = golden_deviation(*g, t.at(n).value);
            worst_golden = std::max(worst_golden, dev);
            line.require(dev <= 1e-6, spec.key() + " golden n=" + std::to_string(n));
        }
        const SeriesDiagnostics s = carleman_sum(t, CarlemanVariant::StrongStieltjes);
        const double p = fit_decay(s.ln_terms, 20, 60).exponent;
        line.detail << "d=" << num(d) << " p=" << num(p) << " (want " << num(1 + d / 2) << "), ";
        line.require(std::fabs(p - (1 + d / 2)) <= 0.1, spec.key() + " exponent");
    }
    line.detail << "max golden deviation " << num(worst_golden) << " (tol 1e-6)";
}

void classification_lognormal(Line& line)
{
    int n = 0;
    for (double c : kCs)
        for (double d : kDs)
            for (const DistributionSpec& spec :
                 {DistributionSpec{LognormalStieltjes{c, d}, {}}, DistributionSpec{LognormalHamburger{c, d}, {}}}) {
                const Classification cl = classify(spec).classification;
                line.require(cl == Classification::Indeterminate, spec.key() + " -> " + to_string(cl));
                ++n;
            }
    line.detail << n << " grid points, all indeterminate";
}

void classification_family9(Line& line, double d, Classification want)
{
    const CriterionReport r = classify({ExpPowerFamily9{d}, {}});
    line.detail << "family9 d=" << num(d) << " -> " << to_string(r.classification) << ", expected "
                << to_string(want) << "; krein " << to_string(r.krein.kind);
    if (r.krein.finite())
        line.detail << " " << num(r.krein.value);
    if (r.carleman_strong)
        line.detail << ", strong Carleman " << to_string(r.carleman_strong->verdict);
    line.require(r.classification == want, "classification");
}

void symmetrization(Line& line)
{
    double route = 0.0;
    double idem = 0.0;
    double fixed = 0.0;
    double gap_err = 0.0;
    double bound_slack = INFINITY;
    for (double c : kCs)
        for (double d : kDs) {
            const Density w = realize({LognormalStieltjes{c, d}, {}});
            const MomentTable base = moment_table(w, -6, 6);
            const Density once = symmetrize(w);
            const MomentTable avg = symmetrized_moments(base);
            const MomentTable direct = moment_table(once, -6, 6);
            const MomentTable twice = moment_table(symmetrize(once), -6, 6);
            for (int n = -6; n <= 6; ++n) {
                route = std::max(route, relative_difference(direct.at(n).value, avg.at(n).value));
                idem = std::max(idem, relative_difference(twice.at(n).value, direct.at(n).value));
            }
            if (c == 1.0)
                for (int n = -6; n <= 6; ++n)
                    fixed = std::max(fixed, relative_difference(direct.at(n).value, base.at(n).value));

            const Density h = realize({LognormalHamburger{c, d}, {}});
            const Remark51Comparison r = remark51_compare(h);
            line.require(r.gap.has_value(), "gap missing");
            if (r.gap)
                gap_err = std::max(gap_err, std::fabs(*r.gap - pi * std::log(2.0)));
            const ExtendedValue k = krein_hamburger(h);
            line.require(k.finite() && r.lhs.finite(), "Krein not finite");
            if (k.finite() && r.lhs.finite())
                bound_slack = std::min(bound_slack, r.lhs.value - (k.value - pi * std::log(2.0)));
        }
    line.require(route <= 1e-8, "two routes");
    line.require(idem <= 1e-8, "idempotence");
    line.require(fixed <= 1e-8, "fixed point");
    line.require(gap_err <= 1e-3, "gap");
    line.require(bound_slack >= 0.0, "lower bound");
    line.detail << "two-route " << num(route) << ", idempotence " << num(idem) << ", fixed point " << num(fixed)
                << " (tol 1e-8); |gap - pi ln 2| " << num(gap_err) << " (tol 1e-3); min bound slack "
                << num(bound_slack);
}

void property_suites(Line& line)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> cd(-2.0, 3.0);
    std::uniform_real_distribution<double> dd(0.2, 4.0);
    const auto grid = log_spaced_grid(1e-2, 1e2, 41);
    int checks = 0;
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        ++checks;
        if (!ok)
            ++failures;
        line.require(ok, what);
    };
    for (int i = 0; i < 12; ++i) {
        const double c = cd(rng);
        const double d = dd(rng);
        const DistributionSpec spec = i % 2 == 0 ? DistributionSpec{LognormalStieltjes{c, d}, {}}
                                                 : DistributionSpec{LognormalHamburger{c, d}, {}};
        const Density w = realize(spec);
        // involution
        const Density twice = invert_pushforward(invert_pushforward(w));
        double worst = 0.0;
        for (double u : grid)
            worst = std::max(worst, std::fabs(twice.log_density(u) - w.log_density(u)) /
                                        std::max(1.0, std::fabs(w.log_density(u))));
        check(worst <= 1e-12, spec.key() + " involution");
        // mass conservation
        const Density s = symmetrize(w);
        check(relative_difference(moment(s, 0), moment(w, 0)) < 1e-9, spec.key() + " mass");
        // reflection for the symmetrized density
        const MomentTable t = moment_table(s, -6, 6);
        for (int n = 1; n <= 6; ++n) {
            if (t.at(n).value.is_zero()) {
                check(t.at(-n).value.is_zero(), spec.key() + " zero reflection");
                continue;
            }
            check(relative_difference(t.at(n).value, t.at(-n).value) < 1e-8,
                  spec.key() + " reflection n=" + std::to_string(n));
        }
    }
    for (double d : {0.0, 0.5, 1.0}) {
        const MomentTable t = moment_table({ExpPowerFamily9{d}, {}}, -8, 10);
        for (int n = 1; n <= 8; ++n)
            check(relative_difference(t.at(-n).value, t.at(n - 2).value) < 1e-8,
                  "family9 d=" + num(d) + " n=" + std::to_string(n));
    }
    line.detail << checks << " checks, " << failures << " failures";
}

}  // namespace

int main()
{
    const GoldenFile golden = GoldenFile::load(SMP_GOLDEN_PATH);

    report("closed form vs quadrature", closed_form_vs_quadrature);
    report("Krein Hamburger analytic value", [](Line& l) {
        krein_value(l, {LognormalHamburger{1, 1}, {}}, pi * std::log(1 / (2 * std::sqrt(pi))) - pi * pi * pi / 4);
    });
    report("Krein Stieltjes analytic value", [](Line& l) {
        krein_value(l, {LognormalStieltjes{1, 1}, {}}, -(pi * std::log(pi)) / 4 - pi * pi * pi / 2);
    });
    report("witness suite", witness_suite);
    report("Carleman geometric tail", carleman_geometric);
    report("family9 Carleman exponent", [&](Line& l) { family9_exponent(l, golden); });
    report("classification: lognormal grid", classification_lognormal);
    report("classification: family9 d=0", [](Line& l) { classification_family9(l, 0.0, Classification::Determinate); });
    for (double d : {0.5, 1.0})
        report("classification: family9 d=" + num(d), [d](Line& l) {
            // Krein is finite here, which makes the answer Indeterminate
            l.known_conflict = true;
            classification_family9(l, d, Classification::Unknown);
        });
    report("symmetrization", symmetrization);
    report("property suites", property_suites);

    std::printf("%d unexpected failure(s)\n", g_failed);
    return g_failed == 0 ? 0 : 1;
}
