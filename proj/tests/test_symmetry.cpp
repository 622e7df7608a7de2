#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "smp/moments.hpp"
#include "smp/spec.hpp"
#include "smp/symmetry.hpp"

using namespace smp;
using std::numbers::pi;

namespace {

const double kCs[] = {0.0, 1.0, 2.0};
const double kDs[] = {0.25, 1.0, 4.0};

Density exp_tail()
{
    return realize({ClassicalSeed{"exp-tail", {{"rate", 1.0}, {"lower", 1.0}}}, {}});
}

}  // namespace

TEST_CASE("symmetrize leaves a symmetric density alone")
{
    for (double d : kDs) {
        const Density w = realize({LognormalStieltjes{1, d}, {}});
        const Density s = symmetrize(w);
        for (double u : log_spaced_grid(1e-3, 1e3, 61))
            CHECK(s.log_density(u) == doctest::Approx(w.log_density(u)).epsilon(1e-13));
        const Density h = realize({LognormalHamburger{1, d}, {}});
        const Density hs = symmetrize(h);
        for (double u : log_spaced_grid(1e-3, 1e3, 61))
            CHECK(hs.log_density(-u) == doctest::Approx(h.log_density(-u)).epsilon(1e-13));
    }
}

TEST_CASE("symmetrize pointwise at u = 2")
{
    // c = 2, d = 1: w(u) = exp(-ln^2 u) / (sqrt(pi) u^2)
    const Density w = realize({LognormalStieltjes{2, 1}, {}});
    const Density s = symmetrize(w);
    const double l = std::log(2.0);
    const double w2 = std::exp(-l * l) / (std::sqrt(pi) * 4.0);
    const double w_half = std::exp(-l * l) * 4.0 / std::sqrt(pi);
    CHECK(std::exp(s.log_density(2.0)) == doctest::Approx(0.5 * (w2 + w_half / 4.0)).epsilon(1e-13));
    CHECK(is_symmetric(s, log_spaced_grid(1e-3, 1e3, 100), 1e-12).symmetric);
}

TEST_CASE("moments of the symmetrized density")
{
    const Density w = realize({LognormalStieltjes{2, 1}, {}});
    const MomentTable base = moment_table(w, -6, 6);
    const MomentTable sym = moment_table(symmetrize(w), -6, 6);
    for (int n = -6; n <= 6; ++n) {
        CAPTURE(n);
        const LogReal want = (base.at(n).value + base.at(-n).value) * LogReal::from_double(0.5);
        CHECK(relative_difference(sym.at(n).value, want) < 1e-8);
        CHECK(relative_difference(sym.at(n).value, symmetrized_moments(base).at(n).value) < 1e-8);
    }
}

TEST_CASE("symmetrize splits point masses")
{
    const Density pm = Density::point_masses_only(Domain::PositiveHalfLine, {{2.0, 0.5}, {1.0, 0.2}});
    const Density s = symmetrize(pm);
    double total = 0.0;
    for (const PointMass& p : s.point_masses()) {
        total += p.mass;
        if (p.location == doctest::Approx(0.5) || p.location == doctest::Approx(2.0))
            CHECK(p.mass == doctest::Approx(0.25));
        else
            CHECK(p.mass == doctest::Approx(0.2));
    }
    CHECK(total == doctest::Approx(0.7));
    CHECK(s.point_masses().size() == 3);
}

TEST_CASE("strong_from_classical")
{
    const Density ext = strong_from_classical(exp_tail());
    CHECK(relative_difference(moment(ext, 3), moment(ext, -3)) < 1e-8);
    CHECK(relative_difference(moment(ext, 0), LogReal::from_double(2.0 / std::exp(1.0))) < 1e-9);
    CHECK(is_symmetric(ext, log_spaced_grid(1e-3, 1e3, 100), 1e-12).symmetric);
    // family9 tail on [1, inf) has every nonnegative moment
    CHECK_NOTHROW(strong_from_classical(restrict_to_unit_tail(realize({ExpPowerFamily9{1}, {}}))));
    // support below 1 is refused
    CHECK_THROWS_AS(strong_from_classical(realize({LognormalStieltjes{1, 1}, {}})), std::invalid_argument);
}

TEST_CASE("strong_from_classical refuses a seed without higher moments")
{
    // x^-3 on [1, inf): mu_2 diverges
    const Density heavy = Density::from_u(
        Domain::PositiveHalfLine, [](double x) { return x >= 1.0 ? -3.0 * std::log(x) : -INFINITY; }, {},
        "power", {1.0});
    CHECK_THROWS(strong_from_classical(heavy));
}

TEST_CASE("remark51 gap")
{
    const Remark51Comparison r = remark51_compare(realize({LognormalHamburger{2, 1}, {}}));
    REQUIRE(r.gap.has_value());
    CHECK(std::fabs(*r.gap - pi * std::log(2.0)) < 1e-3);
    CHECK(std::fabs(*r.gap - 2.17759) < 1e-3);
    CHECK(r.lhs.value <= r.rhs.value);
    CHECK_THROWS_AS(remark51_compare(realize({LognormalStieltjes{1, 1}, {}})), std::invalid_argument);

    // uniform on [-1, 1]: -inf itself, but the symmetrized density lives on
    // all of the line and both sides are finite
    const Density uni = realize({ClassicalSeed{"uniform", {{"a", -1.0}, {"b", 1.0}}}, {}});
    CHECK(krein_hamburger(uni).kind == ExtendedValue::Kind::MinusInfinity);
    const Remark51Comparison u = remark51_compare(uni);
    REQUIRE(u.gap.has_value());
    CHECK(std::fabs(*u.gap - pi * std::log(2.0)) < 1e-3);
}

TEST_CASE("remark51 on the grid")
{
    for (double c : kCs)
        for (double d : kDs) {
            const DistributionSpec spec{LognormalHamburger{c, d}, {}};
            CAPTURE(spec.key());
            const Density w = realize(spec);
            const Remark51Comparison r = remark51_compare(w);
            REQUIRE(r.gap.has_value());
            CHECK(std::fabs(*r.gap - pi * std::log(2.0)) < 1e-3);
            const GoldenEntry& g = oracle::golden_entry("remark51-gap/" + spec.key());
            CHECK(golden_deviation(g, LogReal::from_double(*r.gap)) <= g.tol_rel);
            CHECK(r.lhs.value <= r.rhs.value);
            // the symmetrized density dominates half the original
            const ExtendedValue k = krein_hamburger(w);
            REQUIRE(k.finite());
            CHECK(r.lhs.value >= k.value - pi * std::log(2.0) - 1e-6);
        }
}

TEST_CASE("property: symmetrize is idempotent")
{
    for (double c : kCs)
        for (double d : kDs) {
            const Density once = symmetrize(realize({LognormalStieltjes{c, d}, {}}));
            const Density twice = symmetrize(once);
            for (double u : log_spaced_grid(1e-3, 1e3, 41))
                CHECK(twice.log_density(u) == doctest::Approx(once.log_density(u)).epsilon(1e-12));
            const MomentTable t1 = moment_table(once, -4, 4);
            const MomentTable t2 = moment_table(twice, -4, 4);
            for (int n = -4; n <= 4; ++n)
                CHECK(relative_difference(t1.at(n).value, t2.at(n).value) < 1e-8);
        }
}

TEST_CASE("property: symmetrize keeps mass and reflects moments")
{
    for (double c : kCs)
        for (double d : kDs)
            for (const DistributionSpec& spec :
                 {DistributionSpec{LognormalStieltjes{c, d}, {}}, DistributionSpec{LognormalHamburger{c, d}, {}}}) {
                CAPTURE(spec.key());
                const Density w = realize(spec);
                const Density s = symmetrize(w);
                CHECK(relative_difference(moment(s, 0), moment(w, 0)) < 1e-9);
                const MomentTable t = moment_table(s, -6, 6);
                for (int n = 1; n <= 6; ++n) {
                    if (t.at(n).value.is_zero()) {
                        CHECK(t.at(-n).value.is_zero());
                        continue;
                    }
                    CHECK(relative_difference(t.at(n).value, t.at(-n).value) < 1e-8);
                }
            }
    for (double d : {0.0, 0.5, 1.0}) {
        const Density w = realize({ExpPowerFamily9{d}, {}});
        CHECK(relative_difference(moment(symmetrize(w), 0), moment(w, 0)) < 1e-9);
    }
}

TEST_CASE("property: extension of the unit tail restores a symmetric density")
{
    for (double d : kDs) {
        const Density w = realize({LognormalStieltjes{1, d}, {}});
        const Density back = symmetric_extension(restrict_to_unit_tail(w));
        for (double u : log_spaced_grid(1e-3, 1e3, 41))
            if (u != 1.0)
                CHECK(back.log_density(u) == doctest::Approx(w.log_density(u)).epsilon(1e-12));
    }
}
