#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "smp/criteria.hpp"
#include "smp/golden.hpp"
#include "smp/json_io.hpp"
#include "smp/moments.hpp"
#include "smp/symmetry.hpp"
#include "smp/witness.hpp"

namespace smp::cli {

namespace {

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct Options
{
    std::string spec;
    std::optional<double> c;
    std::optional<double> d;
    std::optional<double> s;
    std::optional<int> k;
    std::vector<std::string> params;
    std::vector<std::string> modifiers;
    std::string n_range;
    std::optional<int> n_max;
    std::string method = "auto";
    std::optional<double> rel_tol;
    std::string output = "json";
    std::string golden;
    bool remark51 = false;
};

using Emitted = std::vector<std::pair<std::string, LogReal>>;

std::pair<int, int> parse_range(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw UsageError("--n-range expects A:B, got '" + text + "'");
    try {
        std::size_t used_a = 0;
        std::size_t used_b = 0;
        const std::string a_text = text.substr(0, colon);
        const std::string b_text = text.substr(colon + 1);
        const int a = std::stoi(a_text, &used_a);
        const int b = std::stoi(b_text, &used_b);
        if (used_a != a_text.size() || used_b != b_text.size())
            throw std::invalid_argument("trailing characters");
        if (a > b)
            throw UsageError("--n-range: start exceeds end in '" + text + "'");
        return {a, b};
    } catch (const std::logic_error&) {
        throw UsageError("--n-range expects integers A:B, got '" + text + "'");
    }
}

std::pair<int, int> moment_range(const Options& o, int default_n)
{
    if (!o.n_range.empty()) {
        if (o.n_max)
            throw UsageError("--n-range and --n-max are exclusive");
        return parse_range(o.n_range);
    }
    const int n = o.n_max.value_or(default_n);
    if (n < 0)
        throw UsageError("--n-max must be nonnegative");
    return {-n, n};
}

Json parse_json_text(const std::string& text, const std::string& origin)
{
    try {
        return Json::parse(text);
    } catch (const Json::exception& ex) {
        throw UsageError("cannot parse spec JSON from " + origin + ": " + ex.what());
    }
}

DistributionSpec build_spec(const Options& o)
{
    if (o.spec.empty())
        throw UsageError("--spec is required");
    DistributionSpec spec;
    const bool named = o.spec.front() != '{' && !std::filesystem::is_regular_file(o.spec);
    if (!named) {
        if (o.c || o.d || !o.params.empty())
            throw UsageError("--c, --d and --param apply to named families only");
        Json j;
        if (o.spec.front() == '{') {
            j = parse_json_text(o.spec, "--spec");
        } else {
            std::ifstream in(o.spec);
            std::ostringstream text;
            text << in.rdbuf();
            j = parse_json_text(text.str(), o.spec);
        }
        spec = spec_from_json(j);
    } else if (o.spec == "lognormal-s") {
        spec.family = LognormalStieltjes{o.c.value_or(1.0), o.d.value_or(1.0)};
    } else if (o.spec == "lognormal-h") {
        spec.family = LognormalHamburger{o.c.value_or(1.0), o.d.value_or(1.0)};
    } else if (o.spec == "family9") {
        if (o.c)
            throw UsageError("family9 has no parameter c");
        spec.family = ExpPowerFamily9{o.d.value_or(1.0)};
    } else {
        if (o.c || o.d)
            throw UsageError("seed families take --param name=value");
        ClassicalSeed seed{o.spec, {}};
        for (const std::string& p : o.params) {
            const auto eq = p.find('=');
            if (eq == std::string::npos)
                throw UsageError("--param expects name=value, got '" + p + "'");
            try {
                seed.params[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
            } catch (const std::logic_error&) {
                throw UsageError("--param value is not a number in '" + p + "'");
            }
        }
        spec.family = seed;
    }
    for (const std::string& m : o.modifiers) {
        if (m == "symmetrized")
            spec.modifiers.push_back(Symmetrized{});
        else if (m == "symmetric-extension")
            spec.modifiers.push_back(SymmetricExtension{});
        else
            throw UsageError("unknown --modifier '" + m + "'");
    }
    if (o.s || o.k)
        spec.modifiers.push_back(SinPerturbation{o.s.value_or(0.0), o.k.value_or(1)});
    spec.validate();
    return spec;
}

MethodChoice method_choice(const std::string& m)
{
    if (m == "auto")
        return MethodChoice::Auto;
    if (m == "closed-form")
        return MethodChoice::ClosedForm;
    return MethodChoice::Quadrature;
}

quad::QuadratureConfig quad_config(const Options& o)
{
    quad::QuadratureConfig cfg;
    if (o.rel_tol)
        cfg.rel_tol = *o.rel_tol;
    cfg.validate();
    return cfg;
}

CriteriaConfig criteria_config(const Options& o)
{
    CriteriaConfig cfg;
    cfg.quad = quad_config(o);
    cfg.validate();
    return cfg;
}

void emit_table(const MomentTable& table, Emitted& emitted)
{
    if (!table.spec)
        return;
    for (const MomentEntry& e : table.entries)
        if (e.ok())
            emitted.emplace_back("moment/" + table.spec->key() + "/n=" + std::to_string(e.n), e.value);
}

std::string csv_number(double x)
{
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

void write_csv(const MomentTable& table, std::ostream& out)
{
    out << "n,sign,ln_mag,value,method,err_est\n";
    for (const MomentEntry& e : table.entries) {
        out << e.n << ',';
        if (e.ok()) {
            out << e.value.sign() << ',';
            if (!e.value.is_zero())
                out << csv_number(e.value.ln_mag());
            out << ',';
            if (const auto v = e.value.representable())
                out << csv_number(*v);
        } else {
            out << ",,";
        }
        out << ',' << to_string(e.method) << ',' << csv_number(e.err_est) << '\n';
    }
}

bool table_failed(const MomentTable& table, std::ostream& err)
{
    bool failed = false;
    for (const MomentEntry& e : table.entries) {
        if (!e.ok()) {
            err << "moment n=" << e.n << " failed: " << *e.error << '\n';
            failed = true;
        }
    }
    return failed;
}

LogReal signed_value(double x)
{
    return LogReal::from_double(x);
}

int cmd_moments(const Options& o, std::ostream& out, std::ostream& err, Emitted& emitted)
{
    const DistributionSpec spec = build_spec(o);
    const auto [lo, hi] = moment_range(o, 8);
    const MomentTable table = moment_table(spec, lo, hi, method_choice(o.method), quad_config(o));
    if (o.output == "csv")
        write_csv(table, out);
    else
        out << to_json(table).dump(2) << '\n';
    emit_table(table, emitted);
    return table_failed(table, err) ? kNumerical : kOk;
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream&, Emitted& emitted)
{
    const DistributionSpec spec = build_spec(o);
    const CriterionReport report = classify(spec, criteria_config(o));
    out << to_json(report).dump(2) << '\n';
    const std::string key = spec.key();
    const bool hamburger = spec.domain() == Domain::RealLine;
    if (report.krein.finite())
        emitted.emplace_back((hamburger ? "krein-h/" : "krein-s/") + key,
                             signed_value(report.krein.value));
    if (report.berg && report.berg->finite())
        emitted.emplace_back("berg/" + key, signed_value(report.berg->value));
    for (const auto& series : {report.carleman_strong, report.carleman_classical}) {
        if (!series || series->ln_partial_sums.empty())
            continue;
        std::string variant = to_string(series->variant);
        std::replace(variant.begin(), variant.end(), '_', '-');
        emitted.emplace_back("carleman-" + variant + "/" + key + "/N=" +
                                 std::to_string(series->n_max),
                             LogReal::from_log(series->ln_partial_sums.back()));
    }
    return kOk;
}

int cmd_symmetrize(const Options& o, std::ostream& out, std::ostream& err, Emitted& emitted)
{
    const DistributionSpec spec = build_spec(o);
    const auto [lo, hi] = moment_range(o, 6);
    if (lo != -hi)
        throw UsageError("symmetrize needs a range symmetric about 0");
    const quad::QuadratureConfig qcfg = quad_config(o);
    const Density w = realize(spec);
    const std::vector<double> grid = log_spaced_grid(1e-3, 1e3, 101);
    const SymmetryCheck check = is_symmetric(w, grid, 1e-10);

    const MomentTable base = moment_table(spec, lo, hi, method_choice(o.method), qcfg);
    bool failed = table_failed(base, err);
    const MomentTable averaged = symmetrized_moments(base);
    DistributionSpec sym_spec = spec;
    sym_spec.modifiers.push_back(Symmetrized{});
    const MomentTable direct = moment_table(sym_spec, lo, hi, MethodChoice::Quadrature, qcfg);
    failed = table_failed(direct, err) || failed;

    double route_dev = 0.0;
    double fixed_dev = 0.0;
    for (int n = lo; n <= hi; ++n) {
        const MomentEntry& a = averaged.at(n);
        const MomentEntry& b = direct.at(n);
        const MomentEntry& m = base.at(n);
        if (a.ok() && b.ok() && !(a.value.is_zero() && b.value.is_zero()))
            route_dev = std::max(route_dev, relative_difference(b.value, a.value));
        if (a.ok() && m.ok() && !(a.value.is_zero() && m.value.is_zero()))
            fixed_dev = std::max(fixed_dev, relative_difference(a.value, m.value));
    }

    Json j = Json::object();
    j["spec"] = to_json(spec);
    j["symmetry"] = to_json(check);
    j["moments"] = to_json(base);
    j["symmetrized_moments"] = to_json(averaged);
    j["symmetrized_spec_moments"] = to_json(direct);
    j["route_max_deviation"] = route_dev;
    j["fixed_point_max_deviation"] = fixed_dev;
    j["unchanged"] = check.symmetric && fixed_dev < 1e-8;
    emit_table(base, emitted);
    emit_table(averaged, emitted);

    if (o.remark51) {
        if (w.domain() != Domain::RealLine)
            throw UsageError("--remark51 needs a real-line spec");
        const Remark51Comparison cmp = remark51_compare(w, criteria_config(o));
        j["remark51"] = to_json(cmp);
        if (cmp.gap)
            emitted.emplace_back("remark51-gap/" + spec.key(), signed_value(*cmp.gap));
        else
            failed = true;
    }
    if (o.output == "csv")
        write_csv(averaged, out);
    else
        out << j.dump(2) << '\n';
    return failed ? kNumerical : kOk;
}

int cmd_witness(const Options& o, std::ostream& out, std::ostream& err, Emitted& emitted)
{
    if (!o.spec.empty())
        throw UsageError("witness builds its own spec from --d, --s and --k");
    const double d = o.d.value_or(1.0);
    const double s = o.s.value_or(1.0);
    const int k = o.k.value_or(1);
    const auto [lo, hi] = moment_range(o, 8);
    DistributionSpec spec;
    try {
        spec = lognormal_witness_spec(d, s, k);
    } catch (const std::invalid_argument& ex) {
        throw UsageError(ex.what());
    }
    const Density beta = realize(spec);
    const Density sigma = realize({LognormalStieltjes{1.0, d}, {}});
    WitnessReport report = verify_same_moments(beta, sigma, lo, hi, quad_config(o));
    report.spec = spec;
    report.s = s;
    report.k = k;
    out << to_json(report).dump(2) << '\n';
    for (const auto& [n, mu] : report.moments)
        emitted.emplace_back("moment/" + spec.key() + "/n=" + std::to_string(n), mu);
    if (!report.passed) {
        err << "witness not verified: max deviation " << report.max_deviation << ", distinctness "
            << report.distinctness << '\n';
        return kNumerical;
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Strong moment problems: moments, determinacy criteria, symmetrization and "
                 "indeterminacy witnesses",
                 "smp"};
    app.set_config("--config", "", "key = value file; flags override it");
    app.require_subcommand(1);

    Options o;
    app.add_option("--spec", o.spec,
                   "family name (lognormal-s, lognormal-h, family9, uniform, exp-tail), inline "
                   "JSON or a JSON file");
    app.add_option("--c", o.c, "log-normal exponent c");
    app.add_option("--d", o.d, "family parameter d");
    app.add_option("--s", o.s, "perturbation amplitude, |s| <= 1");
    app.add_option("--k", o.k, "perturbation frequency multiple, k >= 1");
    app.add_option("--param", o.params, "seed parameter name=value");
    app.add_option("--modifier", o.modifiers, "symmetrized or symmetric-extension, in order");
    app.add_option("--n-range", o.n_range, "moment orders A:B");
    app.add_option("--n-max", o.n_max, "moment orders -N:N");
    app.add_option("--method", o.method, "auto, closed-form or quadrature")
        ->check(CLI::IsMember({"auto", "closed-form", "quadrature"}));
    app.add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
    app.add_option("--output", o.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--golden", o.golden, "compare emitted values with a golden file");
    app.add_flag("--remark51", o.remark51, "symmetrize: compare the two Krein integrals");

    auto* moments = app.add_subcommand("moments", "moment table for n in a range");
    auto* classify_cmd = app.add_subcommand("classify", "Carleman, Krein and Berg report");
    auto* symmetrize_cmd = app.add_subcommand("symmetrize", "symmetrized moments and checks");
    auto* witness = app.add_subcommand("witness", "log-normal indeterminacy witness");
    for (auto* sub : {moments, classify_cmd, symmetrize_cmd, witness})
        sub->fallthrough();

    std::vector<const char*> argv;
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    Emitted emitted;
    int code = kOk;
    try {
        if (moments->parsed())
            code = cmd_moments(o, out, err, emitted);
        else if (classify_cmd->parsed())
            code = cmd_classify(o, out, err, emitted);
        else if (symmetrize_cmd->parsed())
            code = cmd_symmetrize(o, out, err, emitted);
        else
            code = cmd_witness(o, out, err, emitted);
    } catch (const UsageError& ex) {
        err << "error: " << ex.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << '\n';
        return kUsage;
    } catch (const std::exception& ex) {
        err << "numerical failure: " << ex.what() << '\n';
        return kNumerical;
    }

    if (!o.golden.empty()) {
        GoldenFile golden;
        try {
            golden = GoldenFile::load(o.golden);
        } catch (const std::exception& ex) {
            err << "error: " << ex.what() << '\n';
            return kUsage;
        }
        const GoldenComparison cmp = compare_golden(golden, emitted);
        err << "golden: " << cmp.checked << " checked, " << cmp.unmatched << " without entry, "
            << cmp.mismatches.size() << " mismatched\n";
        for (const GoldenMismatch& m : cmp.mismatches)
            err << "golden mismatch " << m.key << ": expected " << m.expected << ", got "
                << m.actual << " (deviation " << m.deviation << " > " << m.tol_rel << ")\n";
        if (!cmp.ok())
            return kGoldenMismatch;
    }
    return code;
}

}  // namespace smp::cli
