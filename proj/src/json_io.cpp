#include "smp/json_io.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace smp {

namespace {

template<class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template<class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad(const std::string& msg)
{
    throw std::invalid_argument("spec JSON: " + msg);
}

double number(const Json& params, const char* name)
{
    if (!params.contains(name))
        bad(std::string("missing parameter '") + name + "'");
    const Json& v = params.at(name);
    if (!v.is_number())
        bad(std::string("parameter '") + name + "' must be a number");
    return v.get<double>();
}

void only_keys(const Json& obj, std::set<std::string> allowed, const std::string& where)
{
    for (const auto& item : obj.items())
        if (allowed.count(item.key()) == 0)
            bad("unexpected key '" + item.key() + "' in " + where);
}

Modifier modifier_from_json(const Json& m)
{
    std::string type;
    if (m.is_string()) {
        type = m.get<std::string>();
    } else if (m.is_object() && m.contains("type") && m.at("type").is_string()) {
        type = m.at("type").get<std::string>();
    } else {
        bad("modifier must be a string or an object with a 'type'");
    }
    if (type == "sin-perturbation") {
        if (!m.is_object())
            bad("sin-perturbation needs s and k");
        only_keys(m, {"type", "s", "k"}, "sin-perturbation");
        const double k = number(m, "k");
        if (k != std::floor(k) || std::fabs(k) > 1e9)
            bad("sin-perturbation k must be an integer");
        return SinPerturbation{number(m, "s"), static_cast<int>(k)};
    }
    if (m.is_object())
        only_keys(m, {"type"}, type);
    if (type == "symmetrized")
        return Symmetrized{};
    if (type == "symmetric-extension")
        return SymmetricExtension{};
    bad("unknown modifier '" + type + "'");
}

Json modifier_to_json(const Modifier& m)
{
    return std::visit(overloaded{
                          [](const SinPerturbation& p) {
                              return Json{{"type", "sin-perturbation"}, {"s", p.s}, {"k", p.k}};
                          },
                          [](const Symmetrized&) { return Json{{"type", "symmetrized"}}; },
                          [](const SymmetricExtension&) {
                              return Json{{"type", "symmetric-extension"}};
                          },
                      },
                      m);
}

Json finite_or_null(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

}  // namespace

Json to_json(const DistributionSpec& spec)
{
    Json params = Json::object();
    std::visit(overloaded{
                   [&](const LognormalHamburger& f) {
                       params["c"] = f.c;
                       params["d"] = f.d;
                   },
                   [&](const LognormalStieltjes& f) {
                       params["c"] = f.c;
                       params["d"] = f.d;
                   },
                   [&](const ExpPowerFamily9& f) { params["d"] = f.d; },
                   [&](const ClassicalSeed& s) {
                       for (const auto& [k, v] : s.params)
                           params[k] = v;
                   },
               },
               spec.family);
    Json mods = Json::array();
    for (const Modifier& m : spec.modifiers)
        mods.push_back(modifier_to_json(m));
    return Json{{"family", family_name(spec.family)}, {"params", params}, {"modifiers", mods}};
}

DistributionSpec spec_from_json(const Json& j)
{
    if (!j.is_object())
        bad("expected an object");
    only_keys(j, {"family", "params", "modifiers"}, "spec");
    if (!j.contains("family") || !j.at("family").is_string())
        bad("'family' must be a string");
    const std::string name = j.at("family").get<std::string>();
    const Json params = j.value("params", Json::object());
    if (!params.is_object())
        bad("'params' must be an object");

    DistributionSpec spec;
    if (name == "lognormal-h" || name == "lognormal-s") {
        only_keys(params, {"c", "d"}, name);
        const double c = number(params, "c");
        const double d = number(params, "d");
        if (name == "lognormal-h")
            spec.family = LognormalHamburger{c, d};
        else
            spec.family = LognormalStieltjes{c, d};
    } else if (name == "family9") {
        only_keys(params, {"d"}, name);
        spec.family = ExpPowerFamily9{number(params, "d")};
    } else {
        ClassicalSeed seed{name, {}};
        for (const auto& item : params.items())
            seed.params[item.key()] = number(params, item.key().c_str());
        spec.family = seed;
    }
    if (j.contains("modifiers")) {
        const Json& mods = j.at("modifiers");
        if (!mods.is_array())
            bad("'modifiers' must be an array");
        for (const Json& m : mods)
            spec.modifiers.push_back(modifier_from_json(m));
    }
    spec.validate();
    return spec;
}

void put_log_real(Json& j, const LogReal& x)
{
    j["sign"] = x.sign();
    j["ln_mag"] = x.is_zero() ? Json(nullptr) : Json(x.ln_mag());
    if (const auto v = x.representable())
        j["value"] = *v;
}

Json to_json(const MomentEntry& e)
{
    Json j{{"n", e.n}};
    if (e.ok()) {
        put_log_real(j, e.value);
    } else {
        j["sign"] = nullptr;
        j["ln_mag"] = nullptr;
    }
    j["method"] = to_string(e.method);
    j["err_est"] = e.err_est;
    if (e.error)
        j["error"] = *e.error;
    return j;
}

Json to_json(const MomentTable& table)
{
    Json j = Json::object();
    j["spec"] = table.spec ? to_json(*table.spec) : Json(nullptr);
    j["n_min"] = table.n_min;
    j["n_max"] = table.n_max;
    Json entries = Json::array();
    for (const MomentEntry& e : table.entries)
        entries.push_back(to_json(e));
    j["entries"] = entries;
    return j;
}

Json to_json(const ExtendedValue& v)
{
    Json j{{"kind", to_string(v.kind)}, {"finite", v.finite()}};
    j["value"] = v.finite() ? Json(v.value) : Json(nullptr);
    j["err_est"] = v.err_est;
    if (!v.detail.empty())
        j["detail"] = v.detail;
    return j;
}

Json to_json(const SeriesDiagnostics& d)
{
    return Json{{"variant", to_string(d.variant)},
                {"xi", d.xi},
                {"n_max", d.n_max},
                {"partial_sum", finite_or_null(d.partial_sum())},
                {"ln_partial_sum", d.ln_partial_sums.empty() ? Json(nullptr)
                                                             : Json(d.ln_partial_sums.back())},
                {"fitted_exponent", d.fitted_exponent},
                {"fit_ln_constant", d.fit_ln_constant},
                {"geometric", d.geometric},
                {"window_growth", d.window_growth},
                {"verdict", to_string(d.verdict)}};
}

Json to_json(const CriterionReport& report)
{
    Json j = Json::object();
    j["spec"] = report.spec ? to_json(*report.spec) : Json(nullptr);
    j["carleman_classical"] =
        report.carleman_classical ? to_json(*report.carleman_classical) : Json(nullptr);
    j["carleman_strong"] = report.carleman_strong ? to_json(*report.carleman_strong) : Json(nullptr);
    Json krein = to_json(report.krein);
    krein["criterion"] = report.krein_criterion;
    j["krein"] = krein;
    j["berg"] = report.berg ? to_json(*report.berg) : Json(nullptr);
    j["classification"] = to_string(report.classification);
    j["justification"] = report.justification;
    j["diagnostics"] = report.diagnostics;
    return j;
}

Json to_json(const SymmetryCheck& check)
{
    return Json{{"symmetric", check.symmetric},
                {"max_deviation", finite_or_null(check.max_deviation)}};
}

Json to_json(const Remark51Comparison& cmp)
{
    return Json{{"lhs", to_json(cmp.lhs)},
                {"rhs", to_json(cmp.rhs)},
                {"gap", cmp.gap ? Json(*cmp.gap) : Json(nullptr)}};
}

Json to_json(const WitnessReport& report)
{
    Json j = Json::object();
    j["spec"] = report.spec ? to_json(*report.spec) : Json(nullptr);
    j["perturbation"] = Json{{"s", report.s}, {"k", report.k}};
    j["n_min"] = report.n_min;
    j["n_max"] = report.n_max;
    Json rows = Json::array();
    for (const auto& [n, dev] : report.deviations) {
        Json row{{"n", n}};
        put_log_real(row, report.moments.at(n));
        row["deviation"] = dev;
        rows.push_back(row);
    }
    for (const auto& [n, why] : report.failures)
        rows.push_back(Json{{"n", n}, {"error", why}});
    j["deviations"] = rows;
    j["max_deviation"] = finite_or_null(report.max_deviation);
    j["distinctness"] = report.distinctness;
    j["tolerance"] = report.tolerance;
    j["separation_floor"] = report.separation_floor;
    j["passed"] = report.passed;
    return j;
}

}  // namespace smp
