#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "smp/json_io.hpp"

using nlohmann::json;

namespace {

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "smp");
    std::ostringstream out;
    std::ostringstream err;
    const int code = smp::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args)
{
    const Result r = run(std::move(args));
    REQUIRE_MESSAGE(r.code == 0, r.err);
    return json::parse(r.out);
}

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "smp_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_file(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream f(p);
    f << text;
}

const double* entry_value(const json& table, int n)
{
    for (const json& e : table["entries"])
        if (e["n"] == n && e.contains("value"))
            return e["value"].get_ptr<const double*>();
    return nullptr;
}

}  // namespace

TEST_CASE("moments command")
{
    const json j = run_json({"moments", "--spec", "lognormal-s", "--c", "1", "--d", "1", "--n-range", "-4:4"});
    CHECK(j["entries"].size() == 9);
    REQUIRE(entry_value(j, 4) != nullptr);
    CHECK(*entry_value(j, 4) == doctest::Approx(54.598).epsilon(1e-4));
    CHECK(j["entries"][8]["method"] == "closed_form");
    CHECK(smp::spec_from_json(j["spec"]) == smp::DistributionSpec{smp::LognormalStieltjes{1, 1}, {}});
}

TEST_CASE("closed form and quadrature tables agree through the CLI")
{
    for (const char* family : {"lognormal-s", "lognormal-h"}) {
        const json cf = run_json({"moments", "--spec", family, "--c", "2", "--d", "0.25", "--n-range", "-6:6",
                                  "--method", "closed-form"});
        const json q = run_json({"moments", "--spec", family, "--c", "2", "--d", "0.25", "--n-range", "-6:6",
                                 "--method", "quadrature"});
        for (std::size_t i = 0; i < cf["entries"].size(); ++i) {
            const json& a = cf["entries"][i];
            const json& b = q["entries"][i];
            CHECK(b["method"] == "quadrature");
            CHECK(a["sign"] == b["sign"]);
            if (a["ln_mag"].is_null())
                continue;
            const double la = a["ln_mag"];
            const double lb = b["ln_mag"];
            CHECK(std::fabs(la - lb) <= 1e-8 * std::max(1.0, std::fabs(la)));
        }
    }
}

TEST_CASE("csv output")
{
    const Result r = run({"moments", "--spec", "lognormal-s", "--n-range", "0:2", "--output", "csv"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "n,sign,ln_mag,value,method,err_est");
    int rows = 0;
    for (std::string line; std::getline(lines, line);)
        ++rows;
    CHECK(rows == 3);
}

TEST_CASE("usage errors exit 1")
{
    CHECK(run({"moments", "--spec", "lognormal-s", "--n-range", "4:-4"}).code == 1);
    CHECK(run({"moments", "--spec", "lognormal-s", "--n-range", "a:b"}).code == 1);
    CHECK(run({"moments", "--n-range", "0:2"}).code == 1);
    CHECK(run({"moments", "--spec", "lognormal-s", "--d", "-1"}).code == 1);
    CHECK(run({"moments", "--spec", "family9", "--c", "1"}).code == 1);
    CHECK(run({"moments", "--spec", "{not json"}).code == 1);
    CHECK(run({"moments", "--spec", "family9", "--method", "closed-form"}).code == 1);
    CHECK(run({"moments", "--spec", "lognormal-s", "--method", "magic"}).code == 1);
    CHECK(run({"moments", "--spec", "lognormal-s", "--rel-tol", "0"}).code == 1);
    CHECK(run({"witness", "--s", "1.5"}).code == 1);
    CHECK(run({"witness", "--k", "0"}).code == 1);
    CHECK(run({"symmetrize", "--spec", "lognormal-s", "--n-range", "-2:3"}).code == 1);
    CHECK(run({"symmetrize", "--spec", "lognormal-s", "--remark51"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
}

TEST_CASE("help exits 0")
{
    const Result r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("classify") != std::string::npos);
}

TEST_CASE("classify command")
{
    CHECK(run_json({"classify", "--spec", "lognormal-s", "--c", "1", "--d", "0.25"})["classification"] ==
          "indeterminate");
    const json d0 = run_json({"classify", "--spec", "family9", "--d", "0"});
    CHECK(d0["classification"] == "determinate");
    CHECK(d0["krein"]["kind"] == "minus_infinity");
    CHECK(d0["carleman_strong"]["verdict"] == "diverges_likely");
    // finite Krein integral for d > 0
    const json d1 = run_json({"classify", "--spec", "family9", "--d", "1"});
    CHECK(d1["krein"]["finite"] == true);
    CHECK(d1["classification"] == "indeterminate");
    const json h = run_json({"classify", "--spec", "lognormal-h", "--c", "1", "--d", "1"});
    CHECK(h["krein"]["value"].get<double>() == doctest::Approx(-11.7273).epsilon(1e-4));
    CHECK(h["berg"].is_null());
}

TEST_CASE("seed families and modifiers")
{
    const json u = run_json({"classify", "--spec", "uniform", "--param", "a=-1", "--param", "b=1"});
    CHECK(u["krein"]["kind"] == "minus_infinity");
    const json e = run_json({"moments", "--spec", "exp-tail", "--param", "rate=1", "--param", "lower=1",
                             "--modifier", "symmetric-extension", "--n-range", "-3:3"});
    CHECK(e["spec"]["modifiers"][0]["type"] == "symmetric-extension");
    const double a = e["entries"][0]["ln_mag"];
    const double b = e["entries"][6]["ln_mag"];
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
    CHECK(run({"moments", "--spec", "uniform", "--param", "a"}).code == 1);
    CHECK(run({"moments", "--spec", "lognormal-s", "--modifier", "twist"}).code == 1);
}

TEST_CASE("spec from inline JSON and from a file")
{
    const std::string text =
        R"({"family": "lognormal-s", "params": {"c": 1, "d": 1}, "modifiers": [{"type": "sin-perturbation", "s": 0.5, "k": 1}]})";
    const json inline_j = run_json({"moments", "--spec", text, "--n-range", "-2:2"});
    const auto path = scratch("spec.json");
    write_file(path, text);
    const json file_j = run_json({"moments", "--spec", path.string(), "--n-range", "-2:2"});
    CHECK(inline_j == file_j);
    CHECK(inline_j["spec"]["modifiers"][0]["s"] == 0.5);
    // JSON output round-trips through the spec parser
    CHECK(smp::spec_from_json(inline_j["spec"]) == smp::spec_from_json(json::parse(text)));
}

TEST_CASE("config file, overridden by flags")
{
    const auto path = scratch("smp.ini");
    write_file(path, "spec = lognormal-s\nc = 1\nd = 0.25\nn-range = 0:2\n");
    const json j = run_json({"moments", "--config", path.string()});
    CHECK(j["entries"].size() == 3);
    CHECK(j["spec"]["params"]["d"] == 0.25);
    const json over = run_json({"moments", "--config", path.string(), "--d", "1"});
    CHECK(over["spec"]["params"]["d"] == 1.0);
}

TEST_CASE("symmetrize command")
{
    const json same = run_json({"symmetrize", "--spec", "lognormal-s", "--c", "1", "--d", "1"});
    CHECK(same["symmetry"]["symmetric"] == true);
    CHECK(same["unchanged"] == true);

    const json j = run_json({"symmetrize", "--spec", "lognormal-s", "--c", "2", "--d", "1", "--n-max", "4"});
    CHECK(j["unchanged"] == false);
    CHECK(j["route_max_deviation"].get<double>() < 1e-8);
    const json& base = j["moments"];
    const json& avg = j["symmetrized_moments"];
    for (int n = -4; n <= 4; ++n) {
        const double want = 0.5 * (*entry_value(base, n) + *entry_value(base, -n));
        CHECK(*entry_value(avg, n) == doctest::Approx(want).epsilon(1e-12));
    }

    const json r = run_json({"symmetrize", "--spec", "lognormal-h", "--c", "2", "--d", "1", "--remark51"});
    CHECK(r["remark51"]["gap"].get<double>() == doctest::Approx(2.1776).epsilon(1e-4));
    CHECK(r["remark51"]["lhs"]["value"].get<double>() <= r["remark51"]["rhs"]["value"].get<double>());
}

TEST_CASE("witness command")
{
    const json j = run_json({"witness", "--d", "1", "--s", "1", "--k", "1", "--n-max", "8"});
    CHECK(j["passed"] == true);
    CHECK(j["deviations"].size() == 17);
    const Result zero = run({"witness", "--d", "1", "--s", "0"});
    CHECK(zero.code == 2);
    CHECK(json::parse(zero.out)["passed"] == false);
    CHECK(run({"witness", "--spec", "lognormal-s"}).code == 1);
}

TEST_CASE("golden comparison")
{
    const std::string golden = SMP_GOLDEN_PATH;
    const Result ok = run({"moments", "--spec", "lognormal-s", "--c", "1", "--d", "0.25", "--n-range", "-8:8",
                           "--method", "quadrature", "--golden", golden});
    CHECK(ok.code == 0);
    CHECK(ok.err.find("17 checked") != std::string::npos);
    CHECK(run({"classify", "--spec", "family9", "--d", "0.5", "--golden", golden}).code == 0);
    CHECK(run({"witness", "--d", "0.25", "--s", "-0.5", "--k", "2", "--golden", golden}).code == 0);
    CHECK(run({"symmetrize", "--spec", "lognormal-h", "--c", "0", "--d", "4", "--remark51", "--golden", golden})
              .code == 0);

    // a tampered entry is caught
    const auto path = scratch("tampered.json");
    write_file(path, R"([{"key": "moment/lognormal-s/c=1/d=1/n=2", "sign": 1, "value_ln_mag": "2.2501", "tol_rel": 1e-8}])");
    const Result bad = run({"moments", "--spec", "lognormal-s", "--n-range", "0:2", "--golden", path.string()});
    CHECK(bad.code == 3);
    CHECK(bad.err.find("golden mismatch moment/lognormal-s/c=1/d=1/n=2") != std::string::npos);

    CHECK(run({"moments", "--spec", "lognormal-s", "--golden", "/nonexistent.json"}).code == 1);
}

TEST_CASE("determinism")
{
    const std::vector<std::string> args = {"classify", "--spec", "family9", "--d", "0.5"};
    CHECK(run(args).out == run(args).out);
}
