#include "smp/golden.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace smp {

GoldenFile GoldenFile::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open golden file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str());
}

GoldenFile GoldenFile::parse(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw std::runtime_error(std::string("golden file: ") + ex.what());
    }
    if (!j.is_array())
        throw std::runtime_error("golden file: expected a top-level array");
    GoldenFile g;
    for (const auto& e : j) {
        try {
            GoldenEntry entry;
            entry.key = e.at("key").get<std::string>();
            const int sign = e.at("sign").get<int>();
            if (sign == 0) {
                entry.value = LogReal::zero();
            } else {
                const std::string ln = e.at("value_ln_mag").get<std::string>();
                std::size_t used = 0;
                const double v = std::stod(ln, &used);
                if (used != ln.size())
                    throw std::runtime_error("bad value_ln_mag '" + ln + "'");
                entry.value = LogReal::from_log(v, sign);
            }
            entry.tol_rel = e.at("tol_rel").get<double>();
            entry.method = e.value("method", "");
            if (!(entry.tol_rel > 0.0))
                throw std::runtime_error("tol_rel must be positive");
            const std::string key = entry.key;
            if (!g.entries_.emplace(key, std::move(entry)).second)
                throw std::runtime_error("duplicate key");
        } catch (const std::exception& ex) {
            throw std::runtime_error("golden file entry " + e.dump() + ": " + ex.what());
        }
    }
    return g;
}

const GoldenEntry* GoldenFile::find(const std::string& key) const
{
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

double golden_deviation(const GoldenEntry& g, const LogReal& actual)
{
    if (g.value.is_zero())
        return actual.is_zero() ? 0.0 : std::exp(actual.ln_mag());
    return relative_difference(actual, g.value);
}

GoldenComparison compare_golden(const GoldenFile& golden,
                                const std::vector<std::pair<std::string, LogReal>>& emitted)
{
    GoldenComparison out;
    for (const auto& [key, value] : emitted) {
        const GoldenEntry* g = golden.find(key);
        if (g == nullptr) {
            ++out.unmatched;
            continue;
        }
        ++out.checked;
        const double dev = golden_deviation(*g, value);
        if (!(dev <= g->tol_rel))
            out.mismatches.push_back({key, g->value, value, dev, g->tol_rel});
    }
    return out;
}

}  // namespace smp
