#pragma once

#include <map>
#include <string>
#include <vector>

#include "smp/logreal.hpp"

namespace smp {

/// One reference value from golden.json. value_ln_mag is stored as a
/// decimal string with more digits than a double holds.
struct GoldenEntry
{
    std::string key;
    LogReal value;
    double tol_rel = 0.0;
    std::string method;
};

class GoldenFile
{
  public:
    /// Throws std::runtime_error when the file is missing or malformed.
    static GoldenFile load(const std::string& path);
    static GoldenFile parse(const std::string& text);

    const GoldenEntry* find(const std::string& key) const;
    const std::map<std::string, GoldenEntry>& entries() const noexcept { return entries_; }

  private:
    std::map<std::string, GoldenEntry> entries_;
};

struct GoldenMismatch
{
    std::string key;
    LogReal expected;
    LogReal actual;
    double deviation;
    double tol_rel;
};

struct GoldenComparison
{
    int checked = 0;
    // Emitted keys with no golden counterpart.
    int unmatched = 0;
    std::vector<GoldenMismatch> mismatches;

    bool ok() const noexcept { return mismatches.empty(); }
};

/// Relative deviation of actual from the golden value. A golden zero is
/// matched by any |actual| <= tol_rel.
double golden_deviation(const GoldenEntry& g, const LogReal& actual);

GoldenComparison compare_golden(const GoldenFile& golden,
                                const std::vector<std::pair<std::string, LogReal>>& emitted);

}  // namespace smp
