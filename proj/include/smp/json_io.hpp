#pragma once

#include <json.hpp>

#include "smp/criteria.hpp"
#include "smp/density.hpp"
#include "smp/moments.hpp"
#include "smp/spec.hpp"
#include "smp/symmetry.hpp"
#include "smp/witness.hpp"

namespace smp {

using Json = nlohmann::ordered_json;

/// {"family": name, "params": {...}, "modifiers": [...]}. Modifiers are
/// objects with a "type" key ("sin-perturbation" with s and k,
/// "symmetrized", "symmetric-extension"); a bare string is accepted for the
/// parameterless ones.
Json to_json(const DistributionSpec& spec);
/// Throws std::invalid_argument on malformed input.
DistributionSpec spec_from_json(const Json& j);

/// sign, ln_mag (null for zero) and value (omitted when ln_mag >= 700).
void put_log_real(Json& j, const LogReal& x);

Json to_json(const MomentEntry& e);
Json to_json(const MomentTable& table);
Json to_json(const ExtendedValue& v);
Json to_json(const SeriesDiagnostics& d);
Json to_json(const CriterionReport& report);
Json to_json(const SymmetryCheck& check);
Json to_json(const Remark51Comparison& cmp);
Json to_json(const WitnessReport& report);

}  // namespace smp
