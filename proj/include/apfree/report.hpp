// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include "apfree/constants.hpp"
#include "apfree/constructions.hpp"
#include "apfree/energy.hpp"
#include "apfree/extremal.hpp"
#include "apfree/progressions.hpp"
#include "apfree/supersaturation.hpp"

// JSON views of the library results. Wall-clock timings are left out so the
// same inputs always serialize to the same bytes.
namespace apfree {

using Json = nlohmann::json;

Json ambient_json(const GroundSet& set);
Json to_json(const QConstants& k);
Json to_json(const BoundReport& b);
Json to_json(const ContainerParams& p);
Json to_json(const ContainerHypotheses& h);
Json to_json(const ProbabilityBound& b);
Json to_json(const HConditionReport& r);
Json to_json(const APCounts& c);
Json to_json(const APHypergraph& h);
Json to_json(const EnergyProfile& e);
Json to_json(const CauchySchwarzReport& c);
/// `groundset_digest` is the sha256 of the formatted output set.
Json to_json(const ConstructionReport& r, const std::string& groundset_digest);
Json to_json(const ExtremalResult& r);
Json to_json(const SupersatReport& r);

/// Stage timings for the manifest.
Json stage_timings(const std::vector<Stage>& stages);

}  // namespace apfree
