#pragma once

#include "multibrot/atlas.hpp"
#include "multibrot/kneading.hpp"
#include "multibrot/numerics.hpp"
#include "multibrot/portrait.hpp"

#include <json.hpp>

#include <filesystem>

namespace multibrot {

using Json = nlohmann::json;

// Every *_to_json has a matching *_from_json that restores an equal value.
// Malformed documents raise DomainError.

Json angle_to_json(const Angle& a);
Angle angle_from_json(const Json& j);

Json arc_to_json(const Arc& a);
Arc arc_from_json(const Json& j);

Json portrait_to_json(const OrbitPortrait& p);
OrbitPortrait portrait_from_json(const Json& j);

Json kneading_to_json(const KneadingSequence& k);
KneadingSequence kneading_from_json(const Json& j);

Json component_to_json(const ComponentRecord& r);
ComponentRecord component_from_json(const Json& j);

/// Atlas document: {"header": {...}, "components": [...], "summary": {...}}.
Json census_to_json(const Census& c);
Census census_from_json(const Json& j);

Json wake_forest_to_json(const WakeForest& f);
WakeForest wake_forest_from_json(const Json& j);

Json solve_result_to_json(const SolveResult& s);
SolveResult solve_result_from_json(const Json& j);

Json ray_count_to_json(const RayCount& r);

Census read_atlas(const std::filesystem::path& path);
void write_atlas(const std::filesystem::path& path, const Census& c);

}  // namespace multibrot
