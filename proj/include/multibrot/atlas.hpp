#pragma once

#include "multibrot/circle.hpp"
#include "multibrot/portrait.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace multibrot {

/// One hyperbolic component of period n, described by the angles of the
/// parameter rays landing on its boundary.
struct ComponentRecord {
  int period = 1;
  Angle root_minus;
  Angle root_plus;  // the full turn for the period-1 component
  std::vector<Angle> co_roots;
  OrbitPortrait portrait;

  bool operator==(const ComponentRecord&) const = default;
};

struct CensusSummary {
  int degree = 2;
  int period = 1;
  std::size_t total_exact_angles = 0;
  std::size_t root_pair_count = 0;
  std::size_t co_root_count = 0;
  std::size_t component_count = 0;

  bool operator==(const CensusSummary&) const = default;
};

struct Census {
  std::vector<ComponentRecord> components;
  CensusSummary summary;

  bool operator==(const Census&) const = default;
};

struct CensusOptions {
  unsigned threads = 1;
};

std::vector<Angle> enumerate_exact_period(int d, int n);

/// Pairs every exact-period-n angle into a root pair or a co-root and
/// validates the per-component counts.
Census census(int d, int n, const CensusOptions& opts = {});

/// Throws InvariantViolation when the counting rules fail.
void check_census(const Census& c);

struct WakeNode {
  Arc arc;
  int period = 1;
  PortraitKind kind = PortraitKind::Primitive;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
};

/// Characteristic arcs of every non-trivial portrait with ray period <= N,
/// ordered by lower endpoint, with their containment forest.
struct WakeForest {
  int degree = 2;
  int max_period = 1;
  std::vector<WakeNode> nodes;
};

WakeForest wake_forest(int d, int max_period, const CensusOptions& opts = {});
WakeForest wake_forest_from(int d, int max_period, const std::vector<Census>& censuses);

/// Wakes containing `a`, outermost first.
std::vector<Arc> angle_to_wake(const WakeForest& forest, const Angle& a);

/// Version tag written to atlas files; bump when the record layout changes.
inline constexpr const char* kGeneratorVersion = "multibrot-atlas/1";

/// Cache directory from MULTIBROT_ATLAS_DIR, if set.
std::optional<std::filesystem::path> atlas_dir_from_env();
std::filesystem::path atlas_file_name(int d, int n);

/// Loads (d, n) from `dir` when a matching atlas exists, otherwise computes
/// and stores it there.
Census cached_census(int d, int n, const std::optional<std::filesystem::path>& dir, const CensusOptions& opts = {});

}  // namespace multibrot
