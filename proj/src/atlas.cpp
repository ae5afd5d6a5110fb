#include "multibrot/atlas.hpp"

#include "multibrot/parallel.hpp"
#include "multibrot/serialize.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>

namespace multibrot {

std::vector<Angle> enumerate_exact_period(int d, int n) { return exact_period_angles(d, n); }

namespace {

Census period_one_census(int d) {
  Census c;
  ComponentRecord r;
  r.period = 1;
  r.root_minus = Angle();
  r.root_plus = Angle::full_turn();
  r.co_roots = exact_period_angles(d, 1);
  r.portrait.degree = d;
  r.portrait.sets = {{Angle()}};
  r.portrait.ray_period = 1;
  r.portrait.orbit_period = 1;
  c.components.push_back(std::move(r));
  c.summary = {d, 1, static_cast<std::size_t>(d - 1), 0, static_cast<std::size_t>(d - 1), 1};
  return c;
}

}  // namespace

Census census(int d, int n, const CensusOptions& opts) {
  require_degree(d);
  if (n < 1) throw DomainError("period must be positive");
  if (n == 1) {
    Census c = period_one_census(d);
    check_census(c);
    return c;
  }

  PeriodicGrouper grouper(d, n);
  const auto& angles = grouper.angles();
  std::vector<OrbitPortrait> portraits(angles.size());
  parallel_for(angles.size(), opts.threads, [&](std::size_t i) { portraits[i] = grouper.portrait_of(i); });

  std::map<Angle, ComponentRecord> roots;  // keyed by t-
  std::map<Angle, std::size_t> seen;       // angle -> times claimed as characteristic
  std::vector<Angle> co_roots;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const OrbitPortrait& p = portraits[i];
    if (p.trivial()) {
      co_roots.push_back(angles[i]);
      continue;
    }
    CharacteristicData ch = characteristic_data(p);
    auto [it, inserted] = roots.try_emplace(ch.minus);
    if (inserted) {
      it->second.period = n;
      it->second.root_minus = ch.minus;
      it->second.root_plus = ch.plus;
      it->second.portrait = p;
    } else if (it->second.root_plus != ch.plus || it->second.portrait != p) {
      throw InvariantViolation("angles " + ch.minus.str() + " and " + ch.plus.str() +
                               " resolve to different portraits");
    }
    ++seen[ch.minus];
    ++seen[ch.plus];
  }
  for (const auto& [angle, count] : seen) {
    if (count != 2)
      throw InvariantViolation("characteristic angle " + angle.str() + " claimed " + std::to_string(count) +
                               " times; expected exactly one root pair");
  }

  // Each co-root goes to the innermost same-period root wake containing it.
  for (const Angle& a : co_roots) {
    ComponentRecord* best = nullptr;
    Rational best_len = 2;
    for (auto& [key, rec] : roots) {
      Arc wake(rec.root_minus, rec.root_plus);
      if (arc_contains(wake, a) && arc_length(wake) < best_len) {
        best_len = arc_length(wake);
        best = &rec;
      }
    }
    if (!best) throw InvariantViolation("co-root angle " + a.str() + " lies in no period-" + std::to_string(n) + " wake");
    best->co_roots.push_back(a);
  }

  Census c;
  for (auto& [key, rec] : roots) {
    rec.co_roots = sorted_unique(std::move(rec.co_roots));
    c.components.push_back(std::move(rec));
  }
  c.summary.degree = d;
  c.summary.period = n;
  c.summary.total_exact_angles = angles.size();
  c.summary.root_pair_count = c.components.size();
  c.summary.co_root_count = co_roots.size();
  c.summary.component_count = c.components.size();
  check_census(c);
  return c;
}

void check_census(const Census& c) {
  const auto& s = c.summary;
  const std::size_t d = static_cast<std::size_t>(s.degree);
  auto fail = [&](const std::string& what) {
    throw InvariantViolation("census d=" + std::to_string(s.degree) + " n=" + std::to_string(s.period) + ": " + what);
  };
  if (s.component_count != c.components.size()) fail("component count mismatch");
  if (s.period == 1) {
    if (s.component_count != 1 || s.co_root_count != d - 1 || s.total_exact_angles != d - 1)
      fail("period 1 must have one component with d-1 co-roots");
    return;
  }
  if (s.total_exact_angles != d * s.component_count) fail("exact angle count is not d times the component count");
  if (s.co_root_count != (d - 2) * s.component_count) fail("co-root count is not (d-2) per component");
  if (s.root_pair_count != s.component_count) fail("not exactly one root pair per component");
  for (const auto& r : c.components) {
    if (r.co_roots.size() != d - 2)
      fail("component with root (" + r.root_minus.str() + "," + r.root_plus.str() + ") has " +
           std::to_string(r.co_roots.size()) + " co-roots");
  }
}

// ---------------------------------------------------------------------------

WakeForest wake_forest_from(int d, int max_period, const std::vector<Census>& censuses) {
  WakeForest f;
  f.degree = d;
  f.max_period = max_period;
  for (const Census& c : censuses) {
    if (c.summary.period == 1) continue;
    for (const auto& r : c.components) {
      WakeNode node{Arc(r.root_minus, r.root_plus), r.period, classify(r.portrait), std::nullopt, {}};
      if (!(node.arc.lo < node.arc.hi)) throw InvariantViolation("wake " + node.arc.str() + " contains angle 0");
      f.nodes.push_back(std::move(node));
    }
  }
  std::sort(f.nodes.begin(), f.nodes.end(), [](const WakeNode& a, const WakeNode& b) { return a.arc.lo < b.arc.lo; });

  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const Arc& arc = f.nodes[i].arc;
    while (!stack.empty() && f.nodes[stack.back()].arc.hi <= arc.lo) stack.pop_back();
    if (!stack.empty()) {
      const Arc& outer = f.nodes[stack.back()].arc;
      if (!(arc.hi < outer.hi)) throw InvariantViolation("wakes " + outer.str() + " and " + arc.str() + " overlap partially");
      f.nodes[i].parent = stack.back();
      f.nodes[stack.back()].children.push_back(i);
    }
    stack.push_back(i);
  }
  return f;
}

WakeForest wake_forest(int d, int max_period, const CensusOptions& opts) {
  require_degree(d);
  if (max_period < 1) throw DomainError("max period must be positive");
  std::vector<Census> all;
  for (int n = 1; n <= max_period; ++n) all.push_back(census(d, n, opts));
  return wake_forest_from(d, max_period, all);
}

std::vector<Arc> angle_to_wake(const WakeForest& forest, const Angle& a) {
  std::vector<Arc> chain;
  for (const auto& node : forest.nodes)
    if (arc_contains(node.arc, a)) chain.push_back(node.arc);
  std::sort(chain.begin(), chain.end(), [](const Arc& x, const Arc& y) { return arc_length(x) > arc_length(y); });
  return chain;
}

// ---------------------------------------------------------------------------

std::optional<std::filesystem::path> atlas_dir_from_env() {
  const char* dir = std::getenv("MULTIBROT_ATLAS_DIR");
  if (!dir || !*dir) return std::nullopt;
  return std::filesystem::path(dir);
}

std::filesystem::path atlas_file_name(int d, int n) {
  return "atlas_d" + std::to_string(d) + "_n" + std::to_string(n) + ".json";
}

Census cached_census(int d, int n, const std::optional<std::filesystem::path>& dir, const CensusOptions& opts) {
  if (!dir) return census(d, n, opts);
  const auto path = *dir / atlas_file_name(d, n);
  if (std::filesystem::exists(path)) {
    try {
      Census c = read_atlas(path);
      if (c.summary.degree == d && c.summary.period == n) {
        check_census(c);
        return c;
      }
    } catch (const std::exception&) {
      // Stale or foreign file: fall through and regenerate.
    }
  }
  Census c = census(d, n, opts);
  std::filesystem::create_directories(*dir);
  write_atlas(path, c);
  return c;
}

}  // namespace multibrot
