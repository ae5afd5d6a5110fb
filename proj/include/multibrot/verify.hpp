#pragma once

#include "multibrot/atlas.hpp"
#include "multibrot/numerics.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace multibrot {

struct CheckResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// "PASS  3  oracle equivalence  (12.3 s)  detail".
std::string format_check(const CheckResult& r);

struct VerifyOptions {
  unsigned threads = 1;
  std::uint64_t seed = 0x6d62726f74ULL;
  std::function<void(const std::string&)> progress;  // receives human-readable status lines
};

// Building blocks, also used directly by the unit tests.

/// Compares exact itinerary grouping with numerically traced co-landing for
/// all exact-period-n angles: per gap between consecutive angles using the
/// gap midpoint as base, and per angle against portrait_from_angle.
struct OracleReport {
  std::size_t bases = 0;
  std::size_t angles = 0;
  std::size_t mismatches = 0;
  std::string first_mismatch;
};
OracleReport oracle_equivalence(int d, int n, double base_potential = 0.1, double tol = 1e-6, unsigned threads = 1);

/// Root-pair landing: both rays traced to `potential`, a deeper trace seeds
/// solve_parabolic, distances are measured against the refinement.
struct LandingRecord {
  Angle minus, plus;
  Complex end_minus, end_plus;
  Complex root;
  double residual = 0.0;
  int orbit_period = 0;
  int expected_orbit_period = 0;
  double pair_gap = 0.0;
  double root_gap = 0.0;  // max over both endpoints
  // Same distances for the deeper seed traces.
  double deep_pair_gap = 0.0;
  double deep_root_gap = 0.0;
};
struct LandingReport {
  std::vector<LandingRecord> records;
  double max_pair_gap = 0.0;
  double max_root_gap = 0.0;
  double max_residual = 0.0;
  double max_deep_pair_gap = 0.0;
  double max_deep_root_gap = 0.0;
  std::size_t period_mismatches = 0;
  std::size_t failures = 0;
  std::string first_failure;
};
LandingReport landing_consistency(int d, int n, Potential potential, Potential seed_potential, unsigned threads = 1);

struct MutationReport {
  std::size_t cases = 0;
  std::size_t rejected = 0;
  std::string first_escape;
};
MutationReport mutation_suite(std::uint64_t seed, std::size_t cases);

/// Max relative error of the d/dc and d/dz accumulators of iterate()
/// against a four-point difference along both real and imaginary axes.
double derivative_probe_error(std::uint64_t seed, std::size_t probes);

/// Independent all-pairs check: count of wake pairs that neither nest nor
/// are disjoint.
std::size_t wake_partial_overlaps(const WakeForest& f);

// Suites.

CheckResult acceptance_criterion(int id, const VerifyOptions& opts);
std::vector<CheckResult> acceptance_suite(const VerifyOptions& opts);

/// Invariant and oracle checks for one degree through period `max_period`.
std::vector<CheckResult> verify_suite(int d, int max_period, const VerifyOptions& opts);

}  // namespace multibrot
