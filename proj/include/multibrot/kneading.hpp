#pragma once

#include "multibrot/circle.hpp"

#include <string>
#include <vector>

namespace multibrot {

/// Plain(m) or the boundary symbol (m, m+1 mod d).
struct Symbol {
  int first = 0;
  int second = 0;
  bool boundary = false;

  static Symbol plain(int m) { return {m, m, false}; }
  static Symbol boundary_pair(int m1, int m2) { return {m1, m2, true}; }
  bool operator==(const Symbol&) const = default;
};

/// Eventually periodic symbol stream: prefix then `cycle` repeated forever,
/// always in minimal form.
struct KneadingSequence {
  Angle base;
  int degree = 2;
  std::vector<Symbol> prefix;
  std::vector<Symbol> cycle;

  int preperiod() const { return static_cast<int>(prefix.size()); }
  int period() const { return static_cast<int>(cycle.size()); }
  const Symbol& at(std::size_t i) const;
  /// "1 1 0 | [1]"; boundary symbols print as "*".
  std::string str() const;
  bool operator==(const KneadingSequence&) const = default;
};

Symbol label(const Angle& theta, const Angle& eta, int d);

/// Theta-itinerary of eta.
KneadingSequence itinerary(const Angle& theta, const Angle& eta, int d);

/// K(theta).
KneadingSequence kneading(const Angle& theta, int d);

/// Reduces an eventually periodic stream to its minimal (prefix, cycle).
void normalize(std::vector<Symbol>& prefix, std::vector<Symbol>& cycle);

enum class BoundaryMatch {
  AnyBoundary,    // any two boundary symbols at the same index match
  IdenticalPair,  // boundary symbols must carry the same (m1, m2)
};

bool kneading_equal(const KneadingSequence& a, const KneadingSequence& b,
                    BoundaryMatch mode = BoundaryMatch::AnyBoundary);

struct RayCount {
  bool exact = false;  // false: the rule only says "1 or 2"
  int count = 0;
  int kneading_period = 0;

  static RayCount one_or_two(int k) { return {false, 0, k}; }
  std::string str() const;
};

/// Number of parameter rays co-landing with the ray at a strictly
/// pre-periodic angle, from the kneading period.
RayCount misiurewicz_ray_count(const Angle& theta, int d);

}  // namespace multibrot
