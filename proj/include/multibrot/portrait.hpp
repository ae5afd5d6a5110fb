#pragma once

#include "multibrot/circle.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace multibrot {

/// Sorted angle set A_j.
using AngleSet = std::vector<Angle>;

/// {A_1, ..., A_p}; multiplication by d carries A_j onto A_{j+1} (indices mod p).
struct OrbitPortrait {
  int degree = 2;
  std::vector<AngleSet> sets;
  int ray_period = 1;
  int orbit_period = 1;

  bool trivial() const;
  std::size_t angle_count() const;
  bool operator==(const OrbitPortrait&) const = default;
};

enum class PortraitKind { Trivial, Primitive, Satellite };

std::string to_string(PortraitKind k);
PortraitKind portrait_kind_from_string(const std::string& s);

struct CharacteristicData {
  std::optional<Arc> arc;  // empty for trivial portraits
  Angle minus;
  Angle plus;
  bool co_root = false;    // trivial portrait: minus == plus == the single angle of A_1
};

struct ValidationReport {
  bool ok = true;
  int axiom = 0;  // 1..5, first violated
  std::string message;
  std::vector<Angle> witness;

  explicit operator bool() const { return ok; }
};

/// Checks the five formal-portrait axioms in order and reports the first failure.
ValidationReport validate_formal_portrait(const std::vector<AngleSet>& sets, int d);

CharacteristicData characteristic_data(const OrbitPortrait& p);
PortraitKind classify(const OrbitPortrait& p);

/// Builds {A_1, d A_1, d^2 A_1, ...} until the sequence closes up.
OrbitPortrait portrait_from_first_set(AngleSet a1, int d);

/// Which infinitesimal side of a base angle the partition sits on.
enum class Side { Plus, Minus };

/// Angles among `candidates` (all of exact period n) whose itinerary under the
/// partition {(base + side*eps + j)/d} equals that of `target`.
std::vector<Angle> itinerary_class(const Angle& target, const Angle& base, Side side, const std::vector<Angle>& candidates,
                                   int d);

/// Partition of `candidates` by itinerary relative to an exact base angle
/// that is not itself a preimage of any candidate. Classes sorted by first angle.
std::vector<std::vector<Angle>> itinerary_partition(const Angle& base, const std::vector<Angle>& candidates, int d);

/// All exact-period-n angles of degree d with their itineraries precomputed
/// for repeated side-resolved grouping. Uses 64-bit arithmetic when d^(n+1)
/// fits comfortably, arbitrary precision otherwise.
class PeriodicGrouper {
 public:
  PeriodicGrouper(int d, int n, bool force_bigint = false);
  ~PeriodicGrouper();
  PeriodicGrouper(PeriodicGrouper&&) noexcept;
  PeriodicGrouper& operator=(PeriodicGrouper&&) noexcept;

  int degree() const { return d_; }
  int period() const { return n_; }
  bool uses_bigint() const;
  const std::vector<Angle>& angles() const { return angles_; }
  std::size_t index_of(const Angle& a) const;

  /// Indices sharing the itinerary of angles()[i] for base angle()[i] +- eps.
  std::vector<std::size_t> class_of(std::size_t i, Side side) const;

  /// Portrait for which angles()[i] is characteristic, else trivial.
  OrbitPortrait portrait_of(std::size_t i) const;

 private:
  struct Impl;
  int d_;
  int n_;
  std::vector<Angle> angles_;
  std::unique_ptr<Impl> impl_;
};

/// Portrait for which `theta` is a characteristic angle, or the trivial
/// portrait on its orbit when theta is a co-root angle.
OrbitPortrait portrait_from_angle(const Angle& theta, int d);

struct ConjugateResult {
  std::optional<Angle> partner;          // none for co-root angles
  std::optional<std::pair<Angle, Angle>> characteristic;
  bool theta_is_characteristic = false;
};

ConjugateResult conjugate_angle(const Angle& theta, int d);
/// Same query against a known portrait; theta may be a non-characteristic
/// member of A_1, in which case the characteristic pair is still reported.
ConjugateResult conjugate_angle_in(const Angle& theta, const OrbitPortrait& p);

}  // namespace multibrot
