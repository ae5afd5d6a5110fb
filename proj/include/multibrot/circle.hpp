#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace multibrot {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Bad input: malformed angle text, precondition violations, unsupported degree.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A theorem-backed invariant failed. Indicates a bug, never bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

void require_degree(int d);

/// Exact rational point of R/Z, stored reduced with 0 <= num < den.
///
/// The one exception is the full turn "1", which only the period-1 census
/// uses to tell the rays at 0 and 1 apart. Every arithmetic operation
/// treats it as 0.
class Angle {
 public:
  Angle() : num_(0), den_(1) {}
  Angle(BigInt num, BigInt den);
  Angle(std::int64_t num, std::int64_t den) : Angle(BigInt(num), BigInt(den)) {}

  static Angle full_turn();
  /// Parses "p/q" (or a bare integer). "1/1" normalizes to 0 unless
  /// `allow_full_turn` is set.
  static Angle parse(std::string_view text, bool allow_full_turn = false);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_full_turn() const { return full_turn_; }

  Rational value() const;
  double to_double() const;
  std::string str() const;

  /// Position on the circle read off [0, 1]; the full turn sorts last.
  std::strong_ordering operator<=>(const Angle& other) const;
  bool operator==(const Angle& other) const = default;

 private:
  BigInt num_;
  BigInt den_;
  bool full_turn_ = false;
};

Angle operator+(const Angle& a, const Angle& b);
Angle operator-(const Angle& a, const Angle& b);
Angle angle_from_rational(const Rational& r);

/// Open anticlockwise arc (lo, hi).
struct Arc {
  Angle lo;
  Angle hi;

  Arc(Angle lo_, Angle hi_);
  std::string str() const;
  Arc reversed() const { return Arc(hi, lo); }
  bool operator==(const Arc&) const = default;
};

struct OrbitData {
  int preperiod = 0;
  int period = 1;
  std::vector<Angle> orbit;  // the eventual cycle, starting at the first periodic iterate
};

Angle map_d(const Angle& a, int d);
/// d^k * a mod 1.
Angle map_d_pow(const Angle& a, int d, int k);
OrbitData orbit_data(const Angle& a, int d);

Rational arc_length(const Arc& x);
bool arc_contains(const Arc& x, const Angle& a);
/// inner is a (possibly equal) sub-arc of outer.
bool arc_within(const Arc& inner, const Arc& outer);
/// (b - a) mod 1 as an exact rational in [0, 1).
Rational cyclic_distance(const Angle& a, const Angle& b);

bool cyclic_order_preserved(const std::vector<Angle>& before, const std::vector<Angle>& after);

/// True iff all of `b` sits in one complementary arc of `a`.
bool unlinked(const std::vector<Angle>& a, const std::vector<Angle>& b);

/// Sorted by position; duplicates removed.
std::vector<Angle> sorted_unique(std::vector<Angle> angles);

/// Complementary arcs of a sorted set with at least two points, in order.
std::vector<Arc> complementary_arcs(const std::vector<Angle>& sorted);

/// d^n - 1.
BigInt period_denominator(int d, int n);
std::vector<int> divisors(int n);

/// Numerators a of all angles a/(d^n - 1) with exact period n under
/// multiplication by d, ascending.
std::vector<BigInt> exact_period_numerators(int d, int n);
std::vector<Angle> exact_period_angles(int d, int n);

}  // namespace multibrot
