#include "multibrot/portrait.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <variant>

namespace multibrot {

bool OrbitPortrait::trivial() const {
  return std::all_of(sets.begin(), sets.end(), [](const AngleSet& s) { return s.size() == 1; });
}

std::size_t OrbitPortrait::angle_count() const {
  std::size_t k = 0;
  for (const auto& s : sets) k += s.size();
  return k;
}

std::string to_string(PortraitKind k) {
  switch (k) {
    case PortraitKind::Trivial: return "trivial";
    case PortraitKind::Primitive: return "primitive";
    case PortraitKind::Satellite: return "satellite";
  }
  return "trivial";
}

PortraitKind portrait_kind_from_string(const std::string& s) {
  if (s == "trivial") return PortraitKind::Trivial;
  if (s == "primitive") return PortraitKind::Primitive;
  if (s == "satellite") return PortraitKind::Satellite;
  throw DomainError("unknown portrait kind '" + s + "'");
}

// ---------------------------------------------------------------------------
// Validation

namespace {

ValidationReport fail(int axiom, std::string message, std::vector<Angle> witness) {
  ValidationReport r;
  r.ok = false;
  r.axiom = axiom;
  r.message = std::move(message);
  r.witness = std::move(witness);
  return r;
}

Rational largest_gap(const AngleSet& sorted) {
  if (sorted.size() < 2) return Rational(1);
  Rational best = 0;
  for (const Arc& a : complementary_arcs(sorted)) best = std::max(best, arc_length(a));
  return best;
}

std::vector<Angle> translate(const AngleSet& s, const Angle& by) {
  std::vector<Angle> out;
  out.reserve(s.size());
  for (const Angle& a : s) out.push_back(a + by);
  return out;
}

bool intersects(const std::vector<Angle>& a, const std::vector<Angle>& b) {
  auto sb = sorted_unique(b);
  return std::any_of(a.begin(), a.end(), [&](const Angle& x) { return std::binary_search(sb.begin(), sb.end(), x); });
}

}  // namespace

ValidationReport validate_formal_portrait(const std::vector<AngleSet>& raw, int d) {
  require_degree(d);
  if (raw.empty()) throw DomainError("validate_formal_portrait: empty portrait");

  // (1) non-empty finite sets of rationals, pairwise disjoint.
  std::vector<AngleSet> sets;
  std::map<Angle, std::size_t> owner;
  for (std::size_t j = 0; j < raw.size(); ++j) {
    if (raw[j].empty()) return fail(1, "set A_" + std::to_string(j + 1) + " is empty", {});
    for (const Angle& a : raw[j]) {
      if (a.is_full_turn()) return fail(1, "full-turn angle is not a point of R/Z here", {a});
      auto [it, inserted] = owner.emplace(a, j);
      if (!inserted) return fail(1, "angle " + a.str() + " appears twice", {a});
    }
    sets.push_back(sorted_unique(raw[j]));
  }
  const std::size_t p = sets.size();

  // (2) multiplication by d is an order-preserving bijection A_j -> A_{j+1}.
  for (std::size_t j = 0; j < p; ++j) {
    const AngleSet& next = sets[(j + 1) % p];
    std::vector<Angle> image;
    for (const Angle& a : sets[j]) {
      Angle da = map_d(a, d);
      if (!std::binary_search(next.begin(), next.end(), da))
        return fail(2, a.str() + " maps to " + da.str() + " outside A_" + std::to_string((j + 1) % p + 1), {a, da});
      image.push_back(da);
    }
    if (sorted_unique(image).size() != next.size())
      return fail(2, "multiplication by d is not a bijection A_" + std::to_string(j + 1) + " -> A_" +
                         std::to_string((j + 1) % p + 1),
                  sets[j]);
    if (!cyclic_order_preserved(sets[j], image))
      return fail(2, "cyclic order not preserved on A_" + std::to_string(j + 1), sets[j]);
  }

  // (3) each A_j inside an arc of length < 1/d.
  const Rational critical = 1 - Rational(1, d);
  for (std::size_t j = 0; j < p; ++j) {
    if (!(largest_gap(sets[j]) > critical))
      return fail(3, "A_" + std::to_string(j + 1) + " is not contained in an arc of length < 1/d", sets[j]);
  }

  // (4) all angles periodic with a common period r*p.
  std::optional<int> common;
  for (const auto& s : sets) {
    for (const Angle& a : s) {
      OrbitData od = orbit_data(a, d);
      if (od.preperiod != 0) return fail(4, a.str() + " is strictly pre-periodic", {a});
      if (common && *common != od.period)
        return fail(4, a.str() + " has period " + std::to_string(od.period) + ", expected " + std::to_string(*common),
                    {a});
      common = od.period;
    }
  }
  if (*common % static_cast<int>(p) != 0)
    return fail(4, "ray period " + std::to_string(*common) + " is not a multiple of " + std::to_string(p), {});

  // (5) translates A_i + j/d unlinked from each other and from every other A_m.
  for (std::size_t i = 0; i < p; ++i) {
    std::vector<std::vector<Angle>> translates;
    for (int j = 0; j < d; ++j) translates.push_back(translate(sets[i], Angle(j, d)));
    for (std::size_t a = 0; a < translates.size(); ++a) {
      for (std::size_t b = a + 1; b < translates.size(); ++b) {
        if (intersects(translates[a], translates[b]) || !unlinked(translates[a], translates[b]))
          return fail(5, "translates of A_" + std::to_string(i + 1) + " by " + std::to_string(a) + "/d and " +
                             std::to_string(b) + "/d are linked",
                      translates[b]);
      }
      for (std::size_t m = 0; m < p; ++m) {
        if (m == i) continue;
        if (intersects(translates[a], sets[m]) || !unlinked(translates[a], sets[m]))
          return fail(5, "A_" + std::to_string(i + 1) + " + " + std::to_string(a) + "/d is linked with A_" +
                             std::to_string(m + 1),
                      sets[m]);
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Characteristic arc, classification

CharacteristicData characteristic_data(const OrbitPortrait& p) {
  if (p.sets.empty()) throw DomainError("characteristic_data: empty portrait");
  CharacteristicData out;
  if (p.trivial()) {
    out.minus = out.plus = p.sets.front().front();
    out.co_root = true;
    return out;
  }
  std::optional<Arc> best;
  Rational best_len = 2;
  int ties = 0;
  for (const auto& s : p.sets) {
    for (const Arc& a : complementary_arcs(s)) {
      Rational len = arc_length(a);
      if (len < best_len) {
        best_len = len;
        best = a;
        ties = 0;
      } else if (len == best_len) {
        ++ties;
      }
    }
  }
  if (ties != 0) throw InvariantViolation("characteristic arc is not unique (length " + best_len.str() + ")");

  // Critical value arcs: images of the critical (longest) arcs. Each must contain
  // the characteristic arc, and exactly one of them is it.
  int equal = 0;
  for (const auto& s : p.sets) {
    if (s.size() < 2) continue;
    const auto arcs = complementary_arcs(s);
    const Arc& crit = *std::max_element(arcs.begin(), arcs.end(),
                                        [](const Arc& a, const Arc& b) { return arc_length(a) < arc_length(b); });
    Arc value(map_d(crit.lo, p.degree), map_d(crit.hi, p.degree));
    if (!arc_within(*best, value))
      throw InvariantViolation("characteristic arc " + best->str() + " not inside critical value arc " + value.str());
    if (value == *best) ++equal;
  }
  if (equal != 1) throw InvariantViolation("characteristic arc " + best->str() + " is not a critical value arc");
  out.arc = best;
  out.minus = best->lo;
  out.plus = best->hi;
  return out;
}

PortraitKind classify(const OrbitPortrait& p) {
  if (p.trivial()) return PortraitKind::Trivial;
  std::vector<Angle> all;
  for (const auto& s : p.sets) all.insert(all.end(), s.begin(), s.end());
  all = sorted_unique(all);
  OrbitData od = orbit_data(p.sets.front().front(), p.degree);
  std::vector<Angle> cycle = sorted_unique(od.orbit);
  if (std::includes(cycle.begin(), cycle.end(), all.begin(), all.end())) return PortraitKind::Satellite;
  bool pairs = std::all_of(p.sets.begin(), p.sets.end(), [](const AngleSet& s) { return s.size() == 2; });
  if (pairs && od.period == static_cast<int>(p.sets.size())) return PortraitKind::Primitive;
  throw InvariantViolation("portrait violates the primitive/satellite dichotomy");
}

OrbitPortrait portrait_from_first_set(AngleSet a1, int d) {
  require_degree(d);
  if (a1.empty()) throw DomainError("portrait_from_first_set: empty set");
  OrbitPortrait p;
  p.degree = d;
  p.sets.push_back(sorted_unique(std::move(a1)));
  OrbitData od = orbit_data(p.sets.front().front(), d);
  p.ray_period = od.period;
  AngleSet cur = p.sets.front();
  for (int step = 0; step < od.period + 1; ++step) {
    AngleSet next;
    for (const Angle& a : cur) next.push_back(map_d(a, d));
    next = sorted_unique(std::move(next));
    if (next == p.sets.front()) {
      p.orbit_period = static_cast<int>(p.sets.size());
      return p;
    }
    p.sets.push_back(next);
    cur = std::move(next);
  }
  throw DomainError("angle set does not return to itself under multiplication by d");
}

// ---------------------------------------------------------------------------
// Itineraries relative to a base angle.
//
// Work in units of 1/Q with every angle a/Q. The partition points (t + j)/d
// become t + jQ when compared against x = d*a, so a label is the number of
// points strictly below x, reduced mod d. A hit on a partition point is
// resolved by the side of the infinitesimal perturbation of the base.

namespace {

template <class I>
int scaled_label(const I& x, const I& t, const I& Q, int d, std::optional<Side> side, bool& boundary) {
  boundary = false;
  if (x < t) return 0;
  I diff = x - t;
  I q = diff / Q;
  I r = diff % Q;
  int qi = static_cast<int>(q);
  if (r == 0) {
    boundary = true;
    if (side == Side::Minus) return (qi + 1) % d;
    return qi % d;
  }
  return std::min(qi + 1, d) % d;
}

template <class I>
struct GroupCore {
  int d = 2;
  int n = 1;
  I D = 1;
  std::vector<I> scaled;  // d * numerator
  std::vector<I> nums;
  std::vector<std::size_t> next;

  int label(std::size_t j, const I& t, Side side) const {
    bool boundary = false;
    return scaled_label<I>(scaled[j], t, D, d, side, boundary);
  }

  std::vector<std::size_t> class_of(std::size_t i, Side side) const {
    const I& t = nums[i];
    std::vector<int> ref(n);
    std::size_t k = i;
    for (int s = 0; s < n; ++s, k = next[k]) ref[s] = label(k, t, side);
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < nums.size(); ++j) {
      std::size_t x = j;
      bool same = true;
      for (int s = 0; s < n && same; ++s, x = next[x]) same = label(x, t, side) == ref[s];
      if (same) out.push_back(j);
    }
    return out;
  }
};

template <class I>
GroupCore<I> make_core(int d, int n, const std::vector<BigInt>& numerators, const BigInt& D) {
  GroupCore<I> core;
  core.d = d;
  core.n = n;
  core.D = static_cast<I>(D);
  core.nums.reserve(numerators.size());
  for (const BigInt& a : numerators) core.nums.push_back(static_cast<I>(a));
  for (const I& a : core.nums) core.scaled.push_back(a * d);
  core.next.resize(core.nums.size());
  for (std::size_t j = 0; j < core.nums.size(); ++j) {
    I image = core.scaled[j] % core.D;
    auto it = std::lower_bound(core.nums.begin(), core.nums.end(), image);
    if (it == core.nums.end() || *it != image) throw InvariantViolation("exact-period set not closed under d");
    core.next[j] = static_cast<std::size_t>(it - core.nums.begin());
  }
  return core;
}

BigInt common_denominator(const std::vector<Angle>& angles, const Angle& base) {
  BigInt q = base.den();
  for (const Angle& a : angles) q = boost::multiprecision::lcm(q, a.den());
  return q;
}

BigInt scaled_numerator(const Angle& a, const BigInt& Q) { return a.num() * (Q / a.den()); }

std::vector<std::optional<int>> itinerary_labels(const Angle& eta, const BigInt& t, const BigInt& Q, int d,
                                                 std::optional<Side> side, int steps) {
  std::vector<std::optional<int>> out;
  BigInt a = scaled_numerator(eta, Q);
  for (int s = 0; s < steps; ++s) {
    bool boundary = false;
    int m = scaled_label<BigInt>(a * d, t, Q, d, side, boundary);
    out.push_back(boundary && !side ? std::nullopt : std::optional<int>(m));
    a = (a * d) % Q;
  }
  return out;
}

int common_period(const std::vector<Angle>& angles, int d) {
  int p = 1;
  for (const Angle& a : angles) {
    OrbitData od = orbit_data(a, d);
    if (od.preperiod != 0) throw DomainError("itinerary grouping needs periodic angles; " + a.str() + " is pre-periodic");
    p = std::lcm(p, od.period);
  }
  return p;
}

}  // namespace

std::vector<Angle> itinerary_class(const Angle& target, const Angle& base, Side side, const std::vector<Angle>& candidates,
                                   int d) {
  require_degree(d);
  std::vector<Angle> all = candidates;
  all.push_back(target);
  const int steps = common_period(all, d);
  const BigInt Q = common_denominator(all, base);
  const BigInt t = scaled_numerator(base, Q);
  auto ref = itinerary_labels(target, t, Q, d, side, steps);
  std::vector<Angle> out;
  for (const Angle& c : candidates)
    if (itinerary_labels(c, t, Q, d, side, steps) == ref) out.push_back(c);
  return sorted_unique(out);
}

std::vector<std::vector<Angle>> itinerary_partition(const Angle& base, const std::vector<Angle>& candidates, int d) {
  require_degree(d);
  const int steps = common_period(candidates, d);
  const BigInt Q = common_denominator(candidates, base);
  const BigInt t = scaled_numerator(base, Q);
  std::map<std::vector<std::optional<int>>, std::vector<Angle>> groups;
  for (const Angle& c : candidates) {
    auto labels = itinerary_labels(c, t, Q, d, std::nullopt, steps);
    if (std::any_of(labels.begin(), labels.end(), [](const auto& l) { return !l.has_value(); }))
      throw DomainError("base angle " + base.str() + " is a preimage of " + c.str());
    groups[labels].push_back(c);
  }
  std::vector<std::vector<Angle>> out;
  for (auto& [key, members] : groups) out.push_back(sorted_unique(members));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

// ---------------------------------------------------------------------------
// PeriodicGrouper

struct PeriodicGrouper::Impl {
  std::variant<GroupCore<std::int64_t>, GroupCore<BigInt>> core;
};

PeriodicGrouper::PeriodicGrouper(int d, int n, bool force_bigint) : d_(d), n_(n) {
  require_degree(d);
  if (n < 1) throw DomainError("period must be positive");
  const BigInt D = period_denominator(d, n);
  std::vector<BigInt> numerators = exact_period_numerators(d, n);
  for (const BigInt& a : numerators) angles_.emplace_back(a, D);
  const BigInt limit = BigInt(std::numeric_limits<std::int64_t>::max() / 4);
  impl_ = std::make_unique<Impl>();
  if (!force_bigint && D * d < limit)
    impl_->core = make_core<std::int64_t>(d, n, numerators, D);
  else
    impl_->core = make_core<BigInt>(d, n, numerators, D);
}

PeriodicGrouper::~PeriodicGrouper() = default;
PeriodicGrouper::PeriodicGrouper(PeriodicGrouper&&) noexcept = default;
PeriodicGrouper& PeriodicGrouper::operator=(PeriodicGrouper&&) noexcept = default;

bool PeriodicGrouper::uses_bigint() const { return std::holds_alternative<GroupCore<BigInt>>(impl_->core); }

std::size_t PeriodicGrouper::index_of(const Angle& a) const {
  auto it = std::lower_bound(angles_.begin(), angles_.end(), a);
  if (it == angles_.end() || *it != a)
    throw DomainError(a.str() + " does not have exact period " + std::to_string(n_) + " under multiplication by " +
                      std::to_string(d_));
  return static_cast<std::size_t>(it - angles_.begin());
}

std::vector<std::size_t> PeriodicGrouper::class_of(std::size_t i, Side side) const {
  return std::visit([&](const auto& core) { return core.class_of(i, side); }, impl_->core);
}

OrbitPortrait PeriodicGrouper::portrait_of(std::size_t i) const {
  const Angle& theta = angles_.at(i);
  std::vector<OrbitPortrait> found;
  for (Side side : {Side::Plus, Side::Minus}) {
    std::vector<std::size_t> cls = class_of(i, side);
    if (cls.size() < 2) continue;
    AngleSet a1;
    for (std::size_t k : cls) a1.push_back(angles_[k]);
    OrbitPortrait p = portrait_from_first_set(std::move(a1), d_);
    ValidationReport rep = validate_formal_portrait(p.sets, d_);
    if (!rep.ok)
      throw InvariantViolation("grouping of " + theta.str() + " fails axiom " + std::to_string(rep.axiom) + ": " +
                               rep.message);
    CharacteristicData ch = characteristic_data(p);
    const Angle& expected = side == Side::Plus ? ch.minus : ch.plus;
    if (expected != theta)
      throw InvariantViolation("grouping of " + theta.str() + " yields characteristic arc " + ch.arc->str() +
                               " without it as the matching endpoint");
    found.push_back(std::move(p));
  }
  if (found.size() > 1) throw InvariantViolation(theta.str() + " is characteristic on both sides");
  if (found.size() == 1) return std::move(found.front());

  OrbitPortrait p;
  p.degree = d_;
  p.ray_period = n_;
  p.orbit_period = n_;
  std::size_t k = i;
  for (int s = 0; s < n_; ++s) {
    p.sets.push_back({angles_[k]});
    k = index_of(map_d(angles_[k], d_));
  }
  return p;
}

OrbitPortrait portrait_from_angle(const Angle& theta, int d) {
  require_degree(d);
  OrbitData od = orbit_data(theta, d);
  if (od.preperiod != 0) throw DomainError(theta.str() + " is strictly pre-periodic under multiplication by " + std::to_string(d));
  PeriodicGrouper g(d, od.period);
  return g.portrait_of(g.index_of(theta));
}

ConjugateResult conjugate_angle_in(const Angle& theta, const OrbitPortrait& p) {
  ConjugateResult out;
  if (p.trivial()) return out;
  const AngleSet& a1 = p.sets.front();
  if (!std::binary_search(a1.begin(), a1.end(), theta))
    throw DomainError(theta.str() + " is not in the first set of the portrait");
  CharacteristicData ch = characteristic_data(p);
  out.characteristic = std::make_pair(ch.minus, ch.plus);
  if (theta == ch.minus) {
    out.partner = ch.plus;
    out.theta_is_characteristic = true;
  } else if (theta == ch.plus) {
    out.partner = ch.minus;
    out.theta_is_characteristic = true;
  }
  return out;
}

ConjugateResult conjugate_angle(const Angle& theta, int d) {
  return conjugate_angle_in(theta, portrait_from_angle(theta, d));
}

}  // namespace multibrot
