#include "multibrot/kneading.hpp"

#include <numeric>

namespace multibrot {

Symbol label(const Angle& theta, const Angle& eta, int d) {
  require_degree(d);
  // Compare d*eta (not reduced mod 1) with the lifts theta + j, j = 0..d-1.
  const BigInt num = BigInt(d) * eta.num() * theta.den() - theta.num() * eta.den();
  const BigInt den = eta.den() * theta.den();
  if (num < 0) return Symbol::plain(0);
  if (num == 0) return Symbol::boundary_pair(0, 1 % d);
  BigInt q = num / den;
  int qi = static_cast<int>(q);
  if (num % den == 0) return Symbol::boundary_pair(qi, (qi + 1) % d);
  return Symbol::plain(std::min(qi + 1, d) % d);
}

const Symbol& KneadingSequence::at(std::size_t i) const {
  if (i < prefix.size()) return prefix[i];
  return cycle[(i - prefix.size()) % cycle.size()];
}

std::string KneadingSequence::str() const {
  auto put = [](const Symbol& s) { return s.boundary ? std::string("*") : std::to_string(s.first); };
  std::string out;
  for (const Symbol& s : prefix) out += put(s) + " ";
  if (!prefix.empty()) out += "| ";
  out += "[";
  for (std::size_t i = 0; i < cycle.size(); ++i) out += (i ? " " : "") + put(cycle[i]);
  return out + "]";
}

void normalize(std::vector<Symbol>& prefix, std::vector<Symbol>& cycle) {
  if (cycle.empty()) throw DomainError("kneading stream without a repeating block");
  const std::size_t n = cycle.size();
  for (std::size_t k = 1; k <= n; ++k) {
    if (n % k != 0) continue;
    bool repeats = true;
    for (std::size_t i = k; i < n && repeats; ++i) repeats = cycle[i] == cycle[i - k];
    if (repeats) {
      cycle.resize(k);
      break;
    }
  }
  while (!prefix.empty() && prefix.back() == cycle.back()) {
    prefix.pop_back();
    std::rotate(cycle.rbegin(), cycle.rbegin() + 1, cycle.rend());
  }
}

KneadingSequence itinerary(const Angle& theta, const Angle& eta, int d) {
  require_degree(d);
  OrbitData od = orbit_data(eta, d);
  KneadingSequence k;
  k.base = theta;
  k.degree = d;
  Angle x = eta.is_full_turn() ? Angle() : eta;
  for (int i = 0; i < od.preperiod; ++i, x = map_d(x, d)) k.prefix.push_back(label(theta, x, d));
  for (int i = 0; i < od.period; ++i, x = map_d(x, d)) k.cycle.push_back(label(theta, x, d));
  normalize(k.prefix, k.cycle);
  return k;
}

KneadingSequence kneading(const Angle& theta, int d) { return itinerary(theta, theta, d); }

bool kneading_equal(const KneadingSequence& a, const KneadingSequence& b, BoundaryMatch mode) {
  if (a.degree != b.degree)
    throw DomainError("kneading_equal: degrees " + std::to_string(a.degree) + " and " + std::to_string(b.degree));
  const std::size_t span = std::max(a.prefix.size(), b.prefix.size()) + std::lcm(a.cycle.size(), b.cycle.size());
  for (std::size_t i = 0; i < span; ++i) {
    const Symbol& x = a.at(i);
    const Symbol& y = b.at(i);
    if (x.boundary != y.boundary) return false;
    if (x.boundary && mode == BoundaryMatch::AnyBoundary) continue;
    if (!(x == y)) return false;
  }
  return true;
}

std::string RayCount::str() const { return exact ? "Exact(" + std::to_string(count) + ")" : "OneOrTwo"; }

RayCount misiurewicz_ray_count(const Angle& theta, int d) {
  OrbitData od = orbit_data(theta, d);
  if (od.preperiod == 0) throw DomainError(theta.str() + " is periodic; the ray-count rule needs a pre-periodic angle");
  KneadingSequence k = kneading(theta, d);
  if (k.preperiod() != od.preperiod)
    throw InvariantViolation("K(" + theta.str() + ") has pre-period " + std::to_string(k.preperiod()) + ", angle has " +
                             std::to_string(od.preperiod));
  if (od.period % k.period() != 0)
    throw InvariantViolation("kneading period " + std::to_string(k.period()) + " does not divide " +
                             std::to_string(od.period));
  const int ratio = od.period / k.period();
  if (ratio > 1) return {true, ratio, k.period()};
  return RayCount::one_or_two(k.period());
}

}  // namespace multibrot
