#include "multibrot/kneading.hpp"

#include <doctest.h>

#include <random>

using namespace multibrot;

namespace {

Angle A(long long p, long long q) { return Angle(p, q); }

// Label oracle from the d preimages t_j = (theta + j)/d of theta: the open
// arc (t_{j-1}, t_j) carries symbol j mod d, and t_j is the boundary (j, j+1).
Symbol label_oracle(const Angle& theta, const Angle& eta, int d) {
  std::vector<Rational> t;
  for (int j = 0; j < d; ++j) t.push_back((theta.value() + j) / d);
  const Rational x = eta.value();
  for (int j = 0; j < d; ++j)
    if (x == t[j]) return Symbol::boundary_pair(j, (j + 1) % d);
  for (int j = 1; j < d; ++j)
    if (t[j - 1] < x && x < t[j]) return Symbol::plain(j);
  return Symbol::plain(0);
}

Angle random_angle(std::mt19937_64& rng, long long max_den) {
  const long long q = std::uniform_int_distribution<long long>(2, max_den)(rng);
  return A(std::uniform_int_distribution<long long>(0, q - 1)(rng), q);
}

}  // namespace

TEST_CASE("labels agree with the preimage oracle") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 3000; ++trial) {
    const int d = 2 + trial % 4;
    const Angle theta = random_angle(rng, 30);
    Angle eta = random_angle(rng, 30);
    if (trial % 5 == 0) eta = A(std::uniform_int_distribution<int>(0, d - 1)(rng), d);
    if (trial % 7 == 0) eta = angle_from_rational((theta.value() + trial % d) / d);
    CHECK(label(theta, eta, d) == label_oracle(theta, eta, d));
  }
}

TEST_CASE("quadratic kneading examples") {
  const KneadingSequence k13 = kneading(A(1, 3), 2);
  CHECK(k13.str() == "[1 *]");
  CHECK(k13.cycle[1] == Symbol::boundary_pair(1, 0));
  const KneadingSequence k23 = kneading(A(2, 3), 2);
  CHECK(k23.str() == "[1 *]");
  CHECK(k23.cycle[1] == Symbol::boundary_pair(0, 1));

  CHECK(kneading(A(1, 7), 2).str() == "[1 1 *]");
  CHECK(kneading(A(3, 7), 2).str() == "[1 0 *]");
  CHECK(kneading(A(1, 4), 2).str() == "1 1 | [0]");
  CHECK(kneading(A(9, 56), 2).str() == "1 1 0 | [1]");
  CHECK(itinerary(A(1, 3), A(1, 7), 2).str() == "[0 1 1]");
}

TEST_CASE("periodic kneading sequences end their cycle with a boundary symbol") {
  for (int d = 2; d <= 4; ++d)
    for (int n = 1; n <= 4; ++n)
      for (const Angle& t : exact_period_angles(d, n)) {
        const KneadingSequence k = kneading(t, d);
        CHECK(k.prefix.empty());
        CHECK(k.period() == n);
        CHECK(k.cycle.back().boundary);
      }
}

TEST_CASE("boundary matching modes") {
  const KneadingSequence a = kneading(A(1, 3), 2), b = kneading(A(2, 3), 2);
  CHECK(kneading_equal(a, b));
  CHECK_FALSE(kneading_equal(a, b, BoundaryMatch::IdenticalPair));
  CHECK(kneading_equal(a, a, BoundaryMatch::IdenticalPair));
  CHECK_FALSE(kneading_equal(a, kneading(A(1, 7), 2)));
  CHECK_THROWS_AS(kneading_equal(a, kneading(A(1, 8), 3)), DomainError);
}

TEST_CASE("normalize finds the minimal form") {
  std::vector<Symbol> prefix{Symbol::plain(1), Symbol::plain(0), Symbol::plain(1)};
  std::vector<Symbol> cycle{Symbol::plain(0), Symbol::plain(1), Symbol::plain(0), Symbol::plain(1)};
  normalize(prefix, cycle);
  CHECK(prefix.empty());
  CHECK(cycle == std::vector<Symbol>{Symbol::plain(1), Symbol::plain(0)});
  std::vector<Symbol> empty;
  CHECK_THROWS_AS(normalize(prefix, empty), DomainError);
}

TEST_CASE("ray counts from the kneading period") {
  const RayCount r14 = misiurewicz_ray_count(A(1, 4), 2);
  CHECK_FALSE(r14.exact);
  CHECK(r14.str() == "OneOrTwo");
  const RayCount r956 = misiurewicz_ray_count(A(9, 56), 2);
  CHECK(r956.exact);
  CHECK(r956.count == 3);
  CHECK(r956.kneading_period == 1);
  CHECK(r956.str() == "Exact(3)");
  CHECK_FALSE(misiurewicz_ray_count(A(1, 6), 2).exact);
  CHECK_THROWS_AS(misiurewicz_ray_count(A(1, 7), 2), DomainError);
}

TEST_CASE("the rays co-landing with 9/56 share its kneading sequence") {
  // 9/56, 11/56 and 15/56 all land at the tip of the period-3 spoke.
  const KneadingSequence k = kneading(A(9, 56), 2);
  CHECK(kneading_equal(kneading(A(11, 56), 2), k));
  CHECK(kneading_equal(kneading(A(15, 56), 2), k));
  CHECK(misiurewicz_ray_count(A(11, 56), 2).count == 3);
}

TEST_CASE("kneading pre-period matches the angle pre-period") {
  std::mt19937_64 rng(17);
  int checked = 0;
  while (checked < 400) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const Angle t = random_angle(rng, 200);
    const OrbitData od = orbit_data(t, d);
    if (od.preperiod == 0) continue;
    const KneadingSequence k = kneading(t, d);
    CHECK(k.preperiod() == od.preperiod);
    CHECK(od.period % k.period() == 0);
    CHECK_NOTHROW(misiurewicz_ray_count(t, d));
    ++checked;
  }
}
