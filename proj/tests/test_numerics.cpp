#include "multibrot/numerics.hpp"
#include "multibrot/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace multibrot;

namespace {

Angle A(long long p, long long q) { return Angle(p, q); }

constexpr double kPi = std::numbers::pi;

Complex brute_orbit(int d, Complex c, int k) {
  Complex z = 0;
  for (int i = 0; i < k; ++i) z = std::pow(z, d) + c;
  return z;
}

bool throws_kind(NumericalError::Kind kind, auto&& fn) {
  try {
    fn();
  } catch (const NumericalError& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_CASE("iterate accumulates orbit and derivatives") {
  const IterateResult r = iterate(2, 0.0, 2.0, 3);
  CHECK(r.z == Complex(256));
  CHECK(r.dz == Complex(1024));
  CHECK(r.dc == Complex(289));
  CHECK(r.steps == 3);
  CHECK_FALSE(r.escaped);

  const IterateResult e = iterate(2, 0.0, 2.0, 10, 100.0);
  CHECK(e.escaped);
  CHECK(e.steps == 3);

  const IterateResult cube = iterate(3, Complex(0, 1), 0.0, 2);
  CHECK(std::abs(cube.z - brute_orbit(3, Complex(0, 1), 2)) < 1e-15);
  CHECK_THROWS_AS(iterate(2, 0.0, 0.0, -1), DomainError);
}

TEST_CASE("iterate derivatives match central differences") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 3;
    const Complex c(u(rng), u(rng)), z0(u(rng), u(rng));
    const int steps = 6;
    const double h = 1e-6;
    const IterateResult r = iterate(d, c, z0, steps);
    const Complex fz = (iterate(d, c, z0 + h, steps).z - iterate(d, c, z0 - h, steps).z) / (2 * h);
    const Complex fc = (iterate(d, c + h, z0, steps).z - iterate(d, c - h, z0, steps).z) / (2 * h);
    CHECK(std::abs(fz - r.dz) <= 1e-5 * (1 + std::abs(r.dz)));
    CHECK(std::abs(fc - r.dc) <= 1e-5 * (1 + std::abs(r.dc)));
  }
  CHECK(derivative_probe_error(7, 100) < 1e-6);
}

TEST_CASE("potential wrapper") {
  CHECK(Potential::from_value(1e-6).value() == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(Potential::from_log(-300).str() == "5.148200222412e-131");
  CHECK(Potential::from_value(1e-3).str() == "1.000000000000e-3");
  CHECK_THROWS_AS(Potential::from_value(0.0), DomainError);
  CHECK_THROWS_AS(Potential::from_value(-1.0), DomainError);
  CHECK(parameter_potential(2, 0.0) == 0.0);
  CHECK(parameter_potential(2, -2.0) == 0.0);
  CHECK(parameter_potential(2, 10.0) > 0.0);
}

TEST_CASE("dynamical rays of z^d are straight") {
  for (int d = 2; d <= 4; ++d) {
    for (const Angle& t : {A(0, 1), A(1, 7), A(5, 12), A(2, 3)}) {
      const double g = 1e-3;
      const RayTrace tr = trace_dynamical_ray(d, 0.0, t, Potential::from_value(g));
      const Complex expect = std::polar(std::exp(g), 2 * kPi * t.to_double());
      CHECK(std::abs(tr.endpoint().z - expect) < 1e-9);
      for (const RayPoint& p : tr.points)
        CHECK(std::abs(std::abs(p.z) - std::exp(std::exp(p.log_potential))) < 1e-9 * std::abs(p.z));
    }
  }
}

TEST_CASE("parameter ray points carry the requested potential") {
  for (auto [d, t] : std::vector<std::pair<int, Angle>>{{2, A(1, 3)}, {2, A(1, 5)}, {3, A(1, 26)}, {4, A(1, 6)}}) {
    const double g = 1e-2;
    const RayTrace tr = trace_parameter_ray(d, t, Potential::from_value(g));
    CHECK(tr.final_potential().value() == doctest::Approx(g).epsilon(1e-9));
    CHECK(parameter_potential(d, tr.endpoint().z) == doctest::Approx(g).epsilon(1e-6));
    for (const RayPoint& p : tr.points) CHECK(p.residual < 1e-9);
    for (std::size_t i = 1; i < tr.points.size(); ++i) CHECK(tr.points[i].log_potential < tr.points[i - 1].log_potential);
  }
}

TEST_CASE("parameter ray 0 runs along the real axis to 1/4") {
  const RayTrace tr = trace_parameter_ray(2, Angle(), Potential::from_value(1e-5));
  for (const RayPoint& p : tr.points) CHECK(std::abs(p.z.imag()) < 1e-9 * (1 + std::abs(p.z)));
  CHECK(tr.endpoint().z.real() > 0.25);
  CHECK(tr.endpoint().z.real() < 0.3);
}

TEST_CASE("cubic parameter rays respect the half-turn symmetry") {
  for (const Angle& t : {A(1, 26), A(1, 10), A(2, 9)}) {
    const Potential g = Potential::from_value(1e-3);
    const Complex a = trace_parameter_ray(3, t, g).endpoint().z;
    const Complex b = trace_parameter_ray(3, t + A(1, 2), g).endpoint().z;
    CHECK(std::abs(a + b) < 1e-9);
    const Complex conj = trace_parameter_ray(3, A(1, 1) - t, g).endpoint().z;
    CHECK(std::abs(std::conj(a) - conj) < 1e-9);
  }
}

TEST_CASE("rays approach a parabolic root only like 1/|log G|") {
  // distance from ray 1/3 to the root -3/4 shrinks roughly as 2/|log G|,
  // so shallow potentials stay far from the landing point.
  const Complex root(-0.75, 0.0);
  double previous = 1.0;
  for (double lg : {-10.0, -30.0, -100.0, -300.0}) {
    const double gap = std::abs(trace_parameter_ray(2, A(1, 3), Potential::from_log(lg)).endpoint().z - root);
    CHECK(gap < previous);
    CHECK(gap * std::abs(lg) > 1.0);
    CHECK(gap * std::abs(lg) < 4.0);
    previous = gap;
  }
}

TEST_CASE("trace CSV") {
  const RayTrace tr = trace_parameter_ray(2, A(1, 3), Potential::from_value(0.1));
  std::istringstream in(trace_csv(tr));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (rows == 0 && line.rfind("potential", 0) == 0) continue;
    CHECK(std::count(line.begin(), line.end(), ',') == 2);
    ++rows;
  }
  CHECK(rows == tr.points.size());
}

TEST_CASE("bad trace input") {
  CHECK_THROWS_AS(trace_parameter_ray(1, A(1, 3), Potential::from_value(0.1)), DomainError);
  CHECK_THROWS_AS(trace_parameter_ray(2, A(1, 3), Potential::from_value(1e6)), DomainError);
}

TEST_CASE("dynamical landing points") {
  // c = i: the ray of angle 1/6 lands on the critical value.
  CHECK(std::abs(dynamical_landing_point(2, Complex(0, 1), A(1, 6)) - Complex(0, 1)) < 1e-10);
  // c = -2: the ray of angle 0 lands on the fixed point 2, 1/2 on -2.
  CHECK(std::abs(dynamical_landing_point(2, -2.0, Angle()) - 2.0) < 1e-10);
  CHECK(std::abs(dynamical_landing_point(2, -2.0, A(1, 2)) + 2.0) < 1e-10);
  // c = 0: landing on the unit circle.
  CHECK(std::abs(dynamical_landing_point(2, 0.0, A(1, 3)) - std::polar(1.0, 2 * kPi / 3)) < 1e-10);
}

TEST_CASE("co-landing classes") {
  // basilica: 1/3 and 2/3 land together at the alpha fixed point
  auto cls = coland_classes(2, -1.0, {A(1, 3), A(2, 3)}, 1e-6);
  REQUIRE(cls.size() == 1);
  CHECK(cls[0].size() == 2);
  const Complex alpha = (1.0 - std::sqrt(Complex(5))) / 2.0;
  CHECK(std::abs(dynamical_landing_point(2, -1.0, A(1, 3)) - alpha) < 1e-10);

  cls = coland_classes(2, 0.0, {A(1, 3), A(2, 3)}, 1e-6);
  CHECK(cls.size() == 2);

  // rabbit: the three period-3 rays 1/7, 2/7, 4/7 meet at alpha
  const Complex rabbit(-0.12256116687665362, 0.7448617666197442);
  cls = coland_classes(2, rabbit, exact_period_angles(2, 3), 1e-6, {}, 4);
  std::size_t triples = 0;
  for (const auto& c : cls)
    if (c == std::vector<Angle>{A(1, 7), A(2, 7), A(4, 7)}) ++triples;
  CHECK(triples == 1);
}

TEST_CASE("parabolic solver closed forms") {
  SolveResult s = solve_parabolic(2, Complex(-0.74, 0.01), 2);
  CHECK(std::abs(s.parameter - Complex(-0.75)) < 1e-12);
  CHECK(s.orbit_period == 1);
  CHECK(std::abs(s.multiplier + 1.0) < 1e-10);

  s = solve_parabolic(2, 0.26, 1);
  CHECK(std::abs(s.parameter - Complex(0.25)) < 1e-7);
  CHECK(s.orbit_period == 1);

  const double cubic = 2 / (3 * std::sqrt(3.0));
  CHECK(std::abs(solve_parabolic(3, 0.37, 1).parameter - cubic) < 1e-7);
  CHECK(std::abs(solve_parabolic(3, -0.37, 1).parameter + cubic) < 1e-7);

  const Complex lambda = std::polar(1.0, 2 * kPi / 3);
  const Complex satellite = lambda / 2.0 - lambda * lambda / 4.0;
  s = solve_parabolic(2, satellite + Complex(0.01, 0.01), 3);
  CHECK(std::abs(s.parameter - satellite) < 1e-10);
  CHECK(s.orbit_period == 1);
  CHECK(s.ray_period == 3);

  s = solve_parabolic(2, -1.76, 3);
  CHECK(std::abs(s.parameter - Complex(-1.75)) < 1e-7);
  CHECK(s.orbit_period == 3);
  CHECK(std::abs(s.multiplier - 1.0) < 1e-6);
  CHECK(std::abs(iterate(2, s.parameter, s.orbit_point, 3).z - s.orbit_point) < 1e-7);
}

TEST_CASE("parabolic solver errors") {
  SolveConfig cfg;
  cfg.deflate = {Complex(-0.75)};
  CHECK(throws_kind(NumericalError::Kind::Deflated, [&] { solve_parabolic(2, -0.75, 2, {}, cfg); }));
  CHECK(throws_kind(NumericalError::Kind::LowerPeriod, [&] { solve_parabolic(2, -0.75, 2, 2); }));
  CHECK_THROWS_AS(solve_parabolic(2, -0.75, 0), DomainError);
  CHECK_THROWS_AS(solve_parabolic(2, -0.75, 4, 3), DomainError);
}

TEST_CASE("Misiurewicz solver") {
  SolveResult s = solve_misiurewicz(2, -1.9, 1, 1);
  CHECK(std::abs(s.parameter + 2.0) < 1e-12);
  CHECK(s.kind == SolveKind::Misiurewicz);

  s = solve_misiurewicz(2, Complex(0.05, 0.95), 1, 2);
  CHECK(std::abs(s.parameter - Complex(0, 1)) < 1e-12);

  // the ray of angle 1/4: critical value lands on the beta fixed point after two steps
  const RayTrace tr = trace_parameter_ray(2, A(1, 4), Potential::from_value(1e-6));
  s = solve_misiurewicz(2, tr.endpoint().z, 2, 1);
  CHECK(std::abs(s.parameter - Complex(-0.228155493653962, 1.115142508039937)) < 1e-9);
  CHECK(std::abs(brute_orbit(2, s.parameter, 4) - brute_orbit(2, s.parameter, 3)) < 1e-12);
  CHECK(std::abs(brute_orbit(2, s.parameter, 3) - brute_orbit(2, s.parameter, 2)) > 1e-3);
  CHECK(std::abs(tr.endpoint().z - s.parameter) < 1e-3);
}

TEST_CASE("rays 9/56, 11/56 and 15/56 share a Misiurewicz landing point") {
  std::vector<Complex> landed;
  for (long long p : {9, 11, 15}) {
    const RayTrace tr = trace_parameter_ray(2, A(p, 56), Potential::from_value(1e-6));
    landed.push_back(solve_misiurewicz(2, tr.endpoint().z, 3, 1).parameter);
  }
  CHECK(std::abs(landed[0] - landed[1]) < 1e-12);
  CHECK(std::abs(landed[0] - landed[2]) < 1e-12);
}

TEST_CASE("Misiurewicz solver errors") {
  SolveConfig frozen;
  frozen.max_iter = 0;
  CHECK(throws_kind(NumericalError::Kind::LowerPeriod, [&] { solve_misiurewicz(2, -2.0, 1, 2, frozen); }));
  CHECK(throws_kind(NumericalError::Kind::Deflated, [&] { solve_misiurewicz(2, -2.0, 2, 1, frozen); }));
  SolveConfig deflate;
  deflate.deflate = {Complex(-2.0)};
  CHECK(throws_kind(NumericalError::Kind::Deflated, [&] { solve_misiurewicz(2, -2.0, 1, 1, deflate); }));
  CHECK_THROWS_AS(solve_misiurewicz(2, -2.0, 0, 1), DomainError);
}

TEST_CASE("multipliers") {
  CHECK(std::abs(multiplier(2, 0.0, 0.1, 1)) < 1e-12);
  CHECK(std::abs(multiplier(2, -0.75, -0.49, 1) + 1.0) < 1e-6);
  CHECK(std::abs(multiplier(2, -1.0, 0.05, 2)) < 1e-12);
  // repelling fixed point of the basilica
  const Complex beta = (1.0 + std::sqrt(Complex(5))) / 2.0;
  CHECK(std::abs(multiplier(2, -1.0, 1.6, 1) - 2.0 * beta) < 1e-10);
  CHECK(throws_kind(NumericalError::Kind::NotPeriodic, [] { multiplier(2, 10.0, 50.0, 1); }));
}
