#pragma once

#include "multibrot/circle.hpp"

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace multibrot {

using Complex = std::complex<double>;

/// A trace or solve that could not meet its tolerances.
class NumericalError : public std::runtime_error {
 public:
  enum class Kind { Divergence, LowerPeriod, Deflated, NotPeriodic };
  NumericalError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

Complex ipow(Complex z, int k);

struct IterateResult {
  Complex z;   // f_c^steps(z0)
  Complex dz;  // derivative with respect to z0
  Complex dc;  // derivative with respect to c
  int steps = 0;
  bool escaped = false;
};

/// f_c^steps(z0) for f_c(z) = z^d + c with both first-derivative accumulators.
/// Stops early, flagged as escaped, once |z| exceeds `bailout` or overflows.
IterateResult iterate(int d, Complex c, Complex z0, int steps, double bailout = 1e100);

/// Boettcher potential kept as its logarithm; deep potentials stay representable.
struct Potential {
  double log_value = 0.0;

  static Potential from_value(double v);
  static Potential from_log(double lv) { return {lv}; }
  double value() const;
  std::string str() const;
};

/// Escape potential of c (parameter plane), 0 when the orbit stays bounded.
double parameter_potential(int d, Complex c, int max_iter = 100000);

struct ParameterPlane {
  bool operator==(const ParameterPlane&) const = default;
};
struct DynamicalPlane {
  Complex c;
  bool operator==(const DynamicalPlane&) const = default;
};
using Plane = std::variant<ParameterPlane, DynamicalPlane>;

struct RayPoint {
  double log_potential = 0.0;
  Complex z;
  int depth = 0;          // iterate count used for the Newton target
  double residual = 0.0;  // |f^depth(z) - target| / |target|
};

struct RayTrace {
  int degree = 2;
  Plane plane = ParameterPlane{};
  Angle angle;
  std::vector<RayPoint> points;  // decreasing potential

  const RayPoint& endpoint() const { return points.back(); }
  Potential final_potential() const { return Potential::from_log(points.back().log_potential); }
};

struct TraceConfig {
  double start_radius = 1e4;
  int steps_per_halving = 8;
  double newton_tol = 1e-12;
  int max_newton = 30;
  int max_refinements = 24;  // successive step halvings before giving up
  double max_step_growth = 8.0;
  // End the trace at the deepest resolvable point instead of throwing once
  // double precision runs out (rays landing on a Cantor Julia set).
  bool stop_at_limit = false;
};

RayTrace trace_parameter_ray(int d, const Angle& theta, Potential target, const TraceConfig& cfg = {});
RayTrace trace_dynamical_ray(int d, Complex c, const Angle& theta, Potential target, const TraceConfig& cfg = {});

/// "potential,re,im" per point.
std::string trace_csv(const RayTrace& t);

struct LandingConfig {
  Potential depth = Potential::from_value(1e-12);
  bool polish = true;
  double polish_radius = 1e-3;
  TraceConfig trace = [] {
    TraceConfig t;
    t.stop_at_limit = true;
    return t;
  }();
};

/// Traces the dynamical ray deep and, for periodic and pre-periodic angles,
/// Newton-polishes the endpoint onto the (pre-)periodic landing point.
Complex dynamical_landing_point(int d, Complex c, const Angle& theta, const LandingConfig& cfg = {});

/// Groups angles whose dynamical rays land within `tol` of each other.
std::vector<std::vector<Angle>> coland_classes(int d, Complex c, const std::vector<Angle>& angles, double tol,
                                               const LandingConfig& cfg = {}, unsigned threads = 1);

enum class SolveKind { Parabolic, Misiurewicz };

struct SolveResult {
  SolveKind kind = SolveKind::Parabolic;
  Complex parameter;
  double residual = 0.0;
  int iterations = 0;
  // Parabolic: orbit period k, ray period n, multiplier of the k-cycle.
  int orbit_period = 0;
  int ray_period = 0;
  Complex multiplier;
  Complex orbit_point;
  // Misiurewicz: critical value orbit pre-period and period.
  int preperiod = 0;
  int period = 0;
};

struct SolveConfig {
  double residual_tol = 1e-10;
  int max_iter = 200;
  double period_tol = 1e-7;
  std::vector<Complex> deflate;  // known solutions to reject
  double deflate_radius = 1e-7;
};

/// Newton on {f^k(z) = z, (f^k)'(z) = w} with w a primitive (n/k)-th root of
/// unity. With `orbit_period` unset every k | n is tried. Returns the valid
/// solution nearest the seed.
SolveResult solve_parabolic(int d, Complex seed, int ray_period, std::optional<int> orbit_period = {},
                            const SolveConfig& cfg = {});

/// Newton on f_c^(l+n)(c) - f_c^l(c) with lower pre-periods and proper
/// divisor periods deflated. `period` is the period of the critical orbit.
SolveResult solve_misiurewicz(int d, Complex seed, int preperiod, int period, const SolveConfig& cfg = {});

/// Multiplier of the n-cycle through (a refinement of) z.
Complex multiplier(int d, Complex c, Complex z, int n);

}  // namespace multibrot
