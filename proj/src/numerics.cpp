#include "multibrot/numerics.hpp"

#include "multibrot/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace multibrot {

Complex ipow(Complex z, int k) {
  Complex r = 1.0;
  while (k > 0) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

namespace {
bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
}  // namespace

IterateResult iterate(int d, Complex c, Complex z0, int steps, double bailout) {
  require_degree(d);
  if (steps < 0) throw DomainError("iterate: negative step count");
  IterateResult r{z0, 1.0, 0.0, 0, false};
  for (int i = 0; i < steps; ++i) {
    const Complex zd1 = ipow(r.z, d - 1);
    const Complex slope = static_cast<double>(d) * zd1;
    r.dz *= slope;
    r.dc = slope * r.dc + 1.0;
    r.z = zd1 * r.z + c;
    r.steps = i + 1;
    if (!finite(r.z) || std::abs(r.z) > bailout) {
      r.escaped = true;
      break;
    }
  }
  return r;
}

Potential Potential::from_value(double v) {
  if (!(v > 0)) throw DomainError("potential must be positive");
  return {std::log(v)};
}

double Potential::value() const { return std::exp(log_value); }

std::string Potential::str() const {
  const double l10 = log_value / std::numbers::ln10;
  double e = std::floor(l10);
  double mant = std::pow(10.0, l10 - e);
  if (mant >= 9.9999999999995) {
    mant /= 10;
    e += 1;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12fe%+d", mant, static_cast<int>(e));
  return buf;
}

double parameter_potential(int d, Complex c, int max_iter) {
  Complex z = 0;
  double scale = 1.0;
  for (int i = 0; i < max_iter; ++i) {
    z = ipow(z, d) + c;
    if (std::abs(z) > 1e10) return std::log(std::abs(z)) * scale;
    scale /= d;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Ray tracing.
//
// The point at potential s on the ray of angle t solves
//   F_m(x) = exp(d^m (s + 2 pi i t))
// where F_m is f_c^m (dynamical plane) or c -> f_c^m(c) (parameter plane) and
// m is the least depth with s d^m >= log(start_radius). Potential decreases by
// 2^(-1/steps_per_halving) per step, each step Newton-corrected from the last.

namespace {

/// frac(d^m t) as a double for any m, read off the exact orbit.
class AngleOrbit {
 public:
  AngleOrbit(const Angle& t, int d) {
    OrbitData od = orbit_data(t, d);
    Angle x = t.is_full_turn() ? Angle() : t;
    for (int i = 0; i < od.preperiod; ++i, x = map_d(x, d)) prefix_.push_back(x.to_double());
    for (const Angle& a : od.orbit) cycle_.push_back(a.to_double());
  }
  double at(long m) const {
    if (m < static_cast<long>(prefix_.size())) return prefix_[m];
    return cycle_[(m - prefix_.size()) % cycle_.size()];
  }

 private:
  std::vector<double> prefix_;
  std::vector<double> cycle_;
};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Evaluation {
  Complex value;
  Complex slope;
};

template <class Eval>
RayTrace trace_core(int d, Plane plane, const Angle& theta, Potential target, const TraceConfig& cfg, Eval&& eval) {
  require_degree(d);
  if (cfg.start_radius <= 2 || cfg.steps_per_halving < 1) throw DomainError("invalid trace configuration");
  const double log_outer = std::log(std::log(cfg.start_radius));
  if (!std::isfinite(target.log_value) || target.log_value >= log_outer)
    throw DomainError("target potential " + target.str() + " is not below the starting potential");
  const double log_d = std::log(static_cast<double>(d));
  const AngleOrbit orbit(theta, d);
  const double two_pi = 2 * std::numbers::pi;

  auto depth_for = [&](double lp) {
    double m = std::ceil((log_outer - lp) / log_d - 1e-12);
    return static_cast<int>(std::max(0.0, m));
  };
  auto target_for = [&](double lp, int m) {
    const double radius_log = std::exp(lp + m * log_d);
    return std::polar(std::exp(radius_log), two_pi * orbit.at(m));
  };

  RayTrace trace;
  trace.degree = d;
  trace.plane = plane;
  trace.angle = theta;
  if (target.log_value > log_outer) target.log_value = log_outer;

  Complex x = target_for(log_outer, 0);
  trace.points.push_back({log_outer, x, 0, 0.0});
  double lp = log_outer;
  const double base_step = std::numbers::ln2 / cfg.steps_per_halving;
  double last_move = std::numeric_limits<double>::infinity();

  while (lp > target.log_value) {
    double h = base_step;
    bool accepted = false;
    for (int attempt = 0; attempt <= cfg.max_refinements && !accepted; ++attempt, h /= 2) {
      const double next_lp = std::max(lp - h, target.log_value);
      const int m = depth_for(next_lp);
      const Complex w = target_for(next_lp, m);
      Complex y = x;
      bool converged = false;
      Evaluation e{};
      for (int it = 0; it < cfg.max_newton; ++it) {
        e = eval(y, m);
        if (!finite(e.value) || !finite(e.slope) || e.slope == Complex(0)) break;
        const Complex delta = (e.value - w) / e.slope;
        y -= delta;
        if (!finite(y)) break;
        // Relative to the step just taken, floored at what double precision
        // can resolve; near the boundary f^m is too ill-conditioned for an
        // absolute tolerance to mean anything.
        const double tol = std::max(cfg.newton_tol * std::abs(y - x), 8 * kEps * (1 + std::abs(y)));
        if (std::abs(delta) <= tol) {
          converged = true;
          break;
        }
      }
      if (!converged) continue;
      const double move = std::abs(y - x);
      // A jump far beyond the previous step means Newton switched branches.
      const double floor = 1e-9 * (1 + std::abs(x));
      if (std::isfinite(last_move) && move > cfg.max_step_growth * last_move + floor) continue;
      e = eval(y, m);
      trace.points.push_back({next_lp, y, m, std::abs(e.value - w) / std::abs(w)});
      last_move = std::max(move, std::numeric_limits<double>::min());
      x = y;
      lp = next_lp;
      accepted = true;
    }
    if (!accepted) {
      if (cfg.stop_at_limit && trace.points.size() > 1) break;
      throw NumericalError(NumericalError::Kind::Divergence,
                           "ray " + theta.str() + ": Newton failed below potential " + Potential::from_log(lp).str() +
                               " (possible pre-critical collision)");
    }
  }
  return trace;
}

}  // namespace

RayTrace trace_parameter_ray(int d, const Angle& theta, Potential target, const TraceConfig& cfg) {
  return trace_core(d, ParameterPlane{}, theta, target, cfg, [d](Complex c, int m) {
    Complex z = c, dc = 1.0;
    for (int i = 0; i < m; ++i) {
      const Complex zd1 = ipow(z, d - 1);
      dc = static_cast<double>(d) * zd1 * dc + 1.0;
      z = zd1 * z + c;
    }
    return Evaluation{z, dc};
  });
}

RayTrace trace_dynamical_ray(int d, Complex c, const Angle& theta, Potential target, const TraceConfig& cfg) {
  return trace_core(d, DynamicalPlane{c}, theta, target, cfg, [d, c](Complex z, int m) {
    Complex dz = 1.0;
    for (int i = 0; i < m; ++i) {
      const Complex zd1 = ipow(z, d - 1);
      dz *= static_cast<double>(d) * zd1;
      z = zd1 * z + c;
    }
    return Evaluation{z, dz};
  });
}

std::string trace_csv(const RayTrace& t) {
  std::ostringstream out;
  char buf[96];
  for (const RayPoint& p : t.points) {
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", p.z.real(), p.z.imag());
    out << Potential::from_log(p.log_potential).str() << buf;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Landing points and co-landing.

namespace {

/// Newton on f^(l+n)(z) - f^l(z) at fixed c.
std::optional<Complex> polish_preperiodic(int d, Complex c, Complex z, int l, int n) {
  for (int it = 0; it < 100; ++it) {
    Complex w = z, dw = 1.0, wl = z, dwl = 1.0;
    for (int i = 0; i < l + n; ++i) {
      if (i == l) {
        wl = w;
        dwl = dw;
      }
      const Complex wd1 = ipow(w, d - 1);
      dw *= static_cast<double>(d) * wd1;
      w = wd1 * w + c;
    }
    if (l == 0) {
      wl = z;
      dwl = 1.0;
    }
    const Complex g = w - wl, dg = dw - dwl;
    if (!finite(g) || dg == Complex(0)) return std::nullopt;
    const Complex delta = g / dg;
    z -= delta;
    if (!finite(z)) return std::nullopt;
    if (std::abs(delta) <= 1e-15 * (1 + std::abs(z))) return z;
  }
  return std::nullopt;
}

}  // namespace

Complex dynamical_landing_point(int d, Complex c, const Angle& theta, const LandingConfig& cfg) {
  RayTrace t = trace_dynamical_ray(d, c, theta, cfg.depth, cfg.trace);
  if (!cfg.polish) return t.endpoint().z;
  const OrbitData od = orbit_data(theta, d);
  // Rays approach weakly repelling landing points slowly, so an endpoint that
  // is still outside the polish radius is retraced deeper a few times.
  double lp = cfg.depth.log_value;
  for (int attempt = 0;; ++attempt) {
    const Complex end = t.endpoint().z;
    auto polished = polish_preperiodic(d, c, end, od.preperiod, od.period);
    if (polished && std::abs(*polished - end) <= cfg.polish_radius) return *polished;
    if (attempt == 3 || t.endpoint().log_potential > lp + 1e-9) return end;  // precision limit reached
    lp = 4 * std::min(lp, -1.0);
    t = trace_dynamical_ray(d, c, theta, Potential::from_log(lp), cfg.trace);
  }
}

std::vector<std::vector<Angle>> coland_classes(int d, Complex c, const std::vector<Angle>& angles, double tol,
                                               const LandingConfig& cfg, unsigned threads) {
  std::vector<Complex> land(angles.size());
  parallel_for(angles.size(), threads, [&](std::size_t i) { land[i] = dynamical_landing_point(d, c, angles[i], cfg); });

  std::vector<std::size_t> parent(angles.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < angles.size(); ++i)
    for (std::size_t j = i + 1; j < angles.size(); ++j)
      if (std::abs(land[i] - land[j]) < tol) parent[find(i)] = find(j);

  std::vector<std::vector<Angle>> classes;
  std::vector<std::optional<std::size_t>> slot(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const std::size_t r = find(i);
    if (!slot[r]) {
      slot[r] = classes.size();
      classes.emplace_back();
    }
    classes[*slot[r]].push_back(angles[i]);
  }
  for (auto& cls : classes) cls = sorted_unique(std::move(cls));
  std::sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return classes;
}

// ---------------------------------------------------------------------------
// Parabolic parameters.

namespace {

struct CycleJet {
  Complex z;   // f^k(z0)
  Complex a;   // d/dz
  Complex b;   // d/dc
  Complex aa;  // d2/dz2
  Complex ab;  // d2/dzdc
};

CycleJet cycle_jet(int d, Complex c, Complex z0, int k) {
  CycleJet j{z0, 1.0, 0.0, 0.0, 0.0};
  const double dd = d;
  for (int i = 0; i < k; ++i) {
    const Complex zd2 = d >= 2 ? ipow(j.z, d - 2) : Complex(1);
    const Complex zd1 = zd2 * j.z;
    const Complex slope = dd * zd1;
    const Complex curve = dd * (dd - 1) * zd2;
    const Complex a = slope * j.a;
    const Complex b = slope * j.b + 1.0;
    const Complex aa = curve * j.a * j.a + slope * j.aa;
    const Complex ab = curve * j.a * j.b + slope * j.ab;
    j.z = zd1 * j.z + c;
    j.a = a;
    j.b = b;
    j.aa = aa;
    j.ab = ab;
  }
  return j;
}

/// Critical-orbit point where the orbit nearly closes up after k steps.
Complex lingering_point(int d, Complex c, int k) {
  std::vector<Complex> orbit{0.0};
  for (int i = 0; i < 50000; ++i) {
    Complex z = ipow(orbit.back(), d) + c;
    if (!finite(z) || std::abs(z) > 1e3) break;
    orbit.push_back(z);
  }
  Complex best = orbit.back();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + k < orbit.size(); ++j) {
    double g = std::abs(orbit[j + k] - orbit[j]);
    if (g < gap) {
      gap = g;
      best = orbit[j];
    }
  }
  return best;
}

/// z lies on, or has collapsed onto, a j-cycle for a proper divisor j of k.
/// Near a collision Newton on the k-system only reaches ~sqrt(eps), so the
/// j-cycle is also refined and accepted when it satisfies the k-system itself.
bool proper_subperiod(int d, Complex c, Complex z, int k, Complex omega, double tol) {
  for (int j : divisors(k)) {
    if (j == k) continue;
    if (std::abs(iterate(d, c, z, j).z - z) < tol * (1 + std::abs(z))) return true;
    Complex w = z;
    for (int it = 0; it < 60; ++it) {
      const IterateResult r = iterate(d, c, w, j);
      if (r.escaped || r.dz == Complex(1)) break;
      const Complex delta = (r.z - w) / (r.dz - 1.0);
      w -= delta;
      if (!finite(w) || std::abs(delta) <= 1e-15 * (1 + std::abs(w))) break;
    }
    const IterateResult r = iterate(d, c, w, j);
    if (!finite(w) || std::abs(r.z - w) > 1e-10 * (1 + std::abs(w))) continue;
    if (std::abs(w - z) < 1e-3 * (1 + std::abs(z)) && std::abs(ipow(r.dz, k / j) - omega) < 1e-3) return true;
  }
  return false;
}

std::vector<int> primitive_orders(int r) {
  std::vector<int> out;
  for (int q = 0; q < r; ++q)
    if (std::gcd(q, r) == 1) out.push_back(q);
  return out;
}

}  // namespace

SolveResult solve_parabolic(int d, Complex seed, int ray_period, std::optional<int> orbit_period,
                            const SolveConfig& cfg) {
  require_degree(d);
  if (ray_period < 1) throw DomainError("ray period must be positive");
  std::vector<int> periods;
  if (orbit_period) {
    if (*orbit_period < 1 || ray_period % *orbit_period != 0)
      throw DomainError("orbit period must divide the ray period");
    periods.push_back(*orbit_period);
  } else {
    periods = divisors(ray_period);
  }

  std::vector<SolveResult> found;
  bool saw_lower = false, saw_deflated = false;
  for (int k : periods) {
    const int r = ray_period / k;
    const Complex z_seed = lingering_point(d, seed, k);
    for (int q : primitive_orders(r)) {
      const Complex omega = std::polar(1.0, 2 * std::numbers::pi * q / r);
      Complex c = seed, z = z_seed;
      bool ok = false;
      int it = 0;
      for (; it < cfg.max_iter; ++it) {
        CycleJet j = cycle_jet(d, c, z, k);
        const Complex f1 = j.z - z, f2 = j.a - omega;
        const Complex j11 = j.a - 1.0, j12 = j.b, j21 = j.aa, j22 = j.ab;
        const Complex det = j11 * j22 - j12 * j21;
        if (!finite(det) || det == Complex(0)) break;
        const Complex dz = -(f1 * j22 - j12 * f2) / det;
        const Complex dc = -(j11 * f2 - j21 * f1) / det;
        z += dz;
        c += dc;
        if (!finite(z) || !finite(c)) break;
        if (std::abs(dz) + std::abs(dc) <= 1e-15 * (1 + std::abs(z) + std::abs(c))) {
          ok = true;
          break;
        }
      }
      CycleJet j = cycle_jet(d, c, z, k);
      const double residual = std::max(std::abs(j.z - z), std::abs(j.a - omega));
      if (!ok && !(residual < cfg.residual_tol)) continue;
      if (!(residual < cfg.residual_tol)) continue;
      if (proper_subperiod(d, c, z, k, omega, cfg.period_tol)) {
        saw_lower = true;
        continue;
      }
      if (std::any_of(cfg.deflate.begin(), cfg.deflate.end(),
                      [&](Complex known) { return std::abs(known - c) < cfg.deflate_radius; })) {
        saw_deflated = true;
        continue;
      }
      SolveResult s;
      s.kind = SolveKind::Parabolic;
      s.parameter = c;
      s.residual = residual;
      s.iterations = it;
      s.orbit_period = k;
      s.ray_period = ray_period;
      s.multiplier = j.a;
      s.orbit_point = z;
      found.push_back(s);
    }
  }
  if (!found.empty()) {
    auto nearer = [&](const SolveResult& a, const SolveResult& b) {
      return std::abs(a.parameter - seed) < std::abs(b.parameter - seed);
    };
    const SolveResult nearest = *std::min_element(found.begin(), found.end(), nearer);
    // At a satellite root the n-cycle collapses onto the k-cycle, so the
    // n-system also "converges" there; the smallest k names the real orbit.
    std::optional<SolveResult> best;
    for (const SolveResult& s : found) {
      if (std::abs(s.parameter - nearest.parameter) > 1e-6) continue;
      if (!best || s.orbit_period < best->orbit_period) best = s;
    }
    return *best;
  }
  if (saw_deflated)
    throw NumericalError(NumericalError::Kind::Deflated, "parabolic Newton converged only to deflated solutions");
  if (saw_lower)
    throw NumericalError(NumericalError::Kind::LowerPeriod,
                         "parabolic Newton converged to a lower-period parabolic orbit");
  throw NumericalError(NumericalError::Kind::Divergence, "parabolic Newton diverged");
}

// ---------------------------------------------------------------------------
// Misiurewicz parameters.

namespace {

/// w_i = f_c^i(0) and dw_i/dc, i = 0..count.
void critical_orbit(int d, Complex c, int count, std::vector<Complex>& w, std::vector<Complex>& dw) {
  w.assign(count + 1, 0.0);
  dw.assign(count + 1, 0.0);
  for (int i = 0; i < count; ++i) {
    const Complex zd1 = ipow(w[i], d - 1);
    dw[i + 1] = static_cast<double>(d) * zd1 * dw[i] + 1.0;
    w[i + 1] = zd1 * w[i] + c;
  }
}

}  // namespace

SolveResult solve_misiurewicz(int d, Complex seed, int preperiod, int period, const SolveConfig& cfg) {
  require_degree(d);
  if (preperiod < 1 || period < 1) throw DomainError("Misiurewicz solve needs pre-period >= 1 and period >= 1");
  const int l = preperiod, n = period;
  std::vector<Complex> w, dw;
  Complex c = seed;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    critical_orbit(d, c, l + n + 1, w, dw);
    const Complex g = w[l + n + 1] - w[l + 1];
    const Complex dg = dw[l + n + 1] - dw[l + 1];
    if (g == Complex(0)) break;
    Complex log_slope = dg / g;
    const Complex q = w[l + n] - w[l];
    if (q != Complex(0)) log_slope -= (dw[l + n] - dw[l]) / q;
    for (int k : divisors(n)) {
      if (k == n) continue;
      const Complex qk = w[l + 1 + k] - w[l + 1];
      if (qk != Complex(0)) log_slope -= (dw[l + 1 + k] - dw[l + 1]) / qk;
    }
    if (!finite(log_slope) || log_slope == Complex(0)) break;
    const Complex delta = 1.0 / log_slope;
    c -= delta;
    if (!finite(c)) throw NumericalError(NumericalError::Kind::Divergence, "Misiurewicz Newton diverged");
    if (std::abs(delta) <= 1e-15 * (1 + std::abs(c))) break;
  }
  critical_orbit(d, c, l + n + 1, w, dw);
  const double residual = std::abs(w[l + n + 1] - w[l + 1]);
  if (!(residual < cfg.residual_tol))
    throw NumericalError(NumericalError::Kind::Divergence,
                         "Misiurewicz Newton did not converge (residual " + std::to_string(residual) + ")");
  const double scale = 1 + std::abs(w[l + 1]);
  if (std::abs(w[l + n] - w[l]) < cfg.period_tol * scale)
    throw NumericalError(NumericalError::Kind::Deflated, "converged to a smaller pre-period");
  for (int k : divisors(n)) {
    if (k != n && std::abs(w[l + 1 + k] - w[l + 1]) < cfg.period_tol * scale)
      throw NumericalError(NumericalError::Kind::LowerPeriod, "converged to a critical orbit of period " + std::to_string(k));
  }
  if (std::any_of(cfg.deflate.begin(), cfg.deflate.end(),
                  [&](Complex known) { return std::abs(known - c) < cfg.deflate_radius; }))
    throw NumericalError(NumericalError::Kind::Deflated, "converged to a deflated solution");

  SolveResult s;
  s.kind = SolveKind::Misiurewicz;
  s.parameter = c;
  s.residual = residual;
  s.iterations = it;
  s.preperiod = l;
  s.period = n;
  s.orbit_point = w[l + 1];
  return s;
}

Complex multiplier(int d, Complex c, Complex z, int n) {
  require_degree(d);
  if (n < 1) throw DomainError("multiplier: period must be positive");
  for (int it = 0; it < 400; ++it) {
    IterateResult r = iterate(d, c, z, n);
    if (r.escaped) throw NumericalError(NumericalError::Kind::NotPeriodic, "multiplier: orbit escapes");
    const Complex g = r.z - z, dg = r.dz - 1.0;
    if (g == Complex(0) || dg == Complex(0)) break;
    const Complex delta = g / dg;
    z -= delta;
    if (std::abs(delta) <= 1e-16 * (1 + std::abs(z))) break;
  }
  IterateResult r = iterate(d, c, z, n);
  if (std::abs(r.z - z) > 1e-8 * (1 + std::abs(z)))
    throw NumericalError(NumericalError::Kind::NotPeriodic, "multiplier: no cycle of that period near the seed");
  return r.dz;
}

}  // namespace multibrot
