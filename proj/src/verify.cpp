#include "multibrot/verify.hpp"

#include "multibrot/cli.hpp"
#include "multibrot/kneading.hpp"
#include "multibrot/parallel.hpp"
#include "multibrot/render.hpp"
#include "multibrot/serialize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

namespace multibrot {

std::string format_check(const CheckResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "%s  %-4s %-34s (%.2f s)", r.passed ? "PASS" : "FAIL", r.id.c_str(), r.name.c_str(),
                r.seconds);
  return std::string(head) + "  " + r.detail;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string join(const std::vector<Angle>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s + "}";
}

void note(const VerifyOptions& opts, const std::string& line) {
  if (opts.progress) opts.progress(line);
}

/// Runs `body` (which fills passed/detail) and times it.
template <class F>
CheckResult timed(std::string id, std::string name, F&& body) {
  CheckResult r{std::move(id), std::move(name), false, "", 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail += std::string(r.detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

void require_runtime(CheckResult& r, double limit, double seconds) {
  if (seconds > limit) {
    r.passed = false;
    r.detail += "; runtime " + fmt(seconds) + " s exceeds " + fmt(limit) + " s";
  }
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Angle midpoint(const Angle& a, const Angle& b) {
  Rational lo = a.value(), hi = b.value();
  if (hi <= lo) hi += 1;
  return angle_from_rational((lo + hi) / 2);
}

}  // namespace

// ---------------------------------------------------------------------------

OracleReport oracle_equivalence(int d, int n, double base_potential, double tol, unsigned threads) {
  PeriodicGrouper grouper(d, n);
  const auto& angles = grouper.angles();
  const std::size_t count = angles.size();
  OracleReport rep;
  rep.bases = count;
  rep.angles = count;

  // Gap g runs from angles[g] to angles[g + 1] (cyclically).
  std::vector<std::vector<std::vector<Angle>>> numeric(count), exact(count);
  parallel_for(count, threads, [&](std::size_t g) {
    const Angle base = midpoint(angles[g], angles[(g + 1) % count]);
    exact[g] = itinerary_partition(base, angles, d);
    const Complex c = trace_parameter_ray(d, base, Potential::from_value(base_potential)).endpoint().z;
    numeric[g] = coland_classes(d, c, angles, tol);
  });

  auto mismatch = [&](const std::string& what) {
    if (rep.mismatches++ == 0) rep.first_mismatch = what;
  };
  auto class_of = [](const std::vector<std::vector<Angle>>& classes, const Angle& a) {
    for (const auto& cl : classes)
      if (std::binary_search(cl.begin(), cl.end(), a)) return cl;
    return std::vector<Angle>{};
  };

  for (std::size_t g = 0; g < count; ++g) {
    if (numeric[g] != exact[g])
      mismatch("base " + midpoint(angles[g], angles[(g + 1) % count]).str() + ": numeric partition has " +
               std::to_string(numeric[g].size()) + " classes, exact has " + std::to_string(exact[g].size()));
  }
  for (std::size_t i = 0; i < count; ++i) {
    const OrbitPortrait p = grouper.portrait_of(i);
    const Angle& theta = angles[i];
    std::vector<Angle> expected{theta};
    std::size_t gap = i;
    if (!p.trivial()) {
      const CharacteristicData ch = characteristic_data(p);
      for (const auto& s : p.sets)
        if (std::binary_search(s.begin(), s.end(), theta)) expected = s;
      // t- opens the gap above it, t+ closes the gap below it.
      gap = theta == ch.minus ? i : (i + count - 1) % count;
    }
    const auto got = class_of(numeric[gap], theta);
    if (got != expected) mismatch("angle " + theta.str() + ": traced class " + join(got) + ", portrait " + join(expected));
  }
  return rep;
}

LandingReport landing_consistency(int d, int n, Potential potential, Potential seed_potential, unsigned threads) {
  const Census cs = census(d, n);
  LandingReport rep;
  rep.records.resize(cs.components.size());
  std::vector<std::string> errors(cs.components.size());
  parallel_for(cs.components.size(), threads, [&](std::size_t i) {
    const ComponentRecord& comp = cs.components[i];
    LandingRecord& rec = rep.records[i];
    rec.minus = comp.root_minus;
    rec.plus = comp.root_plus;
    rec.expected_orbit_period = comp.portrait.orbit_period;
    try {
      rec.end_minus = trace_parameter_ray(d, rec.minus, potential).endpoint().z;
      rec.end_plus = trace_parameter_ray(d, rec.plus, potential).endpoint().z;
      const Complex deep_minus = trace_parameter_ray(d, rec.minus, seed_potential).endpoint().z;
      const Complex deep_plus = trace_parameter_ray(d, rec.plus, seed_potential).endpoint().z;
      const SolveResult s = solve_parabolic(d, deep_minus, n);
      rec.root = s.parameter;
      rec.residual = s.residual;
      rec.orbit_period = s.orbit_period;
      rec.pair_gap = std::abs(rec.end_minus - rec.end_plus);
      rec.root_gap = std::max(std::abs(rec.end_minus - rec.root), std::abs(rec.end_plus - rec.root));
      rec.deep_pair_gap = std::abs(deep_minus - deep_plus);
      rec.deep_root_gap = std::max(std::abs(deep_minus - rec.root), std::abs(deep_plus - rec.root));
    } catch (const std::exception& e) {
      errors[i] = "root (" + rec.minus.str() + "," + rec.plus.str() + "): " + e.what();
    }
  });
  for (std::size_t i = 0; i < rep.records.size(); ++i) {
    const auto& r = rep.records[i];
    if (!errors[i].empty()) {
      if (rep.failures++ == 0) rep.first_failure = errors[i];
      continue;
    }
    rep.max_pair_gap = std::max(rep.max_pair_gap, r.pair_gap);
    rep.max_root_gap = std::max(rep.max_root_gap, r.root_gap);
    rep.max_residual = std::max(rep.max_residual, r.residual);
    rep.max_deep_pair_gap = std::max(rep.max_deep_pair_gap, r.deep_pair_gap);
    rep.max_deep_root_gap = std::max(rep.max_deep_root_gap, r.deep_root_gap);
    if (r.orbit_period != r.expected_orbit_period) ++rep.period_mismatches;
  }
  return rep;
}

// ---------------------------------------------------------------------------

MutationReport mutation_suite(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::map<std::pair<int, int>, PeriodicGrouper> groupers;
  MutationReport rep;

  while (rep.cases < cases) {
    const int d = uniform(2, 3);
    const int n = d == 2 ? uniform(2, 6) : uniform(2, 4);
    auto it = groupers.try_emplace({d, n}, d, n).first;
    const PeriodicGrouper& g = it->second;
    const std::size_t i = static_cast<std::size_t>(uniform(0, static_cast<int>(g.angles().size()) - 1));
    const OrbitPortrait p = g.portrait_of(i);

    std::vector<AngleSet> sets = p.sets;
    const std::size_t j = static_cast<std::size_t>(uniform(0, static_cast<int>(sets.size()) - 1));
    AngleSet& target = sets[j];
    const std::size_t k = static_cast<std::size_t>(uniform(0, static_cast<int>(target.size()) - 1));
    const Angle old = target[k];
    const BigInt den = old.den();
    const int kind = uniform(0, 4);
    std::string what;
    if (kind == 0) {  // another angle with the same denominator
      const BigInt num = BigInt(std::uniform_int_distribution<long long>(0, static_cast<long long>(den) - 1)(rng));
      target[k] = Angle(num, den);
      what = "replace " + old.str() + " by " + target[k].str();
    } else if (kind == 1) {  // nudge the numerator
      target[k] = Angle(BigInt(old.num() + (uniform(0, 1) ? BigInt(1) : BigInt(den - 1))), den);
      what = "nudge " + old.str() + " to " + target[k].str();
    } else if (kind == 2) {  // unrelated rational
      const int q = uniform(2, 400);
      target[k] = Angle(uniform(0, q - 1), q);
      what = "replace " + old.str() + " by " + target[k].str();
    } else if (kind == 3 && target.size() > 1) {
      target.erase(target.begin() + static_cast<std::ptrdiff_t>(k));
      what = "drop " + old.str();
    } else {
      const Angle extra(BigInt(std::uniform_int_distribution<long long>(0, static_cast<long long>(den) - 1)(rng)), den);
      target.push_back(extra);
      what = "insert " + extra.str();
    }
    target = sorted_unique(target);
    if (target == p.sets[j]) continue;  // mutation was a no-op; draw again

    ++rep.cases;
    if (!validate_formal_portrait(sets, d).ok)
      ++rep.rejected;
    else if (rep.first_escape.empty())
      rep.first_escape = "d=" + std::to_string(d) + " portrait " + join(p.sets[0]) + ": " + what;
  }
  return rep;
}

double derivative_probe_error(std::uint64_t seed, std::size_t probes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> degree(2, 4), steps(1, 8);
  const double h = 1e-4;
  const Complex i1(0, 1);
  double worst = 0.0;
  std::size_t done = 0;
  while (done < probes) {
    const int d = degree(rng);
    const int m = steps(rng);
    const Complex c(unit(rng), unit(rng)), z0(unit(rng), unit(rng));
    const IterateResult r = iterate(d, c, z0, m);
    if (r.escaped || std::abs(r.z) > 4) continue;  // keep to the bounded regime where differences are meaningful
    auto fc = [&](Complex cc) { return iterate(d, cc, z0, m).z; };
    auto fz = [&](Complex zz) { return iterate(d, c, zz, m).z; };
    auto diff4 = [&](auto&& f, Complex x) {
      return (f(x + h) - f(x - h) - i1 * (f(x + i1 * h) - f(x - i1 * h))) / (4 * h);
    };
    const Complex ndc = diff4(fc, c), ndz = diff4(fz, z0);
    worst = std::max(worst, std::abs(r.dc - ndc) / std::max(std::abs(r.dc), 1.0));
    worst = std::max(worst, std::abs(r.dz - ndz) / std::max(std::abs(r.dz), 1.0));
    ++done;
  }
  return worst;
}

std::size_t wake_partial_overlaps(const WakeForest& f) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < f.nodes.size(); ++j) {
      const Arc& a = f.nodes[i].arc;
      const Arc& b = f.nodes[j].arc;
      const bool nested = arc_within(a, b) || arc_within(b, a);
      const bool disjoint = !arc_contains(a, b.lo) && !arc_contains(a, b.hi) && !arc_contains(b, a.lo) &&
                            !arc_contains(b, a.hi) && !(a == b);
      if (!nested && !disjoint) ++bad;
    }
  }
  return bad;
}

// ---------------------------------------------------------------------------
// Acceptance criteria.

namespace {

std::pair<int, Json> run_cli_json(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  Json j;
  if (code == 0) j = Json::parse(out.str());
  return {code, j};
}

CheckResult criterion_wake_figure() {
  return timed("1", "wake figure (1/26,3/26)", [](CheckResult& r) {
    const auto t0 = std::chrono::steady_clock::now();
    auto [code, j] = run_cli_json({"portrait", "--degree", "3", "--angle", "1/26", "--json"});
    const Json want = Json::array({"1/26", "3/26"});
    r.passed = code == 0 && j.at("characteristic") == want;
    r.detail = "characteristic " + (code == 0 ? j.at("characteristic").dump() : "exit " + std::to_string(code));
    require_runtime(r, 1.0, elapsed(t0));
  });
}

CheckResult criterion_satellite_figure() {
  return timed("2", "satellite figure d=3 period 6", [](CheckResult& r) {
    const auto t0 = std::chrono::steady_clock::now();
    const OrbitPortrait p = portrait_from_angle(Angle(92, 728), 3);
    const AngleSet want{Angle(92, 728), Angle(100, 728), Angle(172, 728)};
    const CharacteristicData ch = characteristic_data(p);
    const bool cls = !p.sets.empty() && p.sets[0] == want;
    r.passed = cls && p.ray_period == 6 && p.orbit_period == 2 && ch.minus == Angle(92, 728) &&
               ch.plus == Angle(100, 728) && classify(p) == PortraitKind::Satellite;
    r.detail = "class " + join(p.sets.empty() ? AngleSet{} : p.sets[0]) + ", ray period " +
               std::to_string(p.ray_period) + ", orbit period " + std::to_string(p.orbit_period) + ", characteristic (" +
               ch.minus.str() + "," + ch.plus.str() + ")";
    require_runtime(r, 5.0, elapsed(t0));
  });
}

CheckResult criterion_oracle(const VerifyOptions& opts) {
  return timed("3", "oracle equivalence", [&](CheckResult& r) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::pair<int, int>> cases{{2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 6}, {3, 1},
                                                 {3, 2}, {3, 3}, {3, 4}, {4, 1}, {4, 2}, {4, 3}};
    std::size_t bases = 0, mism = 0;
    std::string first;
    for (auto [d, n] : cases) {
      note(opts, "oracle equivalence d=" + std::to_string(d) + " n=" + std::to_string(n));
      const OracleReport o = oracle_equivalence(d, n, 0.1, 1e-6, opts.threads);
      bases += o.bases;
      mism += o.mismatches;
      if (first.empty() && o.mismatches) first = "d=" + std::to_string(d) + " n=" + std::to_string(n) + ": " + o.first_mismatch;
    }
    r.passed = mism == 0;
    r.detail = std::to_string(bases) + " base angles, " + std::to_string(mism) + " mismatches" +
               (first.empty() ? "" : " (first: " + first + ")");
    require_runtime(r, 300.0, elapsed(t0));
  });
}

CheckResult criterion_counts(const VerifyOptions& opts) {
  return timed("4", "structure theorem counts", [&](CheckResult& r) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string spot;
    const std::vector<std::pair<int, int>> ranges{{2, 10}, {3, 6}, {4, 5}, {5, 4}};
    std::size_t checked = 0;
    for (auto [d, nmax] : ranges) {
      for (int n = 1; n <= nmax; ++n) {
        const Census c = census(d, n, {opts.threads});
        check_census(c);  // throws on any per-component count failure
        ++checked;
      }
    }
    const std::vector<std::tuple<int, int, std::size_t>> spots{{2, 1, 1}, {2, 2, 1}, {2, 3, 3}, {2, 4, 6},
                                                               {2, 5, 15}, {3, 2, 2}, {4, 2, 3}};
    for (auto [d, n, want] : spots) {
      const std::size_t got = census(d, n).summary.component_count;
      spot += " d" + std::to_string(d) + "n" + std::to_string(n) + "=" + std::to_string(got);
      ok = ok && got == want;
    }
    auto [code, j] = run_cli_json({"census", "--degree", "2", "--period", "3", "--json"});
    const bool cli_ok = code == 0 && j.at("components").size() == 3 && j.at("summary").at("co_roots") == 0;
    r.passed = ok && cli_ok;
    r.detail = std::to_string(checked) + " censuses validated; components" + spot + "; cli census d=2 n=3 " +
               (cli_ok ? "ok" : "wrong");
    require_runtime(r, 60.0, elapsed(t0));
  });
}

CheckResult criterion_landing(const VerifyOptions& opts) {
  return timed("5", "landing consistency", [&](CheckResult& r) {
    const auto t0 = std::chrono::steady_clock::now();
    const Potential literal = Potential::from_value(1e-6);
    const Potential deep = Potential::from_log(-300);
    const double tol = 1e-4;
    double pair = 0, root = 0, res = 0, dpair = 0, droot = 0;
    std::size_t fails = 0, period_bad = 0, roots = 0;
    std::string first;
    for (int d : {2, 3}) {
      for (int n = 1; n <= 4; ++n) {
        note(opts, "landing consistency d=" + std::to_string(d) + " n=" + std::to_string(n));
        const LandingReport l = landing_consistency(d, n, literal, deep, opts.threads);
        roots += l.records.size();
        pair = std::max(pair, l.max_pair_gap);
        root = std::max(root, l.max_root_gap);
        res = std::max(res, l.max_residual);
        dpair = std::max(dpair, l.max_deep_pair_gap);
        droot = std::max(droot, l.max_deep_root_gap);
        fails += l.failures;
        period_bad += l.period_mismatches;
        if (first.empty() && l.failures) first = l.first_failure;
      }
    }

    // Closed-form anchors, each solved from its own traced ray.
    const double cusp3 = 2 / (3 * std::sqrt(3.0));
    struct Anchor {
      int d;
      Angle ray;
      int n;
      Complex want;
    };
    const std::vector<Anchor> anchors{{2, Angle(1, 3), 2, -0.75}, {2, Angle(2, 3), 2, -0.75}, {2, Angle(), 1, 0.25},
                                      {3, Angle(), 1, cusp3},     {3, Angle(1, 2), 1, -cusp3}};
    double anchor_solve = 0, anchor_trace = 0;
    for (const Anchor& a : anchors) {
      const Complex shallow = trace_parameter_ray(a.d, a.ray, literal).endpoint().z;
      const Complex seed = trace_parameter_ray(a.d, a.ray, deep).endpoint().z;
      const SolveResult s = solve_parabolic(a.d, seed, a.n);
      anchor_solve = std::max(anchor_solve, std::abs(s.parameter - a.want));
      anchor_trace = std::max(anchor_trace, std::abs(shallow - a.want));
      res = std::max(res, s.residual);
    }

    r.passed = fails == 0 && period_bad == 0 && pair < tol && root < tol && res < 1e-10 && anchor_solve < 1e-9 &&
               anchor_trace < tol;
    r.detail = std::to_string(roots) + " root pairs; at potential 1e-6: max ray gap " + fmt(pair) +
               ", max ray-to-root gap " + fmt(root) + ", anchors traced within " + fmt(anchor_trace) + " (tol " +
               fmt(tol) + "); solver residual " + fmt(res) + ", anchors solved within " + fmt(anchor_solve) +
               "; at log-potential -300: ray gap " + fmt(dpair) + ", ray-to-root " + fmt(droot) +
               "; orbit-period mismatches " + std::to_string(period_bad) +
               (first.empty() ? "" : "; first failure: " + first);
    require_runtime(r, 600.0, elapsed(t0));
  });
}

CheckResult criterion_kneading() {
  return timed("6", "kneading theorems", [](CheckResult& r) {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t pairs = 0, equal = 0;
    std::string first;
    const std::vector<std::pair<int, int>> ranges{{2, 8}, {3, 5}, {4, 4}};
    for (auto [d, nmax] : ranges) {
      for (int n = 2; n <= nmax; ++n) {
        for (const auto& c : census(d, n).components) {
          ++pairs;
          const auto km = kneading(c.root_minus, d), kp = kneading(c.root_plus, d);
          if (kneading_equal(km, kp))
            ++equal;
          else if (first.empty())
            first = c.root_minus.str() + " " + km.str() + " vs " + c.root_plus.str() + " " + kp.str();
        }
      }
    }
    const auto k1 = kneading(Angle(92, 728), 3), k2 = kneading(Angle(100, 728), 3), k3 = kneading(Angle(172, 728), 3);
    const bool satellite = kneading_equal(k1, k2) && !kneading_equal(k3, k1) && !kneading_equal(k3, k2);
    r.passed = equal == pairs && satellite;
    r.detail = std::to_string(equal) + "/" + std::to_string(pairs) + " root pairs with K(t-)=K(t+); K(92/728)=" +
               k1.str() + ", K(172/728)=" + k3.str() + (first.empty() ? "" : "; first mismatch " + first);
    require_runtime(r, 60.0, elapsed(t0));
  });
}

CheckResult criterion_misiurewicz() {
  return timed("7", "misiurewicz rule", [](CheckResult& r) {
    const auto t0 = std::chrono::steady_clock::now();
    const Angle theta(9, 56);
    const RayCount rc = misiurewicz_ray_count(theta, 2);
    const Potential target = Potential::from_value(1e-6);
    std::vector<Complex> sols;
    for (int a : {9, 11, 15}) {
      const Angle ray(a, 56);
      const int l = orbit_data(ray, 2).preperiod;
      const int k = kneading(ray, 2).period();
      sols.push_back(solve_misiurewicz(2, trace_parameter_ray(2, ray, target).endpoint().z, l, k).parameter);
    }
    double spread = 0;
    for (const Complex& a : sols)
      for (const Complex& b : sols) spread = std::max(spread, std::abs(a - b));
    const Complex tip = trace_parameter_ray(2, Angle(1, 2), target).endpoint().z;
    const double tip_gap = std::abs(tip - Complex(-2, 0));
    r.passed = rc.exact && rc.count == 3 && spread < 1e-6 && tip_gap < 1e-6;
    std::ostringstream c;
    c.precision(10);
    c << sols[0];
    r.detail = "ray count " + rc.str() + ", solver spread " + fmt(spread) + " at c=" + c.str() + ", ray 1/2 ends " +
               fmt(tip_gap) + " from -2";
    require_runtime(r, 60.0, elapsed(t0));
  });
}

CheckResult criterion_properties(const VerifyOptions& opts) {
  return timed("8", "property suites", [&](CheckResult& r) {
    const auto t0 = std::chrono::steady_clock::now();
    const MutationReport m = mutation_suite(opts.seed, 1000);
    const std::size_t o2 = wake_partial_overlaps(wake_forest(2, 6, {opts.threads}));
    const std::size_t o3 = wake_partial_overlaps(wake_forest(3, 4, {opts.threads}));
    const double fd = derivative_probe_error(opts.seed + 1, 100);
    r.passed = m.rejected == m.cases && o2 == 0 && o3 == 0 && fd < 1e-6;
    r.detail = "mutations rejected " + std::to_string(m.rejected) + "/" + std::to_string(m.cases) +
               (m.first_escape.empty() ? "" : " (escaped: " + m.first_escape + ")") + "; partial overlaps " +
               std::to_string(o2) + " (d=2,N=6) " + std::to_string(o3) + " (d=3,N=4); derivative rel err " + fmt(fd);
    require_runtime(r, 120.0, elapsed(t0));
  });
}

CheckResult criterion_render() {
  return timed("9", "render determinism", [](CheckResult& r) {
    const auto t0 = std::chrono::steady_clock::now();
    bool identical = true, smoke = true, symmetric = true;
    std::string detail;
    for (int d : {2, 3, 4}) {
      Scene s = parameter_scene(d);
      s.max_iter = 200;
      const Viewport vp = reference_viewport(d);
      const Image one = render(s, vp, {}, {1, 64});
      const Image eight = render(s, vp, {}, {8, 64});
      identical = identical && ppm_bytes(one) == ppm_bytes(eight);
      if (d != 3) {
        std::size_t inside = 0;
        for (int y = 0; y < vp.pixels_h; ++y)
          for (int x = 0; x < vp.pixels_w; ++x) inside += classify_pixel(s, vp, x, y).interior();
        const std::size_t total = std::size_t(vp.pixels_w) * vp.pixels_h;
        smoke = smoke && inside > 0 && inside < total;
        const SymmetryReport sym = symmetry_check(d, 160, 200);
        symmetric = symmetric && sym.mismatch_fraction() <= 2e-3;
        detail += " M_" + std::to_string(d) + ": interior " + fmt(double(inside) / total) + ", symmetry mismatch " +
                  fmt(sym.mismatch_fraction()) + ";";
      }
    }
    r.passed = identical && smoke && symmetric;
    r.detail = std::string("1 vs 8 threads ") + (identical ? "byte-identical" : "DIFFER") + ";" + detail;
    require_runtime(r, 60.0, elapsed(t0));
  });
}

}  // namespace

CheckResult acceptance_criterion(int id, const VerifyOptions& opts) {
  switch (id) {
    case 1: return criterion_wake_figure();
    case 2: return criterion_satellite_figure();
    case 3: return criterion_oracle(opts);
    case 4: return criterion_counts(opts);
    case 5: return criterion_landing(opts);
    case 6: return criterion_kneading();
    case 7: return criterion_misiurewicz();
    case 8: return criterion_properties(opts);
    case 9: return criterion_render();
    default: throw DomainError("no acceptance criterion " + std::to_string(id));
  }
}

std::vector<CheckResult> acceptance_suite(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  for (int id = 1; id <= 9; ++id) {
    note(opts, "criterion " + std::to_string(id));
    out.push_back(acceptance_criterion(id, opts));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> verify_suite(int d, int max_period, const VerifyOptions& opts) {
  require_degree(d);
  if (max_period < 1) throw DomainError("max period must be positive");
  const std::string tag = "d=" + std::to_string(d) + " N=" + std::to_string(max_period);
  std::vector<CheckResult> out;
  std::vector<Census> all;

  out.push_back(timed("V1", "census counts " + tag, [&](CheckResult& r) {
    std::string counts;
    for (int n = 1; n <= max_period; ++n) {
      note(opts, "census n=" + std::to_string(n));
      all.push_back(cached_census(d, n, atlas_dir_from_env(), {opts.threads}));
      check_census(all.back());
      const std::size_t want =
          n == 1 ? 1 : static_cast<std::size_t>(exact_period_numerators(d, n).size()) / static_cast<std::size_t>(d);
      if (all.back().summary.component_count != want) throw InvariantViolation("component count for n=" + std::to_string(n));
      counts += (n > 1 ? "," : "") + std::to_string(want);
    }
    r.passed = true;
    r.detail = "components per period " + counts;
  }));

  out.push_back(timed("V2", "portraits valid " + tag, [&](CheckResult& r) {
    std::size_t checked = 0, bad = 0;
    std::string first;
    for (const Census& c : all) {
      for (const auto& comp : c.components) {
        ++checked;
        const ValidationReport v = validate_formal_portrait(comp.portrait.sets, d);
        const bool satellite = comp.portrait.orbit_period < comp.portrait.ray_period;
        bool ok = v.ok && (classify(comp.portrait) == PortraitKind::Satellite) == satellite;
        if (c.summary.period > 1) {
          const CharacteristicData ch = characteristic_data(comp.portrait);
          ok = ok && ch.minus == comp.root_minus && ch.plus == comp.root_plus;
        }
        if (!ok && bad++ == 0) first = comp.root_minus.str() + ": " + v.message;
      }
    }
    r.passed = bad == 0 && checked > 0;
    r.detail = std::to_string(checked) + " portraits, " + std::to_string(bad) + " invalid" + (first.empty() ? "" : " (" + first + ")");
  }));

  out.push_back(timed("V3", "wake forest " + tag, [&](CheckResult& r) {
    const WakeForest f = wake_forest_from(d, max_period, all);
    std::size_t bad_parent = 0;
    for (const auto& node : f.nodes)
      if (node.parent && !arc_within(node.arc, f.nodes[*node.parent].arc)) ++bad_parent;
    const std::size_t overlaps = wake_partial_overlaps(f);
    r.passed = overlaps == 0 && bad_parent == 0;
    r.detail = std::to_string(f.nodes.size()) + " wakes, " + std::to_string(overlaps) + " partial overlaps, " +
               std::to_string(bad_parent) + " misplaced children";
  }));

  out.push_back(timed("V4", "kneading of root pairs " + tag, [&](CheckResult& r) {
    std::size_t pairs = 0, equal = 0;
    for (const Census& c : all) {
      if (c.summary.period == 1) continue;
      for (const auto& comp : c.components) {
        ++pairs;
        equal += kneading_equal(kneading(comp.root_minus, d), kneading(comp.root_plus, d));
      }
    }
    r.passed = equal == pairs;
    r.detail = std::to_string(equal) + "/" + std::to_string(pairs) + " root pairs share a kneading sequence";
  }));

  out.push_back(timed("V5", "json round trip " + tag, [&](CheckResult& r) {
    std::size_t docs = 0;
    bool ok = true;
    for (const Census& c : all) {
      ok = ok && census_from_json(Json::parse(census_to_json(c).dump())) == c;
      ++docs;
    }
    const WakeForest f = wake_forest_from(d, max_period, all);
    const WakeForest g = wake_forest_from_json(Json::parse(wake_forest_to_json(f).dump()));
    ok = ok && wake_forest_to_json(g) == wake_forest_to_json(f);
    r.passed = ok;
    r.detail = std::to_string(docs + 1) + " documents re-parsed " + (ok ? "losslessly" : "with differences");
  }));

  out.push_back(timed("V6", "oracle equivalence " + tag, [&](CheckResult& r) {
    std::size_t bases = 0, mism = 0;
    std::string first;
    for (int n = 1; n <= max_period; ++n) {
      note(opts, "oracle equivalence n=" + std::to_string(n));
      const OracleReport o = oracle_equivalence(d, n, 0.1, 1e-6, opts.threads);
      bases += o.bases;
      mism += o.mismatches;
      if (first.empty() && o.mismatches) first = o.first_mismatch;
    }
    r.passed = mism == 0;
    r.detail = std::to_string(bases) + " bases, " + std::to_string(mism) + " mismatches" + (first.empty() ? "" : " (" + first + ")");
  }));

  out.push_back(timed("V7", "parabolic landing " + tag, [&](CheckResult& r) {
    // Deep traces approach a parabolic root only like 1/|log potential|, so
    // this checks solver validity plus a distance bound suited to that depth.
    const double bound = 2e-2;
    double res = 0, gap = 0;
    std::size_t fails = 0, period_bad = 0;
    std::string first;
    for (int n = 1; n <= max_period; ++n) {
      note(opts, "parabolic landing n=" + std::to_string(n));
      const LandingReport l = landing_consistency(d, n, Potential::from_value(1e-6), Potential::from_log(-300), opts.threads);
      res = std::max(res, l.max_residual);
      gap = std::max({gap, l.max_deep_pair_gap, l.max_deep_root_gap});
      fails += l.failures;
      period_bad += l.period_mismatches;
      if (first.empty() && l.failures) first = l.first_failure;
    }
    r.passed = fails == 0 && period_bad == 0 && res < 1e-10 && gap < bound;
    r.detail = "residual " + fmt(res) + ", deep gap " + fmt(gap) + " (bound " + fmt(bound) + "), orbit-period mismatches " +
               std::to_string(period_bad) + (first.empty() ? "" : "; " + first);
  }));

  out.push_back(timed("V8", "seeded properties", [&](CheckResult& r) {
    const MutationReport m = mutation_suite(opts.seed, 300);
    const double fd = derivative_probe_error(opts.seed + 1, 50);
    r.passed = m.rejected == m.cases && fd < 1e-6;
    r.detail = "mutations rejected " + std::to_string(m.rejected) + "/" + std::to_string(m.cases) +
               ", derivative rel err " + fmt(fd) + ", seed " + std::to_string(opts.seed);
  }));

  out.push_back(timed("V9", "symmetry of M_" + std::to_string(d), [&](CheckResult& r) {
    const SymmetryReport s = symmetry_check(d, 120, 200);
    r.passed = s.mismatch_fraction() <= 2e-3;
    r.detail = std::to_string(s.mismatches) + "/" + std::to_string(s.samples) + " mismatched samples";
  }));
  return out;
}

}  // namespace multibrot
