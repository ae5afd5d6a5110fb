#include "multibrot/cli.hpp"

#include "multibrot/atlas.hpp"
#include "multibrot/kneading.hpp"
#include "multibrot/numerics.hpp"
#include "multibrot/render.hpp"
#include "multibrot/serialize.hpp"
#include "multibrot/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace multibrot::cli {

namespace {

struct Globals {
  int degree = 2;
  std::string out;
  bool compact = false;
  std::uint64_t seed = VerifyOptions{}.seed;
  unsigned threads = 1;
};

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw DomainError("cannot parse complex number '" + text + "' (expected re,im)");
  }
}

std::vector<Angle> parse_angle_list(const std::string& text) {
  std::vector<Angle> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(Angle::parse(item));
  return out;
}

/// "1/7,2/7,4/7" or "a,b;c,d" for multi-set portraits.
std::vector<AngleSet> parse_sets(const std::string& text) {
  std::vector<AngleSet> sets;
  std::stringstream ss(text);
  std::string chunk;
  while (std::getline(ss, chunk, ';')) sets.push_back(parse_angle_list(chunk));
  return sets;
}

class Emitter {
 public:
  Emitter(const Globals& g, std::ostream& out) : g_(g), out_(out) {}

  void json(const Json& j) const { text(j.dump(g_.compact ? -1 : 2) + "\n"); }

  void text(const std::string& s) const {
    if (g_.out.empty()) {
      out_ << s;
      return;
    }
    std::ofstream f(g_.out);
    if (!f) throw DomainError("cannot open " + g_.out + " for writing");
    f << s;
  }

 private:
  const Globals& g_;
  std::ostream& out_;
};

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Combinatorics and numerics of multibrot sets z^d + c", "multibrot"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--degree,-d", g.degree, "Degree d >= 2")->capture_default_str();
  app.add_option("--out,-o", g.out, "Write the result here instead of stdout");
  app.add_flag("--json", g.compact, "Compact single-line JSON");
  app.add_option("--seed", g.seed, "Seed for randomized property checks")->capture_default_str();
  app.add_option("--threads,-j", g.threads, "Worker threads (0 = all cores)")->capture_default_str();

  const Emitter emit(g, out);
  std::function<int()> action;

  // portrait
  auto* portrait = app.add_subcommand("portrait", "Orbit portrait for which an angle is characteristic, or validate sets");
  std::string p_angle, p_sets;
  portrait->add_option("--angle,-a", p_angle, "Periodic angle p/q");
  portrait->add_option("--sets", p_sets, "Formal portrait to validate: \"a,b;c,d\"");
  portrait->callback([&] {
    action = [&] {
      if (p_angle.empty() == p_sets.empty()) throw DomainError("portrait needs exactly one of --angle or --sets");
      if (!p_sets.empty()) {
        const auto sets = parse_sets(p_sets);
        const ValidationReport v = validate_formal_portrait(sets, g.degree);
        Json j{{"degree", g.degree}, {"valid", v.ok}};
        if (!v.ok) {
          Json w = Json::array();
          for (const Angle& a : v.witness) w.push_back(a.str());
          j["axiom"] = v.axiom;
          j["message"] = v.message;
          j["witness"] = w;
        } else {
          OrbitPortrait p = portrait_from_first_set(sets.front(), g.degree);
          j["portrait"] = portrait_to_json(p);
        }
        emit.json(j);
        return v.ok ? 0 : 2;
      }
      const Angle theta = Angle::parse(p_angle);
      const OrbitPortrait p = portrait_from_angle(theta, g.degree);
      Json j = portrait_to_json(p);
      j["angle"] = theta.str();
      const ConjugateResult cr = conjugate_angle(theta, g.degree);
      j["partner"] = cr.partner ? Json(cr.partner->str()) : Json(nullptr);
      emit.json(j);
      return 0;
    };
  });

  // kneading
  auto* kn = app.add_subcommand("kneading", "Kneading sequence K(theta) or the theta-itinerary of eta");
  std::string k_angle, k_eta;
  kn->add_option("--angle,-a", k_angle, "Angle theta")->required();
  kn->add_option("--eta", k_eta, "Itinerary of this angle instead of theta itself");
  kn->callback([&] {
    action = [&] {
      const Angle theta = Angle::parse(k_angle);
      const KneadingSequence k =
          k_eta.empty() ? kneading(theta, g.degree) : itinerary(theta, Angle::parse(k_eta), g.degree);
      Json j = kneading_to_json(k);
      if (!k_eta.empty()) j["eta"] = Angle::parse(k_eta).str();
      if (k_eta.empty() && orbit_data(theta, g.degree).preperiod > 0)
        j["ray_count"] = ray_count_to_json(misiurewicz_ray_count(theta, g.degree));
      emit.json(j);
      return 0;
    };
  });

  // census
  auto* cen = app.add_subcommand("census", "Roots, co-roots and components of exact period n");
  int c_period = 1;
  cen->add_option("--period,-n", c_period, "Exact period n")->required();
  cen->callback([&] {
    action = [&] {
      err << "census d=" << g.degree << " n=" << c_period << "\n";
      const Census c = cached_census(g.degree, c_period, atlas_dir_from_env(), {g.threads});
      emit.json(census_to_json(c));
      return 0;
    };
  });

  // wakes
  auto* wk = app.add_subcommand("wakes", "Nested wake forest through period N");
  int w_max = 1;
  std::string w_angle;
  wk->add_option("--max-period,-N", w_max, "Largest period")->required();
  wk->add_option("--angle,-a", w_angle, "Also list the wakes containing this angle");
  wk->callback([&] {
    action = [&] {
      std::vector<Census> all;
      for (int n = 1; n <= w_max; ++n) {
        err << "census d=" << g.degree << " n=" << n << "\n";
        all.push_back(cached_census(g.degree, n, atlas_dir_from_env(), {g.threads}));
      }
      const WakeForest f = wake_forest_from(g.degree, w_max, all);
      Json j = wake_forest_to_json(f);
      if (!w_angle.empty()) {
        Json chain = Json::array();
        for (const Arc& a : angle_to_wake(f, Angle::parse(w_angle))) chain.push_back(arc_to_json(a));
        j["containing"] = chain;
      }
      emit.json(j);
      return 0;
    };
  });

  // trace-ray
  auto* tr = app.add_subcommand("trace-ray", "Trace a parameter or dynamical external ray");
  std::string t_angle, t_c;
  double t_potential = 1e-6;
  double t_log_potential = 0;
  bool t_csv = false;
  tr->add_option("--angle,-a", t_angle, "Ray angle p/q")->required();
  tr->add_option("--potential", t_potential, "Target potential")->capture_default_str();
  auto* lp_opt = tr->add_option("--log-potential", t_log_potential, "Target potential as its natural log (deep traces)");
  tr->add_option("--c", t_c, "Trace in the dynamical plane of this parameter (re,im)");
  tr->add_flag("--csv", t_csv, "Emit potential,re,im lines instead of JSON");
  tr->callback([&] {
    action = [&] {
      const Angle theta = Angle::parse(t_angle);
      const Potential target = lp_opt->count() ? Potential::from_log(t_log_potential) : Potential::from_value(t_potential);
      const RayTrace t = t_c.empty() ? trace_parameter_ray(g.degree, theta, target)
                                     : trace_dynamical_ray(g.degree, parse_complex(t_c), theta, target);
      if (t_csv) {
        emit.text(trace_csv(t));
        return 0;
      }
      Json pts = Json::array();
      for (const RayPoint& p : t.points)
        pts.push_back(Json::array({Potential::from_log(p.log_potential).str(), p.z.real(), p.z.imag()}));
      Json j{{"degree", g.degree},
             {"plane", t_c.empty() ? "parameter" : "dynamical"},
             {"angle", theta.str()},
             {"final_potential", t.final_potential().str()},
             {"endpoint", complex_json(t.endpoint().z)},
             {"points", pts}};
      if (!t_c.empty()) j["c"] = complex_json(parse_complex(t_c));
      emit.json(j);
      return 0;
    };
  });

  // solve
  auto* so = app.add_subcommand("solve", "Refine a parabolic or Misiurewicz parameter");
  std::string s_kind, s_angle, s_at;
  int s_period = 0, s_preperiod = -1, s_orbit = 0;
  so->add_option("--kind", s_kind, "parabolic | misiurewicz (default: from the angle)");
  so->add_option("--angle,-a", s_angle, "Seed from the parameter ray at this angle");
  so->add_option("--at", s_at, "Explicit seed re,im");
  so->add_option("--period,-n", s_period, "Ray period (parabolic) or cycle period (Misiurewicz)");
  so->add_option("--preperiod,-l", s_preperiod, "Pre-period (Misiurewicz)");
  so->add_option("--orbit-period,-k", s_orbit, "Parabolic orbit period, if known");
  so->callback([&] {
    action = [&] {
      if (s_angle.empty() == s_at.empty()) throw DomainError("solve needs exactly one of --angle or --at");
      std::optional<Angle> theta;
      if (!s_angle.empty()) theta = Angle::parse(s_angle);
      std::optional<OrbitData> od;
      if (theta) od = orbit_data(*theta, g.degree);
      std::string kind = s_kind;
      if (kind.empty()) {
        if (!od) throw DomainError("--kind is required with --at");
        kind = od->preperiod == 0 ? "parabolic" : "misiurewicz";
      }
      Complex seed;
      if (theta) {
        // Parabolic landings are approached slowly; seed from a deep trace.
        const Potential depth = kind == "parabolic" ? Potential::from_log(-300) : Potential::from_value(1e-6);
        seed = trace_parameter_ray(g.degree, *theta, depth).endpoint().z;
      } else {
        seed = parse_complex(s_at);
      }
      SolveResult r;
      if (kind == "parabolic") {
        const int n = s_period ? s_period : (od ? od->period : 0);
        if (n < 1) throw DomainError("parabolic solve needs --period");
        if (od && od->preperiod != 0) throw DomainError(theta->str() + " is not periodic");
        r = solve_parabolic(g.degree, seed, n, s_orbit ? std::optional<int>(s_orbit) : std::nullopt);
      } else if (kind == "misiurewicz") {
        const int l = s_preperiod >= 0 ? s_preperiod : (od ? od->preperiod : -1);
        const int n = s_period ? s_period : (theta ? kneading(*theta, g.degree).period() : 0);
        if (l < 1 || n < 1) throw DomainError("Misiurewicz solve needs --preperiod and --period");
        r = solve_misiurewicz(g.degree, seed, l, n);
      } else {
        throw DomainError("unknown solve kind '" + kind + "'");
      }
      Json j = solve_result_to_json(r);
      j["seed"] = complex_json(seed);
      if (theta) j["angle"] = theta->str();
      emit.json(j);
      return 0;
    };
  });

  // render
  auto* rd = app.add_subcommand("render", "Escape-time image of M_d or a Julia set, with overlays");
  std::string r_julia, r_center, r_size = "800x600", r_rays, r_svg, r_marks;
  double r_width = 3.0, r_ray_log_potential = -300;
  int r_max_iter = 500;
  rd->add_option("--julia", r_julia, "Render the Julia set of this parameter (re,im)");
  rd->add_option("--center", r_center, "View centre re,im");
  rd->add_option("--width", r_width, "View width")->capture_default_str();
  rd->add_option("--size", r_size, "Pixels WxH")->capture_default_str();
  rd->add_option("--max-iter", r_max_iter, "Iteration limit")->capture_default_str();
  rd->add_option("--rays", r_rays, "Comma-separated ray angles to overlay");
  rd->add_option("--ray-log-potential", r_ray_log_potential, "Depth of overlay rays (natural log of potential)")
      ->capture_default_str();
  rd->add_option("--mark", r_marks, "Points to mark: \"re,im;re,im\"");
  rd->add_option("--svg", r_svg, "Also write overlays as SVG");
  rd->callback([&] {
    action = [&] {
      Scene scene = r_julia.empty() ? parameter_scene(g.degree) : julia_scene(g.degree, parse_complex(r_julia));
      scene.max_iter = r_max_iter;
      Viewport vp = reference_viewport(g.degree);
      if (!r_julia.empty()) vp.center = 0;
      if (!r_center.empty()) vp.center = parse_complex(r_center);
      vp.width = r_width;
      const auto x = r_size.find('x');
      if (x == std::string::npos) throw DomainError("--size must look like 800x600");
      try {
        vp.pixels_w = std::stoi(r_size.substr(0, x));
        vp.pixels_h = std::stoi(r_size.substr(x + 1));
      } catch (const std::exception&) {
        throw DomainError("--size must look like 800x600");
      }
      vp.validate();
      const Potential depth = Potential::from_log(r_ray_log_potential);
      for (const Angle& a : parse_angle_list(r_rays)) {
        err << "tracing ray " << a.str() << "\n";
        if (r_julia.empty())
          scene.overlays.push_back(trace_parameter_ray(g.degree, a, depth));
        else
          scene.overlays.push_back(trace_dynamical_ray(g.degree, parse_complex(r_julia), a, depth));
      }
      std::stringstream ms(r_marks);
      std::string item;
      while (std::getline(ms, item, ';'))
        if (!item.empty()) scene.overlays.push_back(MarkedPoint{parse_complex(item), item});

      const std::string path = g.out.empty() ? "multibrot_d" + std::to_string(g.degree) + ".ppm" : g.out;
      err << "rendering " << vp.pixels_w << "x" << vp.pixels_h << "\n";
      const Image img = render(scene, vp, {}, {g.threads, 64});
      write_image(path, img);
      if (!r_svg.empty()) {
        std::ofstream svg(r_svg);
        if (!svg) throw DomainError("cannot open " + r_svg + " for writing");
        svg << overlays_svg(scene, vp);
      }
      Json ends = Json::array();
      for (const auto& o : scene.overlays)
        if (auto* t = std::get_if<RayTrace>(&o)) {
          auto [px, py] = vp.to_pixel(t->endpoint().z);
          ends.push_back({{"angle", t->angle.str()}, {"endpoint", complex_json(t->endpoint().z)}, {"pixel", {px, py}}});
        }
      out << Json{{"image", path}, {"width", vp.pixels_w}, {"height", vp.pixels_h}, {"rays", ends}}.dump(g.compact ? -1 : 2)
          << "\n";
      return 0;
    };
  });

  // verify
  auto* vf = app.add_subcommand("verify", "Invariant and oracle cross-checks; --acceptance runs the acceptance criteria");
  int v_max = 4;
  bool v_acceptance = false;
  std::vector<int> v_criteria;
  vf->add_option("--max-period,-N", v_max, "Largest period for the per-degree suite")->capture_default_str();
  vf->add_flag("--acceptance", v_acceptance, "Run the acceptance criteria as well");
  vf->add_option("--criterion", v_criteria, "Run only these acceptance criteria (1-9)");
  vf->callback([&] {
    action = [&] {
      VerifyOptions opts;
      opts.threads = g.threads;
      opts.seed = g.seed;
      opts.progress = [&](const std::string& s) { err << "verify: " << s << "\n"; };
      std::vector<CheckResult> results;
      if (v_criteria.empty()) results = verify_suite(g.degree, v_max, opts);
      if (v_acceptance && v_criteria.empty()) {
        for (auto& r : acceptance_suite(opts)) results.push_back(std::move(r));
      }
      for (int id : v_criteria) results.push_back(acceptance_criterion(id, opts));
      const bool ok = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
      if (g.compact) {
        Json arr = Json::array();
        for (const auto& r : results)
          arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
        emit.json({{"passed", ok}, {"checks", arr}});
      } else {
        std::string text;
        for (const auto& r : results) text += format_check(r) + "\n";
        emit.text(text);
      }
      return ok ? 0 : 1;
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    require_degree(g.degree);
    return action ? action() : 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace multibrot::cli
