#include "multibrot/serialize.hpp"

#include <fstream>

namespace multibrot {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

Json angles_to_json(const std::vector<Angle>& v) {
  Json a = Json::array();
  for (const Angle& x : v) a.push_back(angle_to_json(x));
  return a;
}

std::vector<Angle> angles_from_json(const Json& j) {
  std::vector<Angle> v;
  for (const Json& x : j) v.push_back(angle_from_json(x));
  return v;
}

Json symbol_to_json(const Symbol& s) {
  if (s.boundary) return Json::array({s.first, s.second});
  return s.first;
}

Symbol symbol_from_json(const Json& j) {
  if (j.is_array()) return Symbol::boundary_pair(j.at(0).get<int>(), j.at(1).get<int>());
  return Symbol::plain(j.get<int>());
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }
Complex complex_from_json(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

Json angle_to_json(const Angle& a) { return a.str(); }

Angle angle_from_json(const Json& j) {
  if (!j.is_string()) throw DomainError("angle must be a \"p/q\" string");
  return Angle::parse(j.get<std::string>(), true);
}

Json arc_to_json(const Arc& a) { return Json::array({a.lo.str(), a.hi.str()}); }

Arc arc_from_json(const Json& j) {
  return guarded("arc", [&] { return Arc(angle_from_json(j.at(0)), angle_from_json(j.at(1))); });
}

Json portrait_to_json(const OrbitPortrait& p) {
  Json sets = Json::array();
  for (const auto& s : p.sets) sets.push_back(angles_to_json(s));
  Json j{{"degree", p.degree}, {"sets", sets}, {"kind", to_string(classify(p))},
         {"ray_period", p.ray_period}, {"orbit_period", p.orbit_period}};
  CharacteristicData ch = characteristic_data(p);
  if (ch.arc)
    j["characteristic"] = arc_to_json(*ch.arc);
  else
    j["characteristic"] = nullptr;
  return j;
}

OrbitPortrait portrait_from_json(const Json& j) {
  return guarded("portrait", [&] {
    OrbitPortrait p;
    p.degree = j.at("degree").get<int>();
    for (const Json& s : j.at("sets")) p.sets.push_back(angles_from_json(s));
    p.ray_period = j.at("ray_period").get<int>();
    p.orbit_period = j.at("orbit_period").get<int>();
    return p;
  });
}

Json kneading_to_json(const KneadingSequence& k) {
  Json prefix = Json::array(), cycle = Json::array();
  for (const Symbol& s : k.prefix) prefix.push_back(symbol_to_json(s));
  for (const Symbol& s : k.cycle) cycle.push_back(symbol_to_json(s));
  return {{"angle", angle_to_json(k.base)}, {"degree", k.degree}, {"prefix", prefix}, {"cycle", cycle},
          {"preperiod", k.preperiod()}, {"period", k.period()}, {"text", k.str()}};
}

KneadingSequence kneading_from_json(const Json& j) {
  return guarded("kneading", [&] {
    KneadingSequence k;
    k.base = angle_from_json(j.at("angle"));
    k.degree = j.at("degree").get<int>();
    for (const Json& s : j.at("prefix")) k.prefix.push_back(symbol_from_json(s));
    for (const Json& s : j.at("cycle")) k.cycle.push_back(symbol_from_json(s));
    if (k.cycle.empty()) throw DomainError("kneading cycle is empty");
    return k;
  });
}

Json component_to_json(const ComponentRecord& r) {
  return {{"period", r.period},
          {"root", Json::array({angle_to_json(r.root_minus), angle_to_json(r.root_plus)})},
          {"co_roots", angles_to_json(r.co_roots)},
          {"portrait", portrait_to_json(r.portrait)}};
}

ComponentRecord component_from_json(const Json& j) {
  return guarded("component", [&] {
    ComponentRecord r;
    r.period = j.at("period").get<int>();
    r.root_minus = angle_from_json(j.at("root").at(0));
    r.root_plus = angle_from_json(j.at("root").at(1));
    r.co_roots = angles_from_json(j.at("co_roots"));
    r.portrait = portrait_from_json(j.at("portrait"));
    return r;
  });
}

Json census_to_json(const Census& c) {
  Json comps = Json::array();
  for (const auto& r : c.components) comps.push_back(component_to_json(r));
  const auto& s = c.summary;
  return {{"header", {{"degree", s.degree}, {"period", s.period}, {"generator_version", kGeneratorVersion}}},
          {"components", comps},
          {"summary",
           {{"total_exact_angles", s.total_exact_angles},
            {"root_pairs", s.root_pair_count},
            {"co_roots", s.co_root_count},
            {"components", s.component_count}}}};
}

Census census_from_json(const Json& j) {
  return guarded("atlas", [&] {
    Census c;
    const Json& h = j.at("header");
    if (h.at("generator_version").get<std::string>() != kGeneratorVersion)
      throw DomainError("atlas generator version mismatch");
    c.summary.degree = h.at("degree").get<int>();
    c.summary.period = h.at("period").get<int>();
    for (const Json& r : j.at("components")) c.components.push_back(component_from_json(r));
    const Json& s = j.at("summary");
    c.summary.total_exact_angles = s.at("total_exact_angles").get<std::size_t>();
    c.summary.root_pair_count = s.at("root_pairs").get<std::size_t>();
    c.summary.co_root_count = s.at("co_roots").get<std::size_t>();
    c.summary.component_count = s.at("components").get<std::size_t>();
    return c;
  });
}

Json wake_forest_to_json(const WakeForest& f) {
  Json nodes = Json::array();
  for (const auto& n : f.nodes) {
    nodes.push_back({{"arc", arc_to_json(n.arc)},
                     {"period", n.period},
                     {"kind", to_string(n.kind)},
                     {"parent", n.parent ? Json(*n.parent) : Json(nullptr)},
                     {"children", n.children}});
  }
  return {{"degree", f.degree}, {"max_period", f.max_period}, {"nodes", nodes}};
}

WakeForest wake_forest_from_json(const Json& j) {
  return guarded("wake forest", [&] {
    WakeForest f;
    f.degree = j.at("degree").get<int>();
    f.max_period = j.at("max_period").get<int>();
    for (const Json& n : j.at("nodes")) {
      WakeNode node{arc_from_json(n.at("arc")), n.at("period").get<int>(),
                    portrait_kind_from_string(n.at("kind").get<std::string>()), std::nullopt,
                    n.at("children").get<std::vector<std::size_t>>()};
      if (!n.at("parent").is_null()) node.parent = n.at("parent").get<std::size_t>();
      f.nodes.push_back(std::move(node));
    }
    return f;
  });
}

Json solve_result_to_json(const SolveResult& s) {
  Json j{{"parameter", complex_to_json(s.parameter)}, {"residual", s.residual}, {"iterations", s.iterations}};
  if (s.kind == SolveKind::Parabolic) {
    j["kind"] = "parabolic";
    j["periods"] = {{"orbit_period", s.orbit_period}, {"ray_period", s.ray_period}};
    j["multiplier"] = complex_to_json(s.multiplier);
  } else {
    j["kind"] = "misiurewicz";
    j["periods"] = {{"preperiod", s.preperiod}, {"period", s.period}};
  }
  j["orbit_point"] = complex_to_json(s.orbit_point);
  return j;
}

SolveResult solve_result_from_json(const Json& j) {
  return guarded("solve result", [&] {
    SolveResult s;
    const std::string kind = j.at("kind").get<std::string>();
    s.parameter = complex_from_json(j.at("parameter"));
    s.residual = j.at("residual").get<double>();
    s.iterations = j.value("iterations", 0);
    if (j.contains("orbit_point")) s.orbit_point = complex_from_json(j.at("orbit_point"));
    const Json& p = j.at("periods");
    if (kind == "parabolic") {
      s.kind = SolveKind::Parabolic;
      s.orbit_period = p.at("orbit_period").get<int>();
      s.ray_period = p.at("ray_period").get<int>();
      s.multiplier = complex_from_json(j.at("multiplier"));
    } else if (kind == "misiurewicz") {
      s.kind = SolveKind::Misiurewicz;
      s.preperiod = p.at("preperiod").get<int>();
      s.period = p.at("period").get<int>();
    } else {
      throw DomainError("unknown solve kind '" + kind + "'");
    }
    return s;
  });
}

Json ray_count_to_json(const RayCount& r) {
  Json j{{"rule", r.str()}, {"kneading_period", r.kneading_period}};
  j["count"] = r.exact ? Json(r.count) : Json(nullptr);
  return j;
}

Census read_atlas(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open atlas " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw DomainError("atlas " + path.string() + " is not valid JSON: " + e.what());
  }
  return census_from_json(j);
}

void write_atlas(const std::filesystem::path& path, const Census& c) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw DomainError("cannot write atlas " + path.string());
    out << census_to_json(c).dump(1) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace multibrot
