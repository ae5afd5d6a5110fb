#include "multibrot/render.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace multibrot;
namespace fs = std::filesystem;

namespace {

Angle A(long long p, long long q) { return Angle(p, q); }

fs::path golden(const std::string& name) { return fs::path(MULTIBROT_TEST_DATA) / name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Plain escape-time oracle: the orbit escapes once |z| exceeds R.
bool bounded_oracle(int d, Complex c, Complex z, int max_iter, double radius) {
  for (int i = 0; i < max_iter; ++i) {
    if (std::abs(z) > radius) return false;
    z = std::pow(z, d) + c;
  }
  return true;
}

bool near_colour(const Image& img, double px, double py, Rgb want, int reach) {
  const int cx = static_cast<int>(std::lround(px)), cy = static_cast<int>(std::lround(py));
  for (int y = cy - reach; y <= cy + reach; ++y)
    for (int x = cx - reach; x <= cx + reach; ++x)
      if (x >= 0 && y >= 0 && x < img.width && y < img.height && img.at(x, y) == want) return true;
  return false;
}

}  // namespace

TEST_CASE("point classification") {
  const Scene m2 = parameter_scene(2);
  CHECK(classify_point(m2, 0.0).interior());
  CHECK(classify_point(m2, -1.0).interior());
  CHECK(classify_point(m2, Complex(0, 1)).interior());
  const PixelClass out = classify_point(m2, 1.0);
  REQUIRE(out.escaped_at);
  CHECK(*out.escaped_at == 3);  // 0, 1, 2, 5
  CHECK(out.smooth > 2.0);
  CHECK(out.smooth < 4.0);

  const Scene j0 = julia_scene(2, 0.0);
  CHECK(classify_point(j0, 0.5).interior());
  CHECK_FALSE(classify_point(j0, 1.5).interior());
  CHECK(j0.radius() == 3.0);
  CHECK(julia_scene(2, Complex(0, 5)).radius() == 6.0);
  CHECK(parameter_scene(3).radius() == 3.0);
}

TEST_CASE("classification agrees with the escape-time oracle") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-2.2, 2.2);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 2 + trial % 3;
    Scene s = trial % 2 ? parameter_scene(d) : julia_scene(d, Complex(-0.12, 0.74));
    s.max_iter = 200;
    const Complex p(u(rng), u(rng));
    const bool expect = trial % 2 ? bounded_oracle(d, p, 0.0, 200, s.radius())
                                  : bounded_oracle(d, Complex(-0.12, 0.74), p, 200, s.radius());
    CHECK(classify_point(s, p).interior() == expect);
  }
}

TEST_CASE("escape time never increases moving outward along the real axis") {
  Scene s = parameter_scene(2);
  s.max_iter = 1000;
  int last = s.max_iter + 1;
  for (double x = 0.2501; x < 3.0; x += 0.01) {
    const PixelClass pc = classify_point(s, x);
    const int at = pc.escaped_at.value_or(s.max_iter + 1);
    CHECK(at <= last);
    last = at;
  }
}

TEST_CASE("viewport mapping") {
  Viewport vp = reference_viewport(2, 400, 300);
  CHECK(vp.center == Complex(-0.5, 0));
  const Complex z = vp.point(17, 230);
  auto [x, y] = vp.to_pixel(z);
  CHECK(x == doctest::Approx(17));
  CHECK(y == doctest::Approx(230));
  CHECK(vp.point(0, 0).imag() > vp.point(0, 299).imag());
  vp.width = 0;
  CHECK_THROWS_AS(vp.validate(), DomainError);
  vp = reference_viewport(2);
  vp.pixels_h = 0;
  CHECK_THROWS_AS(render(parameter_scene(2), vp), DomainError);
}

TEST_CASE("scene validation") {
  Scene s = parameter_scene(2);
  s.max_iter = 0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = parameter_scene(2);
  s.overlays.push_back(trace_parameter_ray(3, A(1, 26), Potential::from_value(0.1)));
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = parameter_scene(2);
  s.overlays.push_back(trace_dynamical_ray(2, 0.0, A(1, 3), Potential::from_value(0.1)));
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = julia_scene(2, 0.0);
  s.overlays.push_back(trace_dynamical_ray(2, 0.0, A(1, 3), Potential::from_value(0.1)));
  CHECK_NOTHROW(s.validate());
  CHECK_THROWS_AS(parameter_scene(1).validate(), DomainError);
}

TEST_CASE("render output does not depend on the thread count") {
  for (int d = 2; d <= 4; ++d) {
    Scene s = parameter_scene(d);
    s.max_iter = 150;
    s.overlays.push_back(trace_parameter_ray(d, A(1, 3 * d), Potential::from_value(1e-3)));
    const Viewport vp = reference_viewport(d, 97, 61);
    RenderOptions one, many;
    many.threads = 8;
    many.tile = 16;
    CHECK(ppm_bytes(render(s, vp, {}, one)) == ppm_bytes(render(s, vp, {}, many)));
  }
}

TEST_CASE("golden quadratic render") {
  Scene s = parameter_scene(2);
  s.max_iter = 200;
  const Image img = render(s, reference_viewport(2, 64, 48));
  const std::string bytes = ppm_bytes(img);
  CHECK(bytes.rfind("P6\n64 48\n255\n", 0) == 0);
  CHECK(bytes.size() == std::string("P6\n64 48\n255\n").size() + 64 * 48 * 3);
  const fs::path path = golden("m2_64x48.ppm");
  if (std::getenv("MULTIBROT_UPDATE_GOLDEN")) write_ppm(path, img);
  REQUIRE(fs::exists(path));
  CHECK(slurp(path) == bytes);
}

TEST_CASE("interior pixels are painted with the interior colour") {
  Scene s = parameter_scene(3);
  s.max_iter = 100;
  const Viewport vp = reference_viewport(3, 40, 30);
  const Image img = render(s, vp);
  const Palette pal;
  for (int y = 0; y < vp.pixels_h; ++y)
    for (int x = 0; x < vp.pixels_w; ++x)
      CHECK((img.at(x, y) == pal.interior) == classify_pixel(s, vp, x, y).interior());
}

TEST_CASE("cubic parameter rays are drawn through their traced points") {
  Scene s = parameter_scene(3);
  s.max_iter = 100;
  const Viewport vp = reference_viewport(3, 300, 300);
  for (const Angle& t : {A(1, 26), A(7, 26), A(1, 8)})
    s.overlays.push_back(trace_parameter_ray(3, t, Potential::from_value(1e-4)));
  const Image img = render(s, vp);
  const Palette pal;
  std::size_t visible = 0;
  for (const auto& o : s.overlays) {
    for (const RayPoint& p : std::get<RayTrace>(o).points) {
      auto [x, y] = vp.to_pixel(p.z);
      if (x < 0 || y < 0 || x > vp.pixels_w - 1 || y > vp.pixels_h - 1) continue;
      ++visible;
      CHECK(near_colour(img, x, y, pal.ray, 3));
    }
  }
  CHECK(visible > 30);
}

TEST_CASE("the three rabbit rays meet at the alpha fixed point") {
  const Complex c(-0.12256116687665362, 0.7448617666197442);
  Scene s = julia_scene(2, c);
  s.max_iter = 200;
  const Viewport vp{Complex(0, 0), 3.2, 320, 320};
  std::vector<Complex> ends;
  for (const Angle& t : {A(1, 7), A(2, 7), A(4, 7)}) {
    LandingConfig lc;
    const RayTrace tr = trace_dynamical_ray(2, c, t, Potential::from_log(-300), lc.trace);
    s.overlays.push_back(tr);
    ends.push_back(tr.endpoint().z);
  }
  const double px = vp.pixel_size();
  for (std::size_t i = 0; i < ends.size(); ++i)
    for (std::size_t j = i + 1; j < ends.size(); ++j) CHECK(std::abs(ends[i] - ends[j]) < 3 * px);
  const Complex alpha = dynamical_landing_point(2, c, A(1, 7));
  for (const Complex& e : ends) CHECK(std::abs(e - alpha) < 3 * px);
  const Image img = render(s, vp);
  auto [x, y] = vp.to_pixel(alpha);
  CHECK(near_colour(img, x, y, Palette{}.ray, 3));
}

TEST_CASE("markers and labels are drawn") {
  Scene s = parameter_scene(2);
  s.max_iter = 50;
  const Viewport vp = reference_viewport(2, 120, 90);
  s.overlays.push_back(MarkedPoint{Complex(-0.75, 0), "root"});
  s.overlays.push_back(ArcLabel{Arc(A(1, 3), A(2, 3)), Complex(-1.0, 0.5)});
  const Image img = render(s, vp);
  auto [mx, my] = vp.to_pixel(Complex(-0.75, 0));
  CHECK(near_colour(img, mx, my, Palette{}.marker, 2));
  auto [lx, ly] = vp.to_pixel(Complex(-1.0, 0.5));
  CHECK(near_colour(img, lx, ly, Palette{}.label, 6));
}

TEST_CASE("SVG overlay") {
  Scene s = parameter_scene(2);
  const Viewport vp = reference_viewport(2, 200, 150);
  s.overlays.push_back(trace_parameter_ray(2, A(1, 3), Potential::from_value(1e-3)));
  s.overlays.push_back(trace_parameter_ray(2, A(2, 3), Potential::from_value(1e-3)));
  s.overlays.push_back(MarkedPoint{Complex(-0.75, 0), "root"});
  const std::string svg = overlays_svg(s, vp);
  CHECK(svg.rfind("<svg", 0) == 0);
  std::size_t paths = 0;
  for (std::size_t at = svg.find("<path"); at != std::string::npos; at = svg.find("<path", at + 1)) ++paths;
  CHECK(paths == 2);
  CHECK(svg.find("data-angle=\"1/3\"") != std::string::npos);
  CHECK(svg.find(">root</text>") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("image files") {
  const fs::path dir = fs::temp_directory_path() / ("multibrot_render_test_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  Scene s = parameter_scene(2);
  s.max_iter = 30;
  const Image img = render(s, reference_viewport(2, 16, 12));
  write_image(dir / "a.ppm", img);
  CHECK(slurp(dir / "a.ppm") == ppm_bytes(img));
  if (png_supported()) {
    write_image(dir / "a.png", img);
    CHECK(slurp(dir / "a.png").rfind("\x89PNG\r\n\x1a\n", 0) == 0);
  } else {
    CHECK_THROWS_AS(write_image(dir / "a.png", img), DomainError);
  }
  CHECK_THROWS_AS(write_ppm(dir / "missing" / "x.ppm", img), DomainError);
  fs::remove_all(dir);
}

TEST_CASE("rendered sets respect their symmetries") {
  CHECK(symmetry_check(2, 80, 300).mismatch_fraction() <= 2e-3);
  CHECK(symmetry_check(4, 80, 300).mismatch_fraction() <= 2e-3);
  CHECK_THROWS_AS(symmetry_check(2, 1, 10), DomainError);
}
