#include "multibrot/render.hpp"

#include "multibrot/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#ifdef MULTIBROT_HAVE_PNG
#include <png.h>
#endif

namespace multibrot {

void Viewport::validate() const {
  if (!(width > 0) || !std::isfinite(width)) throw DomainError("viewport width must be positive");
  if (pixels_w < 1 || pixels_h < 1) throw DomainError("viewport needs at least one pixel in each direction");
  if (!std::isfinite(center.real()) || !std::isfinite(center.imag())) throw DomainError("viewport centre must be finite");
}

Complex Viewport::point(int x, int y) const {
  const double s = pixel_size();
  return center + Complex((x + 0.5 - pixels_w / 2.0) * s, (pixels_h / 2.0 - y - 0.5) * s);
}

std::pair<double, double> Viewport::to_pixel(Complex z) const {
  const double s = pixel_size();
  const Complex off = z - center;
  return {off.real() / s + pixels_w / 2.0 - 0.5, pixels_h / 2.0 - 0.5 - off.imag() / s};
}

// ---------------------------------------------------------------------------

double Scene::radius() const {
  if (escape_radius) return *escape_radius;
  double r = std::max(2.0, std::pow(2.0, 1.0 / (degree - 1)));
  if (auto* dp = std::get_if<DynamicalPlane>(&plane)) r = std::max(r, std::abs(dp->c));
  return r + 1;
}

void Scene::validate() const {
  require_degree(degree);
  if (max_iter < 1) throw DomainError("max_iter must be positive");
  if (escape_radius && !(*escape_radius > 0)) throw DomainError("escape radius must be positive");
  for (const auto& o : overlays) {
    if (auto* t = std::get_if<RayTrace>(&o)) {
      if (t->degree != degree) throw DomainError("overlay ray " + t->angle.str() + " has a different degree");
      if (t->plane != plane) throw DomainError("overlay ray " + t->angle.str() + " belongs to another plane");
    }
  }
}

Scene parameter_scene(int d) {
  Scene s;
  s.degree = d;
  s.plane = ParameterPlane{};
  return s;
}

Scene julia_scene(int d, Complex c) {
  Scene s;
  s.degree = d;
  s.plane = DynamicalPlane{c};
  return s;
}

PixelClass classify_point(const Scene& scene, Complex p) {
  const int d = scene.degree;
  const double radius = scene.radius();
  Complex z, c;
  if (auto* dp = std::get_if<DynamicalPlane>(&scene.plane)) {
    z = p;
    c = dp->c;
  } else {
    z = 0;
    c = p;
  }
  const double r2 = radius * radius;
  for (int i = 0; i < scene.max_iter; ++i) {
    const double m2 = std::norm(z);
    if (m2 > r2) {
      PixelClass pc{i, static_cast<double>(i)};
      // log|z| / log R lies in (1, |z|^(d-1)]; its log base d is the overshoot.
      const double ratio = std::log(std::sqrt(m2)) / std::log(radius);
      pc.smooth = i + 1 - std::log(ratio) / std::log(static_cast<double>(d));
      return pc;
    }
    z = ipow(z, d) + c;
  }
  return {};
}

PixelClass classify_pixel(const Scene& scene, const Viewport& vp, int x, int y) {
  return classify_point(scene, vp.point(x, y));
}

// ---------------------------------------------------------------------------

Rgb Palette::color(const PixelClass& pc) const {
  if (pc.interior() || gradient.empty()) return interior;
  double t = pc.smooth / cycle;
  t -= std::floor(t);
  const double pos = t * gradient.size();
  const std::size_t i = static_cast<std::size_t>(pos) % gradient.size();
  const std::size_t j = (i + 1) % gradient.size();
  const double f = pos - std::floor(pos);
  auto mix = [f](std::uint8_t a, std::uint8_t b) {
    return static_cast<std::uint8_t>(std::lround(a + (static_cast<double>(b) - a) * f));
  };
  return {mix(gradient[i].r, gradient[j].r), mix(gradient[i].g, gradient[j].g), mix(gradient[i].b, gradient[j].b)};
}

Rgb Image::at(int x, int y) const {
  const std::size_t k = 3 * (static_cast<std::size_t>(y) * width + x);
  return {rgb[k], rgb[k + 1], rgb[k + 2]};
}

void Image::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  const std::size_t k = 3 * (static_cast<std::size_t>(y) * width + x);
  rgb[k] = c.r;
  rgb[k + 1] = c.g;
  rgb[k + 2] = c.b;
}

namespace {

void draw_line(Image& img, double x0, double y0, double x1, double y1, Rgb c) {
  // Skip segments entirely off-canvas; traces start far outside any view.
  const double lim = 4.0 * std::max(img.width, img.height);
  if ((x0 < -lim && x1 < -lim) || (y0 < -lim && y1 < -lim) || (x0 > lim && x1 > lim) || (y0 > lim && y1 > lim)) return;
  auto clampc = [lim](double v) { return std::clamp(v, -lim, lim); };
  int ax = static_cast<int>(std::lround(clampc(x0))), ay = static_cast<int>(std::lround(clampc(y0)));
  const int bx = static_cast<int>(std::lround(clampc(x1))), by = static_cast<int>(std::lround(clampc(y1)));
  const int dx = std::abs(bx - ax), dy = -std::abs(by - ay);
  const int sx = ax < bx ? 1 : -1, sy = ay < by ? 1 : -1;
  int err = dx + dy;
  while (true) {
    img.set(ax, ay, c);
    if (ax == bx && ay == by) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      ax += sx;
    }
    if (e2 <= dx) {
      err += dx;
      ay += sy;
    }
  }
}

void draw_marker(Image& img, double x, double y, Rgb c) {
  const int cx = static_cast<int>(std::lround(x)), cy = static_cast<int>(std::lround(y));
  for (int k = -3; k <= 3; ++k) {
    img.set(cx + k, cy, c);
    img.set(cx, cy + k, c);
  }
}

void draw_box(Image& img, double x, double y, Rgb c) {
  const int cx = static_cast<int>(std::lround(x)), cy = static_cast<int>(std::lround(y));
  for (int k = -2; k <= 2; ++k) {
    img.set(cx + k, cy - 2, c);
    img.set(cx + k, cy + 2, c);
    img.set(cx - 2, cy + k, c);
    img.set(cx + 2, cy + k, c);
  }
}

}  // namespace

Image render(const Scene& scene, const Viewport& vp, const Palette& palette, const RenderOptions& opts) {
  scene.validate();
  vp.validate();
  if (opts.tile < 1) throw DomainError("tile size must be positive");
  Image img{vp.pixels_w, vp.pixels_h, std::vector<std::uint8_t>(3 * std::size_t(vp.pixels_w) * vp.pixels_h)};

  const int tiles_x = (vp.pixels_w + opts.tile - 1) / opts.tile;
  const int tiles_y = (vp.pixels_h + opts.tile - 1) / opts.tile;
  std::vector<std::vector<Rgb>> tiles(std::size_t(tiles_x) * tiles_y);
  parallel_for(tiles.size(), opts.threads, [&](std::size_t t) {
    const int x0 = static_cast<int>(t % tiles_x) * opts.tile, y0 = static_cast<int>(t / tiles_x) * opts.tile;
    const int x1 = std::min(x0 + opts.tile, vp.pixels_w), y1 = std::min(y0 + opts.tile, vp.pixels_h);
    auto& out = tiles[t];
    out.reserve(std::size_t(x1 - x0) * (y1 - y0));
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x) out.push_back(palette.color(classify_pixel(scene, vp, x, y)));
  });
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    const int x0 = static_cast<int>(t % tiles_x) * opts.tile, y0 = static_cast<int>(t / tiles_x) * opts.tile;
    const int x1 = std::min(x0 + opts.tile, vp.pixels_w);
    const int w = x1 - x0;
    for (std::size_t k = 0; k < tiles[t].size(); ++k) img.set(x0 + static_cast<int>(k % w), y0 + static_cast<int>(k / w), tiles[t][k]);
  }

  for (const auto& o : scene.overlays) {
    if (auto* t = std::get_if<RayTrace>(&o)) {
      for (std::size_t k = 1; k < t->points.size(); ++k) {
        auto [ax, ay] = vp.to_pixel(t->points[k - 1].z);
        auto [bx, by] = vp.to_pixel(t->points[k].z);
        draw_line(img, ax, ay, bx, by, palette.ray);
      }
    } else if (auto* m = std::get_if<MarkedPoint>(&o)) {
      auto [x, y] = vp.to_pixel(m->z);
      draw_marker(img, x, y, palette.marker);
    } else if (auto* a = std::get_if<ArcLabel>(&o)) {
      auto [x, y] = vp.to_pixel(a->anchor);
      draw_box(img, x, y, palette.label);
    }
  }
  return img;
}

// ---------------------------------------------------------------------------

std::string ppm_bytes(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
  return out;
}

void write_ppm(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path.string() + " for writing");
  const std::string bytes = ppm_bytes(img);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DomainError("write to " + path.string() + " failed");
}

#ifdef MULTIBROT_HAVE_PNG
bool png_supported() { return true; }

void write_png(const std::filesystem::path& path, const Image& img) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw DomainError("cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw DomainError("PNG encoding of " + path.string() + " failed");
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y)
    png_write_row(png, const_cast<png_bytep>(img.rgb.data() + 3 * std::size_t(y) * img.width));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}
#else
bool png_supported() { return false; }

void write_png(const std::filesystem::path& path, const Image&) {
  throw DomainError("PNG output unavailable in this build; write " + path.stem().string() + ".ppm instead");
}
#endif

void write_image(const std::filesystem::path& path, const Image& img) {
  if (path.extension() == ".png")
    write_png(path, img);
  else
    write_ppm(path, img);
}

std::string overlays_svg(const Scene& scene, const Viewport& vp, const Palette& palette) {
  auto hex = [](Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return std::string(buf);
  };
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << vp.pixels_w << "\" height=\"" << vp.pixels_h
      << "\" viewBox=\"0 0 " << vp.pixels_w << " " << vp.pixels_h << "\">\n";
  const double lim = 4.0 * std::max(vp.pixels_w, vp.pixels_h);
  for (const auto& o : scene.overlays) {
    if (auto* t = std::get_if<RayTrace>(&o)) {
      out << "  <path data-angle=\"" << t->angle.str() << "\" fill=\"none\" stroke=\"" << hex(palette.ray)
          << "\" stroke-width=\"1\" d=\"";
      char cmd = 'M';
      for (const auto& p : t->points) {
        auto [x, y] = vp.to_pixel(p.z);
        if (std::abs(x) > lim || std::abs(y) > lim) continue;
        out << cmd << x << ' ' << y << ' ';
        cmd = 'L';
      }
      out << "\"/>\n";
    } else if (auto* m = std::get_if<MarkedPoint>(&o)) {
      auto [x, y] = vp.to_pixel(m->z);
      out << "  <circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"" << hex(palette.marker) << "\"/>\n";
      if (!m->label.empty())
        out << "  <text x=\"" << x + 5 << "\" y=\"" << y - 5 << "\" font-size=\"11\" fill=\"" << hex(palette.marker)
            << "\">" << m->label << "</text>\n";
    } else if (auto* a = std::get_if<ArcLabel>(&o)) {
      auto [x, y] = vp.to_pixel(a->anchor);
      out << "  <text x=\"" << x << "\" y=\"" << y << "\" font-size=\"11\" fill=\"" << hex(palette.label) << "\">"
          << a->arc.str() << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

// ---------------------------------------------------------------------------

SymmetryReport symmetry_check(int d, int grid, int max_iter, double extent) {
  require_degree(d);
  if (grid < 2) throw DomainError("symmetry grid needs at least 2 points per side");
  Scene scene = parameter_scene(d);
  scene.max_iter = max_iter;
  const Complex rot = std::polar(1.0, 2 * std::numbers::pi / (d - 1));
  SymmetryReport r;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      // Offset so no sample sits on an axis of symmetry.
      const Complex c(-extent + 2 * extent * (i + 0.37) / grid, -extent + 2 * extent * (j + 0.61) / grid);
      const auto base = classify_point(scene, c).escaped_at;
      r.samples += 2;
      if (classify_point(scene, c * rot).escaped_at != base) ++r.mismatches;
      if (classify_point(scene, std::conj(c)).escaped_at != base) ++r.mismatches;
    }
  }
  return r;
}

Viewport reference_viewport(int d, int w, int h) {
  Viewport vp;
  vp.center = d == 2 ? Complex(-0.5, 0) : Complex(0, 0);
  vp.width = 3.0;
  vp.pixels_w = w;
  vp.pixels_h = h;
  return vp;
}

}  // namespace multibrot
