#pragma once

#include "multibrot/numerics.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace multibrot {

struct Viewport {
  Complex center;
  double width = 3.0;
  int pixels_w = 800;
  int pixels_h = 600;

  void validate() const;
  double pixel_size() const { return width / pixels_w; }
  /// Centre of pixel (x, y); y grows downward, so imaginary part decreases.
  Complex point(int x, int y) const;
  /// Continuous pixel coordinates of z (inverse of point()).
  std::pair<double, double> to_pixel(Complex z) const;
};

struct MarkedPoint {
  Complex z;
  std::string label;
};

/// Text annotation for a wake or characteristic arc, drawn at `anchor`.
struct ArcLabel {
  Arc arc;
  Complex anchor;
};

using Overlay = std::variant<RayTrace, MarkedPoint, ArcLabel>;

struct Scene {
  int degree = 2;
  Plane plane = ParameterPlane{};
  std::vector<Overlay> overlays;
  int max_iter = 500;
  std::optional<double> escape_radius;  // default max(2, 2^(1/(d-1)), |c|) + 1

  double radius() const;
  /// Throws DomainError for bad degree/limits or overlay traces from another plane.
  void validate() const;
};

Scene parameter_scene(int d);
Scene julia_scene(int d, Complex c);

/// Escape iteration, or none for points still bounded after max_iter.
struct PixelClass {
  std::optional<int> escaped_at;
  double smooth = 0.0;  // normalized iteration count, only when escaped

  bool interior() const { return !escaped_at; }
};

/// Parameter plane: orbit of 0 under f_p. Dynamical plane: orbit of p under f_c.
PixelClass classify_point(const Scene& scene, Complex p);
PixelClass classify_pixel(const Scene& scene, const Viewport& vp, int x, int y);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

struct Palette {
  Rgb interior{0, 0, 0};
  std::vector<Rgb> gradient{{9, 1, 47}, {4, 70, 150}, {134, 181, 229}, {248, 236, 160}, {204, 108, 0}, {66, 30, 15}};
  double cycle = 48.0;  // smooth iterations per gradient cycle
  Rgb ray{255, 255, 255};
  Rgb marker{230, 30, 60};
  Rgb label{255, 220, 0};

  Rgb color(const PixelClass& pc) const;
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
};

struct RenderOptions {
  unsigned threads = 1;
  int tile = 64;
};

/// Tiles are rendered independently and merged in a fixed order, and overlays
/// are drawn sequentially afterwards, so output never depends on `threads`.
Image render(const Scene& scene, const Viewport& vp, const Palette& palette = {}, const RenderOptions& opts = {});

std::string ppm_bytes(const Image& img);
void write_ppm(const std::filesystem::path& path, const Image& img);
bool png_supported();
void write_png(const std::filesystem::path& path, const Image& img);
/// Picks PNG or PPM from the extension.
void write_image(const std::filesystem::path& path, const Image& img);

/// Overlays as an SVG document sized to the viewport (rays as paths).
std::string overlays_svg(const Scene& scene, const Viewport& vp, const Palette& palette = {});

/// Compares escape classification at c against its images under the
/// symmetries of M_d (rotation by 1/(d-1) turn and conjugation) on a grid.
struct SymmetryReport {
  std::size_t samples = 0;
  std::size_t mismatches = 0;

  double mismatch_fraction() const { return samples ? double(mismatches) / samples : 0.0; }
};

SymmetryReport symmetry_check(int d, int grid, int max_iter, double extent = 2.0);

/// Reference views used by tests and docs.
Viewport reference_viewport(int d, int w = 400, int h = 300);

}  // namespace multibrot
