#pragma once

// Conformal metrics e^{2u}|dz|^2 near a puncture: the two ambient hyperbolic
// models, the conical and cusp local models, pullbacks through developing
// maps and metrics sampled on a grid.

#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "hypsing/devmap.hpp"

namespace hypsing {

struct HyperbolicDisk {};
struct HyperbolicHalfPlane {};

/// 4 theta^2 |z|^{2theta-2} / (1 - |z|^{2theta})^2 on 0 < |z| < 1.
struct Conical {
  double theta;
};

/// |z|^{-2} (ln|z|)^{-2} on 0 < |z| < 1.
struct Cusp {};

/// Samples of u on a rectangle, row-major with x varying fastest.
struct GridSampled {
  double x0, x1;
  int nx;
  double y0, y1;
  int ny;
  std::vector<double> u;
};

class ConformalMetric;

struct Pullback {
  DevelopingMapSpec map;
  std::shared_ptr<const ConformalMetric> base;
};

class ConformalMetric {
 public:
  using Form = std::variant<HyperbolicDisk, HyperbolicHalfPlane, Conical, Cusp, Pullback, GridSampled>;

  static ConformalMetric hyperbolic_disk();
  static ConformalMetric hyperbolic_half_plane();
  static ConformalMetric hyperbolic(Model model);
  /// theta > 0 and theta != 1.
  static ConformalMetric conical(double theta);
  static ConformalMetric cusp();
  static ConformalMetric pullback(DevelopingMapSpec map, ConformalMetric base);
  static ConformalMetric grid(GridSampled samples);

  const Form& form() const noexcept { return form_; }

  /// Singular at 0 and defined on a punctured disk.
  bool is_punctured() const noexcept;
  bool contains(Complex z) const noexcept;

 private:
  explicit ConformalMetric(Form form) : form_(std::move(form)) {}

  Form form_;
};

double hyperbolic_density(Model model, Complex z);
/// Closed-form conical density; theta = 1 gives the smooth disk metric.
double conical_density(double theta, Complex z);
double cusp_density(Complex z);

/// Coefficient of |dz|^2 at z.
double density(const ConformalMetric& m, Complex z);
/// u = log(density) / 2, evaluated in logarithmic form where a closed form exists.
double log_density(const ConformalMetric& m, Complex z);

enum class Stencil {
  /// Covering for punctured metrics, Cartesian otherwise.
  Auto,
  /// z +- h, z +- ih.
  Cartesian,
  /// z e^{+-s}, z e^{+-is} with s = h/|z|: the five-point stencil in log z.
  Covering,
};

/// |Delta u - e^{2u}| at z from a five-point Laplacian of spacing h.
double log_density_gradient_check(const ConformalMetric& m, Complex z, double h,
                                  Stencil stencil = Stencil::Auto);

/// Midpoint rule on each segment split into `subdivisions` pieces.
double curve_length(const ConformalMetric& m, std::span<const Complex> path, int subdivisions = 1);

/// nr x nphi points, radius-major, radii spaced evenly in [rmin, rmax].
std::vector<Complex> annulus_grid(double rmin, double rmax, int nr, int nphi, Complex center = 0.0);
/// Row-major, x fastest; a single sample sits at (x0, y0).
std::vector<Complex> rect_grid(double x0, double x1, int nx, double y0, double y1, int ny);

}  // namespace hypsing
