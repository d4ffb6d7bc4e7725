#include "hypsing/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace hypsing {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_punctured_point(Complex z) {
  const double r = std::abs(z);
  if (r == 0.0) fail(ErrorKind::Domain, "metric evaluated at the puncture");
  if (!(r < 1.0)) fail(ErrorKind::Domain, "metric evaluated outside the unit disk");
}

double punctured_radius(const Pullback& p) { return std::min(1.0, p.map.validated_radius()); }

double grid_u(const GridSampled& g, Complex z) {
  const double x = z.real(), y = z.imag();
  if (x < g.x0 || x > g.x1 || y < g.y0 || y > g.y1) {
    fail(ErrorKind::Domain, "point outside the sampled grid");
  }
  const double fx = (x - g.x0) / (g.x1 - g.x0) * (g.nx - 1);
  const double fy = (y - g.y0) / (g.y1 - g.y0) * (g.ny - 1);
  const int i = std::min(static_cast<int>(fx), g.nx - 2);
  const int j = std::min(static_cast<int>(fy), g.ny - 2);
  const double tx = fx - i, ty = fy - j;
  auto at = [&](int ii, int jj) { return g.u[static_cast<std::size_t>(jj) * g.nx + ii]; };
  return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
         (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
}

double conical_log_density(double theta, Complex z) {
  require_punctured_point(z);
  const double lr = std::log(std::abs(z));
  // 1 - r^{2 theta} without cancellation for r^{2 theta} close to 1.
  const double gap = -std::expm1(2.0 * theta * lr);
  return std::log(2.0 * theta) + (theta - 1.0) * lr - std::log(gap);
}

double cusp_log_density(Complex z) {
  require_punctured_point(z);
  const double lr = std::log(std::abs(z));
  return -lr - std::log(-lr);
}

double hyperbolic_log_density(Model model, Complex z) {
  if (!in_model_domain(z, model)) {
    fail(ErrorKind::Domain, std::string("point outside the ") + to_string(model) + " model");
  }
  if (model == Model::Disk) return std::log(2.0) - std::log1p(-std::norm(z));
  return -std::log(z.imag());
}

}  // namespace

ConformalMetric ConformalMetric::hyperbolic_disk() { return ConformalMetric(HyperbolicDisk{}); }

ConformalMetric ConformalMetric::hyperbolic_half_plane() {
  return ConformalMetric(HyperbolicHalfPlane{});
}

ConformalMetric ConformalMetric::hyperbolic(Model model) {
  return model == Model::Disk ? hyperbolic_disk() : hyperbolic_half_plane();
}

ConformalMetric ConformalMetric::conical(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    fail(ErrorKind::InvalidArgument, "cone parameter must be positive");
  }
  if (theta == 1.0) fail(ErrorKind::InvalidArgument, "cone parameter 1 is a smooth point");
  return ConformalMetric(Conical{theta});
}

ConformalMetric ConformalMetric::cusp() { return ConformalMetric(Cusp{}); }

ConformalMetric ConformalMetric::pullback(DevelopingMapSpec map, ConformalMetric base) {
  return ConformalMetric(
      Pullback{std::move(map), std::make_shared<const ConformalMetric>(std::move(base))});
}

ConformalMetric ConformalMetric::grid(GridSampled g) {
  if (g.nx < 2 || g.ny < 2) fail(ErrorKind::InvalidArgument, "grid needs at least 2x2 samples");
  if (!(g.x1 > g.x0) || !(g.y1 > g.y0)) fail(ErrorKind::InvalidArgument, "empty grid rectangle");
  if (g.u.size() != static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny)) {
    fail(ErrorKind::InvalidArgument, "grid sample count does not match its shape");
  }
  if (!std::all_of(g.u.begin(), g.u.end(), [](double v) { return std::isfinite(v); })) {
    fail(ErrorKind::InvalidArgument, "grid samples must be finite");
  }
  return ConformalMetric(std::move(g));
}

bool ConformalMetric::is_punctured() const noexcept {
  return std::holds_alternative<Conical>(form_) || std::holds_alternative<Cusp>(form_) ||
         std::holds_alternative<Pullback>(form_);
}

bool ConformalMetric::contains(Complex z) const noexcept {
  return std::visit(
      overloaded{
          [&](const HyperbolicDisk&) { return in_model_domain(z, Model::Disk); },
          [&](const HyperbolicHalfPlane&) { return in_model_domain(z, Model::HalfPlane); },
          [&](const Conical&) { return z != Complex{} && std::abs(z) < 1.0; },
          [&](const Cusp&) { return z != Complex{} && std::abs(z) < 1.0; },
          [&](const Pullback& p) { return z != Complex{} && std::abs(z) <= punctured_radius(p) && std::abs(z) < 1.0; },
          [&](const GridSampled& g) {
            return z.real() >= g.x0 && z.real() <= g.x1 && z.imag() >= g.y0 && z.imag() <= g.y1;
          },
      },
      form_);
}

double hyperbolic_density(Model model, Complex z) {
  return std::exp(2.0 * hyperbolic_log_density(model, z));
}

double conical_density(double theta, Complex z) {
  if (!(theta > 0.0)) fail(ErrorKind::InvalidArgument, "cone parameter must be positive");
  return std::exp(2.0 * conical_log_density(theta, z));
}

double cusp_density(Complex z) { return std::exp(2.0 * cusp_log_density(z)); }

double log_density(const ConformalMetric& m, Complex z) {
  return std::visit(
      overloaded{
          [&](const HyperbolicDisk&) { return hyperbolic_log_density(Model::Disk, z); },
          [&](const HyperbolicHalfPlane&) { return hyperbolic_log_density(Model::HalfPlane, z); },
          [&](const Conical& c) { return conical_log_density(c.theta, z); },
          [&](const Cusp&) { return cusp_log_density(z); },
          [&](const Pullback& p) {
            const Jet3 j = dev_jet(p.map, z);
            return log_density(*p.base, j.value) + std::log(std::abs(j.d1));
          },
          [&](const GridSampled& g) { return grid_u(g, z); },
      },
      m.form());
}

double density(const ConformalMetric& m, Complex z) {
  if (const auto* p = std::get_if<Pullback>(&m.form())) {
    const Jet3 j = dev_jet(p->map, z);
    return density(*p->base, j.value) * std::norm(j.d1);
  }
  return std::exp(2.0 * log_density(m, z));
}

double log_density_gradient_check(const ConformalMetric& m, Complex z, double h, Stencil stencil) {
  if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorKind::InvalidArgument, "stencil spacing must be positive");
  if (stencil == Stencil::Auto) stencil = m.is_punctured() ? Stencil::Covering : Stencil::Cartesian;
  if (m.is_punctured() && std::abs(z) < 10.0 * h) {
    fail(ErrorKind::Domain, "stencil too close to the puncture (|z| < 10 h)");
  }

  std::array<Complex, 4> pts;
  double scale;  // (spacing in the stencil variable)^2 * |dz/dvariable|^2
  if (stencil == Stencil::Cartesian) {
    pts = {z + h, z - h, z + Complex(0, h), z - Complex(0, h)};
    scale = h * h;
  } else {
    if (z == Complex{}) fail(ErrorKind::Domain, "covering stencil needs z != 0");
    const double s = h / std::abs(z);
    pts = {z * std::exp(s), z * std::exp(-s), z * std::polar(1.0, s), z * std::polar(1.0, -s)};
    scale = s * s * std::norm(z);
  }
  for (Complex p : pts) {
    if (!m.contains(p)) fail(ErrorKind::Domain, "stencil leaves the metric's domain");
  }
  const double u0 = log_density(m, z);
  double sum = -4.0 * u0;
  for (Complex p : pts) sum += log_density(m, p);
  return std::abs(sum / scale - std::exp(2.0 * u0));
}

double curve_length(const ConformalMetric& m, std::span<const Complex> path, int subdivisions) {
  if (path.empty()) fail(ErrorKind::InvalidArgument, "curve_length needs at least one point");
  if (subdivisions < 1) fail(ErrorKind::InvalidArgument, "subdivisions must be positive");
  for (Complex p : path) {
    if (!m.contains(p)) fail(ErrorKind::Domain, "path point outside the metric's domain");
  }
  double length = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Complex a = path[i - 1], b = path[i];
    if (m.is_punctured()) {
      // Distance from 0 to the segment.
      const Complex d = b - a;
      const double t = std::norm(d) > 0 ? std::clamp(-(std::conj(d) * a).real() / std::norm(d), 0.0, 1.0) : 0.0;
      if (std::abs(a + t * d) == 0.0) fail(ErrorKind::Domain, "segment crosses the puncture");
    }
    const Complex step = (b - a) / static_cast<double>(subdivisions);
    for (int k = 0; k < subdivisions; ++k) {
      const Complex mid = a + (k + 0.5) * step;
      length += std::sqrt(density(m, mid)) * std::abs(step);
    }
  }
  return length;
}

std::vector<Complex> annulus_grid(double rmin, double rmax, int nr, int nphi, Complex center) {
  if (nr < 1 || nphi < 1) fail(ErrorKind::InvalidArgument, "grid dimensions must be positive");
  if (!(rmin > 0.0) || rmax < rmin) fail(ErrorKind::InvalidArgument, "annulus needs 0 < rmin <= rmax");
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(nr) * nphi);
  for (int i = 0; i < nr; ++i) {
    const double r = nr == 1 ? rmin : rmin + (rmax - rmin) * i / (nr - 1);
    for (int j = 0; j < nphi; ++j) pts.push_back(center + std::polar(r, kTwoPi * j / nphi));
  }
  return pts;
}

std::vector<Complex> rect_grid(double x0, double x1, int nx, double y0, double y1, int ny) {
  if (nx < 1 || ny < 1) fail(ErrorKind::InvalidArgument, "grid dimensions must be positive");
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    const double y = ny == 1 ? y0 : y0 + (y1 - y0) * j / (ny - 1);
    for (int i = 0; i < nx; ++i) {
      pts.emplace_back(nx == 1 ? x0 : x0 + (x1 - x0) * i / (nx - 1), y);
    }
  }
  return pts;
}

}  // namespace hypsing
