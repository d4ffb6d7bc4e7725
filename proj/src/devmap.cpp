#include "hypsing/devmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

namespace hypsing {

namespace {

constexpr int kMaxLoopSteps = 1 << 16;

double falling(double x, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= (x - j);
  return r;
}

double series_radius(const TruncatedSeries& s) {
  // Root test on the upper half of the available coefficients.
  double radius = std::numeric_limits<double>::infinity();
  const int n_max = s.order();
  for (int n = std::max(1, n_max / 2); n <= n_max; ++n) {
    const double c = std::abs(s.coeffs()[n]);
    if (c > 0.0) radius = std::min(radius, std::pow(c, -1.0 / n));
  }
  return radius;
}

void validate_core(const MapCore& core) {
  if (const auto* p = std::get_if<PowerMap>(&core)) {
    if (!(p->alpha > 0.0) || !std::isfinite(p->alpha)) {
      fail(ErrorKind::InvalidArgument, "PowerMap exponent must be positive");
    }
  } else if (const auto* s = std::get_if<SeriesMap>(&core)) {
    if (s->log_term) return;
    const auto c = s->series.coeffs();
    const int first = s->series.lead() == 0.0 ? 1 : 0;
    const bool nonconstant =
        std::any_of(c.begin() + first, c.end(), [](Complex x) { return x != Complex{}; });
    if (!nonconstant) fail(ErrorKind::InvalidArgument, "SeriesMap is constant");
  }
}

Jet3 core_jet(const MapCore& core, Complex z, Complex log_z) {
  const Complex inv = 1.0 / z;
  if (const auto* p = std::get_if<PowerMap>(&core)) {
    const double a = p->alpha;
    const Complex v = std::exp(a * log_z);
    return {v, a * v * inv, a * (a - 1) * v * inv * inv, a * (a - 1) * (a - 2) * v * inv * inv * inv};
  }
  if (std::holds_alternative<LogMap>(core)) {
    return {-kI * log_z, -kI * inv, kI * inv * inv, -2.0 * kI * inv * inv * inv};
  }
  const auto& s = std::get<SeriesMap>(core);
  const TruncatedSeries& ser = s.series;
  std::array<Complex, 4> poly{};
  for (int k = 0; k < 4; ++k) poly[k] = ser.eval_polynomial_derivative(z, k);
  std::array<Complex, 4> lead{1.0, 0.0, 0.0, 0.0};
  if (ser.lead() != 0.0) {
    const Complex u = std::exp(ser.lead() * log_z);
    Complex zp = 1.0;
    for (int k = 0; k < 4; ++k) {
      lead[k] = falling(ser.lead(), k) * u * zp;
      zp *= inv;
    }
  }
  constexpr std::array<std::array<double, 4>, 4> binom{
      {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}}};
  std::array<Complex, 4> out{};
  for (int n = 0; n < 4; ++n) {
    for (int k = 0; k <= n; ++k) out[n] += binom[n][k] * lead[k] * poly[n - k];
  }
  if (s.log_term) {
    out[0] += -kI * log_z;
    out[1] += -kI * inv;
    out[2] += kI * inv * inv;
    out[3] += -2.0 * kI * inv * inv * inv;
  }
  return {out[0], out[1], out[2], out[3]};
}

Complex core_value(const MapCore& core, Complex z, Complex log_z) {
  if (const auto* p = std::get_if<PowerMap>(&core)) return std::exp(p->alpha * log_z);
  if (std::holds_alternative<LogMap>(core)) return -kI * log_z;
  const auto& s = std::get<SeriesMap>(core);
  Complex v = s.series.eval_polynomial(z);
  if (s.series.lead() != 0.0) v *= std::exp(s.series.lead() * log_z);
  if (s.log_term) v += -kI * log_z;
  return v;
}

void check_point(const DevelopingMapSpec& f, Complex w) {
  const double r = std::abs(w);
  if (r == 0.0) fail(ErrorKind::Domain, "developing map evaluated at the puncture");
  if (r >= 1.0) fail(ErrorKind::Domain, "developing map evaluated outside the unit disk");
  if (r > f.validated_radius()) {
    fail(ErrorKind::Domain, "series evaluated outside its validated radius " +
                                std::to_string(f.validated_radius()));
  }
}

void check_core_value(const DevelopingMapSpec& f, Complex v) {
  if (!in_model_domain(v, f.core_model())) {
    fail(ErrorKind::Domain,
         std::string("developing map leaves the ") + to_string(f.core_model()) + " model");
  }
}

}  // namespace

DevelopingMapSpec::DevelopingMapSpec(MapCore core, std::optional<MobiusTransform> post,
                                     int branch_index)
    : core_(std::move(core)), post_(std::move(post)), branch_(branch_index) {
  validate_core(core_);
  target_ = core_model();
  if (post_ && post_->model() != target_) {
    fail(ErrorKind::ModelMismatch, "post-composition must act on the core's model");
  }
  if (const auto* s = std::get_if<SeriesMap>(&core_)) {
    validated_radius_ = std::min(1.0, 0.5 * series_radius(s->series));
  }
}

DevelopingMapSpec DevelopingMapSpec::power(double alpha) {
  return DevelopingMapSpec(PowerMap{alpha});
}

DevelopingMapSpec DevelopingMapSpec::log() { return DevelopingMapSpec(LogMap{}); }

DevelopingMapSpec DevelopingMapSpec::series(TruncatedSeries s, bool log_term) {
  return DevelopingMapSpec(SeriesMap{std::move(s), log_term});
}

Model DevelopingMapSpec::core_model() const noexcept {
  if (std::holds_alternative<LogMap>(core_)) return Model::HalfPlane;
  if (const auto* s = std::get_if<SeriesMap>(&core_); s && s->log_term) return Model::HalfPlane;
  return Model::Disk;
}

DevelopingMapSpec DevelopingMapSpec::with_post(const MobiusTransform& m) const {
  if (m.model() != target_) fail(ErrorKind::ModelMismatch, "isometry acts on the wrong model");
  DevelopingMapSpec out = *this;
  const MobiusTransform in_core = (target_ == core_model()) ? m : cayley_conjugate(m);
  out.post_ = post_ ? compose(in_core, *post_) : in_core;
  return out;
}

DevelopingMapSpec DevelopingMapSpec::with_target(Model model) const {
  DevelopingMapSpec out = *this;
  out.target_ = model;
  return out;
}

DevelopingMapSpec DevelopingMapSpec::with_branch(int branch_index) const {
  DevelopingMapSpec out = *this;
  out.branch_ = branch_index;
  return out;
}

DevelopingMapSpec DevelopingMapSpec::with_rotation(double phi) const {
  DevelopingMapSpec out = *this;
  out.rotation_ += phi;
  return out;
}

Matrix2 DevelopingMapSpec::target_matrix() const {
  Matrix2 m = post_ ? post_->matrix() : Matrix2{};
  if (target_ != core_model()) {
    const Matrix2 c = cayley_matrix();
    m = (core_model() == Model::HalfPlane ? c : c.adjugate()) * m;
  }
  return m.normalized();
}

Complex branch_log(Complex w, int branch) {
  return std::log(w) + Complex(0.0, kTwoPi * branch);
}

Complex dev_eval_on_log(const DevelopingMapSpec& f, Complex w, Complex log_w) {
  check_point(f, w);
  const Complex z = w * std::polar(1.0, f.input_rotation());
  const Complex v = core_value(f.core(), z, log_w + Complex(0.0, f.input_rotation()));
  check_core_value(f, v);
  if (!f.post() && f.target_model() == f.core_model()) return v;
  return f.target_matrix().apply(v);
}

Jet3 dev_jet_on_log(const DevelopingMapSpec& f, Complex w, Complex log_w) {
  check_point(f, w);
  const double phi = f.input_rotation();
  const Complex rot = std::polar(1.0, phi);
  Jet3 g = core_jet(f.core(), w * rot, log_w + Complex(0.0, phi));
  check_core_value(f, g.value);
  g.d1 *= rot;
  g.d2 *= rot * rot;
  g.d3 *= rot * rot * rot;
  if (!f.post() && f.target_model() == f.core_model()) return g;

  const Matrix2 m = f.target_matrix();
  const Complex den = m.c * g.value + m.d;
  const Complex m1 = 1.0 / (den * den);
  const Complex m2 = -2.0 * m.c * m1 / den;
  const Complex m3 = 6.0 * m.c * m.c * m1 / (den * den);
  return {m.apply(g.value), m1 * g.d1, m2 * g.d1 * g.d1 + m1 * g.d2,
          m3 * g.d1 * g.d1 * g.d1 + 3.0 * m2 * g.d1 * g.d2 + m1 * g.d3};
}

Complex dev_eval(const DevelopingMapSpec& f, Complex w) {
  check_point(f, w);
  return dev_eval_on_log(f, w, branch_log(w, f.branch_index()));
}

Complex dev_deriv(const DevelopingMapSpec& f, Complex w) { return dev_jet(f, w).d1; }

Jet3 dev_jet(const DevelopingMapSpec& f, Complex w) {
  check_point(f, w);
  return dev_jet_on_log(f, w, branch_log(w, f.branch_index()));
}

namespace {

std::optional<LoopResult> try_loop(const DevelopingMapSpec& f, Complex basepoint, int steps,
                                   double sign) {
  int current = f.branch_index();
  Complex prev = dev_eval(f, basepoint);
  double continuous_arg = branch_log(basepoint, current).imag();
  const double dphi = sign * kTwoPi / steps;

  for (int j = 1; j <= steps; ++j) {
    const Complex z = (j == steps) ? basepoint : basepoint * std::polar(1.0, dphi * j);
    continuous_arg += dphi;
    const int geometric =
        static_cast<int>(std::lround((continuous_arg - std::arg(z)) / kTwoPi));

    std::array<Complex, 3> cand{};
    for (int i = 0; i < 3; ++i) {
      cand[i] = dev_eval_on_log(f, z, branch_log(z, current - 1 + i));
    }
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      if (std::abs(cand[i] - prev) < std::abs(cand[best] - prev)) best = i;
    }
    double separation = INFINITY;
    for (int i = 0; i < 3; ++i) {
      if (i != best) separation = std::min(separation, std::abs(cand[i] - cand[best]));
    }
    const double scale = std::max(1.0, std::abs(cand[best]));
    int chosen = current - 1 + best;
    if (separation > 1e-12 * scale) {
      if (std::abs(cand[best] - prev) > 0.5 * separation || chosen != geometric) {
        return std::nullopt;
      }
    } else {
      chosen = geometric;
      best = chosen - current + 1;
      if (best < 0 || best > 2) return std::nullopt;
    }
    current = chosen;
    prev = cand[best];
  }
  return LoopResult{prev, current, steps};
}

}  // namespace

LoopResult continue_loop(const DevelopingMapSpec& f, Complex basepoint, int steps,
                         Orientation orientation) {
  if (steps < 16) fail(ErrorKind::InvalidArgument, "continuation needs at least 16 steps");
  if (basepoint == Complex{}) fail(ErrorKind::Domain, "continuation basepoint at the puncture");
  const double sign = orientation == Orientation::Positive ? 1.0 : -1.0;
  for (int n = steps; n <= kMaxLoopSteps; n *= 2) {
    if (auto r = try_loop(f, basepoint, n, sign)) return *r;
  }
  fail(ErrorKind::InconsistentInput,
       "continuation failed: consecutive values jump across branches even at " +
           std::to_string(kMaxLoopSteps) + " steps");
}

Matrix2 three_point_fit(std::span<const Complex, 3> from, std::span<const Complex, 3> to) {
  // Work in coordinates where the six points have unit spread: clustered
  // values would otherwise lose digits to cancellation in the cross ratios.
  Complex center = 0.0;
  for (int i = 0; i < 3; ++i) center += (from[i] + to[i]) / 6.0;
  double spread = 0.0;
  for (int i = 0; i < 3; ++i) {
    spread = std::max({spread, std::abs(from[i] - center), std::abs(to[i] - center)});
  }
  if (!(spread > 0.0) || !std::isfinite(spread)) {
    fail(ErrorKind::DegenerateFit, "three-point fit with coincident points");
  }
  const Matrix2 shrink{1.0, -center, 0.0, spread};
  const Matrix2 grow{spread, center, 0.0, 1.0};

  auto to_standard = [&](std::span<const Complex, 3> raw) {
    std::array<Complex, 3> z{};
    for (int i = 0; i < 3; ++i) z[i] = shrink.apply(raw[i]);
    const double gap = std::min({std::abs(z[0] - z[1]), std::abs(z[1] - z[2]),
                                 std::abs(z[0] - z[2])});
    if (gap < 1e-12) fail(ErrorKind::DegenerateFit, "three-point fit with coincident points");
    // z1 -> 0, z2 -> 1, z3 -> infinity.
    return Matrix2{z[1] - z[2], -z[0] * (z[1] - z[2]), z[1] - z[0], -z[2] * (z[1] - z[0])}.normalized();
  };
  const Matrix2 local = to_standard(to).adjugate() * to_standard(from);
  return (grow * local * shrink).normalized();
}

namespace {

// Group-constrained fit a v + b = u (c v + d) over all points, with
// (c, d) = (conj b, conj a) in the disk and real entries in the half-plane.
// The unknowns are four reals; the null vector of the column-scaled system
// is well conditioned even when the points cluster, where an entrywise
// projection of the three-point fit would mix in the poorly determined entry.
Matrix2 fit_in_group(std::span<const Complex> from, std::span<const Complex> to, Model model) {
  const auto rows = static_cast<Eigen::Index>(2 * from.size());
  Eigen::MatrixXd a(rows, 4);
  for (std::size_t i = 0; i < from.size(); ++i) {
    const Complex v = from[i], u = to[i];
    std::array<Complex, 4> col;
    if (model == Model::Disk) {
      // unknowns Re a, Im a, Re b, Im b
      col = {v - u, kI * (v + u), 1.0 - u * v, kI * (1.0 + u * v)};
    } else {
      // unknowns a, b, c, d
      col = {v, 1.0, -u * v, -u};
    }
    for (int j = 0; j < 4; ++j) {
      a(static_cast<Eigen::Index>(2 * i), j) = col[j].real();
      a(static_cast<Eigen::Index>(2 * i + 1), j) = col[j].imag();
    }
  }
  Eigen::Vector4d norms;
  for (int j = 0; j < 4; ++j) {
    norms(j) = a.col(j).norm();
    if (norms(j) == 0.0) norms(j) = 1.0;
    a.col(j) /= norms(j);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::Vector4d x = svd.matrixV().col(3).cwiseQuotient(norms);
  if (model == Model::Disk) {
    const Complex ea(x(0), x(1)), eb(x(2), x(3));
    return Matrix2{ea, eb, std::conj(eb), std::conj(ea)}.normalized();
  }
  Matrix2 m{x(0), x(1), x(2), x(3)};
  if (m.det().real() < 0.0) fail(ErrorKind::InconsistentInput, "monodromy reverses orientation");
  return m.normalized();
}

}  // namespace

MonodromyResult extract_monodromy(const DevelopingMapSpec& f, std::span<const Complex> basepoints,
                                  Orientation orientation, int steps) {
  if (basepoints.size() < 4) {
    fail(ErrorKind::InvalidArgument, "monodromy extraction needs at least 4 basepoints");
  }
  std::vector<Complex> before, after;
  for (Complex w : basepoints) {
    if (w == Complex{}) fail(ErrorKind::Domain, "basepoint at the puncture");
    before.push_back(dev_eval(f, w));
    after.push_back(continue_loop(f, w, steps, orientation).value);
  }
  const Matrix2 fit = three_point_fit(std::span<const Complex, 3>(before.data(), 3),
                                      std::span<const Complex, 3>(after.data(), 3));

  double scale = 1.0;
  for (Complex v : after) scale = std::max(scale, std::abs(v));
  double raw_residual = 0.0;
  for (std::size_t i = 3; i < before.size(); ++i) {
    raw_residual = std::max(raw_residual, std::abs(fit.apply(before[i]) - after[i]) / scale);
  }
  if (raw_residual > kMonodromyFitTolerance) {
    fail(ErrorKind::InconsistentInput,
         "continued values are not a Moebius image of the originals (residual " +
             std::to_string(raw_residual) + ")");
  }

  try {
    MobiusTransform(fit, f.target_model());
  } catch (const Error& e) {
    fail(ErrorKind::InconsistentInput,
         std::string("monodromy is not an isometry of the target model: ") + e.what());
  }
  const std::optional<MobiusTransform> transform(
      std::in_place, fit_in_group(before, after, f.target_model()), f.target_model());
  double residual = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    residual = std::max(residual, std::abs(transform->matrix().apply(before[i]) - after[i]) / scale);
  }
  if (residual > kMonodromyFitTolerance) {
    fail(ErrorKind::InconsistentInput,
         "monodromy fit residual " + std::to_string(residual) + " above tolerance");
  }
  return {*transform, classify_isometry(*transform), residual};
}

std::vector<Complex> default_basepoints(double radius, int count) {
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(count));
  // Golden-angle spacing: images under w^k stay distinct for every integer k,
  // which equally spaced points would not guarantee.
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int j = 0; j < count; ++j) pts.push_back(std::polar(radius, 0.3 + golden * j));
  return pts;
}

}  // namespace hypsing
