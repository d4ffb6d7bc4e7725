#include "hypsing/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace hypsing {

namespace {

constexpr int kContourPoints = 32;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Complex from_jet(const Jet3& j) {
  const Complex r2 = j.d2 / j.d1;
  return j.d3 / j.d1 - 1.5 * r2 * r2;
}

// Derivatives 1..3 from the Cauchy integral on |zeta - z| = rho, continuing
// the logarithm from z so every sample sits on the sheet of z.
Jet3 contour_jet(const DevelopingMapSpec& f, Complex z) {
  const double r = std::abs(z);
  const double reach = std::min(1.0, f.validated_radius());
  const double rho = std::min(0.25 * r, 0.5 * (reach - r));
  if (!(rho > 1e-8 * r)) fail(ErrorKind::Domain, "no room for the contour: step underflow");
  const Complex log_z = branch_log(z, f.branch_index());
  std::array<Complex, 4> acc{};
  for (int j = 0; j < kContourPoints; ++j) {
    const Complex e = std::polar(1.0, kTwoPi * j / kContourPoints);
    const Complex zeta = z + rho * e;
    const Complex v = dev_eval_on_log(f, zeta, log_z + std::log(1.0 + rho * e / z));
    Complex back = 1.0;
    for (int k = 0; k < 4; ++k) {
      acc[k] += v * back;
      back /= e;
    }
  }
  const double n = kContourPoints;
  return {acc[0] / n, acc[1] / (n * rho), 2.0 * acc[2] / (n * rho * rho),
          6.0 * acc[3] / (n * rho * rho * rho)};
}

}  // namespace

Complex schwarzian(const DevelopingMapSpec& f, Complex z, SchwarzianMethod method) {
  if (z == Complex{}) fail(ErrorKind::Domain, "Schwarzian at the puncture");
  const Jet3 j = method == SchwarzianMethod::Contour ? contour_jet(f, z) : dev_jet(f, z);
  if (std::abs(j.d1) == 0.0) fail(ErrorKind::Domain, "developing map has a critical point");
  return from_jet(j);
}

SchwarzianExpansion schwarzian_expand(const DevelopingMapSpec& f, double radius, int samples,
                                      int max_index, SchwarzianMethod method) {
  if (!(radius > 0.0 && radius < 1.0)) fail(ErrorKind::InvalidArgument, "radius must lie in (0, 1)");
  if (max_index < 0) fail(ErrorKind::InvalidArgument, "max_index must be nonnegative");
  if (samples < 2 * (max_index + 2) + 1 || (samples & (samples - 1)) != 0) {
    fail(ErrorKind::InvalidArgument, "sample count must be a power of two above twice the window");
  }
  const int m = samples;
  std::vector<Complex> b(static_cast<std::size_t>(m));
  double peak = 0.0;
  for (int j = 0; j < m; ++j) {
    const Complex z = std::polar(radius, kTwoPi * j / m);
    b[j] = z * z * schwarzian(f, z, method);
    peak = std::max(peak, std::abs(b[j]));
  }
  auto coefficient = [&](int idx) {
    Complex acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const long long phase = (static_cast<long long>(idx) * j) % m;
      acc += b[j] * std::polar(1.0, -kTwoPi * static_cast<double>(phase) / m);
    }
    return acc / static_cast<double>(m);
  };

  double structure = 0.0;
  for (int idx = 1; idx < m / 2; ++idx) structure = std::max(structure, std::abs(coefficient(-idx)));
  structure /= std::max(1.0, peak);

  LaurentWindow window(max_index);
  double tail = 0.0;
  for (int n = -2; n <= max_index; ++n) {
    const Complex bh = coefficient(n + 2);
    window.set(n, bh * std::pow(radius, -(n + 2)));
    if (n >= 0) tail += std::abs(bh);
  }
  const double disc = 1.0 - 2.0 * window.at(-2).real();
  if (disc < -1e-8) {
    fail(ErrorKind::InconsistentInput,
         "leading Schwarzian coefficient " + fmt(window.at(-2).real()) + " exceeds 1/2");
  }
  return {window, std::sqrt(std::max(0.0, disc)), window.at(-1), tail, structure};
}

std::map<std::string, double> report_crosscheck(const SingularityReport& report, const DevelopingMapSpec& f,
                                                const CrosscheckOptions& options) {
  const double radius = std::min(options.radius, 0.8 * std::min(1.0, f.validated_radius()));
  const SchwarzianExpansion ex = schwarzian_expand(f, radius, options.samples);
  std::map<std::string, double> out;
  out["theta_schwarzian"] = ex.theta_estimate;
  out["theta_residual"] = std::abs(ex.theta_estimate - report.theta);
  out["laurent_structure"] = ex.structure_residual;
  out["holomorphic_tail"] = ex.holomorphic_tail_norm;
  out["pullback_residual"] = model_pullback_residual(report, f, radius, 64);

  if (out["theta_residual"] > options.theta_tolerance) {
    fail(ErrorKind::VerificationFailed,
         "Schwarzian gives theta = " + fmt(ex.theta_estimate) + " but the report says " +
             fmt(report.theta));
  }
  if (out["laurent_structure"] > options.structure_tolerance) {
    fail(ErrorKind::VerificationFailed,
         "Schwarzian has a pole of order above 2 (residual " + fmt(out["laurent_structure"]) + ")");
  }
  if (!(out["pullback_residual"] <= options.pullback_tolerance)) {
    fail(ErrorKind::VerificationFailed,
         "model metric through xi misses the input metric by " + fmt(out["pullback_residual"]));
  }
  return out;
}

std::vector<NamedSelfMap> schwarz_pick_family() {
  return {
      {"cayley_square",
       [](Complex z) {
         const Complex d = cayley(z, CayleyDirection::HalfPlaneToDisk);
         return cayley(d * d, CayleyDirection::DiskToHalfPlane);
       }},
      {"rotated_sqrt", [](Complex z) { return std::polar(1.0, kPi / 4) * std::sqrt(z); }},
      {"rotated_cube_root",
       [](Complex z) { return std::polar(1.0, kPi / 3) * std::exp(std::log(z) / 3.0); }},
      {"shift_up", [](Complex z) { return z + kI; }},
      {"log", [](Complex z) { return std::log(z); }},
  };
}

ContractionStats contraction_stats(const PlaneMap& f, Model model,
                                   std::span<const std::pair<Complex, Complex>> pairs) {
  if (pairs.empty()) fail(ErrorKind::InvalidArgument, "no point pairs");
  ContractionStats s{INFINITY, 0.0};
  for (const auto& [z1, z2] : pairs) {
    const double before = hyperbolic_distance(z1, z2, model);
    const double after = hyperbolic_distance(f(z1), f(z2), model);
    s.min_margin = std::min(s.min_margin, before - after);
    s.max_defect = std::max(s.max_defect, std::abs(after - before));
  }
  return s;
}

std::vector<std::pair<Complex, Complex>> random_pairs(Model model, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto point = [&]() -> Complex {
    if (model == Model::Disk) {
      return std::polar(0.95 * std::sqrt(unit(rng)), kTwoPi * unit(rng));
    }
    const double x = -2.0 + 4.0 * unit(rng);
    const double y = std::exp(std::log(0.05) + unit(rng) * std::log(400.0));
    return {x, y};
  };
  std::vector<std::pair<Complex, Complex>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const Complex a = point();
    const Complex b = point();
    out.emplace_back(a, b);
  }
  return out;
}

DisplacementWitness cusp_displacement_witness(const DevelopingMapSpec& f, const SingularityReport& report,
                                              std::span<const double> heights) {
  if (report.kind != SingularityKind::Cusp) {
    fail(ErrorKind::InvalidArgument, "displacement witness needs a cusp report");
  }
  DisplacementWitness w{{}, {}, {}, true, -INFINITY};
  const MobiusTransform back = inverse(report.normalizer);
  for (double y : heights) {
    const Complex q = back.apply(Complex(0.0, y));
    const Complex probe =
        f.target_model() == Model::Disk ? cayley(q, CayleyDirection::HalfPlaneToDisk) : q;
    const double d = displacement_infimum(report.monodromy.transform, std::span<const Complex>(&probe, 1));
    const double bound = kTwoPi / y;
    if (!w.displacement.empty() && !(d < w.displacement.back())) w.strictly_decreasing = false;
    w.heights.push_back(y);
    w.displacement.push_back(d);
    w.bound.push_back(bound);
    w.worst_excess = std::max(w.worst_excess, d / bound - 1.0);
  }
  return w;
}

}  // namespace hypsing
