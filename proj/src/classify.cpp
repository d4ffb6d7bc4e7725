#include "hypsing/classify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hypsing {

namespace {

MobiusTransform in_model(const MobiusTransform& m, Model model) {
  return m.model() == model ? m : cayley_conjugate(m);
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void validate(const ClassifyConfig& c) {
  if (c.order < 1) fail(ErrorKind::InvalidArgument, "truncation order must be positive");
  if (!(c.radius > 0.0 && c.radius < 1.0)) fail(ErrorKind::InvalidArgument, "radius must lie in (0, 1)");
  if (!(c.test_radius > 0.0 && c.test_radius < 1.0)) {
    fail(ErrorKind::InvalidArgument, "test radius must lie in (0, 1)");
  }
  if (!is_power_of_two(c.samples) || c.samples < 4) {
    fail(ErrorKind::InvalidArgument, "sample count must be a power of two >= 4");
  }
  if (c.basepoints < 4) fail(ErrorKind::InvalidArgument, "need at least 4 basepoints");
  if (c.test_points < 1) fail(ErrorKind::InvalidArgument, "need at least one test point");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

MonodromyResult conjugated(const MonodromyResult& raw, const MobiusTransform& l_in_model,
                           const MobiusTransform& k, IsometryKind kind, double parameter) {
  const MobiusTransform n = compose(k, compose(l_in_model, inverse(k)));
  return {n, IsometryClass{kind, parameter, MobiusTransform::identity(n.model()), raw.classification.trace_gap},
          raw.fit_residual};
}

void fill_common(SingularityReport& r, const FourierDevelopment& fd) {
  r.diagnostics["fit_residual"] = r.monodromy.fit_residual;
  r.diagnostics["trace_gap"] = r.monodromy.classification.trace_gap;
  r.diagnostics["neg_mass"] = fd.negative_mass;
  r.diagnostics["max_negative"] = fd.max_negative;
  r.diagnostics["flushed"] = fd.flushed;
}

}  // namespace

const char* to_string(SingularityKind kind) noexcept {
  return kind == SingularityKind::Conical ? "conical" : "cusp";
}

FourierDevelopment fourier_extract(const DevelopingMapSpec& g, const MonodromyResult& normal,
                                   double radius, int samples, int order,
                                   double negative_tolerance, double noise_floor) {
  if (!(radius > 0.0 && radius < 1.0)) fail(ErrorKind::InvalidArgument, "radius must lie in (0, 1)");
  if (!is_power_of_two(samples)) fail(ErrorKind::InvalidArgument, "sample count must be a power of two");
  if (order < 1 || samples < 2 * order + 1) {
    fail(ErrorKind::InvalidArgument, "too few samples for the requested order");
  }
  const IsometryKind kind = normal.classification.kind;
  const double param = normal.classification.parameter;
  if (kind == IsometryKind::Hyperbolic) {
    fail(ErrorKind::HyperbolicMonodromy, "hyperbolic monodromy has no periodic part");
  }
  if (kind == IsometryKind::Elliptic && g.target_model() != Model::Disk) {
    fail(ErrorKind::ModelMismatch, "elliptic normal form lives in the disk");
  }
  if (kind == IsometryKind::Parabolic && g.target_model() != Model::HalfPlane) {
    fail(ErrorKind::ModelMismatch, "parabolic normal form lives in the half-plane");
  }
  if (normal.transform.model() != g.target_model() ||
      !normal.transform.approx_equal(normal_form(kind, param, g.target_model()), 1e-8)) {
    fail(ErrorKind::InvalidArgument, "monodromy is not in normal form");
  }

  const int m = samples;
  std::vector<Complex> roots(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) roots[j] = std::polar(1.0, -kTwoPi * j / m);

  const Complex log0 = branch_log(Complex(radius, 0.0), g.branch_index());
  std::vector<Complex> periodic(static_cast<std::size_t>(m));
  double peak = 0.0, value_peak = 0.0;
  for (int j = 0; j < m; ++j) {
    const double phi = kTwoPi * j / m;
    const Complex ell = log0 + Complex(0.0, phi);
    const Complex v = dev_eval_on_log(g, std::polar(radius, phi), ell);
    value_peak = std::max(value_peak, std::abs(v));
    switch (kind) {
      case IsometryKind::Elliptic:
        periodic[j] = v * std::exp(-(param / kTwoPi) * ell);
        break;
      case IsometryKind::Parabolic:
        periodic[j] = v + kI * (param / kTwoPi) * ell;
        break;
      default:
        periodic[j] = v;
    }
    peak = std::max(peak, std::abs(periodic[j]));
  }

  auto coefficient = [&](int n) {
    Complex acc = 0.0;
    const int step = ((n % m) + m) % m;
    int idx = 0;
    for (int j = 0; j < m; ++j) {
      acc += periodic[j] * roots[idx];
      idx += step;
      if (idx >= m) idx -= m;
    }
    return acc / static_cast<double>(m);
  };

  FourierDevelopment out{TruncatedSeries::zero(order), 0.0, 0.0, 0};
  const double scale = std::max(1.0, peak);
  for (int n = 1; n <= order; ++n) {
    const double mag = std::abs(coefficient(-n));
    out.negative_mass += mag;
    out.max_negative = std::max(out.max_negative, mag);
  }
  if (out.max_negative > negative_tolerance * scale) {
    fail(ErrorKind::InconsistentInput,
         "periodic part has negative Fourier modes of size " + fmt(out.max_negative) +
             ": pole or essential singularity at the puncture");
  }

  std::vector<Complex> a(static_cast<std::size_t>(order) + 1);
  for (int n = 0; n <= order; ++n) {
    const Complex c = coefficient(n);
    if (std::abs(c) <= noise_floor * std::max(peak, value_peak)) {
      if (c != Complex{}) ++out.flushed;
      continue;
    }
    a[n] = c * std::pow(radius, -n);
  }
  out.series = TruncatedSeries(std::move(a));
  return out;
}

int first_nonzero(const TruncatedSeries& a, double tolerance) {
  const double threshold = tolerance * a.max_abs();
  for (int n = 0; n <= a.order(); ++n) {
    if (std::abs(a.coeffs()[n]) > threshold) return n;
  }
  return -1;
}

TruncatedSeries build_xi_cusp(const TruncatedSeries& fourier, int k) {
  if (k < 0 || k > fourier.order()) fail(ErrorKind::InvalidArgument, "k outside the series");
  const double threshold = 1e-10 * fourier.max_abs();
  for (int n = 0; n < k; ++n) {
    if (std::abs(fourier.coeffs()[n]) > threshold) {
      fail(ErrorKind::InvalidArgument, "Fourier coefficient below index k does not vanish");
    }
  }
  const int order = fourier.order();
  std::vector<Complex> e(static_cast<std::size_t>(order) + 1);
  for (int n = 1; n <= order; ++n) e[n] = kI * fourier.coeffs()[n];
  const TruncatedSeries ex = series_exp(TruncatedSeries(std::move(e)));
  const Complex phase = std::exp(kI * fourier.coeffs()[0]);
  std::vector<Complex> xi(static_cast<std::size_t>(order) + 1);
  for (int n = 1; n <= order; ++n) xi[n] = phase * ex.coeffs()[n - 1];
  return TruncatedSeries(std::move(xi));
}

TruncatedSeries build_xi_conical(const TruncatedSeries& fourier, double alpha, int k) {
  if (!(alpha > 0.0)) fail(ErrorKind::InvalidArgument, "alpha must be positive");
  if (k < 0 || k >= fourier.order()) fail(ErrorKind::InvalidArgument, "k leaves no room for xi");
  const Complex ak = fourier.coeffs()[k];
  if (ak == Complex{} || std::abs(ak) <= 1e-10 * fourier.max_abs()) {
    fail(ErrorKind::InvalidArgument, "a_k vanishes: k is not the first nonzero index");
  }
  const int order = fourier.order() - k;
  std::vector<Complex> h(fourier.coeffs().begin() + k, fourier.coeffs().end());
  const TruncatedSeries root = series_pow(TruncatedSeries(std::move(h)), 1.0 / (alpha + k));
  std::vector<Complex> xi(static_cast<std::size_t>(order) + 1);
  for (int n = 1; n <= order; ++n) xi[n] = root.coeffs()[n - 1];
  return TruncatedSeries(std::move(xi));
}

TruncatedSeries gauge_fix(const TruncatedSeries& xi) {
  const Complex c1 = xi[1];
  if (c1 == Complex{}) fail(ErrorKind::InconsistentInput, "coordinate has vanishing linear term");
  return (std::conj(c1) / std::abs(c1)) * xi;
}

SingularityReport classify_singularity(const DevelopingMapSpec& f, const ClassifyConfig& config) {
  validate(config);
  const auto bp = default_basepoints(config.radius, config.basepoints);
  const MonodromyResult mono = extract_monodromy(f, bp, Orientation::Positive, config.loop_steps);
  return classify_with_monodromy(f, mono, config);
}

SingularityReport classify_with_monodromy(const DevelopingMapSpec& f, const MonodromyResult& mono,
                                          const ClassifyConfig& config) {
  validate(config);
  const int n = config.order;
  const int n_ext = std::min(2 * n, (config.samples - 1) / 2);
  const IsometryKind kind = mono.classification.kind;

  SingularityReport r{SingularityKind::Conical, 0.0, 0.0, 0, mono,
                      MobiusTransform::identity(Model::Disk), Model::Disk,
                      TruncatedSeries::zero(n), TruncatedSeries::identity(n), {}, {}};

  if (kind == IsometryKind::Hyperbolic) {
    fail(ErrorKind::HyperbolicMonodromy,
         "monodromy is hyperbolic (lambda = " + fmt(mono.classification.parameter) +
             "): not a developing map of a hyperbolic metric near a puncture");
  }
  if (mono.classification.trace_gap > 1e-12 && kind != IsometryKind::Elliptic) {
    r.warnings.push_back("trace^2 - 4 = " + fmt(mono.classification.trace_gap) +
                         " treated as zero");
  }

  auto need_order = [&](int k) {
    if (n + k > n_ext) {
      fail(ErrorKind::InconsistentInput, "first nonzero Fourier index " + std::to_string(k) +
                                             " exceeds the sampled order");
    }
  };

  FourierDevelopment fd{TruncatedSeries::zero(1), 0.0, 0.0, 0};

  if (kind == IsometryKind::Elliptic) {
    const MobiusTransform ld = in_model(mono.transform, Model::Disk);
    const IsometryClass cls = classify_isometry(ld);
    const double theta_rot = cls.parameter;
    const DevelopingMapSpec g = f.with_target(Model::Disk).with_post(cls.conjugator);
    fd = fourier_extract(g, conjugated(mono, ld, cls.conjugator, IsometryKind::Elliptic, theta_rot),
                         config.radius, config.samples, n_ext, config.negative_tolerance,
                         config.noise_floor);
    const int k = first_nonzero(fd.series, config.k_tolerance);
    if (k < 0) fail(ErrorKind::InconsistentInput, "periodic part vanishes identically");
    need_order(k);
    r.alpha = theta_rot / kTwoPi;
    r.k = k;
    r.theta = k + r.alpha;
    r.normalizer = cls.conjugator;
    r.normal_model = Model::Disk;
    r.fourier = fd.series.with_order(n);
    r.xi = gauge_fix(build_xi_conical(fd.series.with_order(n + k), r.alpha, k));
  } else if (kind == IsometryKind::Identity) {
    const DevelopingMapSpec g0 = f.with_target(Model::Disk);
    const MobiusTransform ld = in_model(mono.transform, Model::Disk);
    const MonodromyResult trivial{ld, IsometryClass{IsometryKind::Identity, 0.0, MobiusTransform::identity(Model::Disk),
                                                    mono.classification.trace_gap},
                                  mono.fit_residual};
    const FourierDevelopment fd0 = fourier_extract(g0, trivial, config.radius, config.samples, n_ext,
                                                   config.negative_tolerance, config.noise_floor);
    const Complex center = fd0.series[0];
    if (!(std::abs(center) < 1.0)) fail(ErrorKind::InconsistentInput, "limit value outside the disk");
    const MobiusTransform recenter = MobiusTransform::disk_automorphism(center, 0.0);
    const DevelopingMapSpec g = g0.with_post(recenter);
    fd = fourier_extract(g, conjugated(trivial, ld, recenter, IsometryKind::Identity, 0.0),
                         config.radius, config.samples, n_ext, config.negative_tolerance,
                         config.noise_floor);
    // G(w) = w * sum b_n w^n with b_n = a_{n+1}.
    std::vector<Complex> b(fd.series.coeffs().begin() + 1, fd.series.coeffs().end());
    const TruncatedSeries shifted(std::move(b));
    const int k = first_nonzero(shifted, config.k_tolerance);
    if (k < 0) fail(ErrorKind::InconsistentInput, "developing map is constant");
    if (n + k > shifted.order()) {
      fail(ErrorKind::InconsistentInput, "first nonzero Fourier index " + std::to_string(k) +
                                             " exceeds the sampled order");
    }
    r.alpha = 1.0;
    r.k = k;
    r.theta = k + 1.0;
    r.normalizer = recenter;
    r.normal_model = Model::Disk;
    r.fourier = shifted.with_order(n);
    r.xi = gauge_fix(build_xi_conical(shifted.with_order(n + k), 1.0, k));
    if (k == 0) r.warnings.push_back("cone parameter 1: the puncture is a smooth point");
  } else {
    MobiusTransform lh = in_model(mono.transform, Model::HalfPlane);
    IsometryClass cls = classify_isometry(lh);
    if (cls.parameter < 0.0 && config.retry_negative_orientation) {
      const auto bp = default_basepoints(config.radius, config.basepoints);
      const MonodromyResult back = extract_monodromy(f, bp, Orientation::Negative, config.loop_steps);
      const MobiusTransform lh2 = inverse(in_model(back.transform, Model::HalfPlane));
      const IsometryClass cls2 = classify_isometry(lh2);
      if (cls2.kind == IsometryKind::Parabolic && cls2.parameter > 0.0) {
        lh = lh2;
        cls = cls2;
        r.warnings.push_back("negative translation resolved by the reversed loop");
      }
    }
    if (cls.parameter < 0.0) {
      fail(ErrorKind::NegativeTranslation,
           "parabolic monodromy translates by t = " + fmt(cls.parameter) +
               " < 0, which no hyperbolic metric near a puncture produces");
    }
    const MobiusTransform normalizer =
        compose(MobiusTransform::dilation(kTwoPi / cls.parameter), cls.conjugator);
    const DevelopingMapSpec g = f.with_target(Model::HalfPlane).with_post(normalizer);
    fd = fourier_extract(g, conjugated(mono, lh, normalizer, IsometryKind::Parabolic, kTwoPi),
                         config.radius, config.samples, n_ext, config.negative_tolerance,
                         config.noise_floor);
    r.fourier = fd.series.with_order(n);
    const int k = std::max(first_nonzero(r.fourier, config.k_tolerance), 0);
    r.kind = SingularityKind::Cusp;
    r.k = k;
    r.normalizer = normalizer;
    r.normal_model = Model::HalfPlane;
    r.xi = gauge_fix(build_xi_cusp(r.fourier, k));
  }

  fill_common(r, fd);
  r.diagnostics["pullback_residual"] =
      model_pullback_residual(r, f, config.test_radius, config.test_points);
  return r;
}

DevelopingMapSpec normalized_map(const DevelopingMapSpec& f, const SingularityReport& report) {
  return f.with_target(report.normal_model).with_post(report.normalizer);
}

double model_density(const SingularityReport& report, Complex xi) {
  return report.kind == SingularityKind::Cusp ? cusp_density(xi) : conical_density(report.theta, xi);
}

double model_pullback_residual(const SingularityReport& report, const DevelopingMapSpec& f,
                               double radius, int points) {
  if (points < 1) fail(ErrorKind::InvalidArgument, "need at least one test point");
  double worst = 0.0;
  for (int j = 0; j < points; ++j) {
    const Complex w = std::polar(radius, 0.05 + kTwoPi * j / points);
    const Jet3 jet = dev_jet(f, w);
    const double expected = hyperbolic_density(f.target_model(), jet.value) * std::norm(jet.d1);
    const Complex xi = report.xi.eval_polynomial(w);
    const Complex dxi = report.xi.eval_polynomial_derivative(w, 1);
    const double got = model_density(report, xi) * std::norm(dxi);
    worst = std::max(worst, std::abs(got - expected) / expected);
  }
  return worst;
}

}  // namespace hypsing
