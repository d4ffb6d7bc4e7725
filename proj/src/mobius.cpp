#include "hypsing/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hypsing {

namespace {

constexpr double kDetFloor = 1e-12;
constexpr double kShapeTolerance = 1e-10;
constexpr double kSignTie = 1e-14;
constexpr double kIdentityTolerance = 1e-9;

double entry_scale(const Matrix2& m) {
  return std::max({1.0, std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
}

// Projective representative: Re(a) > 0, then Im(a) > 0, then Re(b) > 0.
Matrix2 canonical_sign(Matrix2 m) {
  double key = 0.0;
  for (double v : {m.a.real(), m.a.imag(), m.b.real(), m.b.imag(), m.c.real()}) {
    if (std::abs(v) > kSignTie) {
      key = v;
      break;
    }
  }
  if (key < 0.0) m = {-m.a, -m.b, -m.c, -m.d};
  return m;
}

Matrix2 project_to_group(Matrix2 m, Model model) {
  const double scale = entry_scale(m);
  if (model == Model::Disk) {
    const double err = std::max(std::abs(m.c - std::conj(m.b)), std::abs(m.d - std::conj(m.a)));
    if (err > kShapeTolerance * scale) {
      fail(ErrorKind::ModelMismatch,
           "matrix is not in PSU(1,1) (shape error " + std::to_string(err) + ")");
    }
    const Complex a = 0.5 * (m.a + std::conj(m.d));
    const Complex b = 0.5 * (m.b + std::conj(m.c));
    const double det = std::norm(a) - std::norm(b);
    if (det <= 0.0) fail(ErrorKind::ModelMismatch, "disk matrix does not preserve the disk");
    const double s = std::sqrt(det);
    return {a / s, b / s, std::conj(b) / s, std::conj(a) / s};
  }
  const double err = std::max({std::abs(m.a.imag()), std::abs(m.b.imag()),
                               std::abs(m.c.imag()), std::abs(m.d.imag())});
  if (err > kShapeTolerance * scale) {
    fail(ErrorKind::ModelMismatch,
         "matrix is not in PSL(2,R) (imaginary part " + std::to_string(err) + ")");
  }
  const double a = m.a.real(), b = m.b.real(), c = m.c.real(), d = m.d.real();
  const double det = a * d - b * c;
  if (det <= 0.0) fail(ErrorKind::ModelMismatch, "half-plane matrix reverses orientation");
  const double s = std::sqrt(det);
  return {a / s, b / s, c / s, d / s};
}

// Roots of c z^2 + B z + C0 = 0 without cancellation.
std::pair<Complex, Complex> quadratic_roots(Complex c, Complex bq, Complex c0) {
  const Complex disc = std::sqrt(bq * bq - 4.0 * c * c0);
  const Complex sign_choice = (std::real(std::conj(bq) * disc) >= 0.0) ? disc : -disc;
  const Complex q = -0.5 * (bq + sign_choice);
  if (q == Complex{}) return {Complex{}, Complex{}};
  return {q / c, c0 / q};
}

Matrix2 to_matrix_in(const MobiusTransform& m, Model model) {
  if (m.model() == model) return m.matrix();
  return cayley_conjugate(m).matrix();
}

// Transport a half-plane conjugator into the disk model (or back).
Matrix2 transport(const Matrix2& k, Model from, Model to) {
  if (from == to) return k;
  const Matrix2 c = cayley_matrix();
  if (from == Model::HalfPlane) return c * k * c.adjugate();
  return c.adjugate() * k * c;
}

double fold_angle(double theta) {
  theta = std::fmod(theta, kTwoPi);
  if (theta <= 0.0) theta += kTwoPi;
  return theta;
}

}  // namespace

const char* to_string(Model model) noexcept {
  return model == Model::Disk ? "disk" : "halfplane";
}

bool in_model_domain(Complex z, Model model) noexcept {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return model == Model::Disk ? std::abs(z) < 1.0 : z.imag() > 0.0;
}

Matrix2 Matrix2::normalized() const {
  const Complex det_value = det();
  if (std::abs(det_value) < kDetFloor) {
    fail(ErrorKind::DegenerateFit, "matrix determinant is (numerically) zero");
  }
  const Complex s = std::sqrt(det_value);
  return {a / s, b / s, c / s, d / s};
}

Matrix2 operator*(const Matrix2& lhs, const Matrix2& rhs) noexcept {
  return {lhs.a * rhs.a + lhs.b * rhs.c, lhs.a * rhs.b + lhs.b * rhs.d,
          lhs.c * rhs.a + lhs.d * rhs.c, lhs.c * rhs.b + lhs.d * rhs.d};
}

Matrix2 cayley_matrix() noexcept { return {1.0, -kI, 1.0, kI}; }

MobiusTransform::MobiusTransform(Complex a, Complex b, Complex c, Complex d, Model model)
    : MobiusTransform(Matrix2{a, b, c, d}, model) {}

MobiusTransform::MobiusTransform(const Matrix2& m, Model model) : model_(model) {
  for (Complex v : {m.a, m.b, m.c, m.d}) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      fail(ErrorKind::InvalidArgument, "non-finite matrix entry");
    }
  }
  m_ = canonical_sign(project_to_group(m.normalized(), model));
}

MobiusTransform MobiusTransform::identity(Model model) {
  return MobiusTransform(1.0, 0.0, 0.0, 1.0, model);
}

MobiusTransform MobiusTransform::rotation(double theta) {
  const Complex h = std::polar(1.0, 0.5 * theta);
  return MobiusTransform(h, 0.0, 0.0, std::conj(h), Model::Disk);
}

MobiusTransform MobiusTransform::disk_automorphism(Complex p, double phi) {
  if (std::abs(p) >= 1.0) fail(ErrorKind::Domain, "automorphism center outside the disk");
  const Complex h = std::polar(1.0, 0.5 * phi);
  return MobiusTransform(h, -h * p, -std::conj(h * p), std::conj(h), Model::Disk);
}

MobiusTransform MobiusTransform::translation(double t) {
  return MobiusTransform(1.0, t, 0.0, 1.0, Model::HalfPlane);
}

MobiusTransform MobiusTransform::dilation(double lambda) {
  if (!(lambda > 0.0)) fail(ErrorKind::InvalidArgument, "dilation factor must be positive");
  const double s = std::sqrt(lambda);
  return MobiusTransform(s, 0.0, 0.0, 1.0 / s, Model::HalfPlane);
}

Complex MobiusTransform::apply(Complex z) const {
  if (!in_model_domain(z, model_)) {
    fail(ErrorKind::Domain, std::string("point outside the ") + to_string(model_) + " model");
  }
  const Complex den = m_.c * z + m_.d;
  if (std::abs(den) < 1e-300) fail(ErrorKind::Domain, "point at the pole");
  return (m_.a * z + m_.b) / den;
}

double MobiusTransform::distance(const MobiusTransform& o) const noexcept {
  auto dist = [&](double s) {
    return std::max({std::abs(m_.a - s * o.m_.a), std::abs(m_.b - s * o.m_.b),
                     std::abs(m_.c - s * o.m_.c), std::abs(m_.d - s * o.m_.d)});
  };
  return std::min(dist(1.0), dist(-1.0));
}

bool MobiusTransform::approx_equal(const MobiusTransform& other, double tol) const noexcept {
  return model_ == other.model_ && distance(other) <= tol;
}

MobiusTransform compose(const MobiusTransform& lhs, const MobiusTransform& rhs) {
  if (lhs.model() != rhs.model()) fail(ErrorKind::ModelMismatch, "cannot compose across models");
  return MobiusTransform(lhs.matrix() * rhs.matrix(), lhs.model());
}

MobiusTransform inverse(const MobiusTransform& m) {
  return MobiusTransform(m.matrix().adjugate(), m.model());
}

const char* to_string(IsometryKind kind) noexcept {
  switch (kind) {
    case IsometryKind::Identity: return "identity";
    case IsometryKind::Elliptic: return "elliptic";
    case IsometryKind::Parabolic: return "parabolic";
    case IsometryKind::Hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

MobiusTransform normal_form(IsometryKind kind, double parameter, Model model) {
  switch (kind) {
    case IsometryKind::Identity:
      return MobiusTransform::identity(model);
    case IsometryKind::Elliptic: {
      const auto r = MobiusTransform::rotation(parameter);
      return model == Model::Disk ? r : cayley_conjugate(r);
    }
    case IsometryKind::Parabolic: {
      const auto t = MobiusTransform::translation(parameter);
      return model == Model::HalfPlane ? t : cayley_conjugate(t);
    }
    case IsometryKind::Hyperbolic: {
      const auto h = MobiusTransform::dilation(parameter);
      return model == Model::HalfPlane ? h : cayley_conjugate(h);
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown isometry kind");
}

IsometryClass classify_isometry(const MobiusTransform& m) {
  const Model model = m.model();
  const double tr = m.trace();
  const double gap = tr * tr - 4.0;
  const Matrix2& mat = m.matrix();

  const double off_identity =
      std::max({std::abs(mat.b), std::abs(mat.c), std::abs(mat.a - mat.d)});
  if (std::abs(gap) < kParabolicTolerance && off_identity < kIdentityTolerance) {
    return {IsometryKind::Identity, 0.0, MobiusTransform::identity(model), std::abs(gap)};
  }

  if (gap < 0.0 && std::abs(gap) >= kParabolicTolerance) {
    // Move the interior fixed point to the origin of the disk.
    const Matrix2 l = to_matrix_in(m, Model::Disk);
    Complex p{};
    if (std::abs(l.b) > 0.0) {
      const auto [r1, r2] = quadratic_roots(l.c, l.d - l.a, -l.b);
      p = std::abs(r1) < std::abs(r2) ? r1 : r2;
    }
    if (std::abs(p) >= 1.0) fail(ErrorKind::InvalidArgument, "elliptic fixed point not interior");
    const double s = std::sqrt(1.0 - std::norm(p));
    const Matrix2 k{1.0 / s, -p / s, -std::conj(p) / s, 1.0 / s};
    const Matrix2 n = k * l * k.adjugate();
    const double theta = fold_angle(2.0 * std::arg(n.a));
    const MobiusTransform conj(transport(k, Model::Disk, model), model);
    return {IsometryKind::Elliptic, theta, conj, std::abs(gap)};
  }

  Matrix2 l = to_matrix_in(m, Model::HalfPlane);
  if ((l.a + l.d).real() < 0.0) l = {-l.a, -l.b, -l.c, -l.d};
  const double a = l.a.real(), b = l.b.real(), c = l.c.real(), d = l.d.real();
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(d), 1.0});

  if (std::abs(gap) < kParabolicTolerance) {
    Matrix2 k{};
    if (std::abs(c) > 1e-12 * scale) {
      const double x0 = (a - d) / (2.0 * c);
      k = {0.0, -1.0, 1.0, -x0};
    }
    Matrix2 n = k * l * k.adjugate();
    if ((n.a + n.d).real() < 0.0) n = {-n.a, -n.b, -n.c, -n.d};
    const double t = (n.b / n.d).real();
    const MobiusTransform conj(transport(k, Model::HalfPlane, model), model);
    return {IsometryKind::Parabolic, t, conj, std::abs(gap)};
  }

  // Hyperbolic: repelling fixed point to 0, attracting one to infinity.
  Matrix2 k{};
  if (std::abs(c) > 1e-12 * scale) {
    const auto [r1, r2] = quadratic_roots(c, d - a, -b);
    const double x1 = std::max(r1.real(), r2.real());
    const double x2 = std::min(r1.real(), r2.real());
    k = Matrix2{1.0, -x1, 1.0, -x2}.normalized();
  } else {
    const double x = b / (d - a);
    k = {1.0, -x, 0.0, 1.0};
  }
  Matrix2 n = k * l * k.adjugate();
  double lambda = (n.a / n.d).real();
  if (lambda < 1.0) {
    k = Matrix2{0.0, -1.0, 1.0, 0.0} * k;
    lambda = 1.0 / lambda;
  }
  const MobiusTransform conj(transport(k, Model::HalfPlane, model), model);
  return {IsometryKind::Hyperbolic, lambda, conj, std::abs(gap)};
}

double hyperbolic_distance(Complex z1, Complex z2, Model model) {
  if (!in_model_domain(z1, model) || !in_model_domain(z2, model)) {
    fail(ErrorKind::Domain, "distance between points outside the model");
  }
  if (model == Model::Disk) {
    const double ratio = std::abs(z1 - z2) / std::abs(1.0 - std::conj(z1) * z2);
    return 2.0 * std::atanh(std::min(ratio, 1.0));
  }
  return 2.0 * std::asinh(std::abs(z1 - z2) / (2.0 * std::sqrt(z1.imag() * z2.imag())));
}

double displacement_infimum(const MobiusTransform& m, std::span<const Complex> probes) {
  if (probes.empty()) fail(ErrorKind::InvalidArgument, "displacement needs at least one probe");
  double best = INFINITY;
  for (Complex z : probes) best = std::min(best, hyperbolic_distance(z, m.apply(z), m.model()));
  return best;
}

Complex cayley(Complex z, CayleyDirection direction) {
  if (direction == CayleyDirection::HalfPlaneToDisk) {
    if (!in_model_domain(z, Model::HalfPlane)) fail(ErrorKind::Domain, "point not in half-plane");
    return (z - kI) / (z + kI);
  }
  if (!in_model_domain(z, Model::Disk)) fail(ErrorKind::Domain, "point not in disk");
  return kI * (1.0 + z) / (1.0 - z);
}

MobiusTransform cayley_conjugate(const MobiusTransform& m) {
  const Matrix2 c = cayley_matrix();
  if (m.model() == Model::HalfPlane) {
    return MobiusTransform(c * m.matrix() * c.adjugate(), Model::Disk);
  }
  return MobiusTransform(c.adjugate() * m.matrix() * c, Model::HalfPlane);
}

}  // namespace hypsing
