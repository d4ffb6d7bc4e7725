#pragma once

// Orientation-preserving isometries of the hyperbolic plane:
// PSU(1,1) acting on the unit disk and PSL(2,R) acting on the upper
// half-plane, both with curvature -1 (disk metric 4|dz|^2/(1-|z|^2)^2).

#include <span>

#include "hypsing/core.hpp"

namespace hypsing {

enum class Model { Disk, HalfPlane };

const char* to_string(Model model) noexcept;

bool in_model_domain(Complex z, Model model) noexcept;

/// A plain element of GL(2,C) acting by fractional linear maps.
struct Matrix2 {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  Complex det() const noexcept { return a * d - b * c; }
  Complex apply(Complex z) const noexcept { return (a * z + b) / (c * z + d); }
  Matrix2 adjugate() const noexcept { return {d, -b, -c, a}; }
  /// Scaled to unit determinant (principal square root).
  Matrix2 normalized() const;
};

Matrix2 operator*(const Matrix2& lhs, const Matrix2& rhs) noexcept;

/// Cayley transform z -> (z - i)/(z + i) taking the half-plane onto the disk.
Matrix2 cayley_matrix() noexcept;

class MobiusTransform {
 public:
  /// Renormalizes to unit determinant, checks the group shape of `model`
  /// within 1e-10 and fixes the projective sign.
  MobiusTransform(Complex a, Complex b, Complex c, Complex d, Model model);
  MobiusTransform(const Matrix2& m, Model model);

  static MobiusTransform identity(Model model);
  /// z -> e^{i theta} z on the disk.
  static MobiusTransform rotation(double theta);
  /// z -> e^{i phi} (z - p)/(1 - conj(p) z) on the disk.
  static MobiusTransform disk_automorphism(Complex p, double phi);
  /// z -> z + t on the half-plane.
  static MobiusTransform translation(double t);
  /// z -> lambda z on the half-plane, lambda > 0.
  static MobiusTransform dilation(double lambda);

  Complex a() const noexcept { return m_.a; }
  Complex b() const noexcept { return m_.b; }
  Complex c() const noexcept { return m_.c; }
  Complex d() const noexcept { return m_.d; }
  Model model() const noexcept { return model_; }
  const Matrix2& matrix() const noexcept { return m_; }

  /// Image of a point of the open model domain.
  Complex apply(Complex z) const;
  double trace() const noexcept { return (m_.a + m_.d).real(); }

  /// Entrywise comparison up to the global sign.
  bool approx_equal(const MobiusTransform& other, double tol) const noexcept;
  double distance(const MobiusTransform& other) const noexcept;

 private:
  Matrix2 m_;
  Model model_;
};

/// lhs o rhs.
MobiusTransform compose(const MobiusTransform& lhs, const MobiusTransform& rhs);
MobiusTransform inverse(const MobiusTransform& m);

enum class IsometryKind { Identity, Elliptic, Parabolic, Hyperbolic };

const char* to_string(IsometryKind kind) noexcept;

/// Conjugacy class of an isometry together with the conjugator K such that
/// K o L o K^-1 is the normal form of `kind` and `parameter` in L's model.
struct IsometryClass {
  IsometryKind kind;
  /// Rotation angle in (0, 2pi), translation t != 0, or dilation lambda > 1.
  double parameter;
  MobiusTransform conjugator;
  /// |trace^2 - 4| of the unit-determinant representative.
  double trace_gap;
};

inline constexpr double kParabolicTolerance = 1e-9;

IsometryClass classify_isometry(const MobiusTransform& m);

/// e^{i theta} z, z + t, lambda z transported into `model` by the Cayley map
/// when needed (elliptic rotates about 0 in the disk and about i in the
/// half-plane; parabolic and hyperbolic fix infinity resp. 0 and infinity
/// in the half-plane).
MobiusTransform normal_form(IsometryKind kind, double parameter, Model model);

double hyperbolic_distance(Complex z1, Complex z2, Model model);

/// Minimum of d(z, L z) over the probes: an upper bound for the infimum.
double displacement_infimum(const MobiusTransform& m, std::span<const Complex> probes);

enum class CayleyDirection { HalfPlaneToDisk, DiskToHalfPlane };

Complex cayley(Complex z, CayleyDirection direction);

/// Carries a transform to the other model through the Cayley map.
MobiusTransform cayley_conjugate(const MobiusTransform& m);

}  // namespace hypsing
