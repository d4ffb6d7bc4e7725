#pragma once

// Developing maps on the punctured unit disk as branch-tracked multivalued
// functions, with analytic continuation around the puncture and monodromy
// extraction.
//
// A map is   F(w) = Cayley? o post o core(e^{i phi} w)   where core is one of
//
//   PowerMap   w^alpha                            (disk valued)
//   LogMap     -i log w                           (half-plane valued)
//   SeriesMap  w^lead * sum c_n w^n [- i log w]   (disk, or half-plane with the log term)
//
// Every multivalued piece is driven by one chosen logarithm of w, so a
// sheet is fully described by that logarithm; branch b uses Log w + 2 pi i b.

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "hypsing/mobius.hpp"
#include "hypsing/series.hpp"

namespace hypsing {

struct PowerMap {
  double alpha;
};

struct LogMap {};

struct SeriesMap {
  TruncatedSeries series;
  bool log_term = false;
};

using MapCore = std::variant<PowerMap, LogMap, SeriesMap>;

class DevelopingMapSpec {
 public:
  explicit DevelopingMapSpec(MapCore core, std::optional<MobiusTransform> post = std::nullopt,
                             int branch_index = 0);

  static DevelopingMapSpec power(double alpha);
  static DevelopingMapSpec log();
  static DevelopingMapSpec series(TruncatedSeries s, bool log_term = false);

  const MapCore& core() const noexcept { return core_; }
  /// Target-side isometry, expressed in the core's model.
  const std::optional<MobiusTransform>& post() const noexcept { return post_; }
  int branch_index() const noexcept { return branch_; }
  double input_rotation() const noexcept { return rotation_; }

  Model core_model() const noexcept;
  Model target_model() const noexcept { return target_; }

  /// L o F for an isometry L of the target model.
  DevelopingMapSpec with_post(const MobiusTransform& m) const;
  /// Same map viewed in the other model through the Cayley transform.
  DevelopingMapSpec with_target(Model model) const;
  DevelopingMapSpec with_branch(int branch_index) const;
  /// w -> F(e^{i phi} w), accumulating with any existing rotation.
  DevelopingMapSpec with_rotation(double phi) const;

  /// Evaluation radius certified by the coefficients (1 for closed forms).
  double validated_radius() const noexcept { return validated_radius_; }

  /// Combined post-composition (post, then Cayley if retargeted) as a
  /// unit-determinant matrix acting on core values.
  Matrix2 target_matrix() const;

 private:
  MapCore core_;
  std::optional<MobiusTransform> post_;
  int branch_ = 0;
  double rotation_ = 0.0;
  Model target_;
  double validated_radius_ = 1.0;
};

/// Value and the first three derivatives at a point.
struct Jet3 {
  Complex value, d1, d2, d3;
};

/// Value on the sheet selected by `log_w`, a logarithm of w.
Complex dev_eval_on_log(const DevelopingMapSpec& f, Complex w, Complex log_w);
Jet3 dev_jet_on_log(const DevelopingMapSpec& f, Complex w, Complex log_w);

/// Value on the map's current branch: log w = Log w + 2 pi i * branch.
Complex dev_eval(const DevelopingMapSpec& f, Complex w);
Complex dev_deriv(const DevelopingMapSpec& f, Complex w);
Jet3 dev_jet(const DevelopingMapSpec& f, Complex w);

/// The logarithm dev_eval uses on branch `branch`.
Complex branch_log(Complex w, int branch);

enum class Orientation { Positive, Negative };

struct LoopResult {
  Complex value;
  int branch_index;
  int steps_used;
};

inline constexpr int kDefaultLoopSteps = 256;

/// Continues F around the circle through `basepoint` by nearest-value
/// branch selection, halving the step when the continuity test trips.
LoopResult continue_loop(const DevelopingMapSpec& f, Complex basepoint,
                         int steps = kDefaultLoopSteps,
                         Orientation orientation = Orientation::Positive);

struct MonodromyResult {
  MobiusTransform transform;
  IsometryClass classification;
  double fit_residual;
};

inline constexpr double kMonodromyFitTolerance = 1e-8;

/// Three-point Moebius interpolation of F(w) -> (continued F)(w) on the
/// first three basepoints, validated on the rest.
MonodromyResult extract_monodromy(const DevelopingMapSpec& f, std::span<const Complex> basepoints,
                                  Orientation orientation = Orientation::Positive,
                                  int steps = kDefaultLoopSteps);

/// `count` points on |w| = radius at golden-angle spacing.
std::vector<Complex> default_basepoints(double radius, int count = 6);

/// Unique Moebius map sending (z1, z2, z3) to (w1, w2, w3).
Matrix2 three_point_fit(std::span<const Complex, 3> from, std::span<const Complex, 3> to);

}  // namespace hypsing
