#pragma once

// Independent numerical checks: Schwarzian derivative and its Laurent
// structure at the puncture, cross-checks of classification reports,
// contraction of holomorphic self-maps and displacement near a cusp.

#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hypsing/classify.hpp"

namespace hypsing {

enum class SchwarzianMethod {
  /// Exact jets (every core has closed-form derivatives).
  Auto,
  Exact,
  /// Cauchy integrals on a small circle around z; independent of the jet code.
  Contour,
};

/// {F, z} = F'''/F' - 3/2 (F''/F')^2.
Complex schwarzian(const DevelopingMapSpec& f, Complex z, SchwarzianMethod method = SchwarzianMethod::Auto);

struct SchwarzianExpansion {
  /// Laurent coefficients of {F, z} from index -2.
  LaurentWindow window;
  double theta_estimate;
  Complex d_estimate;
  double holomorphic_tail_norm;
  /// Largest coefficient of z^2 {F, z} at a negative index, as sampled on the circle.
  double structure_residual;
};

SchwarzianExpansion schwarzian_expand(const DevelopingMapSpec& f, double radius, int samples,
                                      int max_index = 8,
                                      SchwarzianMethod method = SchwarzianMethod::Auto);

struct CrosscheckOptions {
  double radius = 0.2;
  int samples = 256;
  double theta_tolerance = 1e-6;
  double pullback_tolerance = 1e-8;
  double structure_tolerance = 1e-8;
};

/// Recomputes theta from the Schwarzian and the model pullback on a fresh
/// circle; throws VerificationFailed when either disagrees with the report.
std::map<std::string, double> report_crosscheck(const SingularityReport& report, const DevelopingMapSpec& f,
                                                const CrosscheckOptions& options = {});

using PlaneMap = std::function<Complex(Complex)>;

struct NamedSelfMap {
  std::string name;
  PlaneMap map;
};

/// Holomorphic self-maps of the half-plane that are not isometries.
std::vector<NamedSelfMap> schwarz_pick_family();

struct ContractionStats {
  /// min over pairs of d(z1, z2) - d(f z1, f z2).
  double min_margin;
  /// max over pairs of |d(f z1, f z2) - d(z1, z2)|.
  double max_defect;
};

ContractionStats contraction_stats(const PlaneMap& f, Model model,
                                   std::span<const std::pair<Complex, Complex>> pairs);

/// Reproducible pairs of points of a model.
std::vector<std::pair<Complex, Complex>> random_pairs(Model model, int count, unsigned seed);

struct DisplacementWitness {
  std::vector<double> heights;
  std::vector<double> displacement;
  /// 2 pi / y.
  std::vector<double> bound;
  bool strictly_decreasing;
  /// max of displacement / bound - 1.
  double worst_excess;
};

/// Probes the raw monodromy of a cusp at the preimages of i y under the
/// normalization, where the translation length is 2 pi / y.
DisplacementWitness cusp_displacement_witness(const DevelopingMapSpec& f, const SingularityReport& report,
                                              std::span<const double> heights);

}  // namespace hypsing
