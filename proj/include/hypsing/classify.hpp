#pragma once

// From a developing map on the punctured disk to the local model of its
// metric: monodromy type, Fourier development of the periodic part, cone
// parameter and the normalizing coordinate xi.

#include <map>
#include <string>
#include <vector>

#include "hypsing/devmap.hpp"
#include "hypsing/metrics.hpp"

namespace hypsing {

struct ClassifyConfig {
  int order = kDefaultTruncationOrder;
  double radius = 0.25;
  int samples = 512;
  /// Relative threshold below which a Fourier coefficient counts as zero when locating k.
  double k_tolerance = 1e-10;
  double negative_tolerance = 1e-8;
  /// Sampled coefficients below this fraction of the sample maximum are treated as noise.
  double noise_floor = 1e-13;
  int basepoints = 6;
  int loop_steps = kDefaultLoopSteps;
  double test_radius = 0.25;
  int test_points = 64;
  bool retry_negative_orientation = true;
};

enum class SingularityKind { Conical, Cusp };

const char* to_string(SingularityKind kind) noexcept;

struct FourierDevelopment {
  /// a_0 .. a_order.
  TruncatedSeries series;
  /// Sum of the magnitudes of the negative-index coefficients as sampled on the circle.
  double negative_mass;
  double max_negative;
  /// Coefficients set to zero by the noise floor.
  int flushed;
};

/// Fourier coefficients of the single-valued periodic part of G, whose
/// monodromy must already be the normal form recorded in `normal`
/// (rotation about 0 in the disk, translation in the half-plane, or identity).
FourierDevelopment fourier_extract(const DevelopingMapSpec& g, const MonodromyResult& normal,
                                   double radius, int samples, int order,
                                   double negative_tolerance = 1e-8, double noise_floor = 1e-13);

/// xi = e^{i a_0} w exp(i sum_{n>=max(k,1)} a_n w^n).
TruncatedSeries build_xi_cusp(const TruncatedSeries& fourier, int k);

/// xi = w (sum_{n>=k} a_n w^{n-k})^{1/(alpha+k)}; the result has order fourier.order() - k.
TruncatedSeries build_xi_conical(const TruncatedSeries& fourier, double alpha, int k);

/// Rotates xi so that its linear coefficient is positive real.
TruncatedSeries gauge_fix(const TruncatedSeries& xi);

/// First index with |a_n| > tolerance * max|a|, or -1 when all vanish.
int first_nonzero(const TruncatedSeries& a, double tolerance);

struct SingularityReport {
  SingularityKind kind;
  /// k + alpha; 0 for a cusp.
  double theta;
  double alpha;
  int k;
  /// Monodromy of the input map, in its target model.
  MonodromyResult monodromy;
  /// Isometry L with L o F (viewed in normal_model) in normal form.
  MobiusTransform normalizer;
  Model normal_model;
  TruncatedSeries fourier;
  TruncatedSeries xi;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> warnings;
};

SingularityReport classify_singularity(const DevelopingMapSpec& f, const ClassifyConfig& config = {});

/// Same pipeline starting from an already extracted monodromy.
SingularityReport classify_with_monodromy(const DevelopingMapSpec& f, const MonodromyResult& monodromy,
                                          const ClassifyConfig& config = {});

/// The map L o F whose monodromy is the normal form.
DevelopingMapSpec normalized_map(const DevelopingMapSpec& f, const SingularityReport& report);

/// Local model metric (conical or cusp) of a report.
double model_density(const SingularityReport& report, Complex xi);

/// Largest relative gap between the pullback of the model through xi and the
/// pullback of the ambient metric through F on |w| = radius.
double model_pullback_residual(const SingularityReport& report, const DevelopingMapSpec& f,
                               double radius, int points);

}  // namespace hypsing
