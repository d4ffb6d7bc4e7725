#pragma once

// The `hypsing` command line: classify a developing map, run the built-in
// verification matrix, or sample a metric on a grid.
//
// Exit codes: 0 success, 1 usage, parse or I/O error, 2 classification or
// domain error, 3 failed verification.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hypsing/metrics.hpp"

namespace hypsing {

struct RunConfig {
  int order = 32;
  double radius = 0.25;
  int samples = 512;
  std::map<std::string, double> tolerances;
  /// Empty for standard output.
  std::string out;
  /// Finite-difference spacing of `sample`.
  double step = 1e-3;
};

/// Throws InvalidArgument unless N >= 4, 0 < r < 1, and M >= 4N is a power of two.
void validate(const RunConfig& config);

/// Parses "name=value" into the tolerance map.
void add_tolerance(RunConfig& config, const std::string& assignment);

/// "annulus:rmin:rmax:nr:nphi[:cx:cy]" or "rect:x0:x1:nx:y0:y1:ny".
std::vector<Complex> parse_grid(const std::string& spec);

int exit_code(ErrorKind kind) noexcept;

int cmd_classify(const std::string& input_path, const RunConfig& config, std::ostream& out,
                 std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sample(const std::string& metric_path, const std::string& grid, const RunConfig& config,
               std::ostream& out, std::ostream& err);

/// The CSV text `sample` writes.
std::string sample_csv(const ConformalMetric& metric, const std::vector<Complex>& points, double step);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hypsing
