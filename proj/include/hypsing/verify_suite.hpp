#pragma once

// The built-in verification matrix run by `hypsing verify`: cone parameters
// and a cusp, with and without a series perturbation, targeting either model.

#include <map>
#include <string>
#include <vector>

#include "hypsing/verify.hpp"

namespace hypsing {

struct SuiteConfig {
  ClassifyConfig classify;
  /// Replacements for entries of default_tolerances().
  std::map<std::string, double> tolerances;
};

struct CheckRow {
  std::string name;
  double residual;
  double tolerance;
  /// Strict rows need residual < tolerance, the others residual <= tolerance.
  bool strict;
  bool pass;
  int cases;
};

struct SuiteReport {
  std::vector<CheckRow> checks;
  /// Row with the largest residual relative to its tolerance.
  std::string worst;
  bool all_pass;
};

const std::map<std::string, double>& default_tolerances();

/// Cone parameters of the matrix; the cusp is added separately.
const std::vector<double>& suite_thetas();

SuiteReport run_verify_suite(const SuiteConfig& config);

}  // namespace hypsing
