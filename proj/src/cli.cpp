#include "hypsing/cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hypsing/json_io.hpp"

namespace hypsing {

namespace {

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) {
    fail(ErrorKind::Parse, std::string("bad number \"") + s + "\" for " + what);
  }
  return v;
}

int parse_int(const std::string& s, const char* what) {
  int v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) {
    fail(ErrorKind::Parse, std::string("bad integer \"") + s + "\" for " + what);
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Parse, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// I/O failures share exit code 1 with parse errors.
void emit(const RunConfig& config, const std::string& content, std::ostream& out) {
  if (config.out.empty()) {
    out << content;
    return;
  }
  std::ofstream file(config.out, std::ios::binary);
  if (!file || !(file << content)) fail(ErrorKind::Parse, "cannot write " + config.out);
}

ClassifyConfig classify_config(const RunConfig& config) {
  ClassifyConfig c;
  c.order = config.order;
  c.radius = config.radius;
  c.test_radius = config.radius;
  c.samples = config.samples;
  return c;
}

template <class Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "hypsing: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "hypsing: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.order < 4) fail(ErrorKind::InvalidArgument, "--order must be at least 4");
  if (!(config.radius > 0.0 && config.radius < 1.0)) {
    fail(ErrorKind::InvalidArgument, "--radius must lie in (0, 1)");
  }
  if (config.samples < 4 * config.order || (config.samples & (config.samples - 1)) != 0) {
    fail(ErrorKind::InvalidArgument, "--samples must be a power of two and at least 4 * order");
  }
  if (!(config.step > 0.0)) fail(ErrorKind::InvalidArgument, "--step must be positive");
}

void add_tolerance(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail(ErrorKind::InvalidArgument, "--tol expects name=value, got \"" + assignment + "\"");
  }
  config.tolerances[assignment.substr(0, eq)] = parse_double(assignment.substr(eq + 1), "--tol");
}

std::vector<Complex> parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts[0] == "annulus") {
    if (parts.size() != 5 && parts.size() != 7) {
      fail(ErrorKind::Parse, "annulus grid is annulus:rmin:rmax:nr:nphi[:cx:cy]");
    }
    Complex center = 0.0;
    if (parts.size() == 7) center = {parse_double(parts[5], "cx"), parse_double(parts[6], "cy")};
    return annulus_grid(parse_double(parts[1], "rmin"), parse_double(parts[2], "rmax"),
                        parse_int(parts[3], "nr"), parse_int(parts[4], "nphi"), center);
  }
  if (parts[0] == "rect") {
    if (parts.size() != 7) fail(ErrorKind::Parse, "rect grid is rect:x0:x1:nx:y0:y1:ny");
    return rect_grid(parse_double(parts[1], "x0"), parse_double(parts[2], "x1"), parse_int(parts[3], "nx"),
                     parse_double(parts[4], "y0"), parse_double(parts[5], "y1"), parse_int(parts[6], "ny"));
  }
  fail(ErrorKind::Parse, "grid must start with annulus: or rect:");
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::InvalidArgument:
      return 1;
    case ErrorKind::VerificationFailed:
      return 3;
    default:
      return 2;
  }
}

int cmd_classify(const std::string& input_path, const RunConfig& config, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    ClassifyConfig cc = classify_config(config);
    for (const auto& [name, value] : config.tolerances) {
      if (name == "k_tolerance") {
        cc.k_tolerance = value;
      } else if (name == "negative_tolerance") {
        cc.negative_tolerance = value;
      } else if (name == "noise_floor") {
        cc.noise_floor = value;
      } else {
        fail(ErrorKind::InvalidArgument,
             "classify knows the tolerances k_tolerance, negative_tolerance and noise_floor, not " + name);
      }
    }
    const DevelopingMapSpec f = map_from_json(parse_json(read_file(input_path)));
    const SingularityReport report = classify_singularity(f, cc);
    emit(config, dump_json(to_json(report)), out);
    return 0;
  });
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    SuiteConfig sc;
    sc.classify = classify_config(config);
    sc.tolerances = config.tolerances;
    const SuiteReport report = run_verify_suite(sc);

    Json j;
    Json cfg;
    cfg["order"] = config.order;
    cfg["radius"] = config.radius;
    cfg["samples"] = config.samples;
    Json tol = Json::object();
    for (const auto& [name, value] : config.tolerances) tol[name] = value;
    cfg["tolerance_overrides"] = std::move(tol);
    j["config"] = std::move(cfg);
    const Json table = to_json(report);
    for (const auto& [key, value] : table.items()) j[key] = value;
    emit(config, dump_json(j), out);
    if (!report.all_pass) {
      for (const CheckRow& row : report.checks) {
        if (!row.pass) {
          err << "hypsing: check " << row.name << " failed: residual " << row.residual << " against "
              << row.tolerance << "\n";
        }
      }
      return 3;
    }
    return 0;
  });
}

std::string sample_csv(const ConformalMetric& metric, const std::vector<Complex>& points, double step) {
  std::string csv = "re,im,u,density,curvature_residual\n";
  char line[160];
  for (Complex z : points) {
    const double u = log_density(metric, z);
    const double rho = density(metric, z);
    const double res = log_density_gradient_check(metric, z, step);
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", z.real(), z.imag(), u, rho, res);
    csv += line;
  }
  return csv;
}

int cmd_sample(const std::string& metric_path, const std::string& grid, const RunConfig& config,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    if (!config.tolerances.empty()) fail(ErrorKind::InvalidArgument, "sample takes no tolerances");
    const ConformalMetric metric = metric_from_json(parse_json(read_file(metric_path)));
    const std::vector<Complex> points = parse_grid(grid);
    emit(config, sample_csv(metric, points, config.step), out);
    return 0;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Isolated singularities of conformal hyperbolic metrics", "hypsing"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  std::vector<std::string> tols;
  app.add_option("--order", config.order, "Truncation order N");
  app.add_option("--radius", config.radius, "Sampling circle radius r");
  app.add_option("--samples", config.samples, "Samples per circle M");
  app.add_option("--out", config.out, "Output file (default: standard output)");
  app.add_option("--tol", tols, "Tolerance override name=value")->take_all()->allow_extra_args(false);

  std::string input;
  auto* classify = app.add_subcommand("classify", "Classify a developing map given as JSON");
  classify->add_option("input", input, "Developing map JSON file")->required();

  app.add_subcommand("verify", "Run the built-in verification matrix");

  std::string metric;
  std::string grid;
  auto* sample = app.add_subcommand("sample", "Sample a metric on a grid as CSV");
  sample->add_option("metric", metric, "Metric JSON file")->required();
  sample->add_option("--grid", grid, "annulus:rmin:rmax:nr:nphi[:cx:cy] or rect:x0:x1:nx:y0:y1:ny")
      ->required();
  sample->add_option("--step", config.step, "Finite-difference spacing h");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    for (const std::string& t : tols) add_tolerance(config, t);
  } catch (const Error& e) {
    err << "hypsing: " << e.what() << "\n";
    return exit_code(e.kind());
  }

  if (classify->parsed()) return cmd_classify(input, config, out, err);
  if (sample->parsed()) return cmd_sample(metric, grid, config, out, err);
  return cmd_verify(config, out, err);
}

}  // namespace hypsing
