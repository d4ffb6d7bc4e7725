#include "hypsing/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string_view>

namespace hypsing {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { fail(ErrorKind::Parse, what); }

void check_keys(const Json& j, std::initializer_list<std::string_view> allowed, const char* what) {
  if (!j.is_object()) parse_fail(std::string(what) + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      parse_fail(std::string("unknown key \"") + item.key() + "\" in " + what);
    }
  }
}

const Json& field(const Json& j, const char* key, const char* what) {
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(std::string(what) + " lacks \"" + key + "\"");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) parse_fail(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::string text(const Json& j, const char* what) {
  if (!j.is_string()) parse_fail(std::string(what) + " must be a string");
  return j.get<std::string>();
}

double optional_number(const Json& j, const char* key, double fallback) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : number(*it, key);
}

Json coeff_array(std::span<const Complex> c) {
  Json out = Json::array();
  for (Complex z : c) out.push_back(to_json(z));
  return out;
}

std::vector<Complex> coeffs_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) parse_fail("\"coeffs\" must be a nonempty array");
  std::vector<Complex> out;
  out.reserve(j.size());
  for (const Json& c : j) out.push_back(complex_from_json(c));
  return out;
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const TruncatedSeries& s) {
  Json j;
  j["lead"] = s.lead();
  j["coeffs"] = coeff_array(s.coeffs());
  return j;
}

Json to_json(const MobiusTransform& m) {
  Json j;
  j["model"] = to_string(m.model());
  j["mat"] = Json::array({to_json(m.a()), to_json(m.b()), to_json(m.c()), to_json(m.d())});
  return j;
}

Json to_json(const IsometryClass& c) {
  Json j;
  j["kind"] = to_string(c.kind);
  j["parameter"] = c.parameter;
  j["trace_gap"] = c.trace_gap;
  return j;
}

Json to_json(const DevelopingMapSpec& f) {
  Json j;
  std::visit(
      [&](const auto& core) {
        using T = std::decay_t<decltype(core)>;
        if constexpr (std::is_same_v<T, PowerMap>) {
          j["kind"] = "power";
          j["alpha"] = core.alpha;
        } else if constexpr (std::is_same_v<T, LogMap>) {
          j["kind"] = "log";
        } else {
          j["kind"] = "series";
          j["lead"] = core.series.lead();
          j["coeffs"] = coeff_array(core.series.coeffs());
          if (core.log_term) j["log"] = true;
        }
      },
      f.core());
  j["post"] = f.post() ? to_json(*f.post()) : Json(nullptr);
  if (f.target_model() != f.core_model()) j["target"] = to_string(f.target_model());
  if (f.input_rotation() != 0.0) j["rotate"] = f.input_rotation();
  if (f.branch_index() != 0) j["branch"] = f.branch_index();
  return j;
}

Json to_json(const ConformalMetric& m) {
  Json j;
  std::visit(
      [&](const auto& form) {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, HyperbolicDisk>) {
          j["kind"] = "disk";
        } else if constexpr (std::is_same_v<T, HyperbolicHalfPlane>) {
          j["kind"] = "halfplane";
        } else if constexpr (std::is_same_v<T, Conical>) {
          j["kind"] = "conical";
          j["theta"] = form.theta;
        } else if constexpr (std::is_same_v<T, Cusp>) {
          j["kind"] = "cusp";
        } else if constexpr (std::is_same_v<T, Pullback>) {
          j["kind"] = "pullback";
          j["map"] = to_json(form.map);
          j["base"] = to_json(*form.base);
        } else {
          j["kind"] = "grid";
          j["x0"] = form.x0;
          j["x1"] = form.x1;
          j["nx"] = form.nx;
          j["y0"] = form.y0;
          j["y1"] = form.y1;
          j["ny"] = form.ny;
          j["u"] = form.u;
        }
      },
      m.form());
  return j;
}

Json to_json(const SingularityReport& r) {
  Json j;
  j["kind"] = to_string(r.kind);
  if (r.kind == SingularityKind::Conical) j["theta"] = r.theta;
  j["alpha"] = r.alpha;
  j["k"] = r.k;
  Json mono;
  mono["transform"] = to_json(r.monodromy.transform);
  mono["classification"] = to_json(r.monodromy.classification);
  mono["fit_residual"] = r.monodromy.fit_residual;
  j["monodromy"] = std::move(mono);
  j["normalizer"] = to_json(r.normalizer);
  j["normal_model"] = to_string(r.normal_model);
  j["fourier"] = to_json(r.fourier);
  j["xi"] = to_json(r.xi);
  Json diag = Json::object();
  for (const auto& [name, value] : r.diagnostics) diag[name] = value;
  j["diagnostics"] = std::move(diag);
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const SuiteReport& r) {
  Json j;
  Json rows = Json::array();
  for (const CheckRow& row : r.checks) {
    Json c;
    c["name"] = row.name;
    c["residual"] = row.residual;
    c["tolerance"] = row.tolerance;
    c["strict"] = row.strict;
    c["pass"] = row.pass;
    c["cases"] = row.cases;
    rows.push_back(std::move(c));
  }
  j["checks"] = std::move(rows);
  j["worst"] = r.worst;
  j["all_pass"] = r.all_pass;
  return j;
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_fail("complex numbers are written [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

TruncatedSeries series_from_json(const Json& j) {
  check_keys(j, {"lead", "coeffs"}, "series");
  return TruncatedSeries(coeffs_from_json(field(j, "coeffs", "series")), optional_number(j, "lead", 0.0));
}

Model model_from_json(const Json& j) {
  const std::string s = text(j, "model");
  if (s == "disk") return Model::Disk;
  if (s == "halfplane") return Model::HalfPlane;
  parse_fail("model must be \"disk\" or \"halfplane\", got \"" + s + "\"");
}

MobiusTransform mobius_from_json(const Json& j) {
  check_keys(j, {"model", "mat"}, "isometry");
  const Json& mat = field(j, "mat", "isometry");
  if (!mat.is_array() || mat.size() != 4) parse_fail("\"mat\" must hold four entries a, b, c, d");
  return MobiusTransform(complex_from_json(mat[0]), complex_from_json(mat[1]), complex_from_json(mat[2]),
                         complex_from_json(mat[3]), model_from_json(field(j, "model", "isometry")));
}

DevelopingMapSpec map_from_json(const Json& j) {
  check_keys(j, {"kind", "alpha", "lead", "coeffs", "log", "post", "target", "rotate", "branch"},
             "map spec");
  const std::string kind = text(field(j, "kind", "map spec"), "kind");
  auto reject = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      if (j.contains(k)) parse_fail(std::string("\"") + k + "\" does not apply to a " + kind + " map");
    }
  };

  std::optional<DevelopingMapSpec> f;
  if (kind == "power") {
    reject({"lead", "coeffs", "log"});
    f = DevelopingMapSpec::power(number(field(j, "alpha", "power map"), "alpha"));
  } else if (kind == "log") {
    reject({"alpha", "lead", "coeffs", "log"});
    f = DevelopingMapSpec::log();
  } else if (kind == "series") {
    reject({"alpha"});
    bool log_term = false;
    if (const auto it = j.find("log"); it != j.end()) {
      if (!it->is_boolean()) parse_fail("\"log\" must be true or false");
      log_term = it->get<bool>();
    }
    TruncatedSeries s(coeffs_from_json(field(j, "coeffs", "series map")), optional_number(j, "lead", 0.0));
    f = DevelopingMapSpec::series(std::move(s), log_term);
  } else {
    parse_fail("map kind must be power, log or series, got \"" + kind + "\"");
  }

  const auto target = j.find("target");
  std::optional<MobiusTransform> post;
  if (const auto it = j.find("post"); it != j.end() && !it->is_null()) post = mobius_from_json(*it);
  if (post && post->model() == f->core_model()) {
    *f = f->with_post(*post);
    post.reset();
  }
  if (target != j.end()) {
    *f = f->with_target(model_from_json(*target));
  } else if (post) {
    *f = f->with_target(post->model());
  }
  if (post) *f = f->with_post(*post);
  if (j.contains("rotate")) *f = f->with_rotation(number(j["rotate"], "rotate"));
  if (j.contains("branch")) *f = f->with_branch(integer(j["branch"], "branch"));
  return *f;
}

ConformalMetric metric_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("metric spec must be a JSON object");
  const std::string kind = text(field(j, "kind", "metric spec"), "kind");
  if (kind == "disk" || kind == "halfplane" || kind == "cusp") {
    check_keys(j, {"kind"}, "metric spec");
    if (kind == "disk") return ConformalMetric::hyperbolic_disk();
    if (kind == "halfplane") return ConformalMetric::hyperbolic_half_plane();
    return ConformalMetric::cusp();
  }
  if (kind == "conical") {
    check_keys(j, {"kind", "theta"}, "conical metric");
    return ConformalMetric::conical(number(field(j, "theta", "conical metric"), "theta"));
  }
  if (kind == "pullback") {
    check_keys(j, {"kind", "map", "base"}, "pullback metric");
    return ConformalMetric::pullback(map_from_json(field(j, "map", "pullback metric")),
                                     metric_from_json(field(j, "base", "pullback metric")));
  }
  if (kind == "grid") {
    check_keys(j, {"kind", "x0", "x1", "nx", "y0", "y1", "ny", "u"}, "grid metric");
    GridSampled g;
    g.x0 = number(field(j, "x0", "grid metric"), "x0");
    g.x1 = number(field(j, "x1", "grid metric"), "x1");
    g.nx = integer(field(j, "nx", "grid metric"), "nx");
    g.y0 = number(field(j, "y0", "grid metric"), "y0");
    g.y1 = number(field(j, "y1", "grid metric"), "y1");
    g.ny = integer(field(j, "ny", "grid metric"), "ny");
    const Json& u = field(j, "u", "grid metric");
    if (!u.is_array()) parse_fail("\"u\" must be an array of numbers");
    for (const Json& v : u) g.u.push_back(number(v, "u entry"));
    return ConformalMetric::grid(std::move(g));
  }
  parse_fail("metric kind must be disk, halfplane, conical, cusp, pullback or grid, got \"" + kind + "\"");
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace hypsing
