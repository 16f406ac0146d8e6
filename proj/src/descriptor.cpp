#include "ruelle/descriptor.hpp"

#include <fmt/format.h>
#include <json.hpp>

namespace ruelle {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

Complex parse_complex(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  config_error(fmt::format("field '{}' must be a number or [re, im]", field));
}

const json& require(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) config_error(fmt::format("missing field '{}'", field));
  return j.at(field);
}

template <class T>
T optional_number(const json& j, const char* field, T fallback) {
  if (!j.contains(field)) return fallback;
  const json& v = j.at(field);
  if (!v.is_number()) config_error(fmt::format("field '{}' must be a number", field));
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) config_error(fmt::format("field '{}' must be an integer", field));
  }
  return v.get<T>();
}

BallDomain parse_domain(const json& j) {
  const int dim = j.contains("dim") ? optional_number<int>(j, "dim", 1) : 1;
  const json& c = require(j, "center");
  std::vector<Complex> center;
  if (dim == 1) {
    center.push_back(parse_complex(c, "center"));
  } else {
    if (!c.is_array()) config_error("field 'center' must list one [re, im] pair per coordinate");
    for (const auto& entry : c) center.push_back(parse_complex(entry, "center"));
  }
  const json& r = require(j, "radius");
  if (!r.is_number()) config_error("field 'radius' must be a number");
  return make_ball(center, r.get<double>(), dim);
}

/// Weight for a branch whose derivative is (df, d2f).
AnalyticMap parse_weight(const json& branch, const AnalyticMap::ScalarFn& df,
                         const AnalyticMap::ScalarFn& d2f) {
  if (!branch.contains("weight")) return make_constant(1.0);
  const json& w = branch.at("weight");
  if (w.is_string()) {
    const auto s = w.get<std::string>();
    if (s == "derivative") return AnalyticMap::scalar(df, d2f);
    if (s == "-derivative") {
      return AnalyticMap::scalar([df](Complex z) { return -df(z); },
                                 [d2f](Complex z) { return -d2f(z); });
    }
    config_error(fmt::format("unknown weight '{}'", s));
  }
  return make_constant(parse_complex(w, "weight"));
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    config_error(fmt::format("malformed JSON: {}", e.what()));
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  const json& family = require(j, "family");
  if (!family.is_string()) config_error("field 'family' must be a string");
  const auto fam = family.get<std::string>();
  if (fam != "gauss" && fam != "moebius_list" && fam != "affine_list") {
    config_error(fmt::format("unknown family '{}'", fam));
  }
  if (!j.contains("domain")) config_error("missing field 'domain'");
  if (fam != "gauss") {
    const json& params = require(j, "params");
    if (!params.is_array() || params.empty()) config_error("field 'params' must be a non-empty list");
  }

  RunConfig c;
  c.descriptor = json_text;
  c.matrix_size = optional_number<int>(j, "matrix_size", c.matrix_size);
  c.trace_order = optional_number<int>(j, "trace_order", c.trace_order);
  c.word_budget = optional_number<std::uint64_t>(j, "word_budget", c.word_budget);
  c.fixed_point_tol = optional_number<double>(j, "fixed_point_tol", c.fixed_point_tol);
  c.agreement_tol = optional_number<double>(j, "agreement_tol", c.agreement_tol);
  c.contraction_order = optional_number<int>(j, "contraction_order", c.contraction_order);
  c.margin = optional_number<double>(j, "margin", c.margin);
  c.grid = optional_number<int>(j, "grid", c.grid);
  c.split = optional_number<int>(j, "split", c.split);
  if (j.contains("tail")) {
    const json& t = j.at("tail");
    std::string s = t.is_string() ? t.get<std::string>() : "";
    if (s == "auto") {
      c.tail = TailTreatment::Auto;
    } else if (s == "analytic") {
      c.tail = TailTreatment::Analytic;
    } else if (s == "truncate") {
      c.tail = TailTreatment::Truncate;
    } else {
      config_error("field 'tail' must be \"auto\", \"analytic\" or \"truncate\"");
    }
  }
  if (j.contains("id")) {
    if (!j.at("id").is_string()) config_error("field 'id' must be a string");
    c.system_id = j.at("id").get<std::string>();
  } else if (fam == "gauss") {
    c.system_id = fmt::format("gauss-{}", optional_number<int>(j, "i_max", 200));
  } else {
    c.system_id = fmt::format("{}-{}", fam, j.at("params").size());
  }
  return c;
}

MapWeightSystem build_system(const RunConfig& config) {
  json j = json::parse(config.descriptor);
  const auto fam = j.at("family").get<std::string>();
  BallDomain domain = parse_domain(require(j, "domain"));
  if (fam == "gauss") {
    MapWeightSystem sys = make_gauss_system(optional_number<int>(j, "i_max", 200), domain);
    sys.id = config.system_id;
    return sys;
  }
  if (domain.dim != 1) config_error(fmt::format("family '{}' is one-dimensional", fam));
  std::vector<AnalyticMap> branches, weights;
  for (const auto& p : j.at("params")) {
    if (!p.is_object()) config_error("each entry of 'params' must be an object");
    if (fam == "affine_list") {
      Complex a = parse_complex(require(p, "a"), "a");
      Complex b = parse_complex(require(p, "b"), "b");
      branches.push_back(make_affine(a, b));
      weights.push_back(parse_weight(p, [a](Complex) { return a; },
                                     [](Complex) { return Complex(0.0); }));
    } else {
      Complex a = parse_complex(require(p, "a"), "a");
      Complex b = parse_complex(require(p, "b"), "b");
      Complex c = parse_complex(require(p, "c"), "c");
      Complex e = parse_complex(require(p, "e"), "e");
      branches.push_back(make_moebius(a, b, c, e));
      const Complex det = a * e - b * c;
      weights.push_back(parse_weight(
          p, [=](Complex z) { Complex q = c * z + e; return det / (q * q); },
          [=](Complex z) { Complex q = c * z + e; return -2.0 * c * det / (q * q * q); }));
    }
  }
  return make_system(config.system_id, domain, std::move(branches), std::move(weights));
}

}  // namespace ruelle
