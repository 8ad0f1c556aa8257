#pragma once

// JSON domain descriptions, certificate / model reports and CSV rows.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwcert/certlib.hpp"
#include "pwcert/errors.hpp"
#include "pwcert/geometry.hpp"
#include "pwcert/onedim.hpp"
#include "pwcert/oscint.hpp"

namespace pwcert::io {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

namespace detail {

inline double number(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string("domain: missing field '") + key + "'");
  if (!j.at(key).is_number()) throw InvalidInput(std::string("domain: field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

inline double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw InvalidInput(std::string("domain: field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

inline Vec2 point(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidInput(std::string("domain: ") + what + " must be a [x, y] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Vec2 point_or(const json& j, const char* key, Vec2 fallback) {
  if (!j.contains(key)) return fallback;
  return point(j.at(key), key);
}

inline std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string("domain: ") + what + " must be an array of numbers");
  std::vector<double> out;
  for (const json& v : j) {
    if (!v.is_number()) throw InvalidInput(std::string("domain: ") + what + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

/// {"type": "polygon", "vertices": [[x, y], ...]}
/// {"type": "ellipse", "center": [x, y], "semi_axes": [A, B], "rotation": r}
/// {"type": "reuleaux", "vertices": N, "width": w, "center": [x, y], "rotation": r}
/// {"type": "support", "values": [h_0, ..., h_{N-1}]}
/// {"type": "support", "cos": [a_0, a_1, ...], "sin": [b_1, b_2, ...]}
inline Domain domain_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("domain: expected a JSON object");
  if (!j.contains("type") || !j.at("type").is_string()) throw InvalidInput("domain: missing string field 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "polygon") {
    if (!j.contains("vertices") || !j.at("vertices").is_array()) throw InvalidInput("domain: polygon needs 'vertices'");
    std::vector<Vec2> verts;
    for (const json& v : j.at("vertices")) verts.push_back(detail::point(v, "vertex"));
    return Polygon(std::move(verts));
  }
  if (type == "ellipse") {
    if (!j.contains("semi_axes")) throw InvalidInput("domain: ellipse needs 'semi_axes'");
    const Vec2 axes = detail::point(j.at("semi_axes"), "semi_axes");
    return Ellipse(detail::point_or(j, "center", {}), axes.x, axes.y, detail::number_or(j, "rotation", 0.0));
  }
  if (type == "reuleaux") {
    const double count = detail::number_or(j, "vertices", 3.0);
    if (count != std::floor(count)) throw InvalidInput("domain: reuleaux 'vertices' must be an integer");
    return Reuleaux(static_cast<int>(count), detail::number(j, "width"), detail::point_or(j, "center", {}),
                    detail::number_or(j, "rotation", 0.0));
  }
  if (type == "support") {
    if (j.contains("values")) return SupportBody::from_samples(detail::numbers(j.at("values"), "values"));
    if (j.contains("cos")) {
      std::vector<double> sin_coeffs;
      if (j.contains("sin")) sin_coeffs = detail::numbers(j.at("sin"), "sin");
      return SupportBody::from_coefficients(detail::numbers(j.at("cos"), "cos"), std::move(sin_coeffs));
    }
    throw InvalidInput("domain: support body needs 'values' or 'cos'/'sin'");
  }
  throw InvalidInput("domain: unknown type '" + type + "'");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
  }
}

inline Domain read_domain(const std::string& path) { return domain_from_json(read_json_file(path)); }

inline json domain_to_json(const Domain& d) {
  return d.visit([](const auto& s) -> json {
    using T = std::decay_t<decltype(s)>;
    json j;
    if constexpr (std::is_same_v<T, Polygon>) {
      j["type"] = "polygon";
      json verts = json::array();
      for (const Vec2& v : s.vertices()) verts.push_back({v.x, v.y});
      j["vertices"] = verts;
    } else if constexpr (std::is_same_v<T, Ellipse>) {
      j["type"] = "ellipse";
      j["center"] = {s.center().x, s.center().y};
      j["semi_axes"] = {s.semi_a(), s.semi_b()};
      j["rotation"] = s.rotation();
    } else if constexpr (std::is_same_v<T, Reuleaux>) {
      j["type"] = "reuleaux";
      j["vertices"] = s.vertex_count();
      j["width"] = s.constant_width();
      j["center"] = {s.center().x, s.center().y};
      j["rotation"] = s.rotation();
    } else {
      j["type"] = "support";
      if (!s.samples().empty()) {
        j["values"] = s.samples();
      } else {
        j["cos"] = s.cos_coeffs();
        j["sin"] = std::vector<double>(s.sin_coeffs().begin() + 1, s.sin_coeffs().end());
      }
    }
    return j;
  });
}

/// Unbounded endpoints are written as null.
inline json bound(double x) { return std::isinf(x) ? json(nullptr) : json(x); }

inline json band_to_json(const Band& b) {
  return {{"lo", b.lo},
          {"hi", bound(b.hi)},
          {"lo_closed", b.lo_closed},
          {"hi_closed", b.hi_closed},
          {"source", b.source},
          {"punctures", b.punctures}};
}

inline json certificate_to_json(const Certificate& c) {
  json j;
  j["eta"] = c.eta.angle();
  j["a"] = c.material.a();
  j["q"] = c.material.q();
  j["n"] = c.material.n();
  j["regime"] = c.material.regime();
  j["convexity"] = std::string(to_string(c.convexity));
  j["k_max"] = c.k_max;
  json bands = json::array();
  for (const Band& b : c.bands) bands.push_back(band_to_json(b));
  j["bands"] = bands;
  json parts = json::array();
  for (const Band& b : c.components) parts.push_back(band_to_json(b));
  j["components"] = parts;
  j["h0"] = c.h0 ? json(*c.h0) : json(nullptr);
  j["h1"] = c.h1 ? json(*c.h1) : json(nullptr);
  j["argmin"] = c.argmin ? json(c.argmin->angle()) : json(nullptr);
  j["argmax"] = c.argmax ? json(c.argmax->angle()) : json(nullptr);
  if (c.exceptional) {
    j["exceptional"] = {{"r0", c.exceptional->r0},
                        {"lambda_plus", c.exceptional->lambda_plus.angle()},
                        {"lambda_minus", c.exceptional->lambda_minus.angle()}};
  } else {
    j["exceptional"] = nullptr;
  }
  j["tail_index"] = c.tail_index ? json(*c.tail_index) : json(nullptr);
  j["full_spectrum"] = c.full_spectrum;
  json gaps = json::array();
  for (const Gap& g : c.coverage_gaps) gaps.push_back({{"lo", g.lo}, {"hi", bound(g.hi)}});
  j["coverage_gaps"] = gaps;
  return j;
}

/// Checks the certificate report layout; returns an empty string when valid.
inline std::string validate_certificate_json(const json& j) {
  const char* numeric[] = {"eta", "a", "q", "n", "k_max"};
  for (const char* key : numeric) {
    if (!j.contains(key) || !j.at(key).is_number()) return std::string("missing number '") + key + "'";
  }
  if (!j.contains("full_spectrum") || !j.at("full_spectrum").is_boolean()) return "missing boolean 'full_spectrum'";
  if (!j.contains("bands") || !j.at("bands").is_array()) return "missing array 'bands'";
  double prev_hi = -1.0;
  for (const json& b : j.at("bands")) {
    if (!b.contains("lo") || !b.at("lo").is_number()) return "band without numeric 'lo'";
    if (!b.contains("hi") || !(b.at("hi").is_number() || b.at("hi").is_null())) return "band 'hi' must be number or null";
    if (!b.contains("lo_closed") || !b.at("lo_closed").is_boolean()) return "band without 'lo_closed'";
    if (!b.contains("hi_closed") || !b.at("hi_closed").is_boolean()) return "band without 'hi_closed'";
    if (!b.contains("source") || !b.at("source").is_string()) return "band without 'source'";
    if (!b.contains("punctures") || !b.at("punctures").is_array()) return "band without 'punctures'";
    const double lo = b.at("lo").get<double>();
    if (lo < prev_hi) return "bands overlap or are unsorted";
    prev_hi = b.at("hi").is_null() ? INFINITY : b.at("hi").get<double>();
  }
  for (const char* key : {"h0", "h1", "argmin", "argmax"}) {
    if (!j.contains(key) || !(j.at(key).is_number() || j.at(key).is_null())) {
      return std::string("'") + key + "' must be number or null";
    }
  }
  if (!j.contains("coverage_gaps") || !j.at("coverage_gaps").is_array()) return "missing array 'coverage_gaps'";
  return {};
}

inline json slab_to_json(const SlabModel& model, const SlabVerdict& v, const SlabScattering& s) {
  return {{"thickness", model.thickness()},
          {"n", model.n()},
          {"k", model.k()},
          {"nonscattering", v.nonscattering},
          {"matched_case", std::string(to_string(v.matched_case))},
          {"m", v.m >= 0 ? json(v.m) : json(nullptr)},
          {"l", v.l >= 0 ? json(v.l) : json(nullptr)},
          {"residuals", {v.residual_sin, v.residual_cos}},
          {"scattered_magnitude", s.magnitude()}};
}

/// 64-bit FNV-1a of a string, printed as 16 hex digits.
inline std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// CSV

struct VerificationRow {
  std::string domain_id;
  std::string method;
  cplx I = 0.0;
  cplx C = 0.0;
  double est_error = 0.0;
  bool checks_passed = false;
};

inline std::string csv_header() { return "domain_id,method,re_I,im_I,re_C,im_C,est_error,checks_passed"; }

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string to_csv(const VerificationRow& r) {
  std::ostringstream os;
  os << r.domain_id << ',' << r.method << ',' << format_double(r.I.real()) << ',' << format_double(r.I.imag()) << ','
     << format_double(r.C.real()) << ',' << format_double(r.C.imag()) << ',' << format_double(r.est_error) << ','
     << (r.checks_passed ? 1 : 0);
  return os.str();
}

}  // namespace pwcert::io
