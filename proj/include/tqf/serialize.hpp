#pragma once

// JSON encodings of certificates and reports.
//
// Certificate:
//   {"entry_id": str, "m": int, "stripped_m": int, "rule": str,
//    "scale_exponent": int, "four_exponent": int,
//    "witness": {"m","D","A","B","a","h","b"}  (h, b: number, or decimal string past 64 bits),
//    "f": [c1,c2,c3,c23,c13,c12], "U": [9 ints, row-major], "vector": [x,y,z]}
// Report:
//   {"name": str, "N": int, "checked": int, "passed": int, "ok": bool,
//    "mismatches": [{"m": int, "diagnosis": str}], "elapsed_seconds": num}

#include "json.hpp"
#include "tqf/verify.hpp"

namespace tqf {

using nlohmann::json;

inline void to_json(json& j, const TernaryForm& f) { j = json::array({f.c1, f.c2, f.c3, f.c23, f.c13, f.c12}); }

inline void from_json(const json& j, TernaryForm& f) {
  if (!j.is_array() || j.size() != 6) throw parse_error("form must be an array of six integers");
  f = {j[0].get<i64>(), j[1].get<i64>(), j[2].get<i64>(), j[3].get<i64>(), j[4].get<i64>(), j[5].get<i64>()};
}

// 128-bit values go out as numbers when they fit in 64 bits, else as decimal strings.
inline json wide_to_json(i128 v) {
  if (v >= INT64_MIN && v <= INT64_MAX) return static_cast<i64>(v);
  return to_decimal(v);
}

inline i128 wide_from_json(const json& j) {
  if (j.is_string()) return parse_decimal(j.get<std::string>());
  return j.get<i64>();
}

inline void to_json(json& j, const Witness& w) {
  j = json{{"m", w.m}, {"D", w.D}, {"A", w.A}, {"B", w.B}, {"a", w.a}, {"h", wide_to_json(w.h)}, {"b", wide_to_json(w.b)}};
}

inline void from_json(const json& j, Witness& w) {
  w = {j.at("m").get<i64>(), j.at("D").get<i64>(), j.at("A").get<i64>(), j.at("B").get<i64>(),
       j.at("a").get<i64>(), wide_from_json(j.at("h")), wide_from_json(j.at("b"))};
}

inline void to_json(json& j, const Certificate& c) {
  json u = json::array();
  for (const auto& row : c.equivalence.U)
    for (i64 x : row) u.push_back(x);
  j = json{{"entry_id", c.entry_id},
           {"m", c.m},
           {"stripped_m", c.stripped_m},
           {"rule", c.rule_label},
           {"scale_exponent", c.scale_exponent},
           {"four_exponent", c.four_exponent},
           {"witness", c.witness},
           {"f", c.f},
           {"U", u},
           {"vector", json::array({c.vector[0], c.vector[1], c.vector[2]})}};
}

inline void from_json(const json& j, Certificate& c) {
  c.entry_id = j.at("entry_id").get<std::string>();
  c.m = j.at("m").get<i64>();
  c.stripped_m = j.at("stripped_m").get<i64>();
  c.rule_label = j.value("rule", std::string{});
  c.scale_exponent = j.at("scale_exponent").get<int>();
  c.four_exponent = j.value("four_exponent", 0);
  c.witness = j.at("witness").get<Witness>();
  c.f = j.at("f").get<TernaryForm>();
  const json& u = j.at("U");
  if (!u.is_array() || u.size() != 9) throw parse_error("U must hold nine integers");
  for (int i = 0; i < 9; ++i) c.equivalence.U[i / 3][i % 3] = u[i].get<i64>();
  const json& v = j.at("vector");
  if (!v.is_array() || v.size() != 3) throw parse_error("vector must hold three integers");
  for (int i = 0; i < 3; ++i) c.vector[i] = v[i].get<i64>();
}

inline void to_json(json& j, const Mismatch& m) { j = json{{"m", m.m}, {"diagnosis", m.diagnosis}}; }

inline void from_json(const json& j, Mismatch& m) {
  m.m = j.at("m").get<i64>();
  m.diagnosis = j.at("diagnosis").get<std::string>();
}

inline void to_json(json& j, const Report& r) {
  j = json{{"name", r.name},         {"N", r.N},   {"checked", r.checked},
           {"passed", r.passed},     {"ok", r.ok()}, {"mismatches", r.mismatches},
           {"elapsed_seconds", r.elapsed_seconds}};
}

inline void from_json(const json& j, Report& r) {
  r.name = j.at("name").get<std::string>();
  r.N = j.at("N").get<i64>();
  r.checked = j.at("checked").get<i64>();
  r.passed = j.at("passed").get<i64>();
  r.mismatches = j.at("mismatches").get<std::vector<Mismatch>>();
  r.elapsed_seconds = j.value("elapsed_seconds", 0.0);
  if (r.passed > r.checked || r.mismatches.empty() != (r.passed == r.checked))
    throw parse_error("report counters are inconsistent");
}

/// Parse JSON text, mapping library errors to parse_error.
template <class T>
T parse_json(const std::string& text) {
  try {
    return json::parse(text).get<T>();
  } catch (const json::exception& ex) {
    throw parse_error(std::string("bad JSON: ") + ex.what());
  }
}

/// Plain-text rendering shared by the CLI.
inline std::string format_report(const Report& r) {
  std::string out = r.name + " N=" + std::to_string(r.N) + ": " + std::to_string(r.passed) + "/" +
                    std::to_string(r.checked) + (r.ok() ? " passed" : " FAILED") + "\n";
  for (const auto& m : r.mismatches) out += "  m=" + std::to_string(m.m) + ": " + m.diagnosis + "\n";
  return out;
}

inline std::string format_certificate(const Certificate& c) {
  const Witness& w = c.witness;
  std::string out;
  out += "entry " + c.entry_id + ", m = " + std::to_string(c.m) + "\n";
  out += "rule: " + c.rule_label + " (stripped m = " + std::to_string(c.stripped_m) + ")\n";
  out += "witness: A=" + std::to_string(w.A) + " B=" + std::to_string(w.B) + " a=" + std::to_string(w.a) +
         " h=" + to_decimal(w.h) + " b=" + to_decimal(w.b) + "\n";
  out += "f = " + to_polynomial(c.f) + "  [" + format_form(c.f) + "]\n";
  out += "U =";
  for (const auto& row : c.equivalence.U)
    out += " [" + std::to_string(row[0]) + "," + std::to_string(row[1]) + "," + std::to_string(row[2]) + "]";
  out += "\nvector = (" + std::to_string(c.vector[0]) + "," + std::to_string(c.vector[1]) + "," +
         std::to_string(c.vector[2]) + ")\n";
  return out;
}

}  // namespace tqf
