#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "phdim/common.hpp"
#include "phdim/estimate.hpp"
#include "phdim/filtration.hpp"
#include "phdim/metric.hpp"
#include "phdim/persistence.hpp"

namespace phdim {

using Json = nlohmann::json;

// null encodes an infinite death.
inline Json interval_to_json(const Interval& iv) {
  Json j;
  j["dim"] = iv.degree;
  j["birth"] = iv.birth;
  j["death"] = iv.finite() ? Json(iv.death) : Json(nullptr);
  return j;
}

inline Interval interval_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("birth") || !j.contains("death")) {
    throw InvalidArgument("barcode JSON: interval needs dim, birth and death");
  }
  Interval iv;
  iv.degree = j.at("dim").get<int>();
  iv.birth = j.at("birth").get<double>();
  iv.death = j.at("death").is_null() ? kInfinity : j.at("death").get<double>();
  require(iv.degree >= 0 && iv.death >= iv.birth, "barcode JSON: invalid interval");
  return iv;
}

inline Json intervals_to_json(const std::vector<Interval>& intervals) {
  Json arr = Json::array();
  for (const auto& iv : intervals) arr.push_back(interval_to_json(iv));
  return arr;
}

// Artifact form: the interval array wrapped with its metadata.
inline Json barcode_to_json(const Barcode& b) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["reduced"] = b.reduced();
  j["source"] = std::string(complex_name(b.source()));
  j["intervals"] = intervals_to_json(b.intervals());
  return j;
}

// Accepts the artifact form or a bare interval array.
inline Barcode barcode_from_json(const Json& j) {
  const Json* arr = &j;
  bool reduced = true;
  ComplexKind source = ComplexKind::kCustom;
  if (j.is_object()) {
    if (!j.contains("intervals")) throw InvalidArgument("barcode JSON: missing intervals");
    arr = &j.at("intervals");
    reduced = j.value("reduced", true);
    if (j.contains("source")) source = parse_complex(j.at("source").get<std::string>());
  }
  if (!arr->is_array()) throw InvalidArgument("barcode JSON: intervals must be an array");
  std::vector<Interval> out;
  for (const auto& e : *arr) out.push_back(interval_from_json(e));
  return Barcode(std::move(out), reduced, source);
}

inline void write_barcode_csv(std::ostream& out, const Barcode& b) {
  out << "dim,birth,death\n";
  for (const auto& iv : b.intervals()) {
    out << iv.degree << ',' << format_double(iv.birth) << ',' << format_double(iv.death) << '\n';
  }
}

inline Barcode read_barcode_csv(std::istream& in) {
  std::string line;
  std::vector<Interval> out;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line.rfind("dim", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c)) {
      throw InvalidArgument("barcode CSV: expected dim,birth,death");
    }
    Interval iv{static_cast<int>(parse_double(a)), parse_double(b), parse_double(c)};
    require(iv.degree >= 0 && iv.death >= iv.birth, "barcode CSV: invalid interval");
    out.push_back(iv);
  }
  return Barcode(std::move(out), true, ComplexKind::kCustom);
}

inline Json estimate_to_json(const DimensionEstimate& e) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["method"] = std::string(method_name(e.method));
  if (e.degree >= 0) j["degree"] = e.degree;
  j["estimate"] = e.estimate;
  j["window"] = {e.window_lo, e.window_hi};
  j["slope"] = e.slope;
  j["slope_stderr"] = e.slope_stderr;
  j["degenerate"] = e.degenerate;
  if (!e.note.empty()) j["note"] = e.note;
  Json curve = Json::array();
  for (const auto& r : e.exponent_curve) {
    curve.push_back({{"alpha", r.alpha},
                     {"slope", r.slope},
                     {"stderr", r.slope_stderr},
                     {"implied_dimension", std::isfinite(r.implied_dimension) ? Json(r.implied_dimension) : Json(nullptr)},
                     {"in_window", r.in_window}});
  }
  j["exponent_curve"] = curve;
  return j;
}

// (alpha, slope, stderr) per alpha for the power-law methods.
inline void write_exponent_csv(std::ostream& out, const DimensionEstimate& e) {
  out << "alpha,slope,stderr,implied_dimension,in_window\n";
  for (const auto& r : e.exponent_curve) {
    out << format_double(r.alpha) << ',' << format_double(r.slope) << ',' << format_double(r.slope_stderr) << ','
        << format_double(r.implied_dimension) << ',' << (r.in_window ? 1 : 0) << '\n';
  }
}

inline void write_diagnostics_csv(std::ostream& out, const DimensionEstimate& e) {
  out << "alpha,scale,statistic,fitted\n";
  for (const auto& r : e.diagnostics) {
    out << (std::isnan(r.alpha) ? std::string() : format_double(r.alpha)) << ',' << format_double(r.scale) << ','
        << format_double(r.statistic) << ',' << format_double(r.fitted) << '\n';
  }
}

// Writes via a sibling temporary file and rename, so readers never see a
// partial artifact.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw InvalidArgument("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace phdim
