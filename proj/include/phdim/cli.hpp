#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "phdim/common.hpp"
#include "phdim/dimension.hpp"
#include "phdim/extremal.hpp"
#include "phdim/filtration.hpp"
#include "phdim/generators.hpp"
#include "phdim/io.hpp"
#include "phdim/metric.hpp"
#include "phdim/mst.hpp"
#include "phdim/persistence.hpp"
#include "phdim/verify.hpp"

namespace phdim {

enum class Command { kGenerate, kBarcode, kDimension, kMst, kArcs, kBipartite, kStable, kXi, kTpVerify, kVerify };

inline constexpr Command kAllCommands[] = {Command::kGenerate,  Command::kBarcode, Command::kDimension,
                                           Command::kMst,       Command::kArcs,    Command::kBipartite,
                                           Command::kStable,    Command::kXi,      Command::kTpVerify,
                                           Command::kVerify};

inline std::string_view command_name(Command c) {
  switch (c) {
    case Command::kGenerate: return "generate";
    case Command::kBarcode: return "barcode";
    case Command::kDimension: return "dimension";
    case Command::kMst: return "mst";
    case Command::kArcs: return "arcs";
    case Command::kBipartite: return "bipartite";
    case Command::kStable: return "stable";
    case Command::kXi: return "xi";
    case Command::kTpVerify: return "tp-verify";
    case Command::kVerify: return "verify";
  }
  return "?";
}

inline Command parse_command(std::string_view s) {
  for (Command c : kAllCommands) {
    if (command_name(c) == s) return c;
  }
  throw InvalidArgument("unknown command '" + std::string(s) + "'");
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitBudget = 3;

// One experiment. Empty lists and unset optionals select the command's
// defaults. The single seed feeds the generator directly; every other
// random component derives its stream from it by a fixed label.
struct ExperimentConfig {
  Command command = Command::kGenerate;
  std::uint64_t seed = 0;

  Family family = Family::kSierpinski;
  std::size_t n = 1000;
  std::size_t m = 2;
  int levels = 12;
  std::size_t lattice_width = 4;
  double density = 1.0;
  int level = 1;

  std::string input;          // CSV point cloud (or metric) replacing the generator
  bool input_is_metric = false;

  std::optional<ComplexKind> complex;
  int degree = 1;
  DimensionMethod method = DimensionMethod::kBox;
  bool packing = false;
  std::vector<std::size_t> sizes;
  std::vector<double> scales;
  std::vector<double> alpha_grid;
  std::size_t budget = kDefaultSimplexBudget;

  double tp_n = 100.0;
  double tp_c = 3.0;
  int tp_steps = 32;

  std::size_t xi_n = 3;
  double threshold = std::sqrt(2.0) + 1.0;
  std::size_t restarts = 64;
  std::size_t trials = 100;

  std::string filter;

  std::string output;       // primary artifact; stdout when empty
  std::string table;        // CSV companion
  std::string diagnostics;  // full diagnostics CSV (dimension)

  bool operator==(const ExperimentConfig&) const = default;

  GeneratorSpec generator() const {
    GeneratorSpec g;
    g.family = family;
    g.n = n;
    g.seed = seed;
    g.m = m;
    g.levels = levels;
    g.lattice_width = lattice_width;
    g.density = density;
    g.level = level;
    return g;
  }
};

inline Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["command"] = std::string(command_name(c.command));
  j["seed"] = c.seed;
  j["generator"] = {{"family", std::string(family_name(c.family))},
                    {"n", c.n},
                    {"m", c.m},
                    {"levels", c.levels},
                    {"lattice_width", c.lattice_width},
                    {"density", c.density},
                    {"level", c.level}};
  j["input"] = {{"path", c.input}, {"metric", c.input_is_metric}};
  j["complex"] = c.complex ? Json(std::string(complex_name(*c.complex))) : Json(nullptr);
  j["degree"] = c.degree;
  j["method"] = std::string(method_name(c.method));
  j["packing"] = c.packing;
  j["sizes"] = c.sizes;
  j["scales"] = c.scales;
  j["alpha_grid"] = c.alpha_grid;
  j["budget"] = c.budget;
  j["tp"] = {{"n", c.tp_n}, {"c", c.tp_c}, {"steps", c.tp_steps}};
  j["xi"] = {{"n", c.xi_n}, {"threshold", c.threshold}, {"restarts", c.restarts}};
  j["trials"] = c.trials;
  j["filter"] = c.filter;
  j["outputs"] = {{"output", c.output}, {"table", c.table}, {"diagnostics", c.diagnostics}};
  return j;
}

namespace detail {

inline void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw InvalidArgument("config: " + where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw InvalidArgument("config: unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read_key(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

}  // namespace detail

// Strict schema: unknown keys and ill-typed values are rejected; missing
// keys keep their defaults.
inline ExperimentConfig config_from_json(const Json& j) {
  detail::reject_unknown_keys(j,
                              {"format_version", "command", "seed", "generator", "input", "complex", "degree",
                               "method", "packing", "sizes", "scales", "alpha_grid", "budget", "tp", "xi", "trials",
                               "filter", "outputs"},
                              "config");
  ExperimentConfig c;
  int version = kFormatVersion;
  detail::read_key(j, "format_version", version);
  if (version != kFormatVersion) throw InvalidArgument("config: unsupported format_version " + std::to_string(version));
  std::string s;
  if (j.contains("command")) {
    detail::read_key(j, "command", s);
    c.command = parse_command(s);
  }
  detail::read_key(j, "seed", c.seed);
  if (j.contains("generator")) {
    const Json& g = j.at("generator");
    detail::reject_unknown_keys(g, {"family", "n", "m", "levels", "lattice_width", "density", "level"}, "generator");
    if (g.contains("family")) {
      detail::read_key(g, "family", s);
      c.family = parse_family(s);
    }
    detail::read_key(g, "n", c.n);
    detail::read_key(g, "m", c.m);
    detail::read_key(g, "levels", c.levels);
    detail::read_key(g, "lattice_width", c.lattice_width);
    detail::read_key(g, "density", c.density);
    detail::read_key(g, "level", c.level);
  }
  if (j.contains("input")) {
    const Json& in = j.at("input");
    detail::reject_unknown_keys(in, {"path", "metric"}, "input");
    detail::read_key(in, "path", c.input);
    detail::read_key(in, "metric", c.input_is_metric);
  }
  if (j.contains("complex") && !j.at("complex").is_null()) {
    detail::read_key(j, "complex", s);
    c.complex = parse_complex(s);
  }
  detail::read_key(j, "degree", c.degree);
  if (j.contains("method")) {
    detail::read_key(j, "method", s);
    c.method = parse_method(s);
  }
  detail::read_key(j, "packing", c.packing);
  detail::read_key(j, "sizes", c.sizes);
  detail::read_key(j, "scales", c.scales);
  detail::read_key(j, "alpha_grid", c.alpha_grid);
  detail::read_key(j, "budget", c.budget);
  if (j.contains("tp")) {
    const Json& t = j.at("tp");
    detail::reject_unknown_keys(t, {"n", "c", "steps"}, "tp");
    detail::read_key(t, "n", c.tp_n);
    detail::read_key(t, "c", c.tp_c);
    detail::read_key(t, "steps", c.tp_steps);
  }
  if (j.contains("xi")) {
    const Json& x = j.at("xi");
    detail::reject_unknown_keys(x, {"n", "threshold", "restarts"}, "xi");
    detail::read_key(x, "n", c.xi_n);
    detail::read_key(x, "threshold", c.threshold);
    detail::read_key(x, "restarts", c.restarts);
  }
  detail::read_key(j, "trials", c.trials);
  detail::read_key(j, "filter", c.filter);
  if (j.contains("outputs")) {
    const Json& o = j.at("outputs");
    detail::reject_unknown_keys(o, {"output", "table", "diagnostics"}, "outputs");
    detail::read_key(o, "output", c.output);
    detail::read_key(o, "table", c.table);
    detail::read_key(o, "diagnostics", c.diagnostics);
  }
  return c;
}

inline ExperimentConfig parse_config(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  return config_from_json(j);
}

// Object keys come out sorted, so the dump is canonical.
inline std::string canonical_config(const ExperimentConfig& c) { return config_to_json(c).dump(2) + "\n"; }

// Command defaults.
inline std::vector<std::size_t> resolved_sizes(const ExperimentConfig& c) {
  if (!c.sizes.empty()) return c.sizes;
  if (c.command == Command::kArcs) return {50, 100, 200, 400};
  return {500, 1000, 2000, 4000};
}

inline std::vector<double> resolved_scales(const ExperimentConfig& c) {
  return c.scales.empty() ? dyadic_scales(7, 3) : c.scales;
}

inline std::vector<double> resolved_alpha_grid(const ExperimentConfig& c) {
  if (!c.alpha_grid.empty()) return c.alpha_grid;
  return c.method == DimensionMethod::kMst || c.command == Command::kMst ? default_alpha_grid()
                                                                          : default_ph_alpha_grid();
}

inline ComplexKind resolved_complex(const ExperimentConfig& c) {
  if (c.complex) return *c.complex;
  return c.command == Command::kBarcode ? ComplexKind::kRips : ComplexKind::kAlpha2d;
}

namespace detail {

inline bool uses_cloud(const ExperimentConfig& c) {
  switch (c.command) {
    case Command::kGenerate:
    case Command::kBarcode: return true;
    case Command::kDimension: return c.method == DimensionMethod::kBox || c.method == DimensionMethod::kPhComplexity;
    case Command::kMst:
    case Command::kStable: return true;
    default: return false;
  }
}

}  // namespace detail

// Input checks that need no computation; throws InvalidArgument.
inline void validate_config(const ExperimentConfig& c) {
  require(c.degree >= 0 && c.degree <= 8, "degree must be in [0, 8]");
  require(c.budget > 0, "budget must be positive");
  if (!c.input.empty()) {
    require(std::filesystem::is_regular_file(c.input), "input file not found: " + c.input);
    require(!c.input_is_metric || c.command == Command::kBarcode || c.command == Command::kGenerate,
            "metric input is only accepted by generate and barcode");
  } else if (detail::uses_cloud(c)) {
    require(c.n >= 1, "n must be >= 1");
    require(c.m >= 1, "m must be >= 1");
    require(c.levels >= 1 && c.levels <= 52, "levels must be in [1, 52]");
    require(c.density >= 0.0 && c.density <= 1.0, "density must be in [0, 1]");
    require(c.level >= 0 && c.level <= kMaxBipartiteLevel, "level must be in [0, 12]");
  }
  for (std::size_t i = 1; i < c.sizes.size(); ++i) require(c.sizes[i] > c.sizes[i - 1], "sizes must be increasing");
  for (double s : c.scales) require(std::isfinite(s) && s > 0.0, "scales must be positive");
  for (double a : c.alpha_grid) require(std::isfinite(a) && a > 0.0, "alpha grid values must be positive");
  switch (c.command) {
    case Command::kBarcode: {
      const ComplexKind k = resolved_complex(c);
      require(k != ComplexKind::kCustom, "barcode: complex must be rips, cech or alpha2d");
      const bool metric = c.input.empty() ? c.family == Family::kBipartite : c.input_is_metric;
      require(!metric || k == ComplexKind::kRips, "barcode: metric spaces admit only the rips complex");
      require(k != ComplexKind::kAlpha2d || c.degree <= 1, "barcode: alpha2d supports degrees 0 and 1");
      break;
    }
    case Command::kDimension:
      if (c.method == DimensionMethod::kPh || c.method == DimensionMethod::kMst) {
        require(c.input.empty(), "dimension: ph and mst methods sample the generator at each size");
        require(c.family != Family::kBipartite, "dimension: family must be a point cloud");
        require(resolved_sizes(c).size() >= 4, "dimension: at least 4 sizes are required");
      }
      if (c.method == DimensionMethod::kBox) require(resolved_scales(c).size() >= 3, "dimension: at least 3 scales");
      break;
    case Command::kMst:
    case Command::kGenerate:
      if (c.command == Command::kMst) require(c.family != Family::kBipartite || !c.input.empty(), "mst: family must be a point cloud");
      break;
    case Command::kArcs: require(resolved_sizes(c).size() >= 2, "arcs: at least two sizes are required"); break;
    case Command::kBipartite: require(c.level >= 0 && c.level <= 6, "bipartite: level must be in [0, 6]"); break;
    case Command::kStable:
      require(!c.input.empty() || c.family == Family::kLatticeSubset, "stable: needs --input or family lattice_subset");
      break;
    case Command::kXi: require(c.xi_n >= 1 && c.xi_n <= 12, "xi: N must be in [1, 12]"); break;
    case Command::kTpVerify:
      require(c.tp_c > 0.0 && c.tp_n >= c.tp_c * c.tp_c, "tp-verify: need c > 0 and N >= c^2");
      require(c.tp_steps >= 8 && c.tp_steps <= 400, "tp-verify: steps must be in [8, 400]");
      break;
    case Command::kVerify: break;
  }
}

namespace detail {

inline PointCloud load_cloud(const ExperimentConfig& c) {
  if (c.input.empty()) return generate_cloud(c.generator());
  std::ifstream in(c.input);
  if (!in) throw InvalidArgument("cannot read " + c.input);
  return read_point_cloud_csv(in);
}

inline FiniteMetricSpace load_metric(const ExperimentConfig& c) {
  if (c.input.empty()) return generate_metric(c.generator());
  std::ifstream in(c.input);
  if (!in) throw InvalidArgument("cannot read " + c.input);
  if (c.input_is_metric) {
    FiniteMetricSpace fms = read_metric_csv(in);
    const auto report = validate_metric(fms, true);
    if (!report.ok()) throw InvalidArgument("input metric: " + report.violations.front().describe());
    return fms;
  }
  return distance_matrix(read_point_cloud_csv(in));
}

inline bool metric_input(const ExperimentConfig& c) {
  return c.input.empty() ? c.family == Family::kBipartite : c.input_is_metric;
}

struct Artifacts {
  std::string primary;  // written to `output` or stdout
  std::string table;
  std::string diagnostics;
  std::string sidecar;  // generate only: <output>.json
  int exit_code = kExitOk;
};

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Artifacts run_generate(const ExperimentConfig& c) {
  Artifacts a;
  std::ostringstream csv;
  Json side;
  side["format_version"] = kFormatVersion;
  side["config"] = config_to_json(c);
  if (metric_input(c)) {
    const FiniteMetricSpace fms = load_metric(c);
    write_metric_csv(csv, fms);
    side["kind"] = "metric";
    side["points"] = fms.size();
  } else {
    const PointCloud pc = load_cloud(c);
    write_point_cloud_csv(csv, pc);
    side["kind"] = "point_cloud";
    side["points"] = pc.size();
    side["dim"] = pc.dim();
  }
  a.primary = csv.str();
  a.sidecar = dump(side);
  return a;
}

inline Artifacts run_barcode(const ExperimentConfig& c) {
  const ComplexKind k = resolved_complex(c);
  Barcode bc;
  if (metric_input(c)) {
    FiltrationParams fp;
    fp.max_dim = c.degree + 1;
    fp.budget = c.budget;
    bc = persistent_homology(rips_filtration(load_metric(c), fp));
  } else {
    bc = point_cloud_barcode(load_cloud(c), c.degree, {k, c.budget});
  }
  Artifacts a;
  Json j = barcode_to_json(bc);
  j["degree"] = c.degree;
  Json counts = Json::object();
  for (int d = 0; d <= c.degree; ++d) counts[std::to_string(d)] = bc.count(d);
  j["counts"] = counts;
  a.primary = dump(j);
  std::ostringstream csv;
  write_barcode_csv(csv, bc);
  a.table = csv.str();
  return a;
}

inline Artifacts run_dimension(const ExperimentConfig& c) {
  DimensionEstimate est;
  Json extra;
  switch (c.method) {
    case DimensionMethod::kBox: {
      const auto scales = resolved_scales(c);
      const PointCloud pc = load_cloud(c);
      est = estimate_box_dimension(pc, scales, c.packing);
      extra["scales"] = scales;
      extra["points"] = pc.size();
      extra["packing"] = c.packing;
      break;
    }
    case DimensionMethod::kPh: {
      const auto sizes = resolved_sizes(c);
      est = estimate_ph_dimension(c.generator(), c.degree, {resolved_complex(c), c.budget}, sizes,
                                  resolved_alpha_grid(c));
      extra["sizes"] = sizes;
      extra["complex"] = std::string(complex_name(resolved_complex(c)));
      break;
    }
    case DimensionMethod::kMst: {
      const auto sizes = resolved_sizes(c);
      est = estimate_mst_dimension(c.generator(), sizes, resolved_alpha_grid(c));
      extra["sizes"] = sizes;
      break;
    }
    case DimensionMethod::kPhComplexity: {
      if (c.input.empty()) {
        est = estimate_ph_complexity(c.generator(), c.degree, {resolved_complex(c), c.budget});
      } else {
        const Barcode bc = point_cloud_barcode(load_cloud(c), c.degree, {resolved_complex(c), c.budget});
        const TailExponents t = tail_exponent_pair(bc.finite_lengths(c.degree));
        est.method = DimensionMethod::kPhComplexity;
        est.degree = c.degree;
        est.estimate = t.count_exponent;
        est.slope = t.sum_exponent;
        est.degenerate = t.degenerate;
        est.diagnostics = t.diagnostics;
        est.note = "sum exponent " + format_double(t.sum_exponent);
      }
      extra["points"] = c.input.empty() ? c.n : 0;
      extra["complex"] = std::string(complex_name(resolved_complex(c)));
      break;
    }
  }
  Json j = estimate_to_json(est);
  for (const auto& [key, value] : extra.items()) j[key] = value;
  j["seed"] = c.seed;
  j["family"] = c.input.empty() ? Json(std::string(family_name(c.family))) : Json(nullptr);
  Artifacts a;
  a.primary = dump(j);
  std::ostringstream table, diag;
  if (c.method == DimensionMethod::kPh || c.method == DimensionMethod::kMst) {
    write_exponent_csv(table, est);
  } else {
    write_diagnostics_csv(table, est);
  }
  write_diagnostics_csv(diag, est);
  a.table = table.str();
  a.diagnostics = diag.str();
  return a;
}

inline constexpr std::size_t kMstCorrespondenceMaxPoints = 2000;

inline Artifacts run_mst(const ExperimentConfig& c) {
  const PointCloud pc = load_cloud(c);
  const SpanningTree tree = minimum_spanning_tree(pc);
  Json j;
  j["format_version"] = kFormatVersion;
  j["points"] = pc.size();
  j["edges"] = tree.edges.size();
  j["total_length"] = tree.total_length();
  Json ea = Json::array();
  for (double alpha : resolved_alpha_grid(c)) ea.push_back({{"alpha", alpha}, {"value", e_alpha_mst(tree, alpha)}});
  j["e_alpha"] = ea;
  if (pc.size() <= kMstCorrespondenceMaxPoints) {
    Json corr;
    for (ComplexKind k : {ComplexKind::kRips, ComplexKind::kCech}) {
      const auto rep = verify_mst_ph0_correspondence(pc, k);
      corr[std::string(complex_name(k))] = {{"passed", rep.passed}, {"max_error", rep.max_error}};
    }
    j["correspondence"] = corr;
  }
  Artifacts a;
  a.primary = dump(j);
  std::ostringstream csv;
  csv << "a,b,length\n";
  for (const auto& e : tree.edges) csv << e.a << ',' << e.b << ',' << format_double(e.length) << '\n';
  a.table = csv.str();
  return a;
}

inline Artifacts run_arcs(const ExperimentConfig& c) {
  const ArcsReport rep = arcs_experiment(resolved_sizes(c), c.budget);
  Json j;
  j["format_version"] = kFormatVersion;
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "n,points,count,e1\n";
  for (const auto& r : rep.rows) {
    rows.push_back({{"n", r.n}, {"points", r.points}, {"count", r.count}, {"e1", r.e1}});
    csv << r.n << ',' << r.points << ',' << r.count << ',' << format_double(r.e1) << '\n';
  }
  j["rows"] = rows;
  j["count_slope"] = rep.count_slope;
  j["e1_ratio"] = rep.e1_ratio;
  Artifacts a;
  a.primary = dump(j);
  a.table = csv.str();
  return a;
}

inline Artifacts run_bipartite(const ExperimentConfig& c) {
  FiltrationParams fp;
  fp.max_dim = 2;
  const FiniteMetricSpace fms = gen_bipartite_space(c.level);
  const Barcode bc = persistent_homology(rips_filtration(fms, fp));
  const auto h1 = bc.degree(1);
  const std::size_t side = std::size_t{1} << c.level;
  const std::size_t expected = (side - 1) * (side - 1);
  bool exact = h1.size() == expected;
  for (const auto& iv : h1) {
    exact = exact && iv.birth == std::ldexp(1.0, -c.level - 1) && iv.death == std::ldexp(1.0, -c.level);
  }
  Json j;
  j["format_version"] = kFormatVersion;
  j["level"] = c.level;
  j["points"] = fms.size();
  j["count"] = h1.size();
  j["expected_count"] = expected;
  j["exact"] = exact;
  j["intervals"] = intervals_to_json(h1);
  Artifacts a;
  a.primary = dump(j);
  std::ostringstream csv;
  write_barcode_csv(csv, Barcode(h1, true, ComplexKind::kRips));
  a.table = csv.str();
  a.exit_code = exact ? kExitOk : kExitCheckFailed;
  return a;
}

inline Artifacts run_stable(const ExperimentConfig& c) {
  const PointCloud pc = load_cloud(c);
  const auto cert = stable_class_certificate(pc);
  Json j;
  j["format_version"] = kFormatVersion;
  j["points"] = pc.size();
  j["dim"] = pc.dim();
  j["certified"] = cert.has_value();
  if (cert) {
    j["witness"] = interval_to_json(cert->witness);
    j["size"] = cert->size;
    const auto rob = check_certificate_robustness(*cert, c.trials, c.seed);
    j["robustness"] = {{"trials", rob.trials},
                       {"failures", rob.failures},
                       {"min_longest", rob.min_longest},
                       {"passed", rob.passed()}};
  }
  Artifacts a;
  a.primary = dump(j);
  std::ostringstream csv;
  write_point_cloud_csv(csv, pc);
  a.table = csv.str();
  return a;
}

inline Artifacts run_xi(const ExperimentConfig& c) {
  const XiSearchResult r = xi_search(c.xi_n, c.threshold, c.seed, c.restarts);
  Json j;
  j["format_version"] = kFormatVersion;
  j["n"] = c.xi_n;
  j["threshold"] = c.threshold;
  j["size"] = r.size;
  j["exact"] = r.exact;
  j["witness"] = r.witness;
  Artifacts a;
  a.primary = dump(j);
  std::ostringstream csv;
  for (const auto& p : r.witness) csv << p[0] << ',' << p[1] << '\n';
  a.table = csv.str();
  return a;
}

inline Json tp_grid_json(const TpGridResult& g) {
  return {{"corner_value", g.corner_value}, {"corner_eval", g.corner_eval}, {"sampled_min", g.sampled_min},
          {"argmin", g.argmin},             {"corner", g.corner},           {"min_ok", g.min_ok},
          {"at_corner", g.at_corner},       {"passed", g.passed()}};
}

inline Artifacts run_tp_verify(const ExperimentConfig& c) {
  const TpMinimaReport rep = verify_tp_minima(c.tp_n, c.tp_c, c.tp_steps);
  Json j;
  j["format_version"] = kFormatVersion;
  j["n"] = rep.n;
  j["c"] = rep.c;
  j["steps"] = rep.steps;
  j["tp1"] = tp_grid_json(rep.tp1);
  j["tp2"] = tp_grid_json(rep.tp2);
  j["passed"] = rep.passed();
  Artifacts a;
  a.primary = dump(j);
  a.exit_code = rep.passed() ? kExitOk : kExitCheckFailed;
  return a;
}

inline Artifacts run_verify(const ExperimentConfig& c, std::ostream& log) {
  VerifyOptions opt;
  opt.filter = c.filter;
  const VerifyReport rep = verify_suite(opt, &log);
  Json j;
  j["format_version"] = kFormatVersion;
  Json checks = Json::array();
  for (const auto& r : rep.checks) {
    checks.push_back({{"criterion", r.criterion}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  j["checks"] = checks;
  j["passed"] = rep.passed();
  Artifacts a;
  // Timings stay out of the artifact to keep it deterministic.
  if (!c.output.empty()) a.primary = dump(j);
  a.exit_code = rep.passed() ? kExitOk : kExitCheckFailed;
  return a;
}

}  // namespace detail

// Validates, computes every artifact in memory, then writes each declared
// output atomically. Nothing is written when validation or computation
// fails.
inline int run(const ExperimentConfig& config, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  detail::Artifacts a;
  try {
    validate_config(config);
    switch (config.command) {
      case Command::kGenerate: a = detail::run_generate(config); break;
      case Command::kBarcode: a = detail::run_barcode(config); break;
      case Command::kDimension: a = detail::run_dimension(config); break;
      case Command::kMst: a = detail::run_mst(config); break;
      case Command::kArcs: a = detail::run_arcs(config); break;
      case Command::kBipartite: a = detail::run_bipartite(config); break;
      case Command::kStable: a = detail::run_stable(config); break;
      case Command::kXi: a = detail::run_xi(config); break;
      case Command::kTpVerify: a = detail::run_tp_verify(config); break;
      case Command::kVerify: a = detail::run_verify(config, out); break;
    }
    if (config.output.empty()) {
      out << a.primary;
    } else {
      if (!a.primary.empty()) write_file_atomic(config.output, a.primary);
      if (!a.sidecar.empty()) write_file_atomic(config.output + ".json", a.sidecar);
    }
    if (!config.table.empty() && !a.table.empty()) write_file_atomic(config.table, a.table);
    if (!config.diagnostics.empty() && !a.diagnostics.empty()) write_file_atomic(config.diagnostics, a.diagnostics);
    return a.exit_code;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const InvalidArgument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DegenerateInput& e) {
    err << "degenerate input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

}  // namespace phdim
