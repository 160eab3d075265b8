#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cc/fit.hpp"
#include "cc/frame.hpp"
#include "cc/measure.hpp"

namespace cc {

enum class ScenarioKind { validate, measure_est, area_verify, zero_set, lat_rate, jac_equiv };

inline ScenarioKind scenario_kind_from(const std::string& s) {
  if (s == "validate") return ScenarioKind::validate;
  if (s == "measure_est") return ScenarioKind::measure_est;
  if (s == "area_verify") return ScenarioKind::area_verify;
  if (s == "zero_set") return ScenarioKind::zero_set;
  if (s == "lat_rate") return ScenarioKind::lat_rate;
  if (s == "jac_equiv") return ScenarioKind::jac_equiv;
  throw ConfigError("scenario: unknown kind '" + s + "'");
}

struct ScenarioParams {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = runner decides
  double image_delta = 1.0 / 32.0;
  double delta = 1.0 / 64.0;
  double radius = 1.0;
  double tolerance = -1.0;  // kind-specific default when negative
  double slope_gate = -1.0;
  double ratio_cap = 1e-4;
  int pairs_per_scale = 200;
  std::vector<double> delta_schedule;
  std::vector<double> t_schedule;
  std::vector<double> epsilon_schedule;
  std::vector<double> base_point;
};

struct Scenario {
  int schema_version = 1;
  std::string id;
  ScenarioKind kind = ScenarioKind::validate;
  std::shared_ptr<CarnotAlgebra> algebra;       // group model, when present
  std::shared_ptr<FramedManifold> frame;        // lat_rate
  std::shared_ptr<CatalogMap> map;              // map-based kinds
  std::optional<Region> region;
  ScenarioParams params;
};

struct ReportRow {
  std::string estimator;
  double scale = 0.0;
  double value = 0.0;
  double stderror = 0.0;
};

struct Report {
  std::string scenario_id;
  std::uint64_t seed = 0;
  bool pass = false;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;
};

namespace detail {

using nlohmann::json;

inline void require_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError("scenario: unknown field '" + it.key() + "' in " + where);
  }
}

inline Eigen::VectorXd parse_vector(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ConfigError("scenario: " + where + " must be an array");
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[i] = arr[i].get<double>();
  return v;
}

inline CoordBox parse_box_minmax(const json& obj, const std::string& where) {
  CoordBox b{parse_vector(obj.at("min"), where + ".min"), parse_vector(obj.at("max"), where + ".max")};
  if (b.lo.size() != b.hi.size()) throw ConfigError("scenario: box min/max length mismatch");
  for (int i = 0; i < b.dim(); ++i)
    if (b.lo[i] >= b.hi[i]) throw ConfigError("scenario: empty box in " + where);
  return b;
}

inline CoordBox parse_coord_box(const json& obj, const std::string& where) {
  require_keys(obj, {"min", "max"}, where);
  return parse_box_minmax(obj, where);
}

inline CarnotAlgebra parse_algebra(const json& obj) {
  if (obj.contains("name")) {
    require_keys(obj, {"name", "dim"}, "group");
    const std::string name = obj.at("name").get<std::string>();
    if (name == "heisenberg") return algebras::heisenberg();
    if (name == "engel") return algebras::engel();
    if (name == "abelian") return algebras::abelian(obj.value("dim", 3));
    throw ConfigError("scenario: unknown group '" + name + "'");
  }
  require_keys(obj, {"layers", "triples"}, "group");
  std::vector<int> layers = obj.at("layers").get<std::vector<int>>();
  std::vector<std::tuple<int, int, int, double>> triples;
  if (obj.contains("triples")) {
    for (const auto& t : obj.at("triples")) {
      if (!t.is_array() || t.size() != 4)
        throw ConfigError("scenario: bracket triple must be [i, j, k, value]");
      // File indices are 1-based.
      triples.emplace_back(t[0].get<int>() - 1, t[1].get<int>() - 1, t[2].get<int>() - 1,
                           t[3].get<double>());
    }
  }
  return CarnotAlgebra::from_triples(Grading(std::move(layers)), triples);
}

inline Eigen::MatrixXd parse_matrix(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.empty()) throw ConfigError("scenario: " + where + " must be a matrix");
  const std::size_t cols = arr[0].size();
  Eigen::MatrixXd m(arr.size(), cols);
  for (std::size_t r = 0; r < arr.size(); ++r) {
    if (arr[r].size() != cols) throw ConfigError("scenario: ragged matrix in " + where);
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = arr[r][c].get<double>();
  }
  return m;
}

inline CatalogMap parse_map(const json& obj, const CarnotAlgebra& alg) {
  const std::string name = obj.at("name").get<std::string>();
  if (name == "identity") {
    require_keys(obj, {"name"}, "map");
    return maps::identity(alg);
  }
  if (name == "homomorphism") {
    require_keys(obj, {"name", "b1"}, "map");
    return maps::homomorphism(alg, alg, parse_matrix(obj.at("b1"), "map.b1"));
  }
  if (name == "left_translate") {
    require_keys(obj, {"name", "g"}, "map");
    return maps::left_translate(alg, parse_vector(obj.at("g"), "map.g"));
  }
  if (name == "dilate") {
    require_keys(obj, {"name", "r"}, "map");
    return maps::dilation(alg, obj.at("r").get<double>());
  }
  if (name == "compose") {
    require_keys(obj, {"name", "maps"}, "map");
    std::vector<CatalogMap> chain;
    for (const auto& sub : obj.at("maps")) chain.push_back(parse_map(sub, alg));
    return maps::composition(chain);
  }
  if (name == "two_piece") {
    require_keys(obj, {"name", "map_a", "box_a", "map_b", "box_b"}, "map");
    return maps::two_piece(parse_map(obj.at("map_a"), alg),
                           parse_coord_box(obj.at("box_a"), "map.box_a"),
                           parse_map(obj.at("map_b"), alg),
                           parse_coord_box(obj.at("box_b"), "map.box_b"));
  }
  throw ConfigError("scenario: unknown map '" + name + "'");
}

inline Region parse_region(const json& obj, const std::shared_ptr<CarnotAlgebra>& alg) {
  const std::string type = obj.at("type").get<std::string>();
  if (type == "coord_box") {
    require_keys(obj, {"type", "min", "max"}, "region");
    return Region::coord_boxes({parse_box_minmax(obj, "region")});
  }
  if (type == "union") {
    require_keys(obj, {"type", "boxes"}, "region");
    std::vector<CoordBox> boxes;
    for (const auto& b : obj.at("boxes")) boxes.push_back(parse_coord_box(b, "region.boxes"));
    return Region::coord_boxes(std::move(boxes));
  }
  if (type == "d2_box") {
    require_keys(obj, {"type", "center", "radius"}, "region");
    if (!alg) throw ConfigError("scenario: d2_box region requires a group");
    return Region::d2_box(*alg, parse_vector(obj.at("center"), "region.center"),
                          obj.at("radius").get<double>());
  }
  throw ConfigError("scenario: unknown region type '" + type + "'");
}

inline std::vector<double> parse_schedule(const json& arr, const std::string& where) {
  std::vector<double> v = arr.get<std::vector<double>>();
  if (v.empty()) throw ConfigError("scenario: empty schedule " + where);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] <= 0.0) throw ConfigError("scenario: schedule " + where + " must be positive");
    if (i > 0 && v[i] >= v[i - 1])
      throw ConfigError("scenario: schedule " + where + " must be strictly decreasing");
  }
  return v;
}

inline ScenarioParams parse_params(const json& obj) {
  require_keys(obj,
               {"samples", "seed", "workers", "image_delta", "delta", "radius", "tolerance",
                "slope_gate", "ratio_cap", "pairs_per_scale", "delta_schedule", "t_schedule",
                "epsilon_schedule", "base_point"},
               "params");
  ScenarioParams p;
  p.samples = obj.value("samples", p.samples);
  p.seed = obj.value("seed", p.seed);
  p.workers = obj.value("workers", p.workers);
  p.image_delta = obj.value("image_delta", p.image_delta);
  p.delta = obj.value("delta", p.delta);
  p.radius = obj.value("radius", p.radius);
  p.tolerance = obj.value("tolerance", p.tolerance);
  p.slope_gate = obj.value("slope_gate", p.slope_gate);
  p.ratio_cap = obj.value("ratio_cap", p.ratio_cap);
  p.pairs_per_scale = obj.value("pairs_per_scale", p.pairs_per_scale);
  if (obj.contains("delta_schedule"))
    p.delta_schedule = parse_schedule(obj.at("delta_schedule"), "delta_schedule");
  if (obj.contains("t_schedule")) p.t_schedule = parse_schedule(obj.at("t_schedule"), "t_schedule");
  if (obj.contains("epsilon_schedule"))
    p.epsilon_schedule = parse_schedule(obj.at("epsilon_schedule"), "epsilon_schedule");
  if (obj.contains("base_point"))
    p.base_point = obj.at("base_point").get<std::vector<double>>();
  return p;
}

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& doc) {
  detail::require_keys(doc, {"schema_version", "id", "kind", "group", "frame", "map", "region", "params"},
                       "scenario");
  Scenario s;
  if (!doc.contains("schema_version")) throw ConfigError("scenario: schema_version required");
  s.schema_version = doc.at("schema_version").get<int>();
  if (s.schema_version != 1) throw ConfigError("scenario: unsupported schema_version");
  s.id = doc.at("id").get<std::string>();
  s.kind = scenario_kind_from(doc.at("kind").get<std::string>());
  if (doc.contains("params")) s.params = detail::parse_params(doc.at("params"));

  if (doc.contains("group"))
    s.algebra = std::make_shared<CarnotAlgebra>(detail::parse_algebra(doc.at("group")));
  if (doc.contains("frame")) {
    const auto& fr = doc.at("frame");
    detail::require_keys(fr, {"name"}, "frame");
    const std::string fname = fr.at("name").get<std::string>();
    if (fname == "variable_heisenberg")
      s.frame = std::make_shared<FramedManifold>(frames::variable_heisenberg());
    else if (fname == "heisenberg")
      s.frame = std::make_shared<FramedManifold>(frames::group_frame(algebras::heisenberg()));
    else if (fname == "engel")
      s.frame = std::make_shared<FramedManifold>(frames::group_frame(algebras::engel()));
    else
      throw ConfigError("scenario: unknown frame '" + fname + "'");
  }
  if (doc.contains("map")) {
    if (!s.algebra) throw ConfigError("scenario: map requires a group");
    s.map = std::make_shared<CatalogMap>(detail::parse_map(doc.at("map"), *s.algebra));
  }
  if (doc.contains("region")) s.region = detail::parse_region(doc.at("region"), s.algebra);

  switch (s.kind) {
    case ScenarioKind::validate:
      if (!s.algebra) throw ConfigError("scenario: validate requires a group");
      break;
    case ScenarioKind::measure_est:
      if (!s.algebra) throw ConfigError("scenario: measure_est requires a group");
      break;
    case ScenarioKind::area_verify:
      if (!s.map || !s.region) throw ConfigError("scenario: area_verify requires map and region");
      break;
    case ScenarioKind::zero_set:
      if (!s.map || !s.region || s.params.delta_schedule.empty())
        throw ConfigError("scenario: zero_set requires map, region, delta_schedule");
      break;
    case ScenarioKind::lat_rate:
      if (!s.frame || s.params.epsilon_schedule.empty())
        throw ConfigError("scenario: lat_rate requires frame and epsilon_schedule");
      break;
    case ScenarioKind::jac_equiv:
      if (!s.map || s.params.t_schedule.empty())
        throw ConfigError("scenario: jac_equiv requires map and t_schedule");
      break;
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("scenario parse error: ") + e.what());
  }
  return parse_scenario(doc);
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string report_csv(const Report& rep) {
  std::ostringstream os;
  os << "scenario,estimator,scale,value,stderr,seed\n";
  for (const auto& row : rep.rows)
    os << rep.scenario_id << ',' << row.estimator << ',' << detail::fmt_double(row.scale) << ','
       << detail::fmt_double(row.value) << ',' << detail::fmt_double(row.stderror) << ','
       << rep.seed << '\n';
  return os.str();
}

/// Minimal log-log polyline plot of (scale, value) rows.
inline std::string report_svg(const Report& rep, const std::string& estimator) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : rep.rows)
    if (row.estimator == estimator && row.scale > 0 && row.value > 0)
      pts.emplace_back(row.scale, row.value);
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='480' height='360' "
        "viewBox='0 0 480 360'>\n"
     << "<rect width='480' height='360' fill='white'/>\n"
     << "<text x='12' y='20' font-size='13'>" << rep.scenario_id << " : " << estimator
     << " (log-log)</text>\n";
  if (pts.size() >= 2) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& [x, y] : pts) {
      xmin = std::min(xmin, std::log(x));
      xmax = std::max(xmax, std::log(x));
      ymin = std::min(ymin, std::log(y));
      ymax = std::max(ymax, std::log(y));
    }
    if (xmax - xmin < 1e-12) xmax = xmin + 1;
    if (ymax - ymin < 1e-12) ymax = ymin + 1;
    os << "<polyline fill='none' stroke='steelblue' stroke-width='2' points='";
    for (auto& [x, y] : pts) {
      const double px = 40 + (std::log(x) - xmin) / (xmax - xmin) * 400;
      const double py = 320 - (std::log(y) - ymin) / (ymax - ymin) * 280;
      os << px << ',' << py << ' ';
    }
    os << "'/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  int workers = 1;
  bool svg = false;
  bool write_outputs = true;
};

/// Deviation |d2_frame - d2_cone| on random point pairs in the epsilon-box
/// around u.  Exposed for reuse by tests.
inline void detail_lat_pairs(const FramedManifold& frame, const TangentCone& cone,
                             const Eigen::VectorXd& u, double eps, std::uint64_t seed,
                             std::uint64_t scale_index, int workers, std::vector<double>& devs) {
  detail::parallel_for(devs.size(), workers, [&](std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t i = b; i < e; ++i) {
      CounterRng rng(seed, (scale_index << 32) ^ i);
      const Eigen::VectorXd a = sample_box2(frame.grading(), eps, rng);
      const Eigen::VectorXd bb = sample_box2(frame.grading(), eps, rng);
      const Eigen::VectorXd w = flow(frame, u, a);
      const Eigen::VectorXd v = flow(frame, u, bb);
      devs[i] = std::abs(d2_frame(frame, w, v) - d2_cone(frame, cone, w, v));
    }
  });
}

namespace detail {

inline Report run_validate(const Scenario& s, std::uint64_t seed) {
  Report rep{s.id, seed, false, {}, {}};
  const ValidationReport vr = validate_algebra(*s.algebra);
  for (const auto& ch : vr.checks)
    rep.rows.push_back({ch.name, 0.0, ch.residual, ch.pass ? 0.0 : 1.0});
  for (std::size_t j = 0; j < vr.generation_ranks.size(); ++j)
    rep.rows.push_back({"generation-rank", double(j + 2), double(vr.generation_ranks[j]), 0.0});
  rep.pass = vr.accepted;
  if (!vr.accepted) rep.notes.push_back("algebra rejected");
  return rep;
}

inline Report run_measure_est(const Scenario& s, std::uint64_t seed, int workers) {
  Report rep{s.id, seed, false, {}, {}};
  const Grading& g = s.algebra->grading();
  const double r = s.params.radius;
  const double nu = g.homogeneous_dimension();
  Eigen::VectorXd half(g.dim());
  for (int i = 0; i < g.dim(); ++i) half[i] = std::pow(r, g.degree(i));
  const CoordBox bbox{-half, half};
  const CarnotAlgebra alg = *s.algebra;
  const auto est = hausdorff_estimate(
      g, bbox, [&](const Eigen::VectorXd& p) { return layered_norm(g, p) <= r; }, nu,
      s.params.delta, (std::uint64_t(1) << 31), workers);
  const double reference = box_volume(g, r);  // same-constant Lebesgue value
  const double tol = s.params.tolerance < 0 ? 0.10 : s.params.tolerance;
  rep.rows.push_back({"hausdorff_estimate", est.delta, est.value, 0.0});
  rep.rows.push_back({"lebesgue_reference", 0.0, reference, 0.0});
  rep.rows.push_back({"ratio", est.delta, est.value / reference, 0.0});
  rep.pass = std::abs(est.value / reference - 1.0) <= tol;
  return rep;
}

inline Report run_area_verify(const Scenario& s, std::uint64_t seed, int workers) {
  Report rep{s.id, seed, false, {}, {}};
  const AreaLhsResult lhs = area_lhs(*s.map, *s.region, s.params.samples, seed, workers);
  AreaRhsOptions opt;
  opt.image_delta = s.params.image_delta;
  opt.workers = workers;
  opt.seed = seed;
  const AreaRhsResult rhs = area_rhs_multiplicity(*s.map, *s.region, opt);
  const double ratio = lhs.value / rhs.value;
  const double tol = s.params.tolerance < 0 ? 0.05 : s.params.tolerance;
  rep.rows.push_back({"area_lhs", double(s.params.samples), lhs.value, lhs.stderror});
  rep.rows.push_back({"area_rhs", rhs.image_delta, rhs.value, 0.0});
  rep.rows.push_back({"area_rhs_raw", rhs.image_delta, rhs.fine_value, 0.0});
  rep.rows.push_back({"lhs_over_rhs", 0.0, ratio, 0.0});
  if (rhs.low_occupancy_warning) rep.notes.push_back("rhs: low cell occupancy");
  rep.pass = std::abs(ratio - 1.0) <= tol;
  return rep;
}

inline Report run_zero_set(const Scenario& s, std::uint64_t seed, int workers) {
  Report rep{s.id, seed, false, {}, {}};
  std::vector<std::pair<double, double>> pairs;
  for (double delta : s.params.delta_schedule) {
    AreaRhsOptions opt;
    opt.image_delta = delta;
    opt.refine = false;
    opt.grid_sampling = false;
    opt.random_samples = s.params.samples;
    opt.seed = seed;
    opt.workers = workers;
    const AreaRhsResult rhs = area_rhs_multiplicity(*s.map, *s.region, opt);
    pairs.emplace_back(delta, rhs.fine_value);
    rep.rows.push_back({"image_measure", delta, rhs.fine_value, 0.0});
  }
  // Nondegenerate reference: the identity image measured at the coarsest scale.
  AreaRhsOptions ref_opt;
  ref_opt.image_delta = s.params.delta_schedule.front();
  ref_opt.workers = workers;
  const CatalogMap ident = maps::identity(s.map->pre());
  const AreaRhsResult ref = area_rhs_multiplicity(ident, *s.region, ref_opt);
  rep.rows.push_back({"reference", ref_opt.image_delta, ref.value, 0.0});

  const RateFit fit = fit_loglog_slope(pairs);
  rep.rows.push_back({"decay_slope", 0.0, fit.slope, fit.residual});
  const double gate = s.params.slope_gate < 0 ? 2.5 : s.params.slope_gate;
  const double tail_ratio = pairs.back().second / ref.value;
  rep.rows.push_back({"tail_ratio", pairs.back().first, tail_ratio, 0.0});
  rep.pass = fit.slope >= gate && tail_ratio <= s.params.ratio_cap;
  return rep;
}

inline Report run_lat_rate(const Scenario& s, std::uint64_t seed, int workers) {
  Report rep{s.id, seed, false, {}, {}};
  const FramedManifold& frame = *s.frame;
  const Grading& g = frame.grading();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(g.dim());
  if (!s.params.base_point.empty()) {
    if (static_cast<int>(s.params.base_point.size()) != g.dim())
      throw ConfigError("lat_rate: base_point dimension mismatch");
    for (int i = 0; i < g.dim(); ++i) u[i] = s.params.base_point[i];
  }
  const TangentCone cone = tangent_cone(frame, u);
  const int pairs_n = s.params.pairs_per_scale;

  std::vector<std::pair<double, double>> fit_pairs;
  for (std::size_t ei = 0; ei < s.params.epsilon_schedule.size(); ++ei) {
    const double eps = s.params.epsilon_schedule[ei];
    std::vector<double> devs(pairs_n, 0.0);
    detail_lat_pairs(frame, cone, u, eps, seed, ei, workers, devs);
    const double maxdev = *std::max_element(devs.begin(), devs.end());
    fit_pairs.emplace_back(eps, maxdev);
    rep.rows.push_back({"lat_max_deviation", eps, maxdev, 0.0});
  }
  const RateFit fit = fit_loglog_slope(fit_pairs);
  rep.rows.push_back({"lat_slope", 0.0, fit.slope, fit.residual});
  const double gate = s.params.slope_gate < 0 ? 1.4 : s.params.slope_gate;
  rep.pass = fit.slope >= gate;
  return rep;
}

inline Report run_jac_equiv(const Scenario& s, std::uint64_t seed, int workers) {
  Report rep{s.id, seed, false, {}, {}};
  if (s.map->pieces().size() != 1)
    throw ConfigError("jac_equiv: map must be a single homomorphism");
  const HorizontalHomomorphism& L = s.map->pieces()[0].diff;
  const double jac = sr_jacobian(L);
  rep.rows.push_back({"sr_jacobian", 0.0, jac, 0.0});
  bool ok = jac > 0.0;

  if (L.full_matrix().rows() == L.full_matrix().cols()) {
    const double det = std::abs(L.full_matrix().determinant());
    rep.rows.push_back({"abs_det", 0.0, det, 0.0});
    ok = ok && std::abs(det - jac) <= 1e-12 * std::max(1.0, jac);
  }
  const double tol = s.params.tolerance < 0 ? 0.02 : s.params.tolerance;
  for (double t : s.params.t_schedule) {
    const double ld = local_distortion(*s.map, Eigen::VectorXd::Zero(s.map->pre().dim()), t, 16.0,
                                       workers);
    rep.rows.push_back({"local_distortion", t, ld, 0.0});
    ok = ok && std::abs(ld / jac - 1.0) <= tol;
  }
  rep.pass = ok;
  return rep;
}

}  // namespace detail

inline Report run_scenario(const Scenario& s, const RunOptions& opts) {
  const std::uint64_t seed = opts.seed_override.value_or(s.params.seed);
  int workers = s.params.workers > 0 ? s.params.workers : opts.workers;
  if (workers <= 0) workers = 1;

  Report rep;
  switch (s.kind) {
    case ScenarioKind::validate:
      rep = detail::run_validate(s, seed);
      break;
    case ScenarioKind::measure_est:
      rep = detail::run_measure_est(s, seed, workers);
      break;
    case ScenarioKind::area_verify:
      rep = detail::run_area_verify(s, seed, workers);
      break;
    case ScenarioKind::zero_set:
      rep = detail::run_zero_set(s, seed, workers);
      break;
    case ScenarioKind::lat_rate:
      rep = detail::run_lat_rate(s, seed, workers);
      break;
    case ScenarioKind::jac_equiv:
      rep = detail::run_jac_equiv(s, seed, workers);
      break;
  }

  if (opts.write_outputs) {
    namespace fs = std::filesystem;
    fs::create_directories(opts.out_dir);
    std::ofstream csv(fs::path(opts.out_dir) / (s.id + ".csv"), std::ios::binary);
    csv << report_csv(rep);
    if (opts.svg) {
      const char* series = nullptr;
      if (s.kind == ScenarioKind::zero_set) series = "image_measure";
      if (s.kind == ScenarioKind::lat_rate) series = "lat_max_deviation";
      if (series) {
        std::ofstream svg(fs::path(opts.out_dir) / (s.id + ".svg"), std::ios::binary);
        svg << report_svg(rep, series);
      }
    }
  }
  return rep;
}

}  // namespace cc
