#include <doctest.h>

#include "cc/experiments.hpp"

using namespace cc;
using nlohmann::json;

TEST_CASE("loglog fit recovers exact power laws") {
  std::vector<std::pair<double, double>> cubic, three_halves;
  for (double s : {1.0, 0.5, 0.25, 0.125, 0.0625}) {
    cubic.emplace_back(s, 7.0 * s * s * s);
    three_halves.emplace_back(s, 2.0 * std::pow(s, 1.5));
  }
  const RateFit f3 = fit_loglog_slope(cubic);
  CHECK(f3.slope == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f3.residual <= 1e-12);
  const RateFit f15 = fit_loglog_slope(three_halves);
  CHECK(f15.slope == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("loglog fit rejects degenerate inputs") {
  CHECK_THROWS_AS(fit_loglog_slope({{1.0, 1.0}, {0.5, 0.5}}), DegenerateDataError);
  // 4 points but spanning only 2 octaves.
  CHECK_THROWS_AS(fit_loglog_slope({{1.0, 1.0}, {0.7, 1.0}, {0.5, 1.0}, {0.25, 1.0}}),
                  DegenerateDataError);
  CHECK_THROWS_AS(fit_loglog_slope({{1.0, 1.0}, {0.5, 0.0}, {0.25, 1.0}, {0.125, 1.0}}),
                  DegenerateDataError);
}

TEST_CASE("scenario parser accepts a valid document") {
  const json doc = {
      {"schema_version", 1},
      {"id", "unit-validate"},
      {"kind", "validate"},
      {"group", {{"name", "heisenberg"}}},
  };
  const Scenario s = parse_scenario(doc);
  CHECK(s.id == "unit-validate");
  CHECK(s.kind == ScenarioKind::validate);
  REQUIRE(s.algebra != nullptr);
  CHECK(s.algebra->dim() == 3);
}

TEST_CASE("scenario parser accepts explicit layers and triples") {
  const json doc = {
      {"schema_version", 1},
      {"id", "custom"},
      {"kind", "validate"},
      {"group", {{"layers", {2, 1}}, {"triples", {{1, 2, 3, 1.0}}}}},
  };
  const Scenario s = parse_scenario(doc);
  CHECK(s.algebra->c(0, 1, 2) == doctest::Approx(1.0));
}

TEST_CASE("scenario parser accepts each region type") {
  json doc = {
      {"schema_version", 1},
      {"id", "regions"},
      {"kind", "area_verify"},
      {"group", {{"name", "heisenberg"}}},
      {"map", {{"name", "identity"}}},
      {"region", {{"type", "coord_box"}, {"min", {0, 0, 0}}, {"max", {1, 1, 1}}}},
  };
  CHECK(parse_scenario(doc).region->lebesgue() == doctest::Approx(1.0));

  doc["region"] = {{"type", "union"},
                   {"boxes",
                    {{{"min", {0, 0, 0}}, {"max", {1, 1, 1}}},
                     {{"min", {0, 0, 2}}, {"max", {1, 1, 3}}}}}};
  CHECK(parse_scenario(doc).region->lebesgue() == doctest::Approx(2.0));

  doc["region"] = {{"type", "d2_box"}, {"center", {0, 0, 0}}, {"radius", 1.0}};
  CHECK(parse_scenario(doc).region->is_d2_box());
}

TEST_CASE("scenario parser rejects malformed documents") {
  json doc = {
      {"schema_version", 1},
      {"id", "x"},
      {"kind", "validate"},
      {"group", {{"name", "heisenberg"}}},
  };

  json unknown = doc;
  unknown["surprise"] = 1;
  CHECK_THROWS_AS(parse_scenario(unknown), ConfigError);

  json bad_version = doc;
  bad_version["schema_version"] = 2;
  CHECK_THROWS_AS(parse_scenario(bad_version), ConfigError);

  json no_version = doc;
  no_version.erase("schema_version");
  CHECK_THROWS_AS(parse_scenario(no_version), ConfigError);

  json bad_kind = doc;
  bad_kind["kind"] = "frobnicate";
  CHECK_THROWS_AS(parse_scenario(bad_kind), ConfigError);

  json missing_group = doc;
  missing_group.erase("group");
  CHECK_THROWS_AS(parse_scenario(missing_group), ConfigError);

  json bad_schedule = doc;
  bad_schedule["kind"] = "zero_set";
  bad_schedule["map"] = {{"name", "identity"}};
  bad_schedule["region"] = {{"type", "coord_box"}, {"min", {0, 0, 0}}, {"max", {1, 1, 1}}};
  bad_schedule["params"] = {{"delta_schedule", {0.125, 0.25}}};  // increasing
  CHECK_THROWS_AS(parse_scenario(bad_schedule), ConfigError);

  json unknown_param = doc;
  unknown_param["params"] = {{"sample", 100}};  // typo for "samples"
  CHECK_THROWS_AS(parse_scenario(unknown_param), ConfigError);
}

TEST_CASE("validate scenario runs end to end") {
  const json doc = {
      {"schema_version", 1},
      {"id", "unit-validate-run"},
      {"kind", "validate"},
      {"group", {{"name", "engel"}}},
  };
  RunOptions opts;
  opts.write_outputs = false;
  const Report rep = run_scenario(parse_scenario(doc), opts);
  CHECK(rep.pass);
  CHECK(!rep.rows.empty());
}

TEST_CASE("csv output has the documented header and row shape") {
  Report rep;
  rep.scenario_id = "demo";
  rep.seed = 42;
  rep.rows.push_back({"estimator_a", 0.5, 1.0 / 3.0, 0.01});
  const std::string csv = report_csv(rep);
  CHECK(csv.rfind("scenario,estimator,scale,value,stderr,seed\n", 0) == 0);
  CHECK(csv.find("demo,estimator_a,0.5,0.3333333333333333") != std::string::npos);
  CHECK(csv.find(",42\n") != std::string::npos);
}

TEST_CASE("jac_equiv scenario passes for a diagonal homomorphism") {
  const json doc = {
      {"schema_version", 1},
      {"id", "unit-jac"},
      {"kind", "jac_equiv"},
      {"group", {{"name", "heisenberg"}}},
      {"map", {{"name", "homomorphism"}, {"b1", {{2.0, 0.0}, {0.0, 3.0}}}}},
      {"params", {{"t_schedule", {1.0}}, {"workers", 2}}},
  };
  RunOptions opts;
  opts.write_outputs = false;
  const Report rep = run_scenario(parse_scenario(doc), opts);
  CHECK(rep.pass);
  bool saw_jac = false;
  for (const auto& row : rep.rows)
    if (row.estimator == "sr_jacobian") {
      saw_jac = true;
      CHECK(row.value == doctest::Approx(36.0).epsilon(1e-12));
    }
  CHECK(saw_jac);
}
