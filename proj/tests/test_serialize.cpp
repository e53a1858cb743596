#include <cmath>

#include "pointres/serialize.hpp"
#include "support.hpp"

using namespace pointres;
using namespace testsupport;

TEST_CASE("configuration JSON round trip") {
  std::mt19937_64 gen(50);
  const auto c = random_config(gen, 4, {0.25, -1.5});
  const Json j = to_json(c);
  CHECK(j.at("alpha") == Json::array({0.25, -1.5}));
  CHECK(j.at("points").size() == 4);
  const auto back = configuration_from_json(Json::parse(j.dump()));
  CHECK(back.points() == c.points());
  CHECK(back.alpha() == c.alpha());

  const Json dup = {{"alpha", {1.0, 0.0}}, {"points", {{0, 0, 0}, {0, 0, 0}}}};
  CHECK(error_code_of([&] { configuration_from_json(dup); }) == ErrorCode::DuplicatePoints);
}

TEST_CASE("canonical form JSON round trip") {
  std::mt19937_64 gen(51);
  const auto p = canonical_form(random_config(gen, 4, {1.0, 0.5}));
  const Json j = to_json(p);
  CHECK(j.at("n") == 4);
  CHECK(j.at("terms")[0].at("freq") == 0.0);
  const auto back = canonical_from_json(Json::parse(j.dump()));
  REQUIRE(back.terms.size() == p.terms.size());
  for (std::size_t i = 0; i < p.terms.size(); ++i) {
    CHECK(back.terms[i].freq == p.terms[i].freq);
    CHECK(back.terms[i].coeffs == p.terms[i].coeffs);
  }
  CHECK(back.alpha == p.alpha);
  CHECK(back.n_points == p.n_points);
}

TEST_CASE("resonance set CSV and JSON") {
  ResonanceSet rs;
  rs.region = 10.0;
  rs.config_hash = "00000000deadbeef";
  rs.roots = {{{-1.5, -0.25}, 1, 1e-17}, {{0.1, -3.0}, 2, 0.0}};
  CHECK(to_csv(rs) ==
        "re,im,multiplicity,residual\n"
        "-1.5,-0.25,1,1.0000000000000001e-17\n"
        "0.10000000000000001,-3,2,0\n");
  const auto back = resonances_from_json(Json::parse(to_json(rs).dump()));
  REQUIRE(back.roots.size() == 2);
  CHECK(back.roots[1].k == rs.roots[1].k);
  CHECK(back.roots[1].multiplicity == 2);
  CHECK(back.config_hash == rs.config_hash);
  CHECK(back.region == 10.0);
}

TEST_CASE("counting report round trip") {
  const auto rs = find_resonances(new_configuration({{0, 0, 0}, {1, 0, 0}}, {1.0, 0.0}), 30.0);
  const auto h = uniform_grid(0.0, 2.0, 21);
  const auto rep = counting_report(rs, uniform_grid(5.0, 30.0, 6), h);
  const auto back = counting_from_json(Json::parse(to_json(rep).dump()));
  CHECK(back.radii == rep.radii);
  CHECK(back.counts == rep.counts);
  CHECK(back.h_grid == rep.h_grid);
  CHECK(back.log_counts == rep.log_counts);
  CHECK(back.ad_estimate == rep.ad_estimate);
  REQUIRE(back.ad_log_steps.size() == rep.ad_log_steps.size());
}

TEST_CASE("sample set round trip") {
  SamplerConfig cfg;
  cfg.m = 6;
  cfg.r = 2.0;
  cfg.seed = 77;
  cfg.stream_id = 5;
  const auto s = sample(cfg);
  const Json j = to_json(s);
  CHECK(j.at("kind") == "uniform_ball");
  const auto back = sample_from_json(Json::parse(j.dump()));
  CHECK(back.points == s.points);
  CHECK(back.seed_used == 77);
  CHECK(back.stream_id == 5);
  CHECK(back.next_position == s.next_position);
  CHECK(to_configuration(back, 1.0).points() == to_configuration(s, 1.0).points());
}

TEST_CASE("experiment report round trip and tables") {
  const auto rep = run_weyl_experiment(3, 1.0, 5, 9);
  const Json j = to_json(rep);
  const auto back = experiment_from_json(Json::parse(j.dump()));
  CHECK(to_json(back).dump() == j.dump());
  CHECK(back.all_pass() == rep.all_pass());

  const std::string csv = trials_csv(rep);
  CHECK(csv.rfind("trial_id,stream_id,n_points,diameter,k_min,v_size,n_k,weyl,ad_symbolic,error\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);

  const auto km = run_kmin_experiment(20, 1.0, 10, 9);
  const std::string cdf = cdf_csv(km);
  CHECK(cdf.rfind("x,empirical\n", 0) == 0);
  CHECK(std::count(cdf.begin(), cdf.end(), '\n') == 11);
  CHECK(to_json(experiment_from_json(Json::parse(to_json(km).dump()))).dump() == to_json(km).dump());
}

TEST_CASE("error codes have stable names") {
  CHECK(to_string(ErrorCode::TooLarge) == "TooLarge");
  CHECK(to_string(ErrorCode::BoundaryZero) == "BoundaryZero");
  const Error e(ErrorCode::EmptySample, "nothing");
  CHECK(std::string(e.what()) == "EmptySample: nothing");
}
