#include "doctest.h"

#include <cstring>
#include <filesystem>

#include "horo/sampling.hpp"
#include "horo/serialize.hpp"
#include "oracles.hpp"

using namespace horo;
using geom::Model;
using io::ExperimentConfig;
using io::json;

namespace {

bool bit_equal(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.instances = 20;
  cfg.samples = 500;
  cfg.depth = 4;
  cfg.generator_depth = 1;
  cfg.seed = 90210;
  return cfg;
}

}  // namespace

TEST_CASE("cocycle tables round-trip bit exactly") {
  Rng rng(81);
  for (Model model : {Model::HalfPlane, Model::Tree}) {
    const auto A = sampling::random_cocycle(model, 2, 2, rng);
    const auto j = io::cocycle_to_json(A);
    const auto back = io::cocycle_from_json(json::parse(io::dump(j)));
    REQUIRE(back.size() == A.size());
    for (long i = 0; i < A.size(); ++i) {
      const auto& a = A.at_index(i);
      const auto& b = back.at_index(i);
      if (model == Model::HalfPlane) {
        CHECK(bit_equal(a.a, b.a));
        CHECK(bit_equal(a.b, b.b));
        CHECK(bit_equal(a.c, b.c));
        CHECK(bit_equal(a.d, b.d));
      } else {
        CHECK(a.root_image == b.root_image);
        CHECK(a.letter_perm == b.letter_perm);
      }
    }
  }
}

TEST_CASE("real cocycles and sections round-trip bit exactly") {
  Rng rng(82);
  const auto psi = sampling::random_real_cocycle(2, 2, rng);
  const auto back = io::real_cocycle_from_json(json::parse(io::dump(io::real_cocycle_to_json(psi))));
  REQUIRE(back.size() == psi.size());
  for (long i = 0; i < psi.size(); ++i)
    CHECK(bit_equal(psi.at_index(i), back.at_index(i)));

  const auto setup = sampling::coboundary_setup(Model::HalfPlane, 2, 1, 3, 83);
  const auto alpha_back = io::boundary_section_from_json(
      json::parse(io::dump(io::boundary_section_to_json(setup.alpha))));
  for (long i = 0; i < setup.alpha.size(); ++i)
    CHECK(geom::boundary_gap(alpha_back.at_index(i), setup.alpha.at_index(i)) == 0.0);

  const auto s = setup.instance.interior_section(setup.h0);
  const auto s_back = io::interior_section_from_json(
      json::parse(io::dump(io::interior_section_to_json(s))));
  for (long i = 0; i < s.size(); ++i) {
    CHECK(bit_equal(s.at_index(i).x, s_back.at_index(i).x));
    CHECK(bit_equal(s.at_index(i).y, s_back.at_index(i).y));
  }
}

TEST_CASE("config validation rejects bad input") {
  CHECK_THROWS_AS(io::model_from_name("plane"), ConfigError);

  json bad = small_config().to_json();
  bad["alphabet"] = 1;
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);

  json bad_tol = small_config().to_json();
  bad_tol["tolerances"]["invariance"] = -1.0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad_tol), ConfigError);

  json bad_depth = small_config().to_json();
  bad_depth["depth"] = 40;
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad_depth), ConfigError);

  // round trip keeps the fields
  const ExperimentConfig cfg = small_config();
  const ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
  CHECK(back.seed == cfg.seed);
  CHECK(back.depth == cfg.depth);
  CHECK(back.instances == cfg.instances);
}

TEST_CASE("reports are deterministic for a fixed config and seed") {
  const ExperimentConfig cfg = small_config();

  SUBCASE("lemma report") {
    const std::string a = io::dump(io::lemma_report(cfg));
    const std::string b = io::dump(io::lemma_report(cfg));
    CHECK(a == b);
    CHECK(json::parse(a).at("pass").get<bool>());
  }

  SUBCASE("ppo report") {
    const std::string a = io::dump(io::ppo_report(cfg));
    const std::string b = io::dump(io::ppo_report(cfg));
    CHECK(a == b);
    CHECK(json::parse(a).at("pass").get<bool>());
  }

  SUBCASE("generated instances") {
    const auto g1 = io::run_gen(cfg);
    const auto g2 = io::run_gen(cfg);
    CHECK(io::dump(g1.cocycle) == io::dump(g2.cocycle));
    CHECK(io::dump(g1.truth) == io::dump(g2.truth));
  }
}

TEST_CASE("ppo report distinguishes coboundaries from constant cocycles") {
  ExperimentConfig cfg = small_config();
  cfg.generator_kind = "coboundary";
  CHECK(io::ppo_report(cfg).at("pass").get<bool>());

  cfg.generator_kind = "constant";
  const auto report = io::ppo_report(cfg);
  CHECK_FALSE(report.at("pass").get<bool>());
  // the offending orbit is listed with a positive displacement
  bool found = false;
  for (const auto& row : report.at("interior").at("orbits"))
    if (row.at("displacement").get<double>() > 1e-9) found = true;
  CHECK(found);
}

TEST_CASE("livsic report runs the solver on telescoped input") {
  ExperimentConfig cfg = small_config();
  cfg.generator_kind = "telescoped";
  const auto out = io::run_livsic(cfg);
  CHECK(out.pass);
  CHECK(out.report.at("obstruction").at("pass").get<bool>());
  CHECK(out.report.at("solve").at("residual").get<double>() <= 1e-10);
  CHECK(out.residual_csv.rfind("word,residual\n", 0) == 0);

  cfg.generator_kind = "random";
  const auto failing = io::run_livsic(cfg);
  CHECK_FALSE(failing.pass);
  CHECK_FALSE(failing.report.at("obstruction").at("pass").get<bool>());
}

TEST_CASE("file-driven reduce") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "horo_reduce_files";
  fs::create_directories(dir);

  SUBCASE("identity cocycle with constant sections gives a constant section") {
    std::vector<geom::Isometry> table(
        static_cast<size_t>(base::cylinder_count(2, 0)),
        geom::Isometry::identity(Model::HalfPlane));
    const cocycle::IsometryCocycle id(Model::HalfPlane, 2, 0, std::move(table));
    std::vector<geom::BoundaryPoint> a_table(
        static_cast<size_t>(base::cylinder_count(2, 0)),
        geom::BoundaryPoint::half_plane_infinity());
    std::vector<geom::BoundaryPoint> b_table(
        static_cast<size_t>(base::cylinder_count(2, 0)),
        geom::BoundaryPoint::half_plane(0.0));
    const cocycle::BoundarySection alpha(Model::HalfPlane, 2, 0, std::move(a_table));
    const cocycle::BoundarySection beta(Model::HalfPlane, 2, 0, std::move(b_table));
    io::write_file((dir / "cocycle.json").string(), io::dump(io::cocycle_to_json(id)));
    io::write_file((dir / "alpha.json").string(),
                   io::dump(io::boundary_section_to_json(alpha)));
    io::write_file((dir / "beta.json").string(),
                   io::dump(io::boundary_section_to_json(beta)));

    ExperimentConfig cfg = small_config();
    cfg.depth = 3;
    cfg.cocycle_source = "file";
    cfg.cocycle_file = (dir / "cocycle.json").string();
    cfg.alpha_file = (dir / "alpha.json").string();
    cfg.beta_file = (dir / "beta.json").string();
    const auto out = io::run_reduce(cfg);
    CHECK(out.pass);
    const auto section = io::interior_section_from_json(
        out.result.at("sections").at("interior"));
    const geom::ModelPoint first = section.at_index(0);
    for (long i = 0; i < section.size(); ++i)
      CHECK(geom::distance(section.at_index(i), first) <= 1e-9);
  }

  SUBCASE("generated files feed back through the reduce pipeline") {
    ExperimentConfig gen_cfg = small_config();
    const auto gen = io::run_gen(gen_cfg);
    io::write_file((dir / "gc.json").string(), io::dump(gen.cocycle));
    io::write_file((dir / "ga.json").string(), io::dump(gen.alpha));
    io::write_file((dir / "gb.json").string(), io::dump(gen.beta));

    ExperimentConfig cfg = small_config();
    cfg.cocycle_source = "file";
    cfg.cocycle_file = (dir / "gc.json").string();
    cfg.alpha_file = (dir / "ga.json").string();
    cfg.beta_file = (dir / "gb.json").string();
    const auto out = io::run_reduce(cfg);
    CHECK(out.pass);
    CHECK(out.report.at("residuals").at("invariance").get<double>() <= 1e-6);
  }

  SUBCASE("a corrupted section file is rejected with the invariance error") {
    ExperimentConfig gen_cfg = small_config();
    const auto gen = io::run_gen(gen_cfg);
    json corrupted = gen.alpha;
    auto& entries = corrupted.at("entries");
    auto first = entries.begin();
    (*first)["u"] = 0.123;
    (*first)["v"] = 0.8;
    io::write_file((dir / "cc.json").string(), io::dump(gen.cocycle));
    io::write_file((dir / "ca.json").string(), io::dump(corrupted));
    io::write_file((dir / "cb.json").string(), io::dump(gen.beta));

    ExperimentConfig cfg = small_config();
    cfg.cocycle_source = "file";
    cfg.cocycle_file = (dir / "cc.json").string();
    cfg.alpha_file = (dir / "ca.json").string();
    cfg.beta_file = (dir / "cb.json").string();
    CHECK_THROWS_AS(io::run_reduce(cfg), InvarianceError);
  }

  SUBCASE("missing section files are a config error") {
    ExperimentConfig cfg = small_config();
    cfg.cocycle_source = "file";
    cfg.cocycle_file = (dir / "cocycle.json").string();
    CHECK_THROWS_AS(io::run_reduce(cfg), ConfigError);
  }
}

TEST_CASE("real sections round-trip bit exactly") {
  Rng rng(84);
  std::vector<double> values;
  for (int i = 0; i < base::cylinder_count(2, 2); ++i)
    values.push_back(rng.uniform(-10.0, 10.0));
  const cocycle::RealSection u(Model::HalfPlane, 2, 2, values);
  const auto back =
      io::real_section_from_json(json::parse(io::dump(io::real_section_to_json(u))));
  for (long i = 0; i < u.size(); ++i) CHECK(bit_equal(u.at_index(i), back.at_index(i)));
}

TEST_CASE("livsic report accepts an input table from a file") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "horo_psi_file";
  fs::create_directories(dir);
  Rng rng(85);
  const auto psi = livsic::telescoped(sampling::random_real_cocycle(2, 1, rng));
  io::write_file((dir / "psi.json").string(), io::dump(io::real_cocycle_to_json(psi)));

  ExperimentConfig cfg = small_config();
  cfg.psi_file = (dir / "psi.json").string();
  const auto out = io::run_livsic(cfg);
  CHECK(out.pass);
  CHECK(out.report.at("solve").at("residual").get<double>() <= 1e-10);
}

TEST_CASE("ppo report orbit totals match the necklace count") {
  ExperimentConfig cfg = small_config();
  cfg.max_period = 6;
  const auto report = io::ppo_report(cfg);
  CHECK(report.at("orbit_count").get<long>() == oracles::necklace_count(2, 6));
}

TEST_CASE("reduce report on a generated instance passes its thresholds") {
  ExperimentConfig cfg = small_config();
  cfg.samples = 1000;
  const auto out = io::run_reduce(cfg);
  CHECK(out.pass);
  const auto& residuals = out.report.at("residuals");
  CHECK(residuals.at("invariance").get<double>() <= cfg.invariance_tol);
  CHECK(residuals.at("factor").get<double>() <= cfg.factor_tol);
  CHECK(residuals.at("truth_gap").get<double>() <= 1e-5);
  CHECK(out.result.at("sections").contains("interior"));
  CHECK(out.residual_csv.rfind("word,residual\n", 0) == 0);

  // determinism of the full reduce artifacts
  const auto out2 = io::run_reduce(cfg);
  CHECK(io::dump(out.report) == io::dump(out2.report));
  CHECK(io::dump(out.result) == io::dump(out2.result));
  CHECK(out.residual_csv == out2.residual_csv);
}
