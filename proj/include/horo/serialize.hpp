#pragma once

#include <string>

#include "json.hpp"

#include "horo/cocycle.hpp"
#include "horo/livsic.hpp"
#include "horo/reduction.hpp"

// JSON formats for cocycles, sections and reports, the experiment
// configuration, and the deterministic report builders that the CLI and the
// acceptance suite share. All document maps are keyed by fixed-length word
// strings so dumps are byte-stable for a given config and seed.
namespace horo::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

std::string model_name(geom::Model model);
geom::Model model_from_name(const std::string& name);

json point_to_json(const geom::ModelPoint& p);
geom::ModelPoint point_from_json(const json& j, geom::Model model);
json boundary_to_json(const geom::BoundaryPoint& b);
geom::BoundaryPoint boundary_from_json(const json& j, geom::Model model);
json isometry_to_json(const geom::Isometry& g);
geom::Isometry isometry_from_json(const json& j, geom::Model model);

json cocycle_to_json(const cocycle::IsometryCocycle& A);
cocycle::IsometryCocycle cocycle_from_json(const json& j);

json real_cocycle_to_json(const livsic::RealCocycle& psi);
livsic::RealCocycle real_cocycle_from_json(const json& j);

json boundary_section_to_json(const cocycle::BoundarySection& s);
cocycle::BoundarySection boundary_section_from_json(const json& j);
json interior_section_to_json(const cocycle::InteriorSection& s);
cocycle::InteriorSection interior_section_from_json(const json& j);
json real_section_to_json(const cocycle::RealSection& s);
cocycle::RealSection real_section_from_json(const json& j);

struct ExperimentConfig {
  geom::Model model = geom::Model::HalfPlane;
  int alphabet = 2;
  std::uint64_t seed = 42;
  double epsilon = 1.0;
  int depth = 6;
  int generator_depth = 2;
  long orbit_budget = 0;
  long samples = 10000;
  int instances = 100;
  int max_period = 6;
  double tol = 1e-8;
  double invariance_tol = 1e-6;
  double ppo_tol = 1e-9;
  double ppo_real_tol = 1e-8;
  double factor_tol = 1e-7;

  std::string cocycle_source = "generator";   // "generator" | "file"
  std::string generator_kind = "coboundary";  // "coboundary" | "constant" |
                                              // "telescoped" | "random"
  std::string cocycle_file;
  std::string alpha_file;
  std::string beta_file;
  std::string psi_file;
  std::string out_dir = ".";

  bool has_h0 = false;
  double h0_x = 0.0, h0_y = 1.0;
  std::string h0_addr;

  bool has_base_point = false;
  double base_x = 0.0, base_y = 1.0;
  std::string base_addr;

  int probe_count = 8;

  geom::ModelPoint base_point() const;

  json to_json() const;
  static ExperimentConfig from_json(const json& j);
  void validate() const;
};

ExperimentConfig load_config(const std::string& path);

// ---- deterministic report builders ----

json lemma_report(const ExperimentConfig& cfg);

json ppo_report(const ExperimentConfig& cfg);

struct LivsicOutput {
  json report;
  std::string residual_csv;
  bool pass = false;
};
LivsicOutput run_livsic(const ExperimentConfig& cfg);

struct ReduceOutput {
  json report;
  json result;
  std::string residual_csv;
  bool pass = false;
};
ReduceOutput run_reduce(const ExperimentConfig& cfg);

struct GenOutput {
  json cocycle;
  json alpha;
  json beta;
  json truth;
  json meta;
};
GenOutput run_gen(const ExperimentConfig& cfg);

// Stable serialization: two-space indentation plus trailing newline.
std::string dump(const json& j);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace horo::io
