#include "horo/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "horo/sampling.hpp"
#include "horo/verification.hpp"

namespace horo::io {

namespace {

std::string word_key(long idx, int alphabet, int depth) {
  return geom::word_to_string(base::index_to_word(idx, alphabet, depth));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json suite_to_json(const verification::SuiteReport& r) {
  json items = json::array();
  for (const auto& it : r.items)
    items.push_back(json{{"name", it.name},
                         {"statistic", it.statistic},
                         {"threshold", it.threshold},
                         {"relation", it.relation},
                         {"pass", it.pass},
                         {"instances", it.instances}});
  return json{{"pass", r.pass()}, {"items", items}};
}

json orbit_rows(const cocycle::PpoReport& r) {
  json rows = json::array();
  for (const auto& o : r.orbits)
    rows.push_back(json{{"period", o.orbit.period},
                        {"word", geom::word_to_string(o.orbit.word)},
                        {"displacement", o.displacement}});
  return rows;
}

cocycle::IsometryCocycle build_cocycle(const ExperimentConfig& cfg) {
  if (cfg.cocycle_source == "file") {
    if (cfg.cocycle_file.empty()) throw ConfigError("ppo/reduce: cocycle file missing");
    auto A = cocycle_from_json(json::parse(read_file(cfg.cocycle_file)));
    if (A.model() != cfg.model)
      throw ConfigError("ppo/reduce: cocycle file model does not match the config");
    return A;
  }
  Rng rng(cfg.seed);
  if (cfg.generator_kind == "constant") {
    const geom::Isometry g = sampling::random_nonidentity_isometry(cfg.model, rng);
    std::vector<geom::Isometry> table(
        static_cast<size_t>(base::cylinder_count(cfg.alphabet, 0)), g);
    return cocycle::IsometryCocycle(cfg.model, cfg.alphabet, 0, std::move(table));
  }
  if (cfg.generator_kind == "random")
    return sampling::random_cocycle(cfg.model, cfg.alphabet, cfg.generator_depth, rng);
  // default: hidden coboundary
  return sampling::coboundary_setup(cfg.model, cfg.alphabet, cfg.generator_depth,
                                    cfg.depth, cfg.seed)
      .instance.cocycle;
}

geom::ModelPoint config_h0(const ExperimentConfig& cfg) {
  if (cfg.model == geom::Model::HalfPlane)
    return geom::ModelPoint::half_plane(cfg.h0_x, cfg.h0_y);
  return geom::ModelPoint::tree(geom::word_from_string(cfg.h0_addr));
}

}  // namespace

std::string model_name(geom::Model model) {
  return model == geom::Model::HalfPlane ? "halfplane" : "tree";
}

geom::Model model_from_name(const std::string& name) {
  if (name == "halfplane") return geom::Model::HalfPlane;
  if (name == "tree") return geom::Model::Tree;
  throw ConfigError("unknown model '" + name + "' (expected halfplane or tree)");
}

json point_to_json(const geom::ModelPoint& p) {
  if (p.model == geom::Model::HalfPlane) return json{{"x", p.x}, {"y", p.y}};
  return json{{"addr", geom::word_to_string(p.addr)}};
}

geom::ModelPoint point_from_json(const json& j, geom::Model model) {
  if (model == geom::Model::HalfPlane)
    return geom::ModelPoint::half_plane(j.at("x").get<double>(), j.at("y").get<double>());
  return geom::ModelPoint::tree(geom::word_from_string(j.at("addr").get<std::string>()));
}

json boundary_to_json(const geom::BoundaryPoint& b) {
  if (b.model == geom::Model::HalfPlane) return json{{"u", b.u}, {"v", b.v}};
  return json{{"prefix", geom::word_to_string(b.prefix)},
              {"cycle", geom::word_to_string(b.cycle)}};
}

geom::BoundaryPoint boundary_from_json(const json& j, geom::Model model) {
  if (model == geom::Model::HalfPlane)
    return geom::BoundaryPoint::projective(j.at("u").get<double>(),
                                           j.at("v").get<double>());
  return geom::BoundaryPoint::tree_end(
      geom::word_from_string(j.at("prefix").get<std::string>()),
      geom::word_from_string(j.at("cycle").get<std::string>()));
}

json isometry_to_json(const geom::Isometry& g) {
  if (g.model == geom::Model::HalfPlane)
    return json{{"matrix", {g.a, g.b, g.c, g.d}}};
  return json{{"root_image", geom::word_to_string(g.root_image)},
              {"perm", {g.letter_perm[0], g.letter_perm[1], g.letter_perm[2]}}};
}

geom::Isometry isometry_from_json(const json& j, geom::Model model) {
  if (model == geom::Model::HalfPlane) {
    const auto& m = j.at("matrix");
    return geom::Isometry::half_plane(m.at(0).get<double>(), m.at(1).get<double>(),
                                      m.at(2).get<double>(), m.at(3).get<double>());
  }
  const auto& p = j.at("perm");
  return geom::Isometry::tree(
      geom::word_from_string(j.at("root_image").get<std::string>()),
      {p.at(0).get<std::uint8_t>(), p.at(1).get<std::uint8_t>(),
       p.at(2).get<std::uint8_t>()});
}

json cocycle_to_json(const cocycle::IsometryCocycle& A) {
  json entries = json::object();
  for (long i = 0; i < A.size(); ++i)
    entries[word_key(i, A.alphabet(), A.depth())] = isometry_to_json(A.at_index(i));
  return json{{"schema_version", kSchemaVersion},
              {"type", "isometry_cocycle"},
              {"model", model_name(A.model())},
              {"alphabet", A.alphabet()},
              {"depth", A.depth()},
              {"entries", entries}};
}

cocycle::IsometryCocycle cocycle_from_json(const json& j) {
  const geom::Model model = model_from_name(j.at("model").get<std::string>());
  const int alphabet = j.at("alphabet").get<int>();
  const int depth = j.at("depth").get<int>();
  const long n = base::cylinder_count(alphabet, depth);
  std::vector<geom::Isometry> table;
  table.reserve(static_cast<size_t>(n));
  const auto& entries = j.at("entries");
  for (long i = 0; i < n; ++i)
    table.push_back(isometry_from_json(entries.at(word_key(i, alphabet, depth)), model));
  return cocycle::IsometryCocycle(model, alphabet, depth, std::move(table));
}

json real_cocycle_to_json(const livsic::RealCocycle& psi) {
  json entries = json::object();
  for (long i = 0; i < psi.size(); ++i)
    entries[word_key(i, psi.alphabet(), psi.depth())] = psi.at_index(i);
  return json{{"schema_version", kSchemaVersion},
              {"type", "real_cocycle"},
              {"alphabet", psi.alphabet()},
              {"depth", psi.depth()},
              {"entries", entries}};
}

livsic::RealCocycle real_cocycle_from_json(const json& j) {
  const int alphabet = j.at("alphabet").get<int>();
  const int depth = j.at("depth").get<int>();
  const long n = base::cylinder_count(alphabet, depth);
  std::vector<double> table;
  table.reserve(static_cast<size_t>(n));
  const auto& entries = j.at("entries");
  for (long i = 0; i < n; ++i)
    table.push_back(entries.at(word_key(i, alphabet, depth)).get<double>());
  return livsic::RealCocycle(alphabet, depth, std::move(table));
}

json boundary_section_to_json(const cocycle::BoundarySection& s) {
  json entries = json::object();
  for (long i = 0; i < s.size(); ++i)
    entries[word_key(i, s.alphabet(), s.depth())] = boundary_to_json(s.at_index(i));
  return json{{"schema_version", kSchemaVersion},
              {"type", "boundary_section"},
              {"model", model_name(s.model())},
              {"alphabet", s.alphabet()},
              {"depth", s.depth()},
              {"entries", entries}};
}

cocycle::BoundarySection boundary_section_from_json(const json& j) {
  const geom::Model model = model_from_name(j.at("model").get<std::string>());
  const int alphabet = j.at("alphabet").get<int>();
  const int depth = j.at("depth").get<int>();
  const long n = base::cylinder_count(alphabet, depth);
  std::vector<geom::BoundaryPoint> table;
  table.reserve(static_cast<size_t>(n));
  const auto& entries = j.at("entries");
  for (long i = 0; i < n; ++i)
    table.push_back(boundary_from_json(entries.at(word_key(i, alphabet, depth)), model));
  return cocycle::BoundarySection(model, alphabet, depth, std::move(table));
}

json interior_section_to_json(const cocycle::InteriorSection& s) {
  json entries = json::object();
  for (long i = 0; i < s.size(); ++i)
    entries[word_key(i, s.alphabet(), s.depth())] = point_to_json(s.at_index(i));
  return json{{"schema_version", kSchemaVersion},
              {"type", "interior_section"},
              {"model", model_name(s.model())},
              {"alphabet", s.alphabet()},
              {"depth", s.depth()},
              {"entries", entries}};
}

cocycle::InteriorSection interior_section_from_json(const json& j) {
  const geom::Model model = model_from_name(j.at("model").get<std::string>());
  const int alphabet = j.at("alphabet").get<int>();
  const int depth = j.at("depth").get<int>();
  const long n = base::cylinder_count(alphabet, depth);
  std::vector<geom::ModelPoint> table;
  table.reserve(static_cast<size_t>(n));
  const auto& entries = j.at("entries");
  for (long i = 0; i < n; ++i)
    table.push_back(point_from_json(entries.at(word_key(i, alphabet, depth)), model));
  return cocycle::InteriorSection(model, alphabet, depth, std::move(table));
}

json real_section_to_json(const cocycle::RealSection& s) {
  json entries = json::object();
  for (long i = 0; i < s.size(); ++i)
    entries[word_key(i, s.alphabet(), s.depth())] = s.at_index(i);
  return json{{"schema_version", kSchemaVersion},
              {"type", "real_section"},
              {"alphabet", s.alphabet()},
              {"depth", s.depth()},
              {"entries", entries}};
}

cocycle::RealSection real_section_from_json(const json& j) {
  const int alphabet = j.at("alphabet").get<int>();
  const int depth = j.at("depth").get<int>();
  const long n = base::cylinder_count(alphabet, depth);
  std::vector<double> table;
  table.reserve(static_cast<size_t>(n));
  const auto& entries = j.at("entries");
  for (long i = 0; i < n; ++i)
    table.push_back(entries.at(word_key(i, alphabet, depth)).get<double>());
  return cocycle::RealSection(geom::Model::HalfPlane, alphabet, depth,
                              std::move(table));
}

// ---- config ----

geom::ModelPoint ExperimentConfig::base_point() const {
  if (!has_base_point) return geom::default_base_point(model);
  if (model == geom::Model::HalfPlane)
    return geom::ModelPoint::half_plane(base_x, base_y);
  return geom::ModelPoint::tree(geom::word_from_string(base_addr));
}

json ExperimentConfig::to_json() const {
  return json{{"schema_version", kSchemaVersion},
              {"model", model_name(model)},
              {"alphabet", alphabet},
              {"seed", seed},
              {"epsilon", epsilon},
              {"depth", depth},
              {"generator_depth", generator_depth},
              {"orbit_budget", orbit_budget},
              {"samples", samples},
              {"instances", instances},
              {"max_period", max_period},
              {"tolerances",
               {{"lemma", tol},
                {"invariance", invariance_tol},
                {"ppo", ppo_tol},
                {"ppo_real", ppo_real_tol},
                {"factor", factor_tol}}},
              {"probe_count", probe_count},
              {"cocycle", {{"source", cocycle_source}, {"kind", generator_kind}}},
              {"files",
               {{"cocycle", cocycle_file},
                {"alpha", alpha_file},
                {"beta", beta_file},
                {"psi", psi_file}}},
              {"out_dir", out_dir}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  if (j.contains("model")) cfg.model = model_from_name(j.at("model").get<std::string>());
  if (j.contains("alphabet")) cfg.alphabet = j.at("alphabet").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
  if (j.contains("depth")) cfg.depth = j.at("depth").get<int>();
  if (j.contains("generator_depth"))
    cfg.generator_depth = j.at("generator_depth").get<int>();
  if (j.contains("orbit_budget")) cfg.orbit_budget = j.at("orbit_budget").get<long>();
  if (j.contains("samples")) cfg.samples = j.at("samples").get<long>();
  if (j.contains("instances")) cfg.instances = j.at("instances").get<int>();
  if (j.contains("max_period")) cfg.max_period = j.at("max_period").get<int>();
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (t.contains("lemma")) cfg.tol = t.at("lemma").get<double>();
    if (t.contains("invariance")) cfg.invariance_tol = t.at("invariance").get<double>();
    if (t.contains("ppo")) cfg.ppo_tol = t.at("ppo").get<double>();
    if (t.contains("ppo_real")) cfg.ppo_real_tol = t.at("ppo_real").get<double>();
    if (t.contains("factor")) cfg.factor_tol = t.at("factor").get<double>();
  }
  if (j.contains("cocycle")) {
    const auto& c = j.at("cocycle");
    if (c.contains("source")) cfg.cocycle_source = c.at("source").get<std::string>();
    if (c.contains("kind")) cfg.generator_kind = c.at("kind").get<std::string>();
  }
  if (j.contains("files")) {
    const auto& f = j.at("files");
    if (f.contains("cocycle")) cfg.cocycle_file = f.at("cocycle").get<std::string>();
    if (f.contains("alpha")) cfg.alpha_file = f.at("alpha").get<std::string>();
    if (f.contains("beta")) cfg.beta_file = f.at("beta").get<std::string>();
    if (f.contains("psi")) cfg.psi_file = f.at("psi").get<std::string>();
  }
  if (j.contains("h0")) {
    cfg.has_h0 = true;
    const auto& h = j.at("h0");
    if (h.contains("x")) cfg.h0_x = h.at("x").get<double>();
    if (h.contains("y")) cfg.h0_y = h.at("y").get<double>();
    if (h.contains("addr")) cfg.h0_addr = h.at("addr").get<std::string>();
  }
  if (j.contains("base_point")) {
    cfg.has_base_point = true;
    const auto& b = j.at("base_point");
    if (b.contains("x")) cfg.base_x = b.at("x").get<double>();
    if (b.contains("y")) cfg.base_y = b.at("y").get<double>();
    if (b.contains("addr")) cfg.base_addr = b.at("addr").get<std::string>();
  }
  if (j.contains("probe_count")) cfg.probe_count = j.at("probe_count").get<int>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (alphabet < 2 || alphabet > 6) throw ConfigError("config: alphabet must be in [2, 6]");
  if (depth < 1 || depth > 12) throw ConfigError("config: depth must be in [1, 12]");
  if (generator_depth < 0 || generator_depth > depth)
    throw ConfigError("config: generator_depth must be in [0, depth]");
  if (!(epsilon > 0.0)) throw ConfigError("config: epsilon must be positive");
  for (double t : {tol, invariance_tol, ppo_tol, ppo_real_tol, factor_tol})
    if (!(t > 0.0)) throw ConfigError("config: tolerances must be positive");
  if (samples < 1) throw ConfigError("config: samples must be positive");
  if (instances < 1) throw ConfigError("config: instances must be positive");
  if (max_period < 1 || max_period > 16)
    throw ConfigError("config: max_period must be in [1, 16]");
  if (probe_count < 1 || probe_count > 8)
    throw ConfigError("config: probe_count must be in [1, 8]");
  if (cocycle_source != "generator" && cocycle_source != "file")
    throw ConfigError("config: cocycle source must be generator or file");
}

ExperimentConfig load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return ExperimentConfig::from_json(j);
}

// ---- reports ----

json lemma_report(const ExperimentConfig& cfg) {
  Rng master(cfg.seed);
  const auto busemann =
      verification::busemann_suite(cfg.model, cfg.instances, master.next(), cfg.tol);
  const auto actions =
      verification::boundary_action_suite(cfg.model, cfg.instances, master.next(), 1e-9);
  const auto strong = verification::strong_hyperbolicity_suite(
      cfg.model, cfg.epsilon, cfg.samples, std::min(cfg.instances, 200), master.next());
  const auto regularity = verification::regularity_suite(
      cfg.model, std::min(cfg.instances, 40), master.next());
  const bool pass =
      busemann.pass() && actions.pass() && strong.pass() && regularity.pass();
  return json{{"schema_version", kSchemaVersion},
              {"command", "verify-lemmas"},
              {"model", model_name(cfg.model)},
              {"seed", cfg.seed},
              {"epsilon", cfg.epsilon},
              {"instances", cfg.instances},
              {"samples", cfg.samples},
              {"tolerance", cfg.tol},
              {"suites",
               {{"busemann", suite_to_json(busemann)},
                {"boundary_action", suite_to_json(actions)},
                {"strong_hyperbolicity", suite_to_json(strong)},
                {"regularity", suite_to_json(regularity)}}},
              {"pass", pass}};
}

json ppo_report(const ExperimentConfig& cfg) {
  const cocycle::IsometryCocycle A = build_cocycle(cfg);
  const geom::ModelPoint p = cfg.base_point();
  auto probes = geom::default_probe_points(A.model(), p);
  probes.resize(static_cast<size_t>(cfg.probe_count));
  auto boundary_probes = geom::default_boundary_probes(A.model());
  boundary_probes.resize(static_cast<size_t>(cfg.probe_count));
  const auto interior =
      cocycle::periodic_obstruction_check(A, cfg.max_period, cfg.ppo_tol, probes);
  const auto boundary = cocycle::boundary_periodic_obstruction_check(
      A, cfg.max_period, cfg.ppo_tol, boundary_probes);
  return json{{"schema_version", kSchemaVersion},
              {"command", "ppo"},
              {"model", model_name(A.model())},
              {"seed", cfg.seed},
              {"max_period", cfg.max_period},
              {"tolerance", cfg.ppo_tol},
              {"orbit_count", static_cast<long>(interior.orbits.size())},
              {"interior",
               {{"pass", interior.pass},
                {"max_displacement", interior.max_displacement},
                {"orbits", orbit_rows(interior)}}},
              {"boundary",
               {{"pass", boundary.pass},
                {"max_displacement", boundary.max_displacement},
                {"orbits", orbit_rows(boundary)}}},
              {"pass", interior.pass && boundary.pass}};
}

LivsicOutput run_livsic(const ExperimentConfig& cfg) {
  livsic::RealCocycle psi = [&] {
    if (!cfg.psi_file.empty())
      return real_cocycle_from_json(json::parse(read_file(cfg.psi_file)));
    Rng rng(cfg.seed);
    if (cfg.generator_kind == "random")
      return sampling::random_real_cocycle(cfg.alphabet, cfg.generator_depth, rng);
    return livsic::telescoped(
        sampling::random_real_cocycle(cfg.alphabet, cfg.generator_depth, rng));
  }();

  const auto obstruction =
      livsic::periodic_sum_check(psi, cfg.max_period, cfg.ppo_real_tol);
  json orbits = json::array();
  for (const auto& o : obstruction.orbits)
    orbits.push_back(json{{"period", o.orbit.period},
                          {"word", geom::word_to_string(o.orbit.word)},
                          {"sum", o.sum}});

  LivsicOutput out;
  json report{{"schema_version", kSchemaVersion},
              {"command", "livsic"},
              {"model", model_name(cfg.model)},
              {"seed", cfg.seed},
              {"depth", cfg.depth},
              {"max_period", cfg.max_period},
              {"obstruction",
               {{"pass", obstruction.pass},
                {"max_abs_sum", obstruction.max_abs_sum},
                {"tolerance", cfg.ppo_real_tol},
                {"orbits", orbits}}}};
  if (!obstruction.pass) {
    report["pass"] = false;
    out.report = report;
    out.residual_csv = "word,residual\n";
    out.pass = false;
    return out;
  }

  livsic::SolveOptions opt;
  opt.depth = cfg.depth;
  opt.orbit_budget = cfg.orbit_budget;
  opt.obstruction_max_period = cfg.max_period;
  opt.obstruction_tol = cfg.ppo_real_tol;
  const base::TransitivePoint tp = base::transitive_point(cfg.alphabet, cfg.depth);
  const livsic::RealSolution sol = livsic::solve(psi, tp.point, 0.0, opt);

  report["solve"] = json{{"depth", cfg.depth},
                         {"steps", sol.steps},
                         {"residual", sol.residual},
                         {"holder_estimate", sol.holder_estimate},
                         {"tabulation_bound", sol.tabulation_bound},
                         {"float_term", sol.float_term}};
  report["u"] = real_section_to_json(sol.section);
  const bool pass = sol.residual <= sol.tabulation_bound + cfg.ppo_real_tol;
  report["pass"] = pass;

  std::ostringstream csv;
  csv << "word,residual\n";
  const int D = std::max(cfg.depth + 1, psi.depth());
  const long total = base::cylinder_count(cfg.alphabet, D);
  for (long idx = 0; idx < total; ++idx) {
    const double r = std::abs(sol.section.at_subindex(idx, D, 1) -
                              sol.section.at_subindex(idx, D, 0) -
                              psi.at_subindex(idx, D, 0));
    csv << word_key(idx, cfg.alphabet, D) << "," << format_double(r) << "\n";
  }
  out.report = report;
  out.residual_csv = csv.str();
  out.pass = pass;
  return out;
}

ReduceOutput run_reduce(const ExperimentConfig& cfg) {
  reduction::PipelineOptions opt;
  opt.depth = cfg.depth;
  opt.orbit_budget = cfg.orbit_budget;
  opt.invariance_tol = cfg.invariance_tol;
  opt.ppo_tol = cfg.ppo_tol;
  opt.ppo_max_period = cfg.max_period;
  opt.obstruction_max_period = cfg.max_period;
  opt.obstruction_tol = cfg.ppo_real_tol;

  ReduceOutput out;
  json report{{"schema_version", kSchemaVersion},
              {"command", "reduce"},
              {"model", model_name(cfg.model)},
              {"seed", cfg.seed},
              {"depth", cfg.depth}};

  const bool generator_mode = cfg.cocycle_source == "generator";
  std::optional<sampling::CoboundarySetup> setup;
  std::optional<cocycle::IsometryCocycle> loaded;
  std::optional<cocycle::BoundarySection> alpha, beta;
  geom::ModelPoint p = cfg.base_point();
  geom::ModelPoint h0 = p;
  base::BasePoint anchor = base::transitive_point(cfg.alphabet, cfg.depth).point;

  if (generator_mode) {
    setup.emplace(sampling::coboundary_setup(cfg.model, cfg.alphabet,
                                             cfg.generator_depth, cfg.depth, cfg.seed));
    alpha = setup->alpha;
    beta = setup->beta;
    p = setup->p;
    h0 = setup->h0;
    anchor = setup->anchor;
  } else {
    if (cfg.alpha_file.empty() || cfg.beta_file.empty())
      throw ConfigError("reduce: file mode needs alpha and beta section files");
    loaded.emplace(build_cocycle(cfg));
    alpha = boundary_section_from_json(json::parse(read_file(cfg.alpha_file)));
    beta = boundary_section_from_json(json::parse(read_file(cfg.beta_file)));
    if (cfg.has_h0) {
      h0 = config_h0(cfg);
    } else {
      const geom::Geodesic line =
          geom::geodesic_between_boundary((*beta)(anchor), (*alpha)(anchor), p);
      const double t0 = reduction::busemann_zero_parameter(line, p, (*alpha)(anchor),
                                                           opt.root_bracket, opt.root_tol);
      h0 = line.eval(t0);
    }
  }
  const cocycle::IsometryCocycle& A = generator_mode ? setup->instance.cocycle : *loaded;

  reduction::ReductionResult result =
      reduction::build_interior_section(A, *alpha, *beta, anchor, h0, p, opt);

  const double factor =
      reduction::factor_residual(A, *alpha, result.phi, p, cfg.samples, cfg.seed ^ 0x9E37);
  const auto phi_ppo =
      livsic::periodic_sum_check(result.phi.values, cfg.max_period, cfg.ppo_real_tol);

  bool pass = result.invariance <= cfg.invariance_tol && factor <= cfg.factor_tol &&
              phi_ppo.pass;

  json residuals{{"invariance", result.invariance},
                 {"factor", factor},
                 {"phi_orbit_sum", phi_ppo.max_abs_sum},
                 {"livsic_residual", result.solution.residual},
                 {"holder_estimate", result.solution.holder_estimate},
                 {"error_budget",
                  {{"busemann_eval", result.budget.busemann_eval},
                   {"tabulation", result.budget.tabulation},
                   {"root_solve", result.budget.root_solve},
                   {"total", result.budget.total()}}}};

  json transfer = json::object();
  if (generator_mode) {
    const cocycle::InteriorSection truth = setup->instance.interior_section(h0);
    const double truth_gap = reduction::section_gap(result.section, truth);
    residuals["truth_gap"] = truth_gap;
    pass = pass && truth_gap <= 1e-5;

    const auto all_probes = geom::default_probe_points(cfg.model, p);
    std::vector<geom::ModelPoint> anchors(all_probes.begin(), all_probes.begin() + 3);
    const reduction::SectionFamily family = sampling::section_family(setup->instance);
    const reduction::TransferReconstruction recon =
        reduction::reconstruct_transfer(A, anchor, anchors, family, p, opt);

    double transfer_truth_gap = 0.0;
    json anchors_json = json::array();
    json images = json::array();
    for (size_t i = 0; i < recon.anchors.size(); ++i) {
      anchors_json.push_back(point_to_json(recon.anchors[i]));
      images.push_back(interior_section_to_json(recon.images[i]));
      const cocycle::InteriorSection t = setup->instance.interior_section(recon.anchors[i]);
      transfer_truth_gap =
          std::max(transfer_truth_gap, reduction::section_gap(recon.images[i], t));
    }
    transfer = json{{"anchors", anchors_json},
                    {"images", images},
                    {"invariance", recon.invariance},
                    {"isometry_defect", recon.isometry_defect},
                    {"anchor_identity", recon.anchor_identity},
                    {"truth_gap", transfer_truth_gap}};
    pass = pass && transfer_truth_gap <= 1e-5 && recon.isometry_defect <= 1e-6 &&
           recon.invariance <= cfg.invariance_tol;
  }

  report["residuals"] = residuals;
  report["pass"] = pass;

  json provenance{{"model", model_name(cfg.model)},
                  {"alphabet", cfg.alphabet},
                  {"seed", cfg.seed},
                  {"depth", cfg.depth},
                  {"cocycle_depth", A.depth()},
                  {"alpha_depth", alpha->depth()},
                  {"beta_depth", beta->depth()},
                  {"base_point", point_to_json(p)},
                  {"h0", point_to_json(h0)},
                  {"source", cfg.cocycle_source}};
  json result_json{{"schema_version", kSchemaVersion},
                   {"type", "reduction_result"},
                   {"provenance", provenance},
                   {"residuals", residuals},
                   {"sections",
                    {{"u", real_section_to_json(result.solution.section)},
                     {"interior", interior_section_to_json(result.section)},
                     {"alpha", boundary_section_to_json(result.alpha)},
                     {"beta", boundary_section_to_json(result.beta)}}},
                   {"phi", real_cocycle_to_json(result.phi.values)}};
  if (generator_mode) result_json["transfer"] = transfer;

  std::ostringstream csv;
  csv << "word,residual\n";
  const int D = std::max(result.section.depth() + 1, A.depth());
  const long total = base::cylinder_count(cfg.alphabet, D);
  for (long idx = 0; idx < total; ++idx) {
    const geom::ModelPoint image = geom::apply_isometry(
        A.at_subindex(idx, D, 0), result.section.at_subindex(idx, D, 0));
    const double r = geom::distance(image, result.section.at_subindex(idx, D, 1));
    csv << word_key(idx, cfg.alphabet, D) << "," << format_double(r) << "\n";
  }

  out.report = report;
  out.result = result_json;
  out.residual_csv = csv.str();
  out.pass = pass;
  return out;
}

GenOutput run_gen(const ExperimentConfig& cfg) {
  const sampling::CoboundarySetup setup = sampling::coboundary_setup(
      cfg.model, cfg.alphabet, cfg.generator_depth, cfg.depth, cfg.seed);
  GenOutput out;
  out.cocycle = cocycle_to_json(setup.instance.cocycle);
  out.alpha = boundary_section_to_json(setup.alpha);
  out.beta = boundary_section_to_json(setup.beta);
  out.truth = json{{"schema_version", kSchemaVersion},
                   {"type", "coboundary_truth"},
                   {"generator", cocycle_to_json(setup.instance.generator)},
                   {"anchor", {{"kind", "transitive"}, {"depth", cfg.depth}}},
                   {"xi0", boundary_to_json(setup.xi0)},
                   {"eta0", boundary_to_json(setup.eta0)},
                   {"h0", point_to_json(setup.h0)},
                   {"base_point", point_to_json(setup.p)},
                   {"seed", cfg.seed}};
  out.meta = json{{"schema_version", kSchemaVersion},
                  {"command", "gen"},
                  {"model", model_name(cfg.model)},
                  {"alphabet", cfg.alphabet},
                  {"seed", cfg.seed},
                  {"generator_depth", cfg.generator_depth},
                  {"depth", cfg.depth}};
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  f << content;
  if (!f) throw Error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace horo::io
