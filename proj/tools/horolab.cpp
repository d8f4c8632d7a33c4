// Batch experiment driver: lemma verification suites, periodic-obstruction
// checks, cohomological-equation solves, full reductions and test-instance
// generation. Reports are deterministic JSON keyed by config + seed.
//
// Exit codes: 0 pass, 2 numerical failure, 3 config error, 4 resource cap.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "horo/serialize.hpp"

namespace {

namespace fs = std::filesystem;
using horo::io::ExperimentConfig;

constexpr int kExitPass = 0;
constexpr int kExitNumerical = 2;
constexpr int kExitConfig = 3;
constexpr int kExitResource = 4;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string model;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "experiment config (JSON)");
  cmd->add_option("--out", flags.out_dir, "output directory for reports");
  cmd->add_option("--model", flags.model, "model: halfplane or tree");
  cmd->add_option("--seed", flags.seed, "random seed (overrides config)");
  cmd->add_option("--tol", flags.tol, "lemma tolerance (overrides config)");
}

ExperimentConfig make_config(const CommonFlags& flags) {
  ExperimentConfig cfg;
  if (!flags.config_path.empty()) cfg = horo::io::load_config(flags.config_path);
  if (!flags.model.empty()) cfg.model = horo::io::model_from_name(flags.model);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.tol) cfg.tol = *flags.tol;
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  cfg.validate();
  return cfg;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

int cmd_verify_lemmas(const ExperimentConfig& cfg) {
  const auto report = horo::io::lemma_report(cfg);
  horo::io::write_file(out_path(cfg, "lemmas.json"), horo::io::dump(report));
  const bool pass = report.at("pass").get<bool>();
  std::cout << "verify-lemmas: " << (pass ? "pass" : "FAIL") << " (report "
            << out_path(cfg, "lemmas.json") << ")\n";
  return pass ? kExitPass : kExitNumerical;
}

int cmd_ppo(const ExperimentConfig& cfg) {
  const auto report = horo::io::ppo_report(cfg);
  horo::io::write_file(out_path(cfg, "ppo.json"), horo::io::dump(report));
  const bool pass = report.at("pass").get<bool>();
  std::cout << "ppo: " << (pass ? "pass" : "FAIL") << ", max displacement "
            << report.at("interior").at("max_displacement").get<double>() << "\n";
  return pass ? kExitPass : kExitNumerical;
}

int cmd_livsic(const ExperimentConfig& cfg) {
  const auto out = horo::io::run_livsic(cfg);
  horo::io::write_file(out_path(cfg, "livsic.json"), horo::io::dump(out.report));
  horo::io::write_file(out_path(cfg, "livsic_residuals.csv"), out.residual_csv);
  std::cout << "livsic: " << (out.pass ? "pass" : "FAIL") << "\n";
  return out.pass ? kExitPass : kExitNumerical;
}

int cmd_reduce(const ExperimentConfig& cfg) {
  const auto out = horo::io::run_reduce(cfg);
  horo::io::write_file(out_path(cfg, "reduce.json"), horo::io::dump(out.report));
  horo::io::write_file(out_path(cfg, "reduction_result.json"),
                       horo::io::dump(out.result));
  horo::io::write_file(out_path(cfg, "reduce_residuals.csv"), out.residual_csv);
  std::cout << "reduce: " << (out.pass ? "pass" : "FAIL") << ", invariance "
            << out.report.at("residuals").at("invariance").get<double>() << "\n";
  return out.pass ? kExitPass : kExitNumerical;
}

int cmd_gen(const ExperimentConfig& cfg) {
  const auto out = horo::io::run_gen(cfg);
  horo::io::write_file(out_path(cfg, "cocycle.json"), horo::io::dump(out.cocycle));
  horo::io::write_file(out_path(cfg, "alpha.json"), horo::io::dump(out.alpha));
  horo::io::write_file(out_path(cfg, "beta.json"), horo::io::dump(out.beta));
  horo::io::write_file(out_path(cfg, "truth.json"), horo::io::dump(out.truth));
  horo::io::write_file(out_path(cfg, "meta.json"), horo::io::dump(out.meta));
  std::cout << "gen: instance written to " << cfg.out_dir << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"horolab: cocycles by isometries over the full shift"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* verify = app.add_subcommand("verify-lemmas", "run the geometry suites");
  auto* ppo = app.add_subcommand("ppo", "periodic obstruction check of a cocycle");
  auto* livsic = app.add_subcommand("livsic", "solve the real cohomological equation");
  auto* reduce = app.add_subcommand("reduce", "boundary-to-interior reduction pipeline");
  auto* gen = app.add_subcommand("gen", "emit a hidden-coboundary test instance");
  for (auto* cmd : {verify, ppo, livsic, reduce, gen}) add_common(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    const ExperimentConfig cfg = make_config(flags);
    if (verify->parsed()) return cmd_verify_lemmas(cfg);
    if (ppo->parsed()) return cmd_ppo(cfg);
    if (livsic->parsed()) return cmd_livsic(cfg);
    if (reduce->parsed()) return cmd_reduce(cfg);
    if (gen->parsed()) return cmd_gen(cfg);
    return kExitConfig;
  } catch (const horo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const horo::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const horo::ObstructionError& e) {
    std::cerr << "obstruction: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const horo::CoverageError& e) {
    std::cerr << "coverage: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const horo::InvarianceError& e) {
    std::cerr << "invariance: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const horo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
