#include "entangle/cli/app.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "entangle/cli/report.hpp"
#include "entangle/error.hpp"

namespace entangle::cli {
namespace {

struct GlobalFlags {
  std::optional<double> hbar;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<int> precision;
  std::optional<std::string> dump_state;
};

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::NegativeVarianceFactor:
    case ErrorKind::OracleDisagreement:
      return kExitInternal;
    default:
      return kExitInput;
  }
}

void apply_overrides(ScenarioConfig& cfg, const GlobalFlags& g) {
  if (g.hbar) cfg.hbar = *g.hbar;
  if (g.format) cfg.output.format = parse_format(*g.format);
  if (g.out) cfg.output.path = *g.out;
  if (g.precision) cfg.output.precision = *g.precision;
  cfg.validate();
}

void emit(const std::string& text, const OutputConfig& o, std::ostream& out) {
  if (!o.path) {
    out << text << std::flush;
    return;
  }
  std::ofstream f(*o.path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + *o.path);
  f << text;
}

int run_config(const ScenarioConfig& cfg, const GlobalFlags& g, std::ostream& out, std::ostream& err,
               const CheckHooks& hooks) {
  if (cfg.kind == ScenarioKind::check) {
    if (g.dump_state) throw Error(ErrorKind::InvalidArgument, "--debug-dump-state does not apply to check");
    const CheckResult r = run_check(*cfg.check, cfg.hbar, hooks);
    emit(render_check(r, cfg.output.format, cfg.output.precision), cfg.output, out);
    if (r.passed()) return kExitOk;
    for (const auto& p : r.properties)
      if (!p.passed()) err << "property " << p.name << " failed: " << p.first_failure << "\n";
    return kExitPropertyFailure;
  }
  const ScenarioResult r = run_scenario(cfg);
  if (g.dump_state) {
    std::ofstream f(*g.dump_state, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + *g.dump_state);
    write_csv(*r.state, f);
  }
  emit(render(r, cfg.output.format, cfg.output.precision), cfg.output, out);
  return kExitOk;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err, const CheckHooks& hooks) {
  CLI::App app{"Moments, covariances and uncertainty relations of entangled two-particle states"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--hbar", g.hbar, "Reduced Planck constant")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--out", g.out, "Write the report to this file instead of stdout");
  app.add_option("--precision", g.precision, "Significant digits")->check(CLI::Range(1, 17));
  app.add_option("--debug-dump-state", g.dump_state, "Write the source state as CSV j1,j2,re,im");

  double a = 1.0, k0 = 1.0, dx = 0.08, x0 = 0.0;
  std::size_t n = 256;
  auto* example = app.add_subcommand("example", "Paired-Gaussian example with oracle comparison");
  example->add_option("--a", a, "Position width parameter")->capture_default_str();
  example->add_option("--k0", k0, "Momentum separation")->capture_default_str();
  example->add_option("--n", n, "Grid points per axis")->capture_default_str();
  example->add_option("--dx", dx, "Grid spacing")->capture_default_str();
  example->add_option("--x0", x0, "Grid center")->capture_default_str();

  std::string analyze_path, popper_path;
  auto* analyze = app.add_subcommand("analyze", "Run a scenario file (YAML, or JSON by extension)");
  analyze->add_option("config", analyze_path)->required();
  auto* popper = app.add_subcommand("popper", "Run a popper scenario file");
  popper->add_option("config", popper_path)->required();

  CheckConfig check_cfg;
  auto* check = app.add_subcommand("check", "Randomized invariant suite");
  check->add_option("--seed", check_cfg.seed, "Base seed")->capture_default_str();
  check->add_option("--count", check_cfg.count, "Random states per property")->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    ScenarioConfig cfg;
    if (*example) {
      cfg.kind = ScenarioKind::example;
      cfg.grid = GridConfig{n, dx, x0};
      cfg.state = StateConfig{PaperParams{a, k0}, {}, false, Parity::symmetric};
    } else if (*check) {
      cfg.kind = ScenarioKind::check;
      cfg.check = check_cfg;
    } else if (*analyze) {
      cfg = load_config(analyze_path);
    } else {
      cfg = load_config(popper_path);
      if (cfg.kind != ScenarioKind::popper)
        throw Error(ErrorKind::ConfigError, popper_path + ": kind: popper command needs kind popper");
    }
    apply_overrides(cfg, g);
    return run_config(cfg, g, out, err, hooks);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace entangle::cli
