#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "entangle/grid.hpp"
#include "entangle/scenarios.hpp"

namespace entangle::cli {

inline constexpr int kSchemaVersion = 1;

enum class ScenarioKind { example, custom, popper, check };
enum class OutputFormat { table, csv, json };

struct GridConfig {
  std::size_t n = 256;
  double dx = 0.08;
  double x0 = 0.0;

  GridSpec spec() const { return GridSpec(n, dx, x0); }
  bool operator==(const GridConfig&) const = default;
};

struct PaperParams {
  double a = 1.0;
  double k0 = 1.0;
  bool operator==(const PaperParams&) const = default;
};

struct TermConfig {
  double re = 1.0, im = 0.0;
  double mu1 = 0.0, sigma1 = 1.0, mu2 = 0.0, sigma2 = 1.0;
  bool operator==(const TermConfig&) const = default;
};

/// Exactly one of `paper` and `terms` is set.
struct StateConfig {
  std::optional<PaperParams> paper;
  std::vector<TermConfig> terms;
  bool symmetrize = false;
  Parity sign = Parity::symmetric;
  bool operator==(const StateConfig&) const = default;
};

struct PopperConfig {
  SlitWindow slit_a;
  std::optional<SlitWindow> slit_b;
  std::vector<double> sweep;  ///< widths for slit A; empty means slit_a.width only
  bool operator==(const PopperConfig&) const = default;
};

struct CheckConfig {
  std::uint64_t seed = 42;
  int count = 100;
  bool operator==(const CheckConfig&) const = default;
};

struct OutputConfig {
  OutputFormat format = OutputFormat::table;
  std::optional<std::string> path;
  int precision = 9;
  bool operator==(const OutputConfig&) const = default;
};

/// kind selects the required sections: example and popper need state.paper,
/// custom needs state (paper or terms), popper needs popper, check needs
/// neither state nor popper.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::example;
  double hbar = 1.0;
  GridConfig grid;
  std::optional<StateConfig> state;
  std::optional<PopperConfig> popper;
  std::optional<CheckConfig> check;
  OutputConfig output;

  /// ConfigError naming the offending field.
  void validate() const;
  GaussianSum gaussian_sum() const;

  bool operator==(const ScenarioConfig&) const = default;
};

std::string to_string(ScenarioKind k);
std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& s);

/// Parses YAML, or JSON when `source_name` ends in ".json". ConfigError
/// messages carry the field path and, for YAML, the source line.
ScenarioConfig parse_config(const std::string& text, const std::string& source_name = "<config>");
ScenarioConfig load_config(const std::string& path);

nlohmann::ordered_json to_json(const ScenarioConfig& cfg);
std::string to_yaml(const ScenarioConfig& cfg);

}  // namespace entangle::cli
