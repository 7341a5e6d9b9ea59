#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entangle/cli/config.hpp"
#include "entangle/relations.hpp"
#include "entangle/scenarios.hpp"

namespace entangle::cli {

struct PopperRow {
  double width = 0.0;
  PopperReport report;
};

struct ScenarioResult {
  ScenarioConfig config;
  MomentSet moments;  ///< grid moments of the (symmetrized) source state
  UncertaintyReport relations;
  std::optional<PaperComparison> paper;
  std::vector<PopperRow> popper;
  /// Narrower slit A gives smaller conditioned dQ2; set for sweeps of 2+ widths.
  std::optional<bool> ghost_image_monotone;
  std::optional<TwoParticleState> state;
};

/// Runs example, custom and popper scenarios. Library errors propagate.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Values carry `precision` significant digits: fixed-width scientific in
/// tables, shortest round-trip of the rounded value in CSV and JSON.
std::string render(const ScenarioResult& result, OutputFormat format, int precision);

double round_to_digits(double v, int precision);
std::string table_number(double v, int precision);
std::string csv_number(double v, int precision);

}  // namespace entangle::cli
