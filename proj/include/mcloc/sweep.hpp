#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcloc/scenario.hpp"

namespace mcloc {

struct SweepAxes {
  std::vector<ProtocolKind> protocols;
  std::vector<double> lambdas;
  std::vector<MobilityBand> node_mobility;
  std::vector<MobilityBand> code_bands;
  std::vector<std::uint64_t> seeds;

  /// Axes left empty take the base config's single value.
  static SweepAxes from_base(const ScenarioConfig& base);
};

struct SweepCell {
  ScenarioConfig config;  // seed field holds the first seed
  std::vector<std::uint64_t> seeds;
  std::vector<MetricsReport> per_seed;
  MetricsReport mean;  // over non-aborted seeds
  int aborted_seeds = 0;
};

/// Runs every axis point for every seed. Cells are independent; `jobs`
/// worker threads may run them concurrently without changing the output.
std::vector<SweepCell> run_sweep(const ScenarioConfig& base, const SweepAxes& axes, int jobs = 1);

/// One row per (cell, seed) followed by one seed-averaged row per cell
/// (seed column "mean"; its aborted column counts aborted seeds).
void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);

/// Averages the non-aborted reports field by field.
MetricsReport average_reports(const std::vector<MetricsReport>& reports);

}  // namespace mcloc
