#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcloc/config.hpp"
#include "mcloc/engine.hpp"
#include "mcloc/radio.hpp"
#include "mcloc/requests.hpp"

namespace mcloc {

struct MetricsReport {
  double nb_msg = 0.0;  // NaN when there were no requests
  double rtime = 0.0;   // seconds; NaN when nothing completed
  std::int64_t total_messages = 0;
  std::int64_t n_requests = 0;
  std::int64_t n_resolved = 0;
  std::int64_t n_failed = 0;
  std::int64_t n_inflight = 0;
  std::int64_t n_correct = 0;  // resolved with the true host named
  std::int64_t n_clean = 0;    // resolved with no concurrent jump
  std::int64_t n_clean_correct = 0;
  double measured_mob = 0.0;
  std::array<std::int64_t, kMessageKindCount> by_kind{};
  int handoffs = 0;
  bool aborted = false;
  std::string abort_reason;
};

/// Messages per localization request. Throws UndefinedMetric when n_requests == 0.
double compute_nb_msg(std::int64_t total_messages, std::int64_t n_requests);
/// Mean completion time of finished requests (failures contribute the time
/// until they were declared failed). Throws UndefinedMetric when none finished.
double compute_rtime(const std::vector<RequestRecord>& window_requests);

struct RunOptions {
  bool trace_events = false;
};

struct RunResult {
  ScenarioConfig config;
  MetricsReport report;
  std::vector<RequestRecord> requests;  // every request, warm-up included
  std::unique_ptr<MessageLedger> ledger;
  std::unique_ptr<Mobility> mobility;
  std::vector<TraceEntry> trace;
};

/// Runs one scenario to completion. Throws ParameterError for an invalid
/// config and InvariantViolation when an internal check fails; a run cut
/// short by prolonged disconnection comes back with report.aborted set.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Fixed column order of result rows.
inline constexpr const char* kResultsHeader =
    "protocol,lambda,node_mob_target,measured_mob,code_band,seed,n_requests,n_failed,"
    "total_messages,nb_msg,rtime_s,aborted";

std::string format_result_row(const ScenarioConfig& cfg, const MetricsReport& r);
/// Same row with explicit seed and aborted fields (used for averaged rows).
std::string format_result_row(const ScenarioConfig& cfg, const MetricsReport& r,
                              std::string_view seed_field, std::string_view aborted_field);
void print_report(std::ostream& out, const ScenarioConfig& cfg, const MetricsReport& r);

}  // namespace mcloc
