#include "mcloc/sweep.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace mcloc {

SweepAxes SweepAxes::from_base(const ScenarioConfig& base) {
  return SweepAxes{
      {base.protocol}, {base.lambda}, {base.node_mob_target}, {base.code_band}, {base.seed}};
}

MetricsReport average_reports(const std::vector<MetricsReport>& reports) {
  MetricsReport m;
  int n = 0;
  double nb = 0.0, rt = 0.0, mob = 0.0;
  double total = 0.0, req = 0.0, failed = 0.0, resolved = 0.0, inflight = 0.0;
  for (const auto& r : reports) {
    if (r.aborted) continue;
    ++n;
    nb += r.nb_msg;
    rt += r.rtime;
    mob += r.measured_mob;
    total += static_cast<double>(r.total_messages);
    req += static_cast<double>(r.n_requests);
    failed += static_cast<double>(r.n_failed);
    resolved += static_cast<double>(r.n_resolved);
    inflight += static_cast<double>(r.n_inflight);
    m.n_correct += r.n_correct;
    m.n_clean += r.n_clean;
    m.n_clean_correct += r.n_clean_correct;
    m.handoffs += r.handoffs;
    for (int k = 0; k < kMessageKindCount; ++k) m.by_kind[k] += r.by_kind[k];
  }
  if (n == 0) {
    m.aborted = true;
    m.nb_msg = m.rtime = m.measured_mob = std::nan("");
    return m;
  }
  m.nb_msg = nb / n;
  m.rtime = rt / n;
  m.measured_mob = mob / n;
  m.total_messages = std::llround(total / n);
  m.n_requests = std::llround(req / n);
  m.n_failed = std::llround(failed / n);
  m.n_resolved = std::llround(resolved / n);
  m.n_inflight = std::llround(inflight / n);
  return m;
}

std::vector<SweepCell> run_sweep(const ScenarioConfig& base, const SweepAxes& axes, int jobs) {
  if (axes.protocols.empty() || axes.lambdas.empty() || axes.node_mobility.empty() ||
      axes.code_bands.empty() || axes.seeds.empty()) {
    throw ParameterError("every sweep axis needs at least one value");
  }
  std::vector<SweepCell> cells;
  for (ProtocolKind p : axes.protocols) {
    for (double l : axes.lambdas) {
      for (MobilityBand nm : axes.node_mobility) {
        for (MobilityBand cb : axes.code_bands) {
          SweepCell c;
          c.config = base;
          c.config.protocol = p;
          c.config.lambda = l;
          c.config.node_mob_target = nm;
          c.config.node_speed.reset();
          c.config.code_band = cb;
          c.config.seed = axes.seeds.front();
          c.config.validate();
          c.seeds = axes.seeds;
          c.per_seed.resize(axes.seeds.size());
          cells.push_back(std::move(c));
        }
      }
    }
  }

  // Flat list of (cell, seed) tasks; each writes only its own slot.
  const std::size_t n_seeds = axes.seeds.size();
  const std::size_t n_tasks = cells.size() * n_seeds;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < n_tasks; i = next++) {
      SweepCell& cell = cells[i / n_seeds];
      ScenarioConfig cfg = cell.config;
      cfg.seed = axes.seeds[i % n_seeds];
      try {
        cell.per_seed[i % n_seeds] = run_scenario(cfg).report;
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(n_tasks)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  for (auto& c : cells) {
    c.mean = average_reports(c.per_seed);
    for (const auto& r : c.per_seed) c.aborted_seeds += r.aborted ? 1 : 0;
  }
  return cells;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
  out << kResultsHeader << '\n';
  for (const auto& c : cells) {
    for (std::size_t s = 0; s < c.per_seed.size(); ++s) {
      ScenarioConfig cfg = c.config;
      cfg.seed = c.seeds[s];
      out << format_result_row(cfg, c.per_seed[s]) << '\n';
    }
  }
  for (const auto& c : cells) {
    out << format_result_row(c.config, c.mean, "mean", std::to_string(c.aborted_seeds)) << '\n';
  }
}

}  // namespace mcloc
