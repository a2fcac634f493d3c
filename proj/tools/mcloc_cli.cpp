// Command-line front end: run one scenario, sweep a grid, or compare protocols.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mcloc/scenario.hpp"
#include "mcloc/sweep.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitAborted = 2;
constexpr int kExitInvariant = 3;

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& s, Parse parse) {
  std::vector<T> out;
  for (const auto& item : split(s)) out.push_back(parse(item));
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw mcloc::ParameterError("not a number: '" + s + "'");
  return v;
}

std::uint64_t parse_seed(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used);
  if (used != s.size()) throw mcloc::ParameterError("not a seed: '" + s + "'");
  return v;
}

mcloc::ScenarioConfig load(const std::string& path, const std::vector<std::string>& overrides) {
  mcloc::ScenarioConfig cfg = mcloc::load_config(path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw mcloc::ParameterError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw mcloc::ParameterError("cannot write '" + path + "'");
  f << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobile-code localization protocols in ad hoc networks: simulator and harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;

  auto* run = app.add_subcommand("run", "Run a single scenario");
  run->add_option("config", config_path, "Scenario config file")->required();
  run->add_option("--set", overrides, "Override a config key (key=value); repeatable")
      ->allow_extra_args(false);
  run->add_option("--out", out_path, "Results CSV")->default_val("results.csv");
  std::string trace_path, messages_path;
  run->add_option("--dump-trace", trace_path,
                  "Write node trajectories (node_id,t,x,y) to this CSV");
  run->add_option("--dump-messages", messages_path, "Write the raw message log to this CSV");

  std::string lambdas, protocols, node_mob, code_bands, seeds;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a grid of scenarios");
  sweep->add_option("config", config_path, "Base scenario config file")->required();
  sweep->add_option("--set", overrides, "Override a config key (key=value); repeatable")
      ->allow_extra_args(false);
  sweep->add_option("--lambda", lambdas, "Comma-separated request rates");
  sweep->add_option("--protocols", protocols, "Comma-separated protocol names");
  sweep->add_option("--node-mob", node_mob, "Comma-separated node mobility presets");
  sweep->add_option("--code-bands", code_bands, "Comma-separated code mobility bands");
  sweep->add_option("--seeds", seeds, "Comma-separated seeds");
  sweep->add_option("--jobs", jobs, "Worker threads")->default_val(1);
  sweep->add_option("--out", out_path, "Sweep CSV")->default_val("sweep.csv");

  auto* compare = app.add_subcommand("compare", "Compare protocols on a shared seed set");
  compare->add_option("config", config_path, "Base scenario config file")->required();
  compare->add_option("--set", overrides, "Override a config key (key=value); repeatable")
      ->allow_extra_args(false);
  compare->add_option("--protocols", protocols, "Comma-separated protocol names")
      ->default_val("forwarder_reactive,forwarder_proactive,centralized,zoned");
  compare->add_option("--lambda", lambdas, "Comma-separated request rates");
  compare->add_option("--seeds", seeds, "Comma-separated seeds")->default_val("1,2,3,4,5");
  compare->add_option("--jobs", jobs, "Worker threads")->default_val(1);
  compare->add_option("--out", out_path, "Sweep CSV")->default_val("compare.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    const mcloc::ScenarioConfig base = load(config_path, overrides);

    if (*run) {
      const mcloc::RunResult res = mcloc::run_scenario(base);
      mcloc::print_report(std::cout, base, res.report);
      write_file(out_path, std::string(mcloc::kResultsHeader) + "\n" +
                               mcloc::format_result_row(base, res.report) + "\n");
      if (!trace_path.empty()) {
        std::ofstream f(trace_path);
        res.mobility->dump_csv(f, base.duration, base.metric_dt);
      }
      if (!messages_path.empty()) {
        std::ofstream f(messages_path);
        res.ledger->write_csv(f);
      }
      return res.report.aborted ? kExitAborted : 0;
    }

    mcloc::SweepAxes axes = mcloc::SweepAxes::from_base(base);
    if (!lambdas.empty()) axes.lambdas = parse_list<double>(lambdas, parse_double);
    if (!protocols.empty()) {
      axes.protocols = parse_list<mcloc::ProtocolKind>(
          protocols, [](const std::string& s) { return mcloc::parse_protocol(s); });
    }
    if (!node_mob.empty()) {
      axes.node_mobility = parse_list<mcloc::MobilityBand>(
          node_mob, [](const std::string& s) { return mcloc::parse_mobility_band(s); });
    }
    if (!code_bands.empty()) {
      axes.code_bands = parse_list<mcloc::MobilityBand>(
          code_bands, [](const std::string& s) { return mcloc::parse_mobility_band(s); });
    }
    if (!seeds.empty()) axes.seeds = parse_list<std::uint64_t>(seeds, parse_seed);

    const auto cells = mcloc::run_sweep(base, axes, jobs);
    std::ostringstream csv;
    mcloc::write_sweep_csv(csv, cells);
    write_file(out_path, csv.str());

    if (*compare) {
      // Ordering table: per lambda, protocols sorted by Nb_msg.
      for (double l : axes.lambdas) {
        std::vector<const mcloc::SweepCell*> row;
        for (const auto& c : cells) {
          if (c.config.lambda == l) row.push_back(&c);
        }
        std::sort(row.begin(), row.end(),
                  [](auto* a, auto* b) { return a->mean.nb_msg < b->mean.nb_msg; });
        std::printf("lambda = %g\n", l);
        std::printf("  %-20s %12s %12s %10s %8s\n", "protocol", "Nb_msg", "Rtime_s", "failed",
                    "aborted");
        for (const auto* c : row) {
          std::printf("  %-20s %12.3f %12.4f %10lld %8d\n",
                      std::string(mcloc::to_string(c->config.protocol)).c_str(), c->mean.nb_msg,
                      c->mean.rtime, static_cast<long long>(c->mean.n_failed), c->aborted_seeds);
        }
      }
    } else {
      std::cout << "wrote " << cells.size() << " cells to " << out_path << '\n';
    }
    const bool any_aborted =
        std::any_of(cells.begin(), cells.end(), [](const auto& c) { return c.aborted_seeds > 0; });
    return any_aborted ? kExitAborted : 0;
  } catch (const mcloc::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mcloc::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const mcloc::SimError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
}
