// kcore_lab: command-line front end for the k-core library.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error, 3 comparison failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kcore/errors.hpp"
#include "kcore/harness.hpp"
#include "kcore/stochastics.hpp"

namespace {

using namespace kcore;

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitCompare = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Writes to `path`, or to stdout when path is empty.
template <class F>
void emit(const std::string& path, F&& body) {
  if (path.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  body(out);
}

int run_theory(const ExperimentConfig& c) {
  std::cout << theory_report_json(c) << '\n';
  if (!c.out.empty()) {
    emit(c.out, [&](std::ostream& os) { write_theory_curve(model_distribution(c), c.k, os); });
  }
  return 0;
}

int run_peel_mode(const ExperimentConfig& c) {
  const auto report = run_peel(c);
  if (!c.out.empty()) {
    emit(c.out, [&](std::ostream& os) { write_edge_list(report.graph.n(), core_edges(report.graph, report.core), os); });
    write_file(c.out + ".json", peel_summary_json(report) + "\n");
  }
  std::cout << peel_summary_json(report) << '\n';
  return 0;
}

int run_simulate(const ExperimentConfig& c) {
  const auto report = run_simulation(c);
  emit(c.out, [&](std::ostream& os) { write_run_csv(report, os); });
  if (!c.out.empty()) write_file(c.out + ".json", run_metadata_json(report.config) + "\n");
  std::fprintf(stderr, "reps=%zu empty_cores=%zu mean_v_frac=%.6f (predicted %.6f) mean_e_frac=%.6f (predicted %.6f)\n",
               report.records.size(), report.empty_cores, report.v_frac.mean, report.prediction.v_frac,
               report.e_frac.mean, report.prediction.e_frac);
  return 0;
}

int run_deathproc(const ExperimentConfig& c) {
  for (std::size_t rep = 0; rep < c.reps; ++rep) {
    const auto run = run_death_replicate(c, rep);
    if (!c.out.empty()) {
      const auto path = rep_output_path(c.out, rep, c.reps);
      emit(path, [&](std::ostream& os) { write_trajectory_csv(run.path, run.predicted, os); });
      ExperimentConfig meta = c;
      meta.seed = run.seed;
      write_file(path + ".json", run_metadata_json(meta) + "\n");
    }
    std::printf("rep=%zu seed=%llu sup_deviation=%.6g\n", rep, static_cast<unsigned long long>(run.seed),
                run.sup_deviation);
  }
  return 0;
}

int run_tailbound(const ExperimentConfig& c) {
  auto rng = make_rng(derive_seed(c.seed, 0));
  const auto s = matching_pair_tail(c.tail_m, c.tail_y, c.tail_u, c.trials, rng);
  std::printf("m=%lld y=%lld u=%g trials=%zu empirical=%.6g bound=%.6g exact=%.6g se=%.3g %s\n",
              static_cast<long long>(s.m), static_cast<long long>(s.y), s.u, s.trials, s.empirical_tail, s.bound,
              s.exact_tail, s.standard_error, s.within_bound ? "within_bound" : "BOUND_VIOLATED");
  return s.within_bound ? 0 : kExitCompare;
}

int run_compare(const ExperimentConfig& c) {
  const auto verdict = compare_csv(read_file(c.in), c.tolerance);
  print_verdict(verdict, std::cout);
  return verdict.pass() ? 0 : kExitCompare;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-core experiments: thresholds, peeling, Monte Carlo replication"};
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with settings keyed by flag name");

  // Every other flag is captured as text and applied after the config file.
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"mode", "theory|peel|simulate|deathproc|tailbound|compare"},
      {"k", "core order, >= 2"},
      {"model", "poisson|explicit|gnm|gnp|sequence|graph"},
      {"lambda", "Poisson mean or G(n, lambda/n) parameter"},
      {"n", "vertices (or balls for deathproc pure)"},
      {"m", "edges for gnm"},
      {"dist-file", "JSON degree law"},
      {"seq-file", "degree sequence file"},
      {"graph-file", "edge-list file"},
      {"reps", "replicates"},
      {"seed", "64-bit base seed"},
      {"record", "none|summary|full"},
      {"out", "output path"},
      {"simple", "reject non-simple configurations (true|false)"},
      {"process", "deathproc: pure|jump|bins"},
      {"gamma", "jump process rate multiplier"},
      {"d", "jump process jump size"},
      {"x", "jump process start level"},
      {"tail-m", "tailbound: matching on 2m points"},
      {"tail-y", "tailbound: subset size"},
      {"tail-u", "tailbound: threshold"},
      {"trials", "tailbound: sampled matchings"},
      {"in", "compare: results CSV"},
      {"tolerance", "compare: allowed gap"},
      {"threads", "worker threads for simulate"},
  };
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  for (const auto& [name, help] : flags) {
    options.emplace_back(name, app.add_option("--" + name, values[name], help));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  ExperimentConfig config;
  try {
    if (!config_path.empty()) apply_json_config(config, read_file(config_path));
    for (const auto& [name, opt] : options) {
      if (opt->count() > 0) apply_setting(config, name, values[name]);
    }
    validate_config(config);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }

  try {
    switch (config.mode) {
      case Mode::theory:
        return run_theory(config);
      case Mode::peel:
        return run_peel_mode(config);
      case Mode::simulate:
        return run_simulate(config);
      case Mode::deathproc:
        return run_deathproc(config);
      case Mode::tailbound:
        return run_tailbound(config);
      case Mode::compare:
        return run_compare(config);
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
