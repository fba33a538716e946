#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kcore/graphgen.hpp"
#include "kcore/peeling.hpp"
#include "kcore/stochastics.hpp"
#include "kcore/theory.hpp"

namespace kcore {

/// Bad or inconsistent experiment settings. Maps to exit code 1 in the CLI.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Mode { theory, peel, simulate, deathproc, tailbound, compare };
enum class ModelKind { none, poisson, explicit_dist, gnm, gnp, sequence_file, graph_file };
enum class DeathProcess { pure, jump, bins };

struct ExperimentConfig {
  Mode mode = Mode::simulate;
  int k = 3;
  ModelKind model = ModelKind::none;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  std::size_t n = 0;
  std::uint64_t m = 0;
  std::string dist_file;
  std::string seq_file;
  std::string graph_file;
  std::size_t reps = 1;
  std::uint64_t seed = 1;
  RecordMode record = RecordMode::summary;
  std::string out;
  // Reject non-simple configurations (configuration-model models only).
  bool simple = false;

  // deathproc
  DeathProcess process = DeathProcess::pure;
  double gamma = 1.0;
  double d = 2.0;
  double x = 0.0;  // jump process start; 0 means use n

  // tailbound: Z = pairs inside a y-subset of a matching on 2 * tail_m points
  std::int64_t tail_m = 50;
  std::int64_t tail_y = 20;
  double tail_u = 4.0;
  std::size_t trials = 100000;

  // compare
  std::string in;
  double tolerance = 0.01;

  unsigned threads = 1;
};

const char* to_string(Mode mode);
const char* to_string(ModelKind model);
const char* to_string(DeathProcess process);
const char* to_string(RecordMode record);

/// Sets one field from its flag name ("dist-file" and "dist_file" both work).
/// Throws UsageError on unknown keys or unparsable values.
void apply_setting(ExperimentConfig& config, std::string_view key, const std::string& value);
/// JSON object whose keys are flag names.
void apply_json_config(ExperimentConfig& config, std::string_view json_text);

/// Fills in an implied model (a single file flag, or a bare lambda) and checks
/// reps >= 1, k >= 2 and that exactly one model is specified. Throws UsageError.
void validate_config(ExperimentConfig& config);

/// Limit degree law used for the predictions of a config. Loads files as needed.
DegreeDistribution model_distribution(const ExperimentConfig& config);

struct RunRecord {
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t v_core = 0;
  std::size_t e_core = 0;
  double tau = std::numeric_limits<double>::quiet_NaN();
  double v_frac = 0.0;
  double e_frac = 0.0;
  double predicted_v_frac = 0.0;
  double predicted_e_frac = 0.0;
  std::optional<std::size_t> simple_tries;
};

struct ColumnSummary {
  double mean = 0.0;
  double sd = std::numeric_limits<double>::quiet_NaN();  // sample sd, NaN for one rep
};

struct RunReport {
  ExperimentConfig config;
  CorePrediction prediction;
  std::vector<RunRecord> records;  // rep order
  ColumnSummary v_frac;
  ColumnSummary e_frac;
  ColumnSummary tau;  // over reps with a finite tau
  std::size_t empty_cores = 0;

  double v_abs_dev() const;
  double e_abs_dev() const;
};

/// One replicate of mode=simulate with the given per-rep seed.
RunRecord run_replicate(const ExperimentConfig& config, std::size_t rep, const CorePrediction& prediction);

/// mode=simulate: reps independent runs seeded with derive_seed(seed, rep),
/// on config.threads worker threads. Errors are rethrown as RepError.
RunReport run_simulation(const ExperimentConfig& config);

/// "# kcore-lab v1", the header, one row per rep, then rows mean, sd, absdev.
void write_run_csv(const RunReport& report, std::ostream& out);
/// Parses the per-rep rows of write_run_csv output; summary rows are skipped.
/// Throws ParseError on a schema mismatch.
std::vector<RunRecord> parse_run_csv(std::string_view text);

/// {seed, n, mode, params, rng}
std::string run_metadata_json(const ExperimentConfig& config);

struct CriterionResult {
  std::string name;
  double observed = 0.0;
  double expected = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Verdict {
  std::vector<CriterionResult> criteria;
  bool pass() const;
};

CriterionResult check_criterion(std::string name, double observed, double expected, double tolerance);

/// Mean v_frac and e_frac against the recorded predictions.
Verdict compare(const std::vector<RunRecord>& records, double tolerance);
Verdict compare_csv(std::string_view csv_text, double tolerance);

/// mode=theory: thresholds and core predictions as a JSON object.
std::string theory_report_json(const ExperimentConfig& config);
/// Curve samples p, lambda p^2, h(p), h_1(p) for p = 0, 0.001, ..., 1.
void write_theory_curve(const DegreeDistribution& dist, int k, std::ostream& out);

struct PeelReport {
  Multigraph graph;
  CoreResult core;
  double tau = std::numeric_limits<double>::quiet_NaN();
};

/// mode=peel: one graph from the model (seeded by rep 0), peeled by bucket
/// peeling; tau comes from the half-edge process on the same graph.
PeelReport run_peel(const ExperimentConfig& config);
/// {v_core, e_core, tau}
std::string peel_summary_json(const PeelReport& report);

struct DeathRun {
  std::uint64_t seed = 0;
  TrajectorySample path;
  std::function<double(double)> predicted;
  double sup_deviation = 0.0;
};

/// mode=deathproc, one replicate. `pure` compares N(t)/n with e^{-t}, `jump`
/// compares N(t)/x with e^{-gamma d t}, `bins` compares the heavy-ball
/// fraction on the default grid with h(e^{-t}).
DeathRun run_death_replicate(const ExperimentConfig& config, std::size_t rep);

/// Output path for replicate `rep`: the path itself for a single rep, else
/// "<stem>_rep<rep><ext>".
std::string rep_output_path(const std::string& out, std::size_t rep, std::size_t reps);

/// "PASS name observed=... expected=... gap=... tol=..." per criterion.
void print_verdict(const Verdict& verdict, std::ostream& out);

}  // namespace kcore
