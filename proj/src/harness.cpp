#include "kcore/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "kcore/errors.hpp"
#include "kcore/random.hpp"

namespace kcore {

namespace {

using json = nlohmann::json;

constexpr const char* kCsvVersion = "# kcore-lab v1";
constexpr const char* kCsvHeader =
    "rep,seed,n,v_core,e_core,tau,v_frac,e_frac,predicted_v_frac,predicted_e_frac,simple_tries";

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T>
T parse_unsigned(std::string_view key, const std::string& value) {
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError(std::string(key) + ": expected a non-negative integer, got '" + value + "'");
  }
  try {
    const auto v = std::stoull(value);
    if (v > std::numeric_limits<T>::max()) throw std::out_of_range("");
    return static_cast<T>(v);
  } catch (const std::exception&) {
    throw UsageError(std::string(key) + ": value out of range: " + value);
  }
}

double parse_real(std::string_view key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(v)) {
    throw UsageError(std::string(key) + ": expected a number, got '" + value + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw UsageError(std::string(key) + ": expected true or false, got '" + value + "'");
}

template <class E, std::size_t N>
E parse_enum(std::string_view key, const std::string& value, const std::pair<const char*, E> (&names)[N]) {
  for (const auto& [name, e] : names) {
    if (value == name) return e;
  }
  std::string allowed;
  for (const auto& [name, e] : names) allowed += std::string(allowed.empty() ? "" : "|") + name;
  throw UsageError(std::string(key) + ": expected " + allowed + ", got '" + value + "'");
}

const std::pair<const char*, Mode> kModes[] = {{"theory", Mode::theory},       {"peel", Mode::peel},
                                               {"simulate", Mode::simulate},   {"deathproc", Mode::deathproc},
                                               {"tailbound", Mode::tailbound}, {"compare", Mode::compare}};
const std::pair<const char*, ModelKind> kModels[] = {
    {"poisson", ModelKind::poisson}, {"explicit", ModelKind::explicit_dist},  {"gnm", ModelKind::gnm},
    {"gnp", ModelKind::gnp},         {"sequence", ModelKind::sequence_file}, {"graph", ModelKind::graph_file}};
const std::pair<const char*, RecordMode> kRecords[] = {
    {"none", RecordMode::none}, {"summary", RecordMode::summary}, {"full", RecordMode::full}};
const std::pair<const char*, DeathProcess> kProcesses[] = {
    {"pure", DeathProcess::pure}, {"jump", DeathProcess::jump}, {"bins", DeathProcess::bins}};

DegreeDistribution empirical_distribution(std::span<const std::int64_t> degrees) {
  if (degrees.empty()) throw DomainError("empty degree sequence");
  std::int64_t max_degree = 0;
  for (auto d : degrees) max_degree = std::max(max_degree, d);
  std::vector<double> probs(static_cast<std::size_t>(max_degree) + 1, 0.0);
  for (auto d : degrees) probs[static_cast<std::size_t>(d)] += 1.0;
  for (auto& p : probs) p /= static_cast<double>(degrees.size());
  return DegreeDistribution::explicit_probs(std::move(probs));
}

bool uses_configuration_model(ModelKind model) {
  return model == ModelKind::poisson || model == ModelKind::explicit_dist || model == ModelKind::sequence_file;
}

}  // namespace

const char* to_string(Mode mode) {
  for (const auto& [name, e] : kModes) {
    if (e == mode) return name;
  }
  return "?";
}

const char* to_string(ModelKind model) {
  if (model == ModelKind::none) return "none";
  for (const auto& [name, e] : kModels) {
    if (e == model) return name;
  }
  return "?";
}

const char* to_string(DeathProcess process) {
  for (const auto& [name, e] : kProcesses) {
    if (e == process) return name;
  }
  return "?";
}

const char* to_string(RecordMode record) {
  for (const auto& [name, e] : kRecords) {
    if (e == record) return name;
  }
  return "?";
}

void apply_setting(ExperimentConfig& c, std::string_view raw_key, const std::string& value) {
  std::string key(raw_key);
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "mode") {
    c.mode = parse_enum(key, value, kModes);
  } else if (key == "k") {
    const auto k = parse_unsigned<unsigned>(key, value);
    if (k > 1000000) throw UsageError("k: too large");
    c.k = static_cast<int>(k);
  } else if (key == "model") {
    c.model = parse_enum(key, value, kModels);
  } else if (key == "lambda") {
    c.lambda = parse_real(key, value);
  } else if (key == "n") {
    c.n = parse_unsigned<std::size_t>(key, value);
  } else if (key == "m") {
    c.m = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "dist-file") {
    c.dist_file = value;
  } else if (key == "seq-file") {
    c.seq_file = value;
  } else if (key == "graph-file") {
    c.graph_file = value;
  } else if (key == "reps") {
    c.reps = parse_unsigned<std::size_t>(key, value);
  } else if (key == "seed") {
    c.seed = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "record") {
    c.record = parse_enum(key, value, kRecords);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "simple") {
    c.simple = parse_bool(key, value);
  } else if (key == "process") {
    c.process = parse_enum(key, value, kProcesses);
  } else if (key == "gamma") {
    c.gamma = parse_real(key, value);
  } else if (key == "d") {
    c.d = parse_real(key, value);
  } else if (key == "x") {
    c.x = parse_real(key, value);
  } else if (key == "tail-m") {
    c.tail_m = static_cast<std::int64_t>(parse_unsigned<std::uint32_t>(key, value));
  } else if (key == "tail-y") {
    c.tail_y = static_cast<std::int64_t>(parse_unsigned<std::uint32_t>(key, value));
  } else if (key == "tail-u") {
    c.tail_u = parse_real(key, value);
  } else if (key == "trials") {
    c.trials = parse_unsigned<std::size_t>(key, value);
  } else if (key == "in") {
    c.in = value;
  } else if (key == "tolerance") {
    c.tolerance = parse_real(key, value);
  } else if (key == "threads") {
    c.threads = parse_unsigned<unsigned>(key, value);
  } else {
    throw UsageError("unknown setting '" + std::string(raw_key) + "'");
  }
}

void apply_json_config(ExperimentConfig& config, std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_boolean()) {
      text = value.get<bool>() ? "true" : "false";
    } else if (value.is_number_unsigned()) {
      text = std::to_string(value.get<std::uint64_t>());
    } else if (value.is_number_integer()) {
      text = std::to_string(value.get<std::int64_t>());
    } else if (value.is_number_float()) {
      text = fmt(value.get<double>());
    } else {
      throw UsageError("config key '" + key + "' must be a string, number or boolean");
    }
    apply_setting(config, key, text);
  }
}

void validate_config(ExperimentConfig& c) {
  if (c.reps < 1) throw UsageError("reps must be at least 1");
  if (c.k < 2) throw UsageError("k must be at least 2");
  if (c.threads < 1) throw UsageError("threads must be at least 1");

  const bool needs_model = c.mode == Mode::theory || c.mode == Mode::peel || c.mode == Mode::simulate ||
                           (c.mode == Mode::deathproc && c.process == DeathProcess::bins);
  if (!needs_model) {
    if (c.mode == Mode::deathproc && c.process == DeathProcess::pure && c.n == 0) {
      throw UsageError("deathproc pure needs n >= 1");
    }
    if (c.mode == Mode::deathproc && c.process == DeathProcess::jump && c.x <= 0.0 && c.n == 0) {
      throw UsageError("deathproc jump needs x > 0 (or n)");
    }
    if (c.mode == Mode::compare && c.in.empty()) throw UsageError("compare needs --in");
    if (c.mode == Mode::tailbound && c.trials == 0) throw UsageError("tailbound needs trials >= 1");
    return;
  }

  const int files = !c.dist_file.empty() + !c.seq_file.empty() + !c.graph_file.empty();
  if (files > 1) throw UsageError("specify only one of dist-file, seq-file, graph-file");
  if (c.model == ModelKind::none) {
    if (!c.dist_file.empty()) {
      c.model = ModelKind::explicit_dist;
    } else if (!c.seq_file.empty()) {
      c.model = ModelKind::sequence_file;
    } else if (!c.graph_file.empty()) {
      c.model = ModelKind::graph_file;
    } else if (!std::isnan(c.lambda)) {
      c.model = ModelKind::poisson;
    } else {
      throw UsageError("no model: give --model, --lambda or one of the file flags");
    }
  }

  auto forbid_file = [&](bool present, const char* flag) {
    if (present) throw UsageError(std::string("model ") + to_string(c.model) + " does not take " + flag);
  };
  const bool lambda_set = !std::isnan(c.lambda);
  switch (c.model) {
    case ModelKind::poisson:
    case ModelKind::gnp:
      if (!lambda_set || !(c.lambda > 0.0)) throw UsageError("model needs lambda > 0");
      forbid_file(files > 0, "a file");
      break;
    case ModelKind::gnm:
      if (lambda_set) throw UsageError("model gnm takes m, not lambda");
      forbid_file(files > 0, "a file");
      break;
    case ModelKind::explicit_dist:
      if (c.dist_file.empty()) throw UsageError("model explicit needs dist-file");
      if (lambda_set) throw UsageError("model explicit takes its law from dist-file, not lambda");
      forbid_file(files > 1, "seq-file or graph-file");
      break;
    case ModelKind::sequence_file:
      if (c.seq_file.empty()) throw UsageError("model sequence needs seq-file");
      if (lambda_set) throw UsageError("model sequence does not take lambda");
      break;
    case ModelKind::graph_file:
      if (c.graph_file.empty()) throw UsageError("model graph needs graph-file");
      if (lambda_set) throw UsageError("model graph does not take lambda");
      break;
    case ModelKind::none:
      break;
  }
  if (c.model == ModelKind::explicit_dist && (!c.seq_file.empty() || !c.graph_file.empty())) {
    throw UsageError("model explicit does not take seq-file or graph-file");
  }

  const bool needs_n = c.mode != Mode::theory && (c.model == ModelKind::poisson || c.model == ModelKind::gnp ||
                                                  c.model == ModelKind::gnm || c.model == ModelKind::explicit_dist);
  if (needs_n && c.n == 0) throw UsageError("model needs n >= 1");
  if (c.model == ModelKind::gnm && c.mode == Mode::theory && c.n == 0) throw UsageError("model gnm needs n >= 1");
  if (c.simple && !uses_configuration_model(c.model)) {
    throw UsageError("simple applies only to configuration-model models");
  }
}

DegreeDistribution model_distribution(const ExperimentConfig& c) {
  switch (c.model) {
    case ModelKind::poisson:
    case ModelKind::gnp:
      return DegreeDistribution::poisson(c.lambda);
    case ModelKind::gnm:
      if (c.n == 0) throw DomainError("gnm needs n >= 1");
      return DegreeDistribution::poisson(2.0 * static_cast<double>(c.m) / static_cast<double>(c.n));
    case ModelKind::explicit_dist:
      return load_distribution(c.dist_file);
    case ModelKind::sequence_file:
      return empirical_distribution(load_degree_sequence(c.seq_file).degrees());
    case ModelKind::graph_file:
      return empirical_distribution(load_edge_list(c.graph_file).degree_vector());
    case ModelKind::none:
      break;
  }
  throw UsageError("no model specified");
}

namespace {

struct ReplicateInput {
  std::optional<DegreeDistribution> dist;  // for sampling sequences
  std::optional<DegreeSequence> sequence;  // sequence-file model
  std::optional<Multigraph> graph;         // graph-file model
};

ReplicateInput load_inputs(const ExperimentConfig& c) {
  ReplicateInput in;
  if (c.model == ModelKind::poisson) in.dist = DegreeDistribution::poisson(c.lambda);
  if (c.model == ModelKind::explicit_dist) in.dist = load_distribution(c.dist_file);
  if (c.model == ModelKind::sequence_file) in.sequence = load_degree_sequence(c.seq_file);
  if (c.model == ModelKind::graph_file) in.graph = load_edge_list(c.graph_file);
  return in;
}

HalfEdgePeelResult simulate_once(const ExperimentConfig& c, const ReplicateInput& in, Rng& rng,
                                 std::optional<std::size_t>& simple_tries, const PeelOptions& opts) {
  switch (c.model) {
    case ModelKind::gnp:
      return peel_halfedge(sample_gnp(c.n, c.lambda, rng), c.k, rng, opts);
    case ModelKind::gnm:
      return peel_halfedge(sample_gnm(c.n, c.m, rng), c.k, rng, opts);
    case ModelKind::graph_file:
      return peel_halfedge(*in.graph, c.k, rng, opts);
    default:
      break;
  }
  const DegreeSequence seq = in.sequence ? *in.sequence : sample_degrees(*in.dist, c.n, ParityRepair::fix, rng);
  if (c.simple) {
    auto sample = sample_simple(seq, rng);
    simple_tries = sample.tries;
    return peel_halfedge(sample.graph, c.k, rng, opts);
  }
  return peel_halfedge(seq, c.k, rng, opts);
}

RunRecord replicate_with(const ExperimentConfig& c, const ReplicateInput& in, std::size_t rep,
                         const CorePrediction& prediction) {
  RunRecord r;
  r.rep = rep;
  r.seed = derive_seed(c.seed, rep);
  auto rng = make_rng(r.seed);
  PeelOptions opts;
  opts.record = c.record;
  const auto result = simulate_once(c, in, rng, r.simple_tries, opts);
  r.n = in.sequence ? in.sequence->n() : in.graph ? in.graph->n() : c.n;
  r.v_core = result.core.v_core;
  r.e_core = result.core.e_core;
  r.tau = result.trajectory.tau;
  r.v_frac = static_cast<double>(r.v_core) / static_cast<double>(r.n);
  r.e_frac = static_cast<double>(r.e_core) / static_cast<double>(r.n);
  r.predicted_v_frac = prediction.v_frac;
  r.predicted_e_frac = prediction.e_frac;

  if (c.record == RecordMode::full && !c.out.empty()) {
    std::ofstream traj(rep_output_path(c.out, rep, 2) + ".trajectory.csv");
    if (!traj) throw std::runtime_error("cannot write trajectory for rep " + std::to_string(rep));
    traj << "t,light,heavy,heavy_bins\n";
    for (const auto& e : result.trajectory.events) {
      traj << fmt(e.t) << ',' << e.light << ',' << e.heavy << ',' << e.heavy_bins << '\n';
    }
  }
  return r;
}

ColumnSummary summarize(const std::vector<double>& xs) {
  ColumnSummary s;
  if (xs.empty()) {
    s.mean = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

}  // namespace

double RunReport::v_abs_dev() const { return std::abs(v_frac.mean - prediction.v_frac); }
double RunReport::e_abs_dev() const { return std::abs(e_frac.mean - prediction.e_frac); }

RunRecord run_replicate(const ExperimentConfig& config, std::size_t rep, const CorePrediction& prediction) {
  return replicate_with(config, load_inputs(config), rep, prediction);
}

RunReport run_simulation(const ExperimentConfig& config) {
  RunReport report;
  report.config = config;
  validate_config(report.config);
  const auto& c = report.config;
  report.prediction = predict_core(model_distribution(c), c.k);
  const auto inputs = load_inputs(c);

  report.records.resize(c.reps);
  std::vector<std::exception_ptr> errors(c.reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t rep = next++; rep < c.reps; rep = next++) {
      try {
        report.records[rep] = replicate_with(c, inputs, rep, report.prediction);
      } catch (...) {
        errors[rep] = std::current_exception();
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(c.threads, c.reps));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t rep = 0; rep < c.reps; ++rep) {
    if (!errors[rep]) continue;
    try {
      std::rethrow_exception(errors[rep]);
    } catch (const std::exception& e) {
      throw RepError(rep, e.what());
    }
  }

  std::vector<double> v, e, tau;
  for (const auto& r : report.records) {
    v.push_back(r.v_frac);
    e.push_back(r.e_frac);
    if (std::isfinite(r.tau)) tau.push_back(r.tau);
    if (r.v_core == 0) ++report.empty_cores;
  }
  report.v_frac = summarize(v);
  report.e_frac = summarize(e);
  report.tau = summarize(tau);
  return report;
}

void write_run_csv(const RunReport& report, std::ostream& out) {
  out << kCsvVersion << '\n' << kCsvHeader << '\n';
  std::vector<double> cols[7];  // n, v_core, e_core, tau, v_frac, e_frac, simple_tries
  for (const auto& r : report.records) {
    out << r.rep << ',' << r.seed << ',' << r.n << ',' << r.v_core << ',' << r.e_core << ',' << fmt(r.tau) << ','
        << fmt(r.v_frac) << ',' << fmt(r.e_frac) << ',' << fmt(r.predicted_v_frac) << ','
        << fmt(r.predicted_e_frac) << ',';
    if (r.simple_tries) out << *r.simple_tries;
    out << '\n';
    cols[0].push_back(static_cast<double>(r.n));
    cols[1].push_back(static_cast<double>(r.v_core));
    cols[2].push_back(static_cast<double>(r.e_core));
    if (std::isfinite(r.tau)) cols[3].push_back(r.tau);
    cols[4].push_back(r.v_frac);
    cols[5].push_back(r.e_frac);
    if (r.simple_tries) cols[6].push_back(static_cast<double>(*r.simple_tries));
  }
  ColumnSummary s[7];
  for (int i = 0; i < 7; ++i) s[i] = summarize(cols[i]);
  auto cell = [](const std::vector<double>& col, double x) { return col.empty() ? std::string() : fmt(x); };
  const double pv = report.prediction.v_frac, pe = report.prediction.e_frac;
  out << "mean,," << cell(cols[0], s[0].mean) << ',' << cell(cols[1], s[1].mean) << ','
      << cell(cols[2], s[2].mean) << ',' << cell(cols[3], s[3].mean) << ',' << cell(cols[4], s[4].mean) << ','
      << cell(cols[5], s[5].mean) << ',' << fmt(pv) << ',' << fmt(pe) << ',' << cell(cols[6], s[6].mean) << '\n';
  out << "sd,," << cell(cols[0], s[0].sd) << ',' << cell(cols[1], s[1].sd) << ',' << cell(cols[2], s[2].sd)
      << ',' << cell(cols[3], s[3].sd) << ',' << cell(cols[4], s[4].sd) << ',' << cell(cols[5], s[5].sd)
      << ",,," << cell(cols[6], s[6].sd) << '\n';
  out << "absdev,,,,,," << cell(cols[4], std::abs(s[4].mean - pv)) << ','
      << cell(cols[5], std::abs(s[5].mean - pe)) << ",,,\n";
}

std::vector<RunRecord> parse_run_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next_line() || line != kCsvVersion) throw ParseError("expected version line '" + std::string(kCsvVersion) + "'", 1);
  if (!next_line() || line != kCsvHeader) throw ParseError("unexpected column header", line_no == 0 ? 2 : line_no);

  std::vector<RunRecord> records;
  while (next_line()) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != 11) {
      throw ParseError("expected 11 fields, found " + std::to_string(f.size()), line_no);
    }
    if (f[0] == "mean" || f[0] == "sd" || f[0] == "absdev") continue;
    RunRecord r;
    try {
      auto u64 = [](const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument(s);
        return std::stoull(s);
      };
      auto real = [](const std::string& s) {
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      };
      r.rep = u64(f[0]);
      r.seed = u64(f[1]);
      r.n = u64(f[2]);
      r.v_core = u64(f[3]);
      r.e_core = u64(f[4]);
      r.tau = real(f[5]);
      r.v_frac = real(f[6]);
      r.e_frac = real(f[7]);
      r.predicted_v_frac = real(f[8]);
      r.predicted_e_frac = real(f[9]);
      if (!f[10].empty()) r.simple_tries = u64(f[10]);
    } catch (const std::exception&) {
      throw ParseError("malformed field in row", line_no);
    }
    records.push_back(r);
  }
  if (records.empty()) throw ParseError("no replicate rows", line_no);
  return records;
}

std::string run_metadata_json(const ExperimentConfig& c) {
  json params = {{"k", c.k}, {"reps", c.reps}, {"record", to_string(c.record)}};
  if (c.mode == Mode::deathproc) {
    params["process"] = to_string(c.process);
    if (c.process == DeathProcess::jump) {
      params["gamma"] = c.gamma;
      params["d"] = c.d;
      params["x"] = c.x > 0.0 ? c.x : static_cast<double>(c.n);
    }
  }
  if (c.mode == Mode::tailbound) {
    params["m"] = c.tail_m;
    params["y"] = c.tail_y;
    params["u"] = c.tail_u;
    params["trials"] = c.trials;
  }
  if (c.model != ModelKind::none) {
    params["model"] = to_string(c.model);
    if (!std::isnan(c.lambda)) params["lambda"] = c.lambda;
    if (c.model == ModelKind::gnm) params["m"] = c.m;
    if (!c.dist_file.empty()) params["dist_file"] = c.dist_file;
    if (!c.seq_file.empty()) params["seq_file"] = c.seq_file;
    if (!c.graph_file.empty()) params["graph_file"] = c.graph_file;
    if (c.simple) params["simple"] = true;
  }
  json doc = {{"seed", c.seed}, {"n", c.n}, {"mode", to_string(c.mode)}, {"params", params}, {"rng", kRngName}};
  return doc.dump(2);
}

bool Verdict::pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& r) { return r.pass; });
}

CriterionResult check_criterion(std::string name, double observed, double expected, double tolerance) {
  CriterionResult r;
  r.name = std::move(name);
  r.observed = observed;
  r.expected = expected;
  r.gap = std::abs(observed - expected);
  r.tolerance = tolerance;
  r.pass = r.gap <= tolerance;  // false for NaN
  return r;
}

Verdict compare(const std::vector<RunRecord>& records, double tolerance) {
  if (records.empty()) throw DomainError("nothing to compare");
  double v = 0.0, e = 0.0, pv = 0.0, pe = 0.0;
  for (const auto& r : records) {
    v += r.v_frac;
    e += r.e_frac;
    pv += r.predicted_v_frac;
    pe += r.predicted_e_frac;
  }
  const double reps = static_cast<double>(records.size());
  Verdict verdict;
  verdict.criteria.push_back(check_criterion("v_frac", v / reps, pv / reps, tolerance));
  verdict.criteria.push_back(check_criterion("e_frac", e / reps, pe / reps, tolerance));
  return verdict;
}

Verdict compare_csv(std::string_view csv_text, double tolerance) { return compare(parse_run_csv(csv_text), tolerance); }

void print_verdict(const Verdict& verdict, std::ostream& out) {
  for (const auto& r : verdict.criteria) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << " observed=" << fmt(r.observed)
        << " expected=" << fmt(r.expected) << " gap=" << fmt(r.gap) << " tol=" << fmt(r.tolerance) << '\n';
  }
}

std::string theory_report_json(const ExperimentConfig& config) {
  const auto dist = model_distribution(config);
  const auto pred = predict_core(dist, config.k);
  json doc = {{"k", config.k},
              {"mean_degree", dist.mean()},
              {"p_hat", pred.p_hat},
              {"mu", pred.mu},
              {"v_frac", pred.v_frac},
              {"e_frac", pred.e_frac},
              {"tangent", pred.tangent}};
  if (dist.is_poisson()) {
    doc["lambda"] = *dist.poisson_lambda();
    doc["lambda_crit"] = lambda_crit(config.k);
  }
  return doc.dump(2);
}

void write_theory_curve(const DegreeDistribution& dist, int k, std::ostream& out) {
  out << "p,lambda_p2,h,h1\n";
  const double lambda = dist.mean();
  for (int i = 0; i <= 1000; ++i) {
    const double p = i / 1000.0;
    out << fmt(p) << ',' << fmt(lambda * p * p) << ',' << fmt(h_func(dist, k, p)) << ','
        << fmt(h1_func(dist, k, p)) << '\n';
  }
}

PeelReport run_peel(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  validate_config(c);
  auto rng = make_rng(derive_seed(c.seed, 0));
  PeelReport report;
  switch (c.model) {
    case ModelKind::gnp:
      report.graph = sample_gnp(c.n, c.lambda, rng);
      break;
    case ModelKind::gnm:
      report.graph = sample_gnm(c.n, c.m, rng);
      break;
    case ModelKind::graph_file:
      report.graph = load_edge_list(c.graph_file);
      break;
    default: {
      const auto in = load_inputs(c);
      const DegreeSequence seq = in.sequence ? *in.sequence : sample_degrees(*in.dist, c.n, ParityRepair::fix, rng);
      report.graph = c.simple ? sample_simple(seq, rng).graph : random_matching(seq, rng);
    }
  }
  report.core = peel_bucket(report.graph, c.k);
  if (c.record != RecordMode::none) {
    PeelOptions opts;
    opts.record = RecordMode::summary;
    report.tau = peel_halfedge(report.graph, c.k, rng, opts).trajectory.tau;
  }
  return report;
}

std::string peel_summary_json(const PeelReport& report) {
  json doc = {{"n", report.graph.n()}, {"v_core", report.core.v_core}, {"e_core", report.core.e_core}};
  doc["tau"] = std::isnan(report.tau) ? json(nullptr) : json(report.tau);
  return doc.dump(2);
}

DeathRun run_death_replicate(const ExperimentConfig& config, std::size_t rep) {
  DeathRun run;
  run.seed = derive_seed(config.seed, rep);
  auto rng = make_rng(run.seed);
  switch (config.process) {
    case DeathProcess::pure: {
      run.path = simulate_pure_death(config.n, rng);
      run.predicted = [](double t) { return std::exp(-t); };
      const double t_end = run.path.times.back();
      run.sup_deviation = sup_deviation(run.path, run.predicted, t_end);
      break;
    }
    case DeathProcess::jump: {
      JumpProcessSpec spec{config.x > 0.0 ? config.x : static_cast<double>(config.n), config.gamma, config.d};
      run.path = simulate_jump_death(spec, rng);
      const double rate = config.gamma * config.d;
      run.predicted = [rate](double t) { return std::exp(-rate * t); };
      run.sup_deviation = sup_deviation(run.path, run.predicted, run.path.times.back());
      break;
    }
    case DeathProcess::bins: {
      const auto dist = model_distribution(config);
      DegreeSequence seq;
      if (config.model == ModelKind::sequence_file) {
        seq = load_degree_sequence(config.seq_file);
      } else if (config.model == ModelKind::graph_file) {
        seq = DegreeSequence(load_edge_list(config.graph_file).degree_vector());
      } else {
        seq = sample_degrees(dist, config.n, ParityRepair::fix, rng);
      }
      const auto grid = default_time_grid();
      const auto ens = simulate_bins(seq, grid, rng);
      const int k = config.k;
      run.predicted = [dist, k](double t) { return h_func(dist, k, std::exp(-t)); };
      run.path.normalizer = static_cast<double>(seq.n());
      for (std::size_t s = 0; s < grid.size(); ++s) {
        const double frac = heavy_ball_fraction(ens, s, k);
        run.path.times.push_back(grid[s]);
        run.path.values.push_back(frac * run.path.normalizer);
        run.sup_deviation = std::max(run.sup_deviation, std::abs(frac - run.predicted(grid[s])));
      }
      break;
    }
  }
  return run;
}

std::string rep_output_path(const std::string& out, std::size_t rep, std::size_t reps) {
  if (reps <= 1) return out;
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash + 1);
  const std::string stem = has_ext ? out.substr(0, dot) : out;
  const std::string ext = has_ext ? out.substr(dot) : "";
  return stem + "_rep" + std::to_string(rep) + ext;
}

}  // namespace kcore
