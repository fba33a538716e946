// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Seeds are fixed so that every run reproduces the same numbers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kcore/graphgen.hpp"
#include "kcore/harness.hpp"
#include "kcore/peeling.hpp"
#include "kcore/stochastics.hpp"
#include "kcore/theory.hpp"
#include "oracles.hpp"

using namespace kcore;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

ExperimentConfig gnp(double lambda, int k, std::size_t n, std::size_t reps, std::uint64_t seed) {
  ExperimentConfig c;
  c.mode = Mode::simulate;
  c.model = ModelKind::gnp;
  c.k = k;
  c.lambda = lambda;
  c.n = n;
  c.reps = reps;
  c.seed = seed;
  return c;
}

Multigraph random_multigraph(std::size_t n, int max_degree, Rng& rng) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::vector<std::int64_t> d(n);
  std::int64_t sum = 0;
  for (auto& x : d) sum += x = deg(rng);
  if (sum % 2 != 0) ++d[0];
  return random_matching(DegreeSequence(d), rng);
}

// 1. G(n, 3/n) at k = 3 is below lambda_3: the 3-core is empty in most reps.
Outcome subcritical_emptiness() {
  constexpr std::size_t kMinEmpty = 95;
  const auto report = run_simulation(gnp(3.0, 3, 100000, 100, 1001));
  return {report.empty_cores >= kMinEmpty,
          format("empty 3-cores in %zu/100 reps (need >= %zu), lambda_3 = %.6f", report.empty_cores, kMinEmpty,
                 lambda_crit(3))};
}

// 2. G(n, 3.7/n) at k = 3: mean core fractions against psi_3(mu) and mu^2 / (2 lambda).
Outcome supercritical_lln() {
  constexpr double kTolerance = 0.01;
  constexpr double kOracleAgreement = 1e-9;
  const double lambda = 3.7;
  const auto pred = predict_core(DegreeDistribution::poisson(lambda), 3);
  const double mu_oracle = static_cast<double>(oracle::mu_k_grid(3, lambda));
  const double v_ref = static_cast<double>(oracle::poisson_tail(3, mu_oracle));
  const double e_ref = mu_oracle * mu_oracle / (2 * lambda);
  const bool oracle_ok = std::abs(pred.mu - mu_oracle) <= kOracleAgreement &&
                         std::abs(pred.v_frac - v_ref) <= kOracleAgreement &&
                         std::abs(pred.e_frac - e_ref) <= kOracleAgreement;
  const auto report = run_simulation(gnp(lambda, 3, 100000, 20, 1002));
  const double dv = std::abs(report.v_frac.mean - pred.v_frac);
  const double de = std::abs(report.e_frac.mean - pred.e_frac);
  return {oracle_ok && dv <= kTolerance && de <= kTolerance,
          format("v %.5f vs %.5f (gap %.2e), e %.5f vs %.5f (gap %.2e), tol %.2g; theory vs oracle %s",
                 report.v_frac.mean, pred.v_frac, dv, report.e_frac.mean, pred.e_frac, de, kTolerance,
                 oracle_ok ? "agree" : "DISAGREE")};
}

// 3. p_2 = 0.3, p_4 = 0.7 on the configuration multigraph, k = 3.
Outcome general_degree_lln() {
  constexpr double kTolerance = 0.01;
  const auto dist = DegreeDistribution::explicit_probs({0.0, 0.0, 0.3, 0.0, 0.7});
  const auto pred = predict_core(dist, 3);
  const std::size_t n = 100000;
  double v = 0.0, e = 0.0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    auto rng = make_rng(derive_seed(1003, rep));
    const auto seq = sample_degrees(dist, n, ParityRepair::fix, rng);
    const auto core = peel_bucket(random_matching(seq, rng), 3);
    v += static_cast<double>(core.v_core) / n / 20;
    e += static_cast<double>(core.e_core) / n / 20;
  }
  const double lambda = dist.mean();
  const double e_ref = lambda * pred.p_hat * pred.p_hat / 2;
  const double dv = std::abs(v - pred.v_frac), de = std::abs(e - e_ref);
  return {dv <= kTolerance && de <= kTolerance,
          format("p_hat %.6f, v %.5f vs h1 %.5f (gap %.2e), e %.5f vs %.5f (gap %.2e), tol %.2g", pred.p_hat, v,
                 pred.v_frac, dv, e, e_ref, de, kTolerance)};
}

// 4. Bucket peeling against the exhaustive subset search.
Outcome peeler_equivalence() {
  auto rng = make_rng(1004);
  std::uniform_int_distribution<std::size_t> size(1, 10);
  std::uniform_int_distribution<int> pick_k(2, 4);
  int mismatches = 0, nonempty = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto g = random_multigraph(size(rng), 6, rng);
    const int k = pick_k(rng);
    const auto fast = peel_bucket(g, k);
    const auto slow = brute_force_core(g, k);
    if (fast.core_vertices != slow.core_vertices || fast.e_core != slow.e_core) ++mismatches;
    if (!fast.empty()) ++nonempty;
  }
  return {mismatches == 0, format("%d mismatches over 2000 graphs (%d with a nonempty core)", mismatches, nonempty)};
}

// 5. FIFO, LIFO and three random worklists give the same core.
Outcome order_independence() {
  auto rng = make_rng(1005);
  std::uniform_int_distribution<std::size_t> size(1, 200);
  int mismatches = 0, nonempty = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto g = random_multigraph(size(rng), 7, rng);
    const int k = 2 + trial % 3;
    const auto base = peel_bucket(g, k, WorklistOrder::fifo, nullptr);
    std::vector<CoreResult> others{peel_bucket(g, k, WorklistOrder::lifo, nullptr)};
    for (int r = 0; r < 3; ++r) others.push_back(peel_bucket(g, k, WorklistOrder::random, &rng));
    for (const auto& o : others) {
      if (o.core_vertices != base.core_vertices || o.e_core != base.e_core) ++mismatches;
    }
    if (!base.empty()) ++nonempty;
  }
  return {mismatches == 0, format("%d mismatches over 500 graphs x 5 orders (%d nonempty)", mismatches, nonempty)};
}

// 6. Trajectories of the half-edge deletion process, Poisson(4), k = 3, n = 1e5.
Outcome trajectory_laws() {
  constexpr double kSupTolerance = 0.02;
  constexpr double kTauTolerance = 0.05;
  constexpr int kMinSeeds = 18;
  const auto dist = DegreeDistribution::poisson(4.0);
  const auto pred = predict_core(dist, 3);
  PeelOptions opts;
  opts.record = RecordMode::full;
  int sup_ok = 0, tau_ok = 0;
  double worst = 0.0, worst_tau = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto rng = make_rng(derive_seed(1006, seed));
    const auto seq = sample_degrees(dist, 100000, ParityRepair::fix, rng);
    const auto res = peel_halfedge(seq, 3, rng, opts);
    const auto dev = trajectory_deviations(res.trajectory, seq.n(), seq.degree_sum(), dist, 3);
    const double m = std::max({dev.total, dev.heavy, dev.heavy_bins, dev.light});
    worst = std::max(worst, m);
    if (m <= kSupTolerance) ++sup_ok;
    const double tau_gap = std::abs(res.trajectory.tau + std::log(pred.p_hat));
    worst_tau = std::max(worst_tau, tau_gap);
    if (tau_gap <= kTauTolerance) ++tau_ok;
  }
  return {sup_ok >= kMinSeeds && tau_ok >= kMinSeeds,
          format("sup-norms <= %.2g in %d/20 seeds (worst %.4f); |tau + ln p_hat| <= %.2g in %d/20 (worst %.4f)",
                 kSupTolerance, sup_ok, worst, kTauTolerance, tau_ok, worst_tau)};
}

// 7. Death processes: pure deaths, the d = 2 jump process, and bins of balls.
Outcome death_processes() {
  constexpr double kPureTolerance = 0.005;
  constexpr double kJumpTolerance = 0.01;
  constexpr double kBinsTolerance = 0.02;
  constexpr int kMinRuns = 95;

  int pure_ok = 0;
  double pure_worst = 0.0;
  for (std::uint64_t run = 0; run < 100; ++run) {
    auto rng = make_rng(derive_seed(1007, run));
    const auto path = simulate_pure_death(1000000, rng);
    const double dev = sup_deviation(path, [](double t) { return std::exp(-t); }, path.times.back());
    pure_worst = std::max(pure_worst, dev);
    if (dev <= kPureTolerance) ++pure_ok;
  }

  auto jump_rng = make_rng(derive_seed(1007, 1000));
  const auto jump = simulate_jump_death({1000000.0, 1.0, 2.0}, jump_rng);
  const double jump_dev = sup_deviation(jump, [](double t) { return std::exp(-2.0 * t); }, jump.times.back());

  const auto dist = DegreeDistribution::poisson(4.0);
  const auto grid = default_time_grid();
  int bins_ok = 0;
  double bins_worst = 0.0, weighted_worst = 0.0;
  for (std::uint64_t run = 0; run < 100; ++run) {
    auto rng = make_rng(derive_seed(1007, 2000 + run));
    const auto seq = sample_degrees(dist, 100000, ParityRepair::fix, rng);
    const auto ens = simulate_bins(seq, grid, rng);
    double dev = 0.0;
    for (std::size_t s = 0; s < grid.size(); ++s) {
      dev = std::max(dev, std::abs(heavy_ball_fraction(ens, s, 3) - h_func(dist, 3, std::exp(-grid[s]))));
    }
    bins_worst = std::max(bins_worst, dev);
    weighted_worst = std::max(weighted_worst, weighted_bin_deviation(ens, dist));
    if (dev <= kBinsTolerance) ++bins_ok;
  }
  return {pure_ok >= kMinRuns && jump_dev <= kJumpTolerance && bins_ok >= kMinRuns,
          format("pure n=1e6 <= %.3g in %d/100 (worst %.5f); jump x=1e6 %.5f (tol %.2g); "
                 "heavy balls n=1e5 <= %.2g in %d/100 (worst %.5f; full weighted sum worst %.5f)",
                 kPureTolerance, pure_ok, pure_worst, jump_dev, kJumpTolerance, kBinsTolerance, bins_ok, bins_worst,
                 weighted_worst)};
}

// 8. Pairs of a random matching inside a y-subset: bound and exact tail.
Outcome matching_tail() {
  struct Triple {
    std::int64_t m, y;
    double u;
  };
  bool ok = true;
  std::string detail;
  std::uint64_t i = 0;
  for (const auto& [m, y, u] : {Triple{50, 20, 4}, Triple{100, 30, 5}, Triple{200, 60, 8}}) {
    auto rng = make_rng(derive_seed(1008, i++));
    const auto st = matching_pair_tail(m, y, u, 100000, rng);
    const double sigma = std::sqrt(st.exact_tail * (1.0 - st.exact_tail) / 100000.0);
    const bool exact_ok = std::abs(st.empirical_tail - st.exact_tail) <= 3.0 * sigma;
    ok = ok && st.within_bound && exact_ok;
    detail += format("%s(%lld,%lld,%g): emp %.5f exact %.5f bound %.4g", detail.empty() ? "" : "; ",
                     static_cast<long long>(m), static_cast<long long>(y), u, st.empirical_tail, st.exact_tail,
                     st.bound);
  }
  return {ok, detail};
}

// 9. G(n, 0.5/n) at k = 2: the 2-core stays small.
Outcome small_two_core() {
  constexpr std::size_t kMaxVertices = 60;
  constexpr std::size_t kMinReps = 95;
  const auto report = run_simulation(gnp(0.5, 2, 100000, 100, 1009));
  std::size_t small = 0, largest = 0;
  for (const auto& r : report.records) {
    if (r.v_core <= kMaxVertices) ++small;
    largest = std::max(largest, r.v_core);
  }
  return {small >= kMinReps,
          format("2-core <= %zu vertices in %zu/100 reps (largest %zu)", kMaxVertices, small, largest)};
}

// 10. Two roots of mu / psi_2(mu) = 3.5 with the curve below 3.5 between them,
// and phi rising then falling for k = 3, 4, 5.
Outcome fixed_point_structure() {
  const double lambda = 3.5;
  const auto pair = root_pair(3, lambda);
  auto ratio = [](double mu) { return mu / poisson_tail(2, mu); };
  bool ok = pair.mu_minus > 0.0 && pair.mu_minus < pair.mu_plus && std::abs(ratio(pair.mu_minus) - lambda) < 1e-8 &&
            std::abs(ratio(pair.mu_plus) - lambda) < 1e-8;
  for (int i = 1; i < 10000; ++i) {
    const double mu = pair.mu_minus + (pair.mu_plus - pair.mu_minus) * i / 10000.0;
    if (!(ratio(mu) < lambda)) ok = false;
  }
  const auto oracle_roots = oracle::sign_change_roots(3, lambda, 20.0L, 1e-4L);
  ok = ok && oracle_roots.size() == 2 && std::abs(pair.mu_minus - static_cast<double>(oracle_roots[0])) < 1e-8 &&
       std::abs(pair.mu_plus - static_cast<double>(oracle_roots[1])) < 1e-8;

  std::string unimodal;
  for (int k : {3, 4, 5}) {
    const int pts = 20000;
    const double lo = 1e-3, hi = 100.0;
    int changes = 0;
    double prev = phi(k, lo);
    bool rising = true, first = true;
    for (int i = 1; i < pts; ++i) {
      const double mu = lo * std::pow(hi / lo, static_cast<double>(i) / (pts - 1));
      const double v = phi(k, mu);
      const bool up = v > prev;
      if (first) {
        if (!up) ok = false;
        first = false;
      } else if (up != rising) {
        ++changes;
      }
      rising = up;
      prev = v;
    }
    if (changes != 1 || rising) ok = false;
    unimodal += format("%sk=%d: %d sign change", unimodal.empty() ? "" : ", ", k, changes);
  }
  return {ok, format("mu- %.9f, mu+ %.9f (oracle %zu roots); %s", pair.mu_minus, pair.mu_plus, oracle_roots.size(),
                     unimodal.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"subcritical 3-core empty (G(n,3/n), n=1e5)", subcritical_emptiness},
      {"supercritical 3-core fractions (G(n,3.7/n), n=1e5)", supercritical_lln},
      {"general degree law core fractions (p2=.3, p4=.7)", general_degree_lln},
      {"bucket peeling matches exhaustive search", peeler_equivalence},
      {"worklist order does not change the core", order_independence},
      {"deletion-process trajectories and stopping time", trajectory_laws},
      {"death-process sup-norms", death_processes},
      {"matching pair tail bound", matching_tail},
      {"subcritical 2-core small (G(n,0.5/n), n=1e5)", small_two_core},
      {"fixed-point root pair and unimodality", fixed_point_structure},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, out.detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
