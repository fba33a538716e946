#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "kcore/degrees.hpp"
#include "kcore/peeling.hpp"
#include "kcore/random.hpp"
#include "kcore/theory.hpp"

namespace kcore {

/// Right-continuous step path: values[i] holds on [times[i], times[i+1]).
struct TrajectorySample {
  std::vector<double> times;
  std::vector<double> values;
  double normalizer = 1.0;
};

/// Rate-1 death process started from n balls: the survival count of n
/// independent Exp(1) lifetimes.
TrajectorySample simulate_pure_death(std::size_t n, Rng& rng);

/// Lifetimes behind simulate_pure_death, sorted ascending.
std::vector<double> pure_death_lifetimes(std::size_t n, Rng& rng);

struct JumpProcessSpec {
  double x0 = 1.0;     // initial level
  double gamma = 1.0;  // rate multiplier
  double d = 1.0;      // jump size
};

/// From level y > 0 jumps to y - d at rate gamma * y; stops at or below 0.
TrajectorySample simulate_jump_death(const JumpProcessSpec& spec, Rng& rng);

struct CoupledJumpPaths {
  std::vector<double> times;
  std::vector<double> lower;  // started at x0
  std::vector<double> upper;  // started at ceil(x0)
  double max_gap = 0.0;       // sup_t |upper - lower|
};

/// Runs N^(x) and N^(ceil x) on one probability space: both jump whenever the
/// smaller would, the larger also jumps alone at the excess rate.
CoupledJumpPaths simulate_coupled_jump_death(const JumpProcessSpec& spec, Rng& rng);

enum class BinMethod { binomial, event_driven };

struct BinEnsemble {
  DegreeSequence initial;
  std::vector<double> time_grid;
  std::vector<std::vector<std::int64_t>> snapshots;  // snapshots[s][r] = U_r(time_grid[s])
};

/// 200 points on [0, 10]: t = 0 followed by 199 log-spaced points from 1e-3 to 10.
std::vector<double> default_time_grid();

/// Independent rate-1 deaths in every bin. `binomial` advances each bin by
/// Bi(count, exp(-(t_{s+1} - t_s))) between grid times; `event_driven` draws
/// every lifetime explicitly. Both give the exact law of the path on the grid.
BinEnsemble simulate_bins(const DegreeSequence& seq, const std::vector<double>& time_grid, Rng& rng,
                          BinMethod method = BinMethod::event_driven);

/// sum_{r >= k} r U_r / n at snapshot s.
double heavy_ball_fraction(const BinEnsemble& ens, std::size_t s, int k);
/// sum_{r >= k} U_r / n at snapshot s.
double heavy_bin_fraction(const BinEnsemble& ens, std::size_t s, int k);
/// sup over the grid of sum_r r |U_r(t)/n - P(W_{e^{-t}} = r)|
double weighted_bin_deviation(const BinEnsemble& ens, const DegreeDistribution& dist);

struct MatchingTailStats {
  std::int64_t m = 0;
  std::int64_t y = 0;
  double u = 0.0;
  std::vector<std::int64_t> histogram;  // histogram[z] = trials with Z = z
  std::size_t trials = 0;
  double empirical_tail = 0.0;          // fraction of trials with Z >= u
  double bound = 0.0;                   // (y^2 / (m u))^u
  double exact_tail = 0.0;              // P(Z >= u) from the exact law of Z
  double binomial_moment = 0.0;         // E C(Z, ceil u), product formula
  double standard_error = 0.0;          // sqrt(p(1-p)/trials) at the empirical p
  bool within_bound = false;            // empirical <= bound + 3 standard errors
};

/// Exact P(Z = z) for z = 0..floor(y/2): z pairs inside Y among a uniform
/// perfect matching of 2m points.
std::vector<double> matching_pair_pmf(std::int64_t m, std::int64_t y);
/// E C(Z, u) = C(y, 2u) (2u)! / (2^u u!) / ((2m-1)(2m-3)...(2m-2u+1))
double matching_binomial_moment(std::int64_t m, std::int64_t y, std::int64_t u);

MatchingTailStats matching_pair_tail(std::int64_t m, std::int64_t y, double u, std::size_t trials, Rng& rng);

/// sup_t |value(t)/normalizer - curve(t)| over a step path, evaluated at every
/// jump (both one-sided values) and on a grid of the given mesh inside longer gaps,
/// for t in [times.front(), t_end]. The value after the last jump is held to t_end.
double sup_deviation(const TrajectorySample& path, const std::function<double(double)>& curve, double t_end,
                     double mesh = 1e-3);

/// The four trajectory laws of the deletion process against the limit law.
struct TrajectoryDeviations {
  double total = 0.0;       // (L + H)/n vs (2m/n) e^{-2t}
  double heavy = 0.0;       // H/n vs h(e^{-t})
  double heavy_bins = 0.0;  // H_1/n vs h_1(e^{-t})
  double light = 0.0;       // L/n vs lambda e^{-2t} - h(e^{-t})
};

TrajectoryDeviations trajectory_deviations(const PeelTrajectory& traj, std::size_t n, std::int64_t degree_sum,
                                           const DegreeDistribution& dist, int k);

/// CSV with columns t,value,normalized,predicted.
void write_trajectory_csv(const TrajectorySample& path, const std::function<double(double)>& predicted,
                          std::ostream& out);

}  // namespace kcore
