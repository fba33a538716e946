#include "kcore/stochastics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>

#include "kcore/errors.hpp"

namespace kcore {

std::vector<double> pure_death_lifetimes(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> life(1.0);
  std::vector<double> out(n);
  for (auto& x : out) x = life(rng);
  std::sort(out.begin(), out.end());
  return out;
}

TrajectorySample simulate_pure_death(std::size_t n, Rng& rng) {
  if (n == 0) throw DomainError("pure death process needs n >= 1");
  const auto lifetimes = pure_death_lifetimes(n, rng);
  TrajectorySample path;
  path.normalizer = static_cast<double>(n);
  path.times.reserve(n + 1);
  path.values.reserve(n + 1);
  path.times.push_back(0.0);
  path.values.push_back(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    path.times.push_back(lifetimes[i]);
    path.values.push_back(static_cast<double>(n - i - 1));
  }
  return path;
}

namespace {

void require_spec(const JumpProcessSpec& spec) {
  if (!(spec.x0 > 0.0) || !(spec.gamma > 0.0) || !(spec.d > 0.0)) {
    throw DomainError("jump process parameters must be strictly positive");
  }
}

}  // namespace

TrajectorySample simulate_jump_death(const JumpProcessSpec& spec, Rng& rng) {
  require_spec(spec);
  TrajectorySample path;
  path.normalizer = spec.x0;
  double y = spec.x0, t = 0.0;
  path.times.push_back(t);
  path.values.push_back(y);
  while (y > 0.0) {
    std::exponential_distribution<double> wait(spec.gamma * y);
    t += wait(rng);
    y -= spec.d;
    path.times.push_back(t);
    path.values.push_back(y);
  }
  return path;
}

CoupledJumpPaths simulate_coupled_jump_death(const JumpProcessSpec& spec, Rng& rng) {
  require_spec(spec);
  CoupledJumpPaths out;
  double a = spec.x0, b = std::ceil(spec.x0), t = 0.0;
  auto push = [&] {
    out.times.push_back(t);
    out.lower.push_back(a);
    out.upper.push_back(b);
    out.max_gap = std::max(out.max_gap, std::abs(b - a));
  };
  push();
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  while (a > 0.0 || b > 0.0) {
    const double ra = a > 0.0 ? spec.gamma * a : 0.0;
    const double rb = b > 0.0 ? spec.gamma * b : 0.0;
    const double fast = std::max(ra, rb), slow = std::min(ra, rb);
    std::exponential_distribution<double> wait(fast);
    t += wait(rng);
    const bool both = coin(rng) < slow / fast;
    if (both || ra >= rb) {
      if (ra > 0.0) a -= spec.d;
    }
    if (both || rb > ra) {
      if (rb > 0.0) b -= spec.d;
    }
    push();
  }
  return out;
}

std::vector<double> default_time_grid() {
  std::vector<double> grid{0.0};
  const double lo = std::log(1e-3), hi = std::log(10.0);
  for (int i = 0; i < 199; ++i) grid.push_back(std::exp(lo + (hi - lo) * i / 198.0));
  return grid;
}

BinEnsemble simulate_bins(const DegreeSequence& seq, const std::vector<double>& time_grid, Rng& rng,
                          BinMethod method) {
  if (!std::is_sorted(time_grid.begin(), time_grid.end()) || (!time_grid.empty() && time_grid.front() < 0.0)) {
    throw DomainError("time grid must be non-negative and ascending");
  }
  BinEnsemble ens;
  ens.initial = seq;
  ens.time_grid = time_grid;
  const std::size_t grid = time_grid.size();
  const auto width = static_cast<std::size_t>(seq.max_degree()) + 1;
  ens.snapshots.assign(grid, std::vector<std::int64_t>(width, 0));
  if (grid == 0) return ens;

  if (method == BinMethod::event_driven) {
    // Each bin's count is piecewise constant on the grid; accumulate the pieces
    // as difference arrays in s and prefix-sum once.
    std::vector<std::vector<std::int64_t>> diff(grid + 1, std::vector<std::int64_t>(width, 0));
    std::exponential_distribution<double> life(1.0);
    std::vector<double> lifetimes;
    for (auto d : seq.degrees()) {
      lifetimes.resize(static_cast<std::size_t>(d));
      for (auto& x : lifetimes) x = life(rng);
      std::sort(lifetimes.begin(), lifetimes.end());
      std::size_t start = 0;
      auto count = static_cast<std::size_t>(d);
      for (double l : lifetimes) {
        // dead at grid time s iff l <= t_s
        const auto stop = static_cast<std::size_t>(std::lower_bound(time_grid.begin(), time_grid.end(), l) -
                                                   time_grid.begin());
        if (stop > start) {
          ++diff[start][count];
          --diff[stop][count];
          start = stop;
        }
        --count;
      }
      if (start < grid) {
        ++diff[start][count];
        --diff[grid][count];
      }
    }
    std::vector<std::int64_t> running(width, 0);
    for (std::size_t s = 0; s < grid; ++s) {
      for (std::size_t r = 0; r < width; ++r) {
        running[r] += diff[s][r];
        ens.snapshots[s][r] = running[r];
      }
    }
    return ens;
  }

  std::vector<std::int64_t> counts(seq.degrees().begin(), seq.degrees().end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double prev = 0.0;
  for (std::size_t s = 0; s < grid; ++s) {
    const double keep = std::exp(-(time_grid[s] - prev));
    prev = time_grid[s];
    for (auto& c : counts) {
      if (c == 0 || keep == 1.0) {
        // nothing to thin
      } else if (c <= 32) {
        std::int64_t kept = 0;
        for (std::int64_t j = 0; j < c; ++j) kept += unit(rng) < keep ? 1 : 0;
        c = kept;
      } else {
        std::binomial_distribution<std::int64_t> thin(c, keep);
        c = thin(rng);
      }
      ++ens.snapshots[s][static_cast<std::size_t>(c)];
    }
  }
  return ens;
}

double heavy_ball_fraction(const BinEnsemble& ens, std::size_t s, int k) {
  const auto& snap = ens.snapshots.at(s);
  double sum = 0.0;
  for (std::size_t r = std::max(k, 0); r < snap.size(); ++r) sum += static_cast<double>(r) * snap[r];
  return sum / static_cast<double>(ens.initial.n());
}

double heavy_bin_fraction(const BinEnsemble& ens, std::size_t s, int k) {
  const auto& snap = ens.snapshots.at(s);
  double sum = 0.0;
  for (std::size_t r = std::max(k, 0); r < snap.size(); ++r) sum += static_cast<double>(snap[r]);
  return sum / static_cast<double>(ens.initial.n());
}

double weighted_bin_deviation(const BinEnsemble& ens, const DegreeDistribution& dist) {
  const double n = static_cast<double>(ens.initial.n());
  double worst = 0.0;
  for (std::size_t s = 0; s < ens.time_grid.size(); ++s) {
    const double p = std::exp(-ens.time_grid[s]);
    const auto& snap = ens.snapshots[s];
    const std::size_t top = std::max(snap.size(), dist.support_size());
    double dev = 0.0;
    for (std::size_t r = 1; r < top; ++r) {
      const double observed = r < snap.size() ? static_cast<double>(snap[r]) / n : 0.0;
      dev += static_cast<double>(r) * std::abs(observed - thinned_pmf(dist, p, static_cast<int>(r)));
    }
    worst = std::max(worst, dev);
  }
  return worst;
}

namespace {

double log_double_factorial_odd(std::int64_t a) {
  // (2a - 1)!! = (2a)! / (2^a a!)
  return std::lgamma(2.0 * a + 1.0) - a * std::log(2.0) - std::lgamma(a + 1.0);
}

double log_choose(std::int64_t n, std::int64_t r) {
  return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

void require_matching_sizes(std::int64_t m, std::int64_t y) {
  if (m < 1 || y < 0 || y > 2 * m) throw DomainError("need m >= 1 and 0 <= y <= 2m");
}

}  // namespace

std::vector<double> matching_pair_pmf(std::int64_t m, std::int64_t y) {
  require_matching_sizes(m, y);
  std::vector<double> pmf(static_cast<std::size_t>(y / 2) + 1, 0.0);
  const std::int64_t outside = 2 * m - y;
  const double total = log_double_factorial_odd(m);
  for (std::int64_t z = 0; 2 * z <= y; ++z) {
    const std::int64_t crossing = y - 2 * z;
    if (crossing > outside) continue;
    const double log_ways = log_choose(y, 2 * z) + log_double_factorial_odd(z) + std::lgamma(outside + 1.0) -
                            std::lgamma(outside - crossing + 1.0) +
                            log_double_factorial_odd((outside - crossing) / 2);
    pmf[static_cast<std::size_t>(z)] = std::exp(log_ways - total);
  }
  return pmf;
}

double matching_binomial_moment(std::int64_t m, std::int64_t y, std::int64_t u) {
  require_matching_sizes(m, y);
  if (u < 0) throw DomainError("u must be non-negative");
  if (2 * u > y) return 0.0;
  double log_value = log_choose(y, 2 * u) + log_double_factorial_odd(u);
  for (std::int64_t i = 0; i < u; ++i) log_value -= std::log(static_cast<double>(2 * m - 1 - 2 * i));
  return std::exp(log_value);
}

MatchingTailStats matching_pair_tail(std::int64_t m, std::int64_t y, double u, std::size_t trials, Rng& rng) {
  require_matching_sizes(m, y);
  if (!(u > 0.0)) throw DomainError("u must be positive");
  if (trials == 0) throw DomainError("trials must be positive");
  MatchingTailStats st;
  st.m = m;
  st.y = y;
  st.u = u;
  st.trials = trials;
  st.histogram.assign(static_cast<std::size_t>(y / 2) + 1, 0);

  // Match the Y points one at a time; only the counts of unmatched points in
  // and outside Y matter for the law of Z.
  std::size_t hits = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::int64_t in_y = y, out_y = 2 * m - y, z = 0;
    while (in_y > 0) {
      const std::int64_t others = in_y - 1 + out_y;
      std::uniform_int_distribution<std::int64_t> pick(0, others - 1);
      if (pick(rng) < in_y - 1) {
        in_y -= 2;
        ++z;
      } else {
        in_y -= 1;
        out_y -= 1;
      }
    }
    ++st.histogram[static_cast<std::size_t>(z)];
    if (static_cast<double>(z) >= u) ++hits;
  }
  const double t = static_cast<double>(trials);
  st.empirical_tail = static_cast<double>(hits) / t;
  st.standard_error = std::sqrt(st.empirical_tail * (1.0 - st.empirical_tail) / t);
  st.bound = y == 0 ? 0.0 : std::pow(static_cast<double>(y) * static_cast<double>(y) / (static_cast<double>(m) * u), u);

  const auto pmf = matching_pair_pmf(m, y);
  const auto first = static_cast<std::size_t>(std::ceil(u));
  for (std::size_t z = first; z < pmf.size(); ++z) st.exact_tail += pmf[z];
  st.binomial_moment = matching_binomial_moment(m, y, static_cast<std::int64_t>(first));
  st.within_bound = st.empirical_tail <= st.bound + 3.0 * st.standard_error;
  return st;
}

double sup_deviation(const TrajectorySample& path, const std::function<double(double)>& curve, double t_end,
                     double mesh) {
  if (path.times.empty()) return 0.0;
  const double norm = path.normalizer;
  double worst = 0.0;
  auto check = [&](double t, double value) { worst = std::max(worst, std::abs(value / norm - curve(t))); };
  const std::size_t count = path.times.size();
  for (std::size_t i = 0; i < count; ++i) {
    const double t = path.times[i];
    if (t > t_end) break;
    check(t, path.values[i]);
    if (i > 0) check(t, path.values[i - 1]);
    const double gap_end = i + 1 < count ? std::min(path.times[i + 1], t_end) : t_end;
    for (double s = t + mesh; s < gap_end; s += mesh) check(s, path.values[i]);
    if (i + 1 == count || path.times[i + 1] > t_end) check(gap_end, path.values[i]);
  }
  return worst;
}

TrajectoryDeviations trajectory_deviations(const PeelTrajectory& traj, std::size_t n, std::int64_t degree_sum,
                                           const DegreeDistribution& dist, int k) {
  TrajectoryDeviations dev;
  if (traj.events.empty()) return dev;
  const double nn = static_cast<double>(n);
  const double lambda = dist.mean();
  const double two_m = static_cast<double>(degree_sum) / nn;
  const double t_end = traj.tau;

  TrajectorySample total, heavy, bins, light;
  for (auto* p : {&total, &heavy, &bins, &light}) p->normalizer = nn;
  for (const auto& e : traj.events) {
    for (auto* p : {&total, &heavy, &bins, &light}) p->times.push_back(e.t);
    total.values.push_back(static_cast<double>(e.light + e.heavy));
    heavy.values.push_back(static_cast<double>(e.heavy));
    bins.values.push_back(static_cast<double>(e.heavy_bins));
    light.values.push_back(static_cast<double>(e.light));
  }
  auto h_at = [&](double t) { return h_func(dist, k, std::exp(-t)); };
  dev.total = sup_deviation(total, [&](double t) { return two_m * std::exp(-2.0 * t); }, t_end);
  dev.heavy = sup_deviation(heavy, h_at, t_end);
  dev.heavy_bins = sup_deviation(bins, [&](double t) { return h1_func(dist, k, std::exp(-t)); }, t_end);
  dev.light = sup_deviation(light, [&](double t) { return lambda * std::exp(-2.0 * t) - h_at(t); }, t_end);
  return dev;
}

void write_trajectory_csv(const TrajectorySample& path, const std::function<double(double)>& predicted,
                          std::ostream& out) {
  out << "t,value,normalized,predicted\n";
  char buf[160];
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    const double t = path.times[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", t, path.values[i], path.values[i] / path.normalizer,
                  predicted(t));
    out << buf;
  }
}

}  // namespace kcore
