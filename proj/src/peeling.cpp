#include "kcore/peeling.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "kcore/errors.hpp"

namespace kcore {

namespace {

void require_k(int k) {
  if (k < 1) throw DomainError("k must be positive");
}

CoreResult collect_core(const std::vector<bool>& alive, std::size_t live_half_edges) {
  CoreResult res;
  for (VertexId v = 0; v < alive.size(); ++v) {
    if (alive[v]) res.core_vertices.push_back(v);
  }
  res.v_core = res.core_vertices.size();
  res.e_core = live_half_edges / 2;
  return res;
}

}  // namespace

CoreResult peel_bucket(const Multigraph& g, int k) { return peel_bucket(g, k, WorklistOrder::fifo, nullptr); }

CoreResult peel_bucket(const Multigraph& g, int k, WorklistOrder order, Rng* rng) {
  require_k(k);
  if (order == WorklistOrder::random && rng == nullptr) throw DomainError("random worklist order needs a generator");
  const std::size_t n = g.n();
  const auto kk = static_cast<std::size_t>(k);
  std::vector<std::size_t> deg(n);
  std::vector<bool> alive(n, true);
  std::vector<bool> dead_half(g.num_half_edges(), false);
  std::vector<VertexId> work;
  work.reserve(n);
  for (VertexId v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    if (deg[v] < kk) work.push_back(v);
  }

  std::size_t head = 0;
  auto next = [&]() -> VertexId {
    switch (order) {
      case WorklistOrder::fifo:
        return work[head++];
      case WorklistOrder::lifo: {
        VertexId v = work.back();
        work.pop_back();
        return v;
      }
      case WorklistOrder::random: {
        std::uniform_int_distribution<std::size_t> pick(0, work.size() - 1);
        const std::size_t i = pick(*rng);
        VertexId v = work[i];
        work[i] = work.back();
        work.pop_back();
        return v;
      }
    }
    return 0;
  };
  auto pending = [&]() { return order == WorklistOrder::fifo ? head < work.size() : !work.empty(); };

  std::size_t live_half_edges = g.num_half_edges();
  while (pending()) {
    const VertexId v = next();
    alive[v] = false;
    const HalfEdgeId first = g.first_half_edge(v);
    for (HalfEdgeId h = first; h < first + g.degree(v); ++h) {
      if (dead_half[h]) continue;
      const HalfEdgeId p = g.partner(h);
      dead_half[h] = dead_half[p] = true;
      live_half_edges -= 2;
      const VertexId u = g.owner(p);
      if (u != v && deg[u]-- == kk) work.push_back(u);
    }
  }
  return collect_core(alive, live_half_edges);
}

CoreResult brute_force_core(const Multigraph& g, int k) {
  require_k(k);
  const std::size_t n = g.n();
  if (n > 16) throw SizeError("brute_force_core supports at most 16 vertices, got " + std::to_string(n));
  const auto edges = g.edges();
  const std::uint32_t full = (1u << n) - 1u;

  std::vector<int> deg(n);
  auto feasible = [&](std::uint32_t mask, std::size_t& edge_count) {
    std::fill(deg.begin(), deg.end(), 0);
    edge_count = 0;
    for (const auto& [u, v] : edges) {
      if ((mask >> u & 1u) && (mask >> v & 1u)) {
        ++deg[u];
        ++deg[v];
        ++edge_count;
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if ((mask >> v & 1u) && deg[v] < k) return false;
    }
    return true;
  };
  // true if a's sorted vertex list is lexicographically smaller than b's
  auto lex_less = [](std::uint32_t a, std::uint32_t b) {
    while (a != 0 && b != 0) {
      const int la = std::countr_zero(a), lb = std::countr_zero(b);
      if (la != lb) return la < lb;
      a &= a - 1;
      b &= b - 1;
    }
    return a == 0 && b != 0;
  };

  std::uint32_t best = 0, unite = 0;
  std::size_t best_edges = 0;
  for (std::uint32_t mask = 1; mask <= full && full != 0; ++mask) {
    std::size_t e = 0;
    if (!feasible(mask, e)) continue;
    unite |= mask;
    const int pc = std::popcount(mask), pb = std::popcount(best);
    if (pc > pb || (pc == pb && (e > best_edges || (e == best_edges && lex_less(mask, best))))) {
      best = mask;
      best_edges = e;
    }
    if (mask == full) break;
  }
  std::size_t union_edges = 0;
  if (unite != best || !feasible(unite, union_edges)) {
    throw std::logic_error("feasible vertex sets do not have a unique maximal element");
  }

  CoreResult res;
  for (VertexId v = 0; v < n; ++v) {
    if (best >> v & 1u) res.core_vertices.push_back(v);
  }
  res.v_core = res.core_vertices.size();
  res.e_core = best_edges;
  return res;
}

std::vector<Edge> core_edges(const Multigraph& g, const CoreResult& core) {
  std::vector<bool> in(g.n(), false);
  for (auto v : core.core_vertices) in[v] = true;
  std::vector<Edge> out;
  for (const auto& e : g.edges()) {
    if (in[e.first] && in[e.second]) out.push_back(e);
  }
  return out;
}

namespace {

// White balls of the deletion process, kept in one array partitioned as
// [light | heavy | removed] for O(1) uniform sampling and removal.
class BallPool {
 public:
  BallPool(std::vector<HalfEdgeId> offsets, int k) : offsets_(std::move(offsets)), k_(k) {
    const std::size_t n = offsets_.size() - 1;
    const std::size_t total = offsets_.back();
    owner_.resize(total);
    deg_.resize(n);
    pos_.assign(total, kDead);
    pool_.reserve(total);
    std::int64_t max_deg = 0;
    for (std::size_t v = 0; v < n; ++v) {
      deg_[v] = offsets_[v + 1] - offsets_[v];
      max_deg = std::max(max_deg, deg_[v]);
      for (HalfEdgeId h = offsets_[v]; h < offsets_[v + 1]; ++h) owner_[h] = static_cast<VertexId>(v);
    }
    heavy_hist_.assign(static_cast<std::size_t>(max_deg) + 1, 0);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t v = 0; v < n; ++v) {
        const bool light = deg_[v] < k_;
        if (light != (pass == 0)) continue;
        for (HalfEdgeId h = offsets_[v]; h < offsets_[v + 1]; ++h) {
          pos_[h] = pool_.size();
          pool_.push_back(h);
        }
        if (!light) {
          ++heavy_bins_;
          ++heavy_hist_[deg_[v]];
        }
      }
      if (pass == 0) light_end_ = pool_.size();
    }
  }

  std::size_t light() const noexcept { return light_end_; }
  std::size_t size() const noexcept { return pool_.size(); }
  std::size_t heavy() const noexcept { return pool_.size() - light_end_; }
  std::int64_t heavy_bins() const noexcept { return heavy_bins_; }
  const std::vector<std::int64_t>& heavy_hist() const noexcept { return heavy_hist_; }
  const std::vector<std::int64_t>& degrees() const noexcept { return deg_; }
  std::span<const HalfEdgeId> alive() const noexcept { return pool_; }

  HalfEdgeId uniform_light(Rng& rng) const {
    std::uniform_int_distribution<std::size_t> pick(0, light_end_ - 1);
    return pool_[pick(rng)];
  }
  HalfEdgeId uniform_any(Rng& rng) const {
    std::uniform_int_distribution<std::size_t> pick(0, pool_.size() - 1);
    return pool_[pick(rng)];
  }

  void remove(HalfEdgeId h) {
    const VertexId v = owner_[h];
    std::size_t i = pos_[h];
    if (deg_[v] < k_) {
      swap_slots(i, light_end_ - 1);
      i = --light_end_;
    }
    swap_slots(i, pool_.size() - 1);
    pool_.pop_back();
    pos_[h] = kDead;

    const std::int64_t before = deg_[v]--;
    if (before >= k_) {
      --heavy_hist_[before];
      if (before - 1 >= k_) {
        ++heavy_hist_[before - 1];
      } else {
        --heavy_bins_;
        for (HalfEdgeId x = offsets_[v]; x < offsets_[v + 1]; ++x) {
          if (pos_[x] != kDead) swap_slots(pos_[x], light_end_++);
        }
      }
    }
  }

 private:
  static constexpr std::size_t kDead = static_cast<std::size_t>(-1);

  void swap_slots(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap(pool_[a], pool_[b]);
    pos_[pool_[a]] = a;
    pos_[pool_[b]] = b;
  }

  std::vector<HalfEdgeId> offsets_;
  std::int64_t k_;
  std::vector<VertexId> owner_;
  std::vector<std::int64_t> deg_;
  std::vector<std::size_t> pos_;
  std::vector<HalfEdgeId> pool_;
  std::size_t light_end_ = 0;
  std::int64_t heavy_bins_ = 0;
  std::vector<std::int64_t> heavy_hist_;
};

std::vector<HalfEdgeId> offsets_of(std::span<const std::int64_t> degrees) {
  std::vector<HalfEdgeId> offsets(degrees.size() + 1, 0);
  std::uint64_t total = 0;
  for (std::size_t v = 0; v < degrees.size(); ++v) {
    total += static_cast<std::uint64_t>(degrees[v]);
    if (total > std::numeric_limits<HalfEdgeId>::max()) throw SizeError("more than 2^32-1 half-edges");
    offsets[v + 1] = static_cast<HalfEdgeId>(total);
  }
  return offsets;
}

// partner_of(pending, pool, rng) returns the half-edge removed together with `pending`.
template <typename PartnerFn>
HalfEdgePeelResult run_deletion(std::span<const std::int64_t> degrees, int k, Rng& rng, const PeelOptions& options,
                                PartnerFn partner_of, std::vector<HalfEdgeId>* exposed) {
  require_k(k);
  BallPool pool(offsets_of(degrees), k);
  HalfEdgePeelResult out;
  auto& traj = out.trajectory;
  const bool clock = options.record != RecordMode::none;
  const bool full = options.record == RecordMode::full;
  traj.snapshot_times = options.snapshot_times;
  std::size_t next_snapshot = 0;
  auto snapshot_until = [&](double t) {
    while (next_snapshot < traj.snapshot_times.size() && traj.snapshot_times[next_snapshot] < t) {
      traj.bin_counts.push_back(pool.heavy_hist());
      ++next_snapshot;
    }
  };
  auto record = [&](double t, std::int64_t light) {
    if (full) {
      traj.events.push_back({t, light, static_cast<std::int64_t>(pool.heavy()), pool.heavy_bins()});
    }
  };

  double t = 0.0;
  if (pool.light() == 0) {
    record(0.0, 0);
  } else {
    HalfEdgeId pending = pool.uniform_light(rng);
    pool.remove(pending);
    record(0.0, static_cast<std::int64_t>(pool.light()));
    for (;;) {
      if (clock) {
        std::exponential_distribution<double> wait(static_cast<double>(pool.size()));
        const double t_next = t + wait(rng);
        snapshot_until(t_next);
        t = t_next;
      }
      const HalfEdgeId partner = partner_of(pending, pool, rng);
      pool.remove(partner);
      ++traj.steps;
      if (exposed != nullptr) {
        (*exposed)[pending] = partner;
        (*exposed)[partner] = pending;
      }
      if (pool.light() == 0) {
        record(t, -1);
        break;
      }
      pending = pool.uniform_light(rng);
      pool.remove(pending);
      record(t, static_cast<std::int64_t>(pool.light()));
    }
  }
  if (clock) {
    traj.tau = t;
    snapshot_until(std::numeric_limits<double>::infinity());
  }
  traj.final_heavy = static_cast<std::int64_t>(pool.heavy());
  traj.final_heavy_bins = pool.heavy_bins();

  std::vector<bool> in_core(degrees.size());
  for (std::size_t v = 0; v < degrees.size(); ++v) in_core[v] = pool.degrees()[v] >= k;
  out.core = collect_core(in_core, pool.size());

  if (exposed != nullptr) {
    std::vector<HalfEdgeId> rest(pool.alive().begin(), pool.alive().end());
    std::shuffle(rest.begin(), rest.end(), rng);
    for (std::size_t i = 0; i + 1 < rest.size(); i += 2) {
      (*exposed)[rest[i]] = rest[i + 1];
      (*exposed)[rest[i + 1]] = rest[i];
    }
  }
  return out;
}

}  // namespace

HalfEdgePeelResult peel_halfedge(const DegreeSequence& seq, int k, Rng& rng, const PeelOptions& options) {
  if (!seq.even_sum()) throw ParityError("degree sum " + std::to_string(seq.degree_sum()) + " is odd");
  auto uniform_partner = [](HalfEdgeId, const BallPool& pool, Rng& r) { return pool.uniform_any(r); };
  if (!options.expose_matching) return run_deletion(seq.degrees(), k, rng, options, uniform_partner, nullptr);

  std::vector<HalfEdgeId> pairing(static_cast<std::size_t>(seq.degree_sum()));
  auto result = run_deletion(seq.degrees(), k, rng, options, uniform_partner, &pairing);
  result.realized = Multigraph::from_pairing(seq.degrees(), std::move(pairing));
  return result;
}

HalfEdgePeelResult peel_halfedge(const Multigraph& g, int k, Rng& rng, const PeelOptions& options) {
  const auto degrees = g.degree_vector();
  auto actual_partner = [&g](HalfEdgeId pending, const BallPool&, Rng&) { return g.partner(pending); };
  return run_deletion(degrees, k, rng, options, actual_partner, nullptr);
}

}  // namespace kcore
