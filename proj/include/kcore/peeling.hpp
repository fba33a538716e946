#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "kcore/degrees.hpp"
#include "kcore/graphgen.hpp"
#include "kcore/random.hpp"

namespace kcore {

struct CoreResult {
  std::vector<VertexId> core_vertices;  // sorted ascending
  std::size_t v_core = 0;
  std::size_t e_core = 0;

  bool empty() const noexcept { return v_core == 0; }
};

enum class WorklistOrder { fifo, lifo, random };

/// Repeatedly deletes a vertex of current degree < k (a loop counts 2).
/// Linear in n + m.
CoreResult peel_bucket(const Multigraph& g, int k);
/// Same, with an explicit worklist discipline; `random` draws from rng.
CoreResult peel_bucket(const Multigraph& g, int k, WorklistOrder order, Rng* rng);

/// Exhaustive search over vertex subsets, n <= 16 (SizeError otherwise).
/// Throws std::logic_error if the feasible sets have no single top element.
CoreResult brute_force_core(const Multigraph& g, int k);

/// Edges of g with both endpoints in the core, vertex ids unchanged.
std::vector<Edge> core_edges(const Multigraph& g, const CoreResult& core);

enum class RecordMode { none, summary, full };

struct TrajectoryEvent {
  double t = 0.0;
  std::int64_t light = 0;       // L(t), white light balls
  std::int64_t heavy = 0;       // H(t), heavy balls
  std::int64_t heavy_bins = 0;  // H_1(t)
};

struct PeelTrajectory {
  // Full mode only. The first record is the state right after the initial
  // light-ball removal at t = 0; the last is the stopping event with light = -1.
  std::vector<TrajectoryEvent> events;
  double tau = std::numeric_limits<double>::quiet_NaN();  // NaN in RecordMode::none
  std::int64_t final_heavy = 0;
  std::int64_t final_heavy_bins = 0;
  std::size_t steps = 0;  // edges removed
  // Heavy-bin histogram per snapshot time: bin_counts[s][r] = U_r for r >= k, 0 below k.
  std::vector<double> snapshot_times;
  std::vector<std::vector<std::int64_t>> bin_counts;
};

struct PeelOptions {
  RecordMode record = RecordMode::summary;
  std::vector<double> snapshot_times;  // ascending
  // Complete the exposed pairs with a uniform matching of the survivors and
  // return the realized multigraph (configuration mode only).
  bool expose_matching = false;
};

struct HalfEdgePeelResult {
  CoreResult core;
  PeelTrajectory trajectory;
  std::optional<Multigraph> realized;
};

/// Randomized light-half-edge deletion on the configuration model: the
/// partner of each removed light half-edge is revealed uniformly among all
/// remaining half-edges. Throws ParityError on odd degree sums.
HalfEdgePeelResult peel_halfedge(const DegreeSequence& seq, int k, Rng& rng, const PeelOptions& options = {});

/// Same deletion rule on a fixed multigraph: the actual partner is removed.
HalfEdgePeelResult peel_halfedge(const Multigraph& g, int k, Rng& rng, const PeelOptions& options = {});

}  // namespace kcore
