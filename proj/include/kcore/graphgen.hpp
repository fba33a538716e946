#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "kcore/degrees.hpp"
#include "kcore/random.hpp"

namespace kcore {

using VertexId = std::uint32_t;
using HalfEdgeId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

/// Half-edge incidence structure. Half-edges of vertex v occupy the contiguous
/// block [first_half_edge(v), first_half_edge(v+1)); the pairing is a
/// fixed-point-free involution. Immutable once built.
class Multigraph {
 public:
  Multigraph() = default;

  /// Throws DomainError unless pairing is a perfect matching of sum(degrees) half-edges.
  static Multigraph from_pairing(std::span<const std::int64_t> degrees, std::vector<HalfEdgeId> pairing);
  /// Loops and repeated edges are kept. Throws RangeError on endpoints >= n.
  static Multigraph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t n() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_half_edges() const noexcept { return pairing_.size(); }
  std::size_t num_edges() const noexcept { return pairing_.size() / 2; }

  std::size_t degree(VertexId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  HalfEdgeId first_half_edge(VertexId v) const noexcept { return offsets_[v]; }
  VertexId owner(HalfEdgeId h) const noexcept { return owner_[h]; }
  HalfEdgeId partner(HalfEdgeId h) const noexcept { return pairing_[h]; }

  /// One (owner(h), owner(partner(h))) per edge, taking h < partner(h), in order of h.
  std::vector<Edge> edges() const;
  std::vector<std::int64_t> degree_vector() const;

 private:
  friend Multigraph random_matching(const DegreeSequence& seq, Rng& rng);
  Multigraph(std::vector<HalfEdgeId> offsets, std::vector<HalfEdgeId> pairing);

  std::vector<HalfEdgeId> offsets_;
  std::vector<VertexId> owner_;
  std::vector<HalfEdgeId> pairing_;
};

struct SimplicityReport {
  std::size_t loops = 0;
  std::size_t multi_edges = 0;  // parallel copies beyond the first, non-loop pairs
  bool is_simple = true;
};

/// Uniform perfect matching of the half-edges (Fisher-Yates shuffle, then pair
/// neighbours). Throws ParityError on an odd degree sum.
Multigraph random_matching(const DegreeSequence& seq, Rng& rng);

SimplicityReport is_simple(const Multigraph& g);

struct SimpleSample {
  Multigraph graph;
  std::size_t tries = 0;
  bool moment_warning = false;  // simple_moment_warning(seq)
};

/// sum d_i^2 / n > 50: rejection sampling of a simple graph is likely hopeless.
bool simple_moment_warning(const DegreeSequence& seq);

/// Rejection-samples random_matching until the result is simple. Throws
/// RejectionError after max_tries failures.
SimpleSample sample_simple(const DegreeSequence& seq, Rng& rng, std::size_t max_tries = 1000);

/// Uniform simple graph with exactly m edges.
Multigraph sample_gnm(std::size_t n, std::uint64_t m, Rng& rng);

/// G(n, lambda/n): M ~ Bi(n(n-1)/2, lambda/n) edges, then sample_gnm(n, M).
Multigraph sample_gnp(std::size_t n, double lambda, Rng& rng);

/// Header "n m", then one "u v" line per edge (loops as "u u").
void write_edge_list(const Multigraph& g, std::ostream& out);
void write_edge_list(std::size_t n, std::span<const Edge> edges, std::ostream& out);

/// Parses the format of write_edge_list. ParseError carries the line number.
Multigraph read_edge_list(std::string_view text);
Multigraph load_edge_list(const std::string& path);

}  // namespace kcore
