#include "kcore/graphgen.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>

#include "kcore/errors.hpp"

namespace kcore {

namespace {

std::vector<HalfEdgeId> offsets_from_degrees(std::span<const std::int64_t> degrees) {
  std::vector<HalfEdgeId> offsets(degrees.size() + 1, 0);
  std::uint64_t total = 0;
  for (std::size_t v = 0; v < degrees.size(); ++v) {
    if (degrees[v] < 0) throw DomainError("negative degree");
    total += static_cast<std::uint64_t>(degrees[v]);
    if (total > std::numeric_limits<HalfEdgeId>::max()) throw SizeError("more than 2^32-1 half-edges");
    offsets[v + 1] = static_cast<HalfEdgeId>(total);
  }
  return offsets;
}

}  // namespace

Multigraph::Multigraph(std::vector<HalfEdgeId> offsets, std::vector<HalfEdgeId> pairing)
    : offsets_(std::move(offsets)), pairing_(std::move(pairing)) {
  owner_.resize(pairing_.size());
  for (std::size_t v = 0; v + 1 < offsets_.size(); ++v) {
    std::fill(owner_.begin() + offsets_[v], owner_.begin() + offsets_[v + 1], static_cast<VertexId>(v));
  }
}

Multigraph Multigraph::from_pairing(std::span<const std::int64_t> degrees, std::vector<HalfEdgeId> pairing) {
  auto offsets = offsets_from_degrees(degrees);
  if (offsets.back() != pairing.size()) throw DomainError("pairing size does not match the degree sum");
  for (std::size_t h = 0; h < pairing.size(); ++h) {
    const auto p = pairing[h];
    if (p >= pairing.size() || p == h || pairing[p] != h) {
      throw DomainError("pairing is not a fixed-point-free involution at half-edge " + std::to_string(h));
    }
  }
  return Multigraph(std::move(offsets), std::move(pairing));
}

Multigraph Multigraph::from_edges(std::size_t n, std::span<const Edge> edges) {
  if (n > std::numeric_limits<VertexId>::max()) throw SizeError("too many vertices");
  std::vector<std::int64_t> degrees(n, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw RangeError("edge endpoint out of range");
    ++degrees[u];
    ++degrees[v];
  }
  auto offsets = offsets_from_degrees(degrees);
  std::vector<HalfEdgeId> cursor(offsets.begin(), offsets.end() - 1);
  std::vector<HalfEdgeId> pairing(offsets.back());
  for (const auto& [u, v] : edges) {
    const HalfEdgeId a = cursor[u]++;
    const HalfEdgeId b = cursor[v]++;
    pairing[a] = b;
    pairing[b] = a;
  }
  return Multigraph(std::move(offsets), std::move(pairing));
}

std::vector<Edge> Multigraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (HalfEdgeId h = 0; h < pairing_.size(); ++h) {
    if (h < pairing_[h]) out.emplace_back(owner_[h], owner_[pairing_[h]]);
  }
  return out;
}

std::vector<std::int64_t> Multigraph::degree_vector() const {
  std::vector<std::int64_t> out(n());
  for (VertexId v = 0; v < out.size(); ++v) out[v] = static_cast<std::int64_t>(degree(v));
  return out;
}

Multigraph random_matching(const DegreeSequence& seq, Rng& rng) {
  if (!seq.even_sum()) throw ParityError("degree sum " + std::to_string(seq.degree_sum()) + " is odd");
  auto offsets = offsets_from_degrees(seq.degrees());
  const std::size_t total = offsets.back();
  std::vector<HalfEdgeId> order(total);
  std::iota(order.begin(), order.end(), HalfEdgeId{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<HalfEdgeId> pairing(total);
  for (std::size_t i = 0; i < total; i += 2) {
    pairing[order[i]] = order[i + 1];
    pairing[order[i + 1]] = order[i];
  }
  // A shuffle-and-pair result is an involution by construction.
  return Multigraph(std::move(offsets), std::move(pairing));
}

SimplicityReport is_simple(const Multigraph& g) {
  SimplicityReport report;
  std::vector<VertexId> nbrs;
  for (VertexId v = 0; v < g.n(); ++v) {
    nbrs.clear();
    const HalfEdgeId first = g.first_half_edge(v);
    for (HalfEdgeId h = first; h < first + g.degree(v); ++h) {
      const VertexId u = g.owner(g.partner(h));
      if (u == v) {
        if (h < g.partner(h)) ++report.loops;
      } else if (v < u) {
        nbrs.push_back(u);
      }
    }
    std::sort(nbrs.begin(), nbrs.end());
    for (std::size_t i = 1; i < nbrs.size(); ++i) {
      if (nbrs[i] == nbrs[i - 1]) ++report.multi_edges;
    }
  }
  report.is_simple = report.loops == 0 && report.multi_edges == 0;
  return report;
}

bool simple_moment_warning(const DegreeSequence& seq) {
  return seq.n() > 0 && validate_sequence(seq).second_moment > 50.0;
}

SimpleSample sample_simple(const DegreeSequence& seq, Rng& rng, std::size_t max_tries) {
  SimpleSample out;
  out.moment_warning = simple_moment_warning(seq);
  for (std::size_t attempt = 1; attempt <= max_tries; ++attempt) {
    auto g = random_matching(seq, rng);
    if (is_simple(g).is_simple) {
      out.graph = std::move(g);
      out.tries = attempt;
      return out;
    }
  }
  throw RejectionError("no simple graph after " + std::to_string(max_tries) + " configurations", max_tries);
}

Multigraph sample_gnm(std::size_t n, std::uint64_t m, Rng& rng) {
  const std::uint64_t pairs = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (m > pairs) throw DomainError("m = " + std::to_string(m) + " exceeds n(n-1)/2 = " + std::to_string(pairs));
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(m) * 2);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::uniform_int_distribution<std::uint64_t> pick(0, n == 0 ? 0 : n - 1);
  while (edges.size() < m) {
    auto u = pick(rng), v = pick(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (seen.insert(u * n + v).second) edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
  }
  return Multigraph::from_edges(n, edges);
}

Multigraph sample_gnp(std::size_t n, double lambda, Rng& rng) {
  if (!(lambda > 0.0) || !(lambda < static_cast<double>(n))) throw DomainError("G(n, lambda/n) needs 0 < lambda < n");
  const auto pairs = static_cast<std::int64_t>(static_cast<std::uint64_t>(n) * (n - 1) / 2);
  std::binomial_distribution<std::int64_t> edges(pairs, lambda / static_cast<double>(n));
  return sample_gnm(n, static_cast<std::uint64_t>(edges(rng)), rng);
}

void write_edge_list(std::size_t n, std::span<const Edge> edges, std::ostream& out) {
  out << n << ' ' << edges.size() << '\n';
  for (const auto& [u, v] : edges) out << u << ' ' << v << '\n';
}

void write_edge_list(const Multigraph& g, std::ostream& out) {
  const auto edges = g.edges();
  write_edge_list(g.n(), edges, out);
}

Multigraph read_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::uint64_t n = 0, m = 0;
  std::vector<Edge> edges;

  auto read_pair = [&](std::uint64_t& a, std::uint64_t& b) {
    std::istringstream fields(line);
    std::string x, y, extra;
    if (!(fields >> x >> y) || (fields >> extra)) throw ParseError("expected two integers", line_no);
    for (const auto* tok : {&x, &y}) {
      if (tok->empty() || tok->find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError("not a non-negative integer: '" + *tok + "'", line_no);
      }
    }
    try {
      a = std::stoull(x);
      b = std::stoull(y);
    } catch (const std::exception&) {
      throw ParseError("integer out of range", line_no);
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::uint64_t a = 0, b = 0;
    read_pair(a, b);
    if (!have_header) {
      n = a;
      m = b;
      have_header = true;
      if (n > std::numeric_limits<VertexId>::max()) throw RangeError("vertex count too large");
      edges.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(m, 1u << 24)));
      continue;
    }
    if (a >= n || b >= n) {
      throw RangeError("line " + std::to_string(line_no) + ": vertex index out of range for n = " + std::to_string(n));
    }
    if (edges.size() == m) throw ParseError("more edges than the header declares", line_no);
    edges.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
  }
  if (!have_header) throw ParseError("missing 'n m' header", line_no == 0 ? 1 : line_no);
  if (edges.size() != m) {
    throw ParseError("header declares " + std::to_string(m) + " edges, found " + std::to_string(edges.size()), line_no);
  }
  return Multigraph::from_edges(static_cast<std::size_t>(n), edges);
}

Multigraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge-list file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return read_edge_list(buf.str());
}

}  // namespace kcore
