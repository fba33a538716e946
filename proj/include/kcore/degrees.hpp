#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kcore/random.hpp"
#include "kcore/theory.hpp"

namespace kcore {

/// Finite degree sequence (d_i). An odd degree sum is representable so that
/// it can be diagnosed; the configuration model refuses it.
class DegreeSequence {
 public:
  static constexpr std::int64_t kMaxDegree = 2147483647;  // 2^31 - 1

  DegreeSequence() = default;
  /// Throws DomainError on negative degrees or degrees above kMaxDegree.
  explicit DegreeSequence(std::vector<std::int64_t> degrees);

  std::span<const std::int64_t> degrees() const noexcept { return degrees_; }
  std::int64_t operator[](std::size_t i) const noexcept { return degrees_[i]; }
  std::size_t n() const noexcept { return degrees_.size(); }
  std::int64_t degree_sum() const noexcept { return degree_sum_; }
  bool even_sum() const noexcept { return degree_sum_ % 2 == 0; }
  /// Edge count; only meaningful when even_sum().
  std::int64_t m() const noexcept { return degree_sum_ / 2; }
  std::int64_t max_degree() const noexcept { return max_degree_; }

 private:
  std::vector<std::int64_t> degrees_;
  std::int64_t degree_sum_ = 0;
  std::int64_t max_degree_ = 0;
};

struct SequenceDiagnostics {
  std::size_t n = 0;
  std::int64_t m = 0;
  bool odd_sum = false;
  std::vector<std::int64_t> counts;  // counts[r] = #{i : d_i = r}
  double mean_degree = 0.0;          // 2m / n
  double second_moment = 0.0;        // sum d_i^2 / n
  double third_moment = 0.0;         // sum d_i^3 / n^{3/2}

  double pmf(std::size_t r) const {
    return r < counts.size() && n > 0 ? static_cast<double>(counts[r]) / static_cast<double>(n) : 0.0;
  }
};

SequenceDiagnostics validate_sequence(const DegreeSequence& seq);

/// sum_i exp(alpha d_i) / n
double exp_moment(const DegreeSequence& seq, double alpha);

/// Total-variation distance between the empirical law of seq and dist.
double total_variation(const DegreeSequence& seq, const DegreeDistribution& dist);

enum class ParityRepair { fix, reject };

/// n i.i.d. draws from dist. An odd sum is repaired by adding 1 to a uniformly
/// chosen vertex (fix) or by redrawing everything, at most 100 times (reject).
DegreeSequence sample_degrees(const DegreeDistribution& dist, std::size_t n, ParityRepair parity, Rng& rng);

/// Whitespace-separated integers, or "degree count" lines after a leading `#hist` token.
DegreeSequence parse_degree_sequence(std::string_view text);
DegreeSequence load_degree_sequence(const std::string& path);

}  // namespace kcore
