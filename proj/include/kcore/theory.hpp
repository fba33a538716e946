#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace kcore {

/// Limit degree law (p_r). Stored with explicit finite support; a Poisson
/// law additionally remembers its parameter so that closed forms can be used.
class DegreeDistribution {
 public:
  /// Poisson(lambda), stored truncated where the remaining mass drops below 1e-15.
  static DegreeDistribution poisson(double lambda);
  /// Throws DomainError unless probs are non-negative, sum to 1 within 1e-9 and have positive mean.
  static DegreeDistribution explicit_probs(std::vector<double> probs);
  static DegreeDistribution point_mass(int degree);

  std::span<const double> probs() const noexcept { return probs_; }
  double prob(std::size_t r) const noexcept { return r < probs_.size() ? probs_[r] : 0.0; }
  std::size_t support_size() const noexcept { return probs_.size(); }
  double mean() const noexcept { return mean_; }
  std::optional<double> poisson_lambda() const noexcept { return poisson_lambda_; }
  bool is_poisson() const noexcept { return poisson_lambda_.has_value(); }

  /// sum_{l >= r} p_l
  double tail_mass(std::size_t r) const noexcept;
  /// sum_{l >= r} l p_l
  double tail_first_moment(std::size_t r) const noexcept;

 private:
  DegreeDistribution(std::vector<double> probs, std::optional<double> poisson_lambda);

  std::vector<double> probs_;
  std::vector<double> tail_mass_;
  std::vector<double> tail_moment_;
  double mean_ = 0.0;
  std::optional<double> poisson_lambda_;
};

/// Parses {"type":"poisson","lambda":L} or {"type":"explicit","probs":[...]}.
/// Explicit probabilities must sum to 1 within 1e-6 and are renormalized.
DegreeDistribution distribution_from_json(std::string_view text);
DegreeDistribution load_distribution(const std::string& path);

double poisson_pmf(int r, double mu);

/// psi_j(mu) = P(Po(mu) >= j), absolute error below 1e-12.
double poisson_tail(int j, double mu);

/// psi_{k-1}(mu) / mu
double phi(int k, double mu);

/// Unique maximizer of phi for k >= 3.
double phi_argmax(int k);

/// lambda_k = min_{mu>0} mu / psi_{k-1}(mu). Exactly 1 for k = 2.
double lambda_crit(int k);

/// Largest root of mu / psi_{k-1}(mu) = lambda. Throws NoSupercriticalRoot
/// when lambda <= lambda_k.
double mu_k(int k, double lambda);

struct RootPair {
  double mu_minus = 0.0;
  double mu_plus = 0.0;
};

/// Both positive roots for k >= 3; k = 2 has only one and raises StructureError.
RootPair root_pair(int k, double lambda);

/// pi_lr(p) = P(Bi(l, p) = r)
double binomial_pmf(int l, int r, double p);

/// P(W_p = r). Uses the Poisson closed form when available.
double thinned_pmf(const DegreeDistribution& dist, double p, int r);
/// Always sums p_l pi_lr(p) over the stored support.
double thinned_pmf_generic(const DegreeDistribution& dist, double p, int r);

/// h(p) = E[W_p 1{W_p >= k}]
double h_func(const DegreeDistribution& dist, int k, double p);
/// h_1(p) = P(W_p >= k)
double h1_func(const DegreeDistribution& dist, int k, double p);
double h_func_generic(const DegreeDistribution& dist, int k, double p);
double h1_func_generic(const DegreeDistribution& dist, int k, double p);

struct PHatResult {
  double p_hat = 0.0;
  // lambda p^2 < h(p) on an interval just below p_hat
  bool strictly_below = false;
  // root found only as |g| below 1e-12 without a sign change
  bool tangent = false;
};

/// Largest p in (0, 1] with lambda p^2 = h(p), or 0 if none.
PHatResult p_hat(const DegreeDistribution& dist, int k);

struct CorePrediction {
  int k = 2;
  std::optional<double> lambda_crit;  // Poisson laws only
  double mu = 0.0;                    // lambda * p_hat
  double p_hat = 0.0;
  double v_frac = 0.0;  // h_1(p_hat)
  double e_frac = 0.0;  // h(p_hat) / 2
  bool tangent = false;
  bool strictly_below = false;
};

CorePrediction predict_core(const DegreeDistribution& dist, int k);

}  // namespace kcore
