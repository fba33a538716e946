#include "kcore/theory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "json.hpp"
#include "kcore/errors.hpp"

namespace kcore {

namespace {

constexpr double kTailCutoff = 1e-12;
constexpr double kGridStep = 1e-3;

void require_k(int k) {
  if (k < 2) throw DomainError("k must be at least 2, got " + std::to_string(k));
}

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("retention probability must lie in [0,1]");
}

double log_poisson_pmf(int r, double mu) {
  return r * std::log(mu) - mu - std::lgamma(r + 1.0);
}

// Bisection for a continuous f with f(neg) < 0 <= f(pos). Returns the midpoint
// of the final bracket.
double bisect(const std::function<double(double)>& f, double neg, double pos, double tol) {
  for (int it = 0; it < 400; ++it) {
    double mid = 0.5 * (neg + pos);
    if (mid == neg || mid == pos || std::abs(pos - neg) <= tol) break;
    if (f(mid) < 0.0) {
      neg = mid;
    } else {
      pos = mid;
    }
  }
  return 0.5 * (neg + pos);
}

// Golden-section search for the maximum of a unimodal f on [a, b].
double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    if (c >= d) break;
  }
  return 0.5 * (a + b);
}

}  // namespace

// ---------------------------------------------------------------------------
// DegreeDistribution

DegreeDistribution::DegreeDistribution(std::vector<double> probs, std::optional<double> poisson_lambda)
    : probs_(std::move(probs)), poisson_lambda_(poisson_lambda) {
  tail_mass_.assign(probs_.size() + 1, 0.0);
  tail_moment_.assign(probs_.size() + 1, 0.0);
  for (std::size_t r = probs_.size(); r-- > 0;) {
    tail_mass_[r] = tail_mass_[r + 1] + probs_[r];
    tail_moment_[r] = tail_moment_[r + 1] + static_cast<double>(r) * probs_[r];
  }
  mean_ = poisson_lambda_ ? *poisson_lambda_ : tail_moment_[0];
}

DegreeDistribution DegreeDistribution::poisson(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("Poisson mean must be finite and positive");
  std::vector<double> probs;
  double cumulative = 0.0;
  for (int r = 0;; ++r) {
    double pr = std::exp(log_poisson_pmf(r, lambda));
    probs.push_back(pr);
    cumulative += pr;
    if (r > lambda && 1.0 - cumulative < 1e-15) break;
    if (r > lambda && pr < 1e-300) break;
  }
  return DegreeDistribution(std::move(probs), lambda);
}

DegreeDistribution DegreeDistribution::explicit_probs(std::vector<double> probs) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("probabilities must be finite and non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("probabilities must sum to 1");
  while (!probs.empty() && probs.back() == 0.0) probs.pop_back();
  DegreeDistribution dist(std::move(probs), std::nullopt);
  if (!(dist.mean() > 0.0)) throw DomainError("mean degree must be positive");
  return dist;
}

DegreeDistribution DegreeDistribution::point_mass(int degree) {
  if (degree < 1) throw DomainError("point mass must sit at a positive degree");
  std::vector<double> probs(static_cast<std::size_t>(degree) + 1, 0.0);
  probs.back() = 1.0;
  return explicit_probs(std::move(probs));
}

double DegreeDistribution::tail_mass(std::size_t r) const noexcept {
  return r < tail_mass_.size() ? tail_mass_[r] : 0.0;
}

double DegreeDistribution::tail_first_moment(std::size_t r) const noexcept {
  return r < tail_moment_.size() ? tail_moment_[r] : 0.0;
}

DegreeDistribution distribution_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid distribution JSON: ") + e.what(), 1);
  }
  if (!doc.is_object() || !doc.contains("type")) throw ParseError("distribution needs a \"type\" field", 1);
  const auto type = doc.at("type").get<std::string>();
  if (type == "poisson") {
    if (!doc.contains("lambda") || !doc.at("lambda").is_number()) throw ParseError("poisson needs numeric \"lambda\"", 1);
    return DegreeDistribution::poisson(doc.at("lambda").get<double>());
  }
  if (type == "explicit") {
    if (!doc.contains("probs") || !doc.at("probs").is_array()) throw ParseError("explicit needs a \"probs\" array", 1);
    std::vector<double> probs;
    for (const auto& v : doc.at("probs")) {
      if (!v.is_number()) throw ParseError("probabilities must be numbers", 1);
      probs.push_back(v.get<double>());
    }
    double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-6) throw DomainError("probabilities sum to " + std::to_string(total) + ", not 1");
    for (double& p : probs) p /= total;
    return DegreeDistribution::explicit_probs(std::move(probs));
  }
  throw ParseError("unknown distribution type \"" + type + "\"", 1);
}

DegreeDistribution load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open distribution file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return distribution_from_json(buf.str());
}

// ---------------------------------------------------------------------------
// Poisson tails and the fixed-point equation

double poisson_pmf(int r, double mu) {
  if (r < 0 || !(mu >= 0.0)) throw DomainError("poisson_pmf needs r >= 0 and mu >= 0");
  if (mu == 0.0) return r == 0 ? 1.0 : 0.0;
  return std::exp(log_poisson_pmf(r, mu));
}

double poisson_tail(int j, double mu) {
  if (j < 0 || !(mu >= 0.0)) throw DomainError("poisson_tail needs j >= 0 and mu >= 0");
  if (j == 0) return 1.0;
  if (mu == 0.0) return 0.0;
  if (std::isinf(mu)) return 1.0;

  if (j > mu) {
    // Upper tail summed directly: terms decrease at least geometrically with
    // ratio mu/(r+1) < 1, bounding the remainder by term * q / (1 - q).
    double term = std::exp(log_poisson_pmf(j, mu));
    double sum = 0.0;
    for (long r = j; term > 0.0; ++r) {
      sum += term;
      double q = mu / static_cast<double>(r + 1);
      double rest = term * q / (1.0 - q);
      if (rest <= 1e-17 * sum) break;
      term *= q;
    }
    return std::min(sum, 1.0);
  }

  // 1 - sum_{r<j} pmf(r), walking down from r = j-1 with ratio r/mu < 1.
  double term = std::exp(log_poisson_pmf(j - 1, mu));
  double sum = 0.0;
  for (long r = j - 1; r >= 0 && term > 0.0; --r) {
    sum += term;
    double q = static_cast<double>(r) / mu;
    double rest = term * q / (1.0 - q);
    if (rest <= 1e-17 * sum) break;
    term *= q;
  }
  return std::clamp(1.0 - sum, 0.0, 1.0);
}

double phi(int k, double mu) {
  require_k(k);
  if (!(mu > 0.0)) throw DomainError("phi needs mu > 0");
  return poisson_tail(k - 1, mu) / mu;
}

double phi_argmax(int k) {
  require_k(k);
  if (k == 2) throw StructureError("phi is strictly decreasing for k = 2; no interior maximum");
  const double upper = 2.0 * k + 50.0;
  double best_x = kGridStep;
  double best = phi(k, best_x);
  for (double x = 2 * kGridStep; x <= upper; x += kGridStep) {
    double v = phi(k, x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  auto f = [k](double x) { return phi(k, x); };
  return golden_max(f, std::max(best_x - kGridStep, kGridStep / 2), best_x + kGridStep, 1e-13);
}

double lambda_crit(int k) {
  require_k(k);
  if (k == 2) return 1.0;
  return 1.0 / phi(k, phi_argmax(k));
}

double mu_k(int k, double lambda) {
  require_k(k);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be finite and positive");
  const double threshold = lambda_crit(k);
  if (lambda <= threshold) {
    throw NoSupercriticalRoot("lambda = " + std::to_string(lambda) + " does not exceed lambda_" +
                              std::to_string(k) + " = " + std::to_string(threshold));
  }
  auto f = [k, lambda](double mu) { return mu / poisson_tail(k - 1, mu) - lambda; };

  double lo;
  if (k == 2) {
    lo = 0.5;
    for (int i = 0; i < 2000 && f(lo) >= 0.0; ++i) lo *= 0.5;
    if (f(lo) >= 0.0) throw NoSupercriticalRoot("lambda too close to 1 to bracket the root");
  } else {
    lo = phi_argmax(k);
  }
  double hi = std::max(2.0 * lo, lambda);
  while (!(f(hi) > 0.0)) hi *= 2.0;
  return bisect(f, lo, hi, 1e-12 * std::max(1.0, hi));
}

RootPair root_pair(int k, double lambda) {
  require_k(k);
  if (k == 2) throw StructureError("for k = 2 the fixed-point equation has exactly one positive root");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be finite and positive");
  const double peak = phi_argmax(k);
  const double threshold = 1.0 / phi(k, peak);
  if (lambda <= threshold) throw NoSupercriticalRoot("lambda does not exceed lambda_k");

  auto f = [k, lambda](double mu) { return mu / poisson_tail(k - 1, mu) - lambda; };
  RootPair pair;
  pair.mu_plus = mu_k(k, lambda);

  double lo = peak / 2.0;
  while (!(f(lo) > 0.0)) lo /= 2.0;
  // f(peak) < 0 < f(lo)
  pair.mu_minus = bisect(f, peak, lo, 1e-12);

  // Dense-grid check: exactly two sign changes, peak included as a grid point.
  const int pts = 20000;
  const double hi = 2.0 * pair.mu_plus + 1.0;
  int changes = 0;
  double prev = f(lo);
  auto visit = [&](double x) {
    double v = f(x);
    if ((prev > 0.0) != (v > 0.0)) ++changes;
    prev = v;
  };
  for (int i = 1; i <= pts; ++i) visit(lo + (peak - lo) * i / pts);
  for (int i = 1; i <= pts; ++i) visit(peak + (hi - peak) * i / pts);
  if (changes != 2) {
    throw StructureError("expected exactly two sign changes, saw " + std::to_string(changes));
  }
  return pair;
}

// ---------------------------------------------------------------------------
// Thinning, h and h_1

double binomial_pmf(int l, int r, double p) {
  require_probability(p);
  if (l < 0 || r < 0 || r > l) return 0.0;
  if (p == 0.0) return r == 0 ? 1.0 : 0.0;
  if (p == 1.0) return r == l ? 1.0 : 0.0;
  double log_choose = std::lgamma(l + 1.0) - std::lgamma(r + 1.0) - std::lgamma(l - r + 1.0);
  return std::exp(log_choose + r * std::log(p) + (l - r) * std::log1p(-p));
}

double thinned_pmf_generic(const DegreeDistribution& dist, double p, int r) {
  require_probability(p);
  if (r < 0) throw DomainError("r must be non-negative");
  double sum = 0.0;
  const auto n = static_cast<int>(dist.support_size());
  for (int l = r; l < n; ++l) {
    sum += dist.prob(l) * binomial_pmf(l, r, p);
    if (dist.tail_mass(l + 1) < kTailCutoff) break;
  }
  return sum;
}

double thinned_pmf(const DegreeDistribution& dist, double p, int r) {
  require_probability(p);
  if (r < 0) throw DomainError("r must be non-negative");
  if (auto lambda = dist.poisson_lambda()) return poisson_pmf(r, *lambda * p);
  return thinned_pmf_generic(dist, p, r);
}

namespace {

// sum_l p_l sum_{r=k}^{l} w(r) pi_lr(p), with w(r) = r or 1.
double thinned_upper_sum(const DegreeDistribution& dist, int k, double p, bool weighted) {
  require_k(k);
  require_probability(p);
  double sum = 0.0;
  const auto n = static_cast<int>(dist.support_size());
  for (int l = k; l < n; ++l) {
    const double pl = dist.prob(l);
    if (pl > 0.0) {
      double inner = 0.0;
      for (int r = k; r <= l; ++r) inner += (weighted ? r : 1) * binomial_pmf(l, r, p);
      sum += pl * inner;
    }
    const double rest = weighted ? dist.tail_first_moment(l + 1) : dist.tail_mass(l + 1);
    if (rest < kTailCutoff) break;
  }
  return sum;
}

}  // namespace

double h_func_generic(const DegreeDistribution& dist, int k, double p) {
  return thinned_upper_sum(dist, k, p, true);
}

double h1_func_generic(const DegreeDistribution& dist, int k, double p) {
  return thinned_upper_sum(dist, k, p, false);
}

double h_func(const DegreeDistribution& dist, int k, double p) {
  require_k(k);
  require_probability(p);
  if (auto lambda = dist.poisson_lambda()) {
    const double mu = *lambda * p;
    return mu * poisson_tail(k - 1, mu);
  }
  return h_func_generic(dist, k, p);
}

double h1_func(const DegreeDistribution& dist, int k, double p) {
  require_k(k);
  require_probability(p);
  if (auto lambda = dist.poisson_lambda()) return poisson_tail(k, *lambda * p);
  return h1_func_generic(dist, k, p);
}

// ---------------------------------------------------------------------------
// p_hat and predictions

PHatResult p_hat(const DegreeDistribution& dist, int k) {
  require_k(k);
  const double lambda = dist.mean();
  // g(p) / p^2; same roots on (0, 1] and stays O(1) as p -> 0.
  auto scaled_g = [&](double p) { return lambda - h_func(dist, k, p) / (p * p); };
  constexpr double kTangent = 1e-12;

  std::vector<double> grid;
  const int coarse = static_cast<int>(std::lround(1.0 / kGridStep));
  for (int i = 0; i < coarse; ++i) grid.push_back(1.0 - i * kGridStep);
  for (int i = 1; i <= 60; ++i) grid.push_back(kGridStep * std::pow(10.0, -6.0 * i / 60.0));

  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = scaled_g(grid[i]);

  PHatResult result;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double gi = values[i];
    const bool has_next = i + 1 < grid.size();
    if (std::abs(gi) < kTangent) {
      result.p_hat = grid[i];
      result.strictly_below = has_next && values[i + 1] < 0.0;
      result.tangent = !result.strictly_below;
      return result;
    }
    if (!has_next) break;
    if (gi > 0.0 && values[i + 1] < 0.0) {
      result.p_hat = bisect([&](double p) { return -scaled_g(p); }, grid[i], grid[i + 1], 1e-15);
      result.strictly_below = true;
      return result;
    }
    // A dip between grid points would be missed by the sign scan; refine local minima.
    if (i > 0 && gi > 0.0 && gi <= values[i - 1] && gi <= values[i + 1]) {
      auto neg = [&](double p) { return -scaled_g(p); };
      const double p_min = golden_max(neg, grid[i + 1], grid[i - 1], 1e-13);
      const double g_min = scaled_g(p_min);
      if (std::abs(g_min) < kTangent) {
        result.p_hat = p_min;
        result.tangent = true;
        return result;
      }
      if (g_min < 0.0) {
        result.p_hat = bisect([&](double p) { return -scaled_g(p); }, grid[i - 1], p_min, 1e-15);
        result.strictly_below = true;
        return result;
      }
    }
  }
  return result;
}

CorePrediction predict_core(const DegreeDistribution& dist, int k) {
  require_k(k);
  const PHatResult root = p_hat(dist, k);
  CorePrediction pred;
  pred.k = k;
  if (dist.is_poisson()) pred.lambda_crit = lambda_crit(k);
  pred.p_hat = root.p_hat;
  pred.mu = dist.mean() * root.p_hat;
  pred.tangent = root.tangent;
  pred.strictly_below = root.strictly_below;
  if (root.p_hat > 0.0) {
    pred.v_frac = h1_func(dist, k, root.p_hat);
    pred.e_frac = h_func(dist, k, root.p_hat) / 2.0;
  }
  return pred;
}

}  // namespace kcore
