#include "kcore/degrees.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "kcore/errors.hpp"

namespace kcore {

DegreeSequence::DegreeSequence(std::vector<std::int64_t> degrees) : degrees_(std::move(degrees)) {
  for (auto d : degrees_) {
    if (d < 0) throw DomainError("negative degree " + std::to_string(d));
    if (d > kMaxDegree) throw DomainError("degree " + std::to_string(d) + " exceeds 2^31-1");
    degree_sum_ += d;
    max_degree_ = std::max(max_degree_, d);
  }
}

SequenceDiagnostics validate_sequence(const DegreeSequence& seq) {
  SequenceDiagnostics diag;
  diag.n = seq.n();
  diag.m = seq.m();
  diag.odd_sum = !seq.even_sum();
  if (seq.n() == 0) return diag;
  diag.counts.assign(static_cast<std::size_t>(seq.max_degree()) + 1, 0);
  long double s2 = 0, s3 = 0;
  for (auto d : seq.degrees()) {
    ++diag.counts[static_cast<std::size_t>(d)];
    const long double x = d;
    s2 += x * x;
    s3 += x * x * x;
  }
  const double n = static_cast<double>(seq.n());
  diag.mean_degree = static_cast<double>(seq.degree_sum()) / n;
  diag.second_moment = static_cast<double>(s2 / n);
  diag.third_moment = static_cast<double>(s3 / std::pow(static_cast<long double>(n), 1.5L));
  return diag;
}

double exp_moment(const DegreeSequence& seq, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (seq.n() == 0) throw DomainError("empty sequence");
  long double sum = 0;
  for (auto d : seq.degrees()) sum += std::exp(static_cast<long double>(alpha) * d);
  return static_cast<double>(sum / seq.n());
}

double total_variation(const DegreeSequence& seq, const DegreeDistribution& dist) {
  const auto diag = validate_sequence(seq);
  const std::size_t top = std::max(diag.counts.size(), dist.support_size());
  double tv = 0.0;
  for (std::size_t r = 0; r < top; ++r) tv += std::abs(diag.pmf(r) - dist.prob(r));
  // mass of dist beyond its stored support
  tv += dist.tail_mass(top);
  return tv / 2.0;
}

namespace {

std::vector<std::int64_t> draw(const DegreeDistribution& dist, std::size_t n, Rng& rng) {
  std::vector<std::int64_t> out(n);
  if (auto lambda = dist.poisson_lambda()) {
    std::poisson_distribution<std::int64_t> pois(*lambda);
    for (auto& d : out) d = pois(rng);
  } else {
    std::discrete_distribution<std::int64_t> disc(dist.probs().begin(), dist.probs().end());
    for (auto& d : out) d = disc(rng);
  }
  return out;
}

}  // namespace

DegreeSequence sample_degrees(const DegreeDistribution& dist, std::size_t n, ParityRepair parity, Rng& rng) {
  if (n == 0) throw DomainError("sample size must be at least 1");
  for (int attempt = 0; attempt <= 100; ++attempt) {
    auto degrees = draw(dist, n, rng);
    std::int64_t sum = 0;
    for (auto d : degrees) sum += d;
    if (sum % 2 == 0) return DegreeSequence(std::move(degrees));
    if (parity == ParityRepair::fix) {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      ++degrees[pick(rng)];
      return DegreeSequence(std::move(degrees));
    }
  }
  throw SamplingError("degree sum stayed odd after 100 redraws");
}

DegreeSequence parse_degree_sequence(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::int64_t> degrees;
  std::size_t line_no = 0;
  bool hist = false;
  bool first_token = true;

  auto parse_int = [&](const std::string& tok) -> std::int64_t {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw ParseError("not an integer: '" + tok + "'", line_no);
    }
    if (used != tok.size()) throw ParseError("not an integer: '" + tok + "'", line_no);
    return v;
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> toks;
    for (std::string tok; fields >> tok;) toks.push_back(tok);
    if (toks.empty()) continue;
    if (first_token) {
      first_token = false;
      if (toks.front() == "#hist") {
        if (toks.size() != 1) throw ParseError("#hist must stand alone on its line", line_no);
        hist = true;
        continue;
      }
    }
    if (hist) {
      if (toks.size() != 2) throw ParseError("expected 'degree count'", line_no);
      const auto degree = parse_int(toks[0]);
      const auto count = parse_int(toks[1]);
      if (count < 0) throw ParseError("negative count", line_no);
      if (degree < 0) throw DomainError("negative degree on line " + std::to_string(line_no));
      degrees.insert(degrees.end(), static_cast<std::size_t>(count), degree);
    } else {
      for (const auto& tok : toks) degrees.push_back(parse_int(tok));
    }
  }
  return DegreeSequence(std::move(degrees));
}

DegreeSequence load_degree_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open degree-sequence file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_degree_sequence(buf.str());
}

}  // namespace kcore
