#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kcore/degrees.hpp"
#include "kcore/errors.hpp"
#include "kcore/random.hpp"

using namespace kcore;

TEST_CASE("validate_sequence examples") {
  const auto a = validate_sequence(DegreeSequence({1, 1}));
  CHECK(a.pmf(1) == 1.0);
  CHECK(a.mean_degree == 1.0);
  CHECK(a.m == 1);
  CHECK_FALSE(a.odd_sum);

  const auto b = validate_sequence(DegreeSequence({3, 3, 3, 3}));
  CHECK(b.pmf(3) == 1.0);
  CHECK(b.mean_degree == 3.0);
  CHECK(b.m == 6);
  CHECK(b.second_moment == 9.0);
  CHECK(b.third_moment == doctest::Approx(4 * 27 / 8.0));

  const auto c = validate_sequence(DegreeSequence({1, 2}));
  CHECK(c.odd_sum);

  CHECK_THROWS_AS(DegreeSequence({1, -1}), DomainError);
  CHECK_THROWS_AS(DegreeSequence({DegreeSequence::kMaxDegree + 1}), DomainError);
  CHECK_NOTHROW(DegreeSequence({DegreeSequence::kMaxDegree, 1}));
}

TEST_CASE("empirical pmf sums to one exactly in counts") {
  auto rng = make_rng(5);
  const auto seq = sample_degrees(DegreeDistribution::poisson(3.0), 12345, ParityRepair::fix, rng);
  const auto diag = validate_sequence(seq);
  std::int64_t total = 0;
  for (auto c : diag.counts) total += c;
  CHECK(total == 12345);
}

TEST_CASE("sample_degrees point masses and parity repair") {
  auto rng = make_rng(1);
  const auto twos = sample_degrees(DegreeDistribution::point_mass(2), 5, ParityRepair::fix, rng);
  CHECK(std::vector<std::int64_t>(twos.degrees().begin(), twos.degrees().end()) ==
        std::vector<std::int64_t>{2, 2, 2, 2, 2});

  for (int rep = 0; rep < 20; ++rep) {
    const auto ones = sample_degrees(DegreeDistribution::point_mass(1), 5, ParityRepair::fix, rng);
    int n1 = 0, n2 = 0;
    for (auto d : ones.degrees()) (d == 1 ? n1 : n2) += 1;
    CHECK(n1 == 4);
    CHECK(n2 == 1);
    CHECK(ones.even_sum());
  }

  CHECK_THROWS_AS(sample_degrees(DegreeDistribution::point_mass(1), 5, ParityRepair::reject, rng), SamplingError);
  CHECK_THROWS_AS(sample_degrees(DegreeDistribution::point_mass(1), 0, ParityRepair::fix, rng), DomainError);
}

TEST_CASE("parity fix changes exactly one degree by one, only on odd raw sums") {
  // The fix path draws the raw degrees first with the same stream, so a
  // reject-mode draw from an identically seeded generator exposes the raw sample.
  const auto dist = DegreeDistribution::explicit_probs({0.2, 0.3, 0.1, 0.4});
  int odd = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto r1 = make_rng(seed);
    const auto fixed = sample_degrees(dist, 101, ParityRepair::fix, r1);
    auto r2 = make_rng(seed);
    std::discrete_distribution<std::int64_t> disc({0.2, 0.3, 0.1, 0.4});
    std::vector<std::int64_t> raw(101);
    for (auto& d : raw) d = disc(r2);
    std::int64_t raw_sum = 0;
    for (auto d : raw) raw_sum += d;
    int changed = 0;
    std::int64_t delta = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != fixed[i]) {
        ++changed;
        delta = fixed[i] - raw[i];
      }
    }
    if (raw_sum % 2 == 0) {
      CHECK(changed == 0);
    } else {
      ++odd;
      CHECK(changed == 1);
      CHECK(delta == 1);
    }
    CHECK(fixed.even_sum());
  }
  CHECK(odd > 50);
}

TEST_CASE("reject mode redraws to an even sum") {
  auto rng = make_rng(9);
  for (int i = 0; i < 50; ++i) {
    const auto seq = sample_degrees(DegreeDistribution::poisson(2.5), 7, ParityRepair::reject, rng);
    CHECK(seq.even_sum());
  }
}

TEST_CASE("Poisson(4) sample means concentrate") {
  // sd of the mean is 2/sqrt(1e5) = 0.0063, so 0.05 is about 8 sd.
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto rng = make_rng(derive_seed(404, seed));
    const auto seq = sample_degrees(DegreeDistribution::poisson(4.0), 100000, ParityRepair::fix, rng);
    if (std::abs(validate_sequence(seq).mean_degree - 4.0) <= 0.05) ++good;
  }
  CHECK(good >= 99);
}

TEST_CASE("empirical law converges in total variation") {
  const auto dist = DegreeDistribution::poisson(4.0);
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto rng = make_rng(derive_seed(77, seed));
    const auto seq = sample_degrees(dist, 1000000, ParityRepair::fix, rng);
    if (total_variation(seq, dist) <= 0.01) ++good;
  }
  CHECK(good >= 95);
}

TEST_CASE("exp_moment") {
  CHECK(exp_moment(DegreeSequence({0, 0, 0}), 0.7) == 1.0);
  CHECK(exp_moment(DegreeSequence({1, 1}), std::log(2.0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(exp_moment(DegreeSequence({1, 1}), 0.0), DomainError);

  // E e^{aW} for W ~ Po(4) is exp(4 (e^a - 1)). At a = 1 the variance of e^{W}
  // is exp(4 (e^2 - 1)), about 1.3e11, so a single n = 1e5 sample is not
  // concentrated; a = 1/2 has relative sd near 0.007 at that size.
  auto mgf = [](double a) { return std::exp(4.0 * (std::exp(a) - 1.0)); };
  long double pooled = 0.0L;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto rng = make_rng(derive_seed(31, seed));
    const auto seq = sample_degrees(DegreeDistribution::poisson(4.0), 100000, ParityRepair::fix, rng);
    CHECK(std::abs(exp_moment(seq, 0.5) / mgf(0.5) - 1.0) < 0.05);
    pooled += exp_moment(seq, 1.0);
  }
  CHECK(std::abs(static_cast<double>(pooled / 10) / mgf(1.0) - 1.0) < 0.2);
}

TEST_CASE("parse_degree_sequence formats and errors") {
  const auto plain = parse_degree_sequence("3 3\n 2\n\n2 0\n");
  CHECK(plain.n() == 5);
  CHECK(plain.degree_sum() == 10);

  const auto hist = parse_degree_sequence("#hist\n3 4\n1 2\n");
  CHECK(hist.n() == 6);
  CHECK(hist.degree_sum() == 14);
  CHECK(validate_sequence(hist).counts[3] == 4);

  try {
    parse_degree_sequence("1 2\n3 x\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_degree_sequence("#hist\n3\n"), ParseError);
  CHECK_THROWS_AS(parse_degree_sequence("#hist\n3 -1\n"), ParseError);
  CHECK_THROWS_AS(parse_degree_sequence("2 -1\n"), DomainError);
  CHECK_THROWS_AS(parse_degree_sequence("1.5\n"), ParseError);
}
