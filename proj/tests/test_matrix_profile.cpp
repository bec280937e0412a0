#include "espresso/error.hpp"
#include "espresso/matrix_profile.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

using namespace espresso;

namespace {

double dist(std::vector<double> a, std::vector<double> b) { return znorm_distance(a, b); }

} // namespace

TEST_CASE("znorm_distance examples") {
  CHECK(dist({0, 1}, {0, 1}) == 0.0);
  CHECK(dist({0, 1}, {5, 9}) <= 1e-12);
  CHECK(dist({1, 2, 3}, {3, 2, 1}) == doctest::Approx(3.4641016151377544).epsilon(1e-12));
}

TEST_CASE("znorm_distance constant windows") {
  CHECK(dist({5, 5, 5}, {2, 2, 2}) == 0.0);
  CHECK(dist({5, 5, 5}, {1, 2, 3}) == doctest::Approx(std::sqrt(3.0)));
  CHECK(dist({1, 2, 3}, {7, 7, 7}) == doctest::Approx(std::sqrt(3.0)));
  // Below the variance guard relative to the mean.
  CHECK(dist({1e6, 1e6 + 1e-9, 1e6}, {4, 4, 4}) == 0.0);
}

TEST_CASE("znorm_distance rejects mismatched lengths") {
  try {
    dist({1, 2, 3}, {1, 2});
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
  CHECK_THROWS_AS(dist({1}, {2}), Error);
}

TEST_CASE("znorm_distance stays within [0, 2 sqrt(L)]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int t = 0; t < 500; ++t) {
    const std::size_t L = 2 + t % 9;
    std::vector<double> a(L), b(L);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    const double d = dist(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= 2.0 * std::sqrt(double(L)));
  }
}

TEST_CASE("plain distance") {
  const std::vector<double> a{0, 0}, b{3, 4};
  CHECK(plain_distance(a, b) == doctest::Approx(5.0));
  CHECK(window_distance(a, b, DistanceKind::plain) == doctest::Approx(5.0));
}

TEST_CASE("periodic channel has a zero profile") {
  const auto p = compute_profile(testutil::one_channel({0, 1, 0, 1, 0, 1, 0, 1}), 0,
                                 SubseqSpec::with_length(2));
  REQUIRE(p.size() == 7);
  for (double v : p.mp) CHECK(v == doctest::Approx(0.0).scale(1e-12));
}

TEST_CASE("anomalous window has the largest profile value") {
  // Motif 0,1,2 repeated with its reversal at index 3. Values from an
  // independent brute-force evaluation.
  const std::vector<double> x{0, 1, 2, 2, 1, 0, 0, 1, 2};
  const std::vector<double> mp{0.0, 0.8965754721680536, 1.7320508075688774, 3.3460652149512318,
                               1.7320508075688774, 0.8965754721680536, 0.0};
  const std::vector<std::size_t> mpi{6, 6, 4, 1, 2, 0, 0};
  const auto spec = SubseqSpec::with_length(3);
  for (const auto& p : {compute_profile(x, spec), brute_force_profile(x, spec)}) {
    REQUIRE(p.size() == mp.size());
    for (std::size_t i = 0; i < mp.size(); ++i) {
      CHECK(p.mp[i] == doctest::Approx(mp[i]).epsilon(1e-12).scale(1.0));
      CHECK(p.mpi[i] == mpi[i]);
    }
    const auto top = std::max_element(p.mp.begin(), p.mp.end()) - p.mp.begin();
    CHECK(top == 3);
  }
}

TEST_CASE("constant channel") {
  const std::vector<double> x{5, 5, 5, 5, 5, 5};
  const auto spec = SubseqSpec::with_length(2);
  const auto bf = brute_force_profile(x, spec);
  const auto fast = compute_profile(x, spec);
  for (std::size_t i = 0; i < bf.size(); ++i) {
    CHECK(bf.mp[i] == 0.0);
    CHECK(fast.mp[i] == 0.0);
    CHECK(fast.mpi[i] == bf.mpi[i]);
  }
  // Smallest admissible index wins the tie.
  CHECK(bf.mpi[0] == 1);
  CHECK(bf.mpi[4] == 0);
}

TEST_CASE("mixed constant and varying windows match the oracle") {
  const std::vector<double> x{1, 1, 1, 1, 2, 3, 2, 1, 1, 1, 1, 3, 2, 1, 1, 1};
  const auto spec = SubseqSpec::with_length(3);
  CHECK(compute_profile(x, spec) == brute_force_profile(x, spec));
}

TEST_CASE("compute_profile errors") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  try {
    compute_profile(x, SubseqSpec::with_length(4));
    FAIL("expected SubseqTooLong");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SubseqTooLong);
  }
  CHECK_THROWS_AS(brute_force_profile(x, SubseqSpec::with_length(4)), Error);
  CHECK_THROWS_AS(compute_profile(x, SubseqSpec{2, 0}), Error);
  // Radius so large that no window has an admissible neighbour.
  CHECK_THROWS_AS(compute_profile(x, SubseqSpec{3, 4}), Error);
}

TEST_CASE("fast profile equals the oracle on random channels") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const std::size_t L = std::array<std::size_t, 3>{4, 8, 16}[t % 3];
    const std::size_t n = 2 * L + rng() % (200 - 2 * L);
    auto x = t % 2 ? testutil::random_walk(n, rng()) : testutil::white_noise(n, rng());
    const auto spec = SubseqSpec::with_length(L);
    const auto fast = compute_profile(x, spec);
    const auto slow = brute_force_profile(x, spec);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) {
      CHECK(std::abs(fast.mp[i] - slow.mp[i]) <= 1e-9);
      CHECK(fast.mpi[i] == slow.mpi[i]);
    }
  }
}

TEST_CASE("profile invariants: bounds and exclusion zone") {
  auto x = testutil::random_walk(180, 5);
  for (std::size_t L : {4, 9, 20}) {
    const auto spec = SubseqSpec::with_length(L);
    const auto p = compute_profile(x, spec);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(p.mp[i] >= 0.0);
      CHECK(p.mp[i] <= 2.0 * std::sqrt(double(L)) + 1e-12);
      const std::size_t gap = p.mpi[i] > i ? p.mpi[i] - i : i - p.mpi[i];
      CHECK(gap >= spec.exclusion_radius);
      const auto a = std::span<const double>(x).subspan(i, L);
      const auto b = std::span<const double>(x).subspan(p.mpi[i], L);
      CHECK(std::abs(p.mp[i] - znorm_distance(a, b)) <= 1e-9);
    }
  }
}

TEST_CASE("profile is invariant under positive affine maps") {
  auto x = testutil::random_walk(150, 8);
  const auto spec = SubseqSpec::with_length(12);
  const auto base = compute_profile(x, spec);
  for (auto [a, b] : {std::pair{3.5, -20.0}, std::pair{0.01, 7.0}, std::pair{250.0, 1e3}}) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] + b;
    const auto p = compute_profile(y, spec);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(std::abs(p.mp[i] - base.mp[i]) <= 1e-7);
      CHECK(p.mpi[i] == base.mpi[i]);
    }
  }
}

TEST_CASE("plain distance profile matches its oracle") {
  auto x = testutil::random_walk(120, 21);
  const auto spec = SubseqSpec::with_length(8);
  const auto fast = compute_profile(x, spec, DistanceKind::plain);
  const auto slow = brute_force_profile(x, spec, DistanceKind::plain);
  for (std::size_t i = 0; i < fast.size(); ++i) {
    CHECK(std::abs(fast.mp[i] - slow.mp[i]) <= 1e-9);
    CHECK(fast.mpi[i] == slow.mpi[i]);
  }
}

TEST_CASE("series overload profiles the requested channel") {
  const auto s = validate_series({testutil::white_noise(64, 1), testutil::random_walk(64, 2)});
  const auto spec = SubseqSpec::with_length(6);
  CHECK(compute_profile(s, 1, spec) == compute_profile(s.channel(1), spec));
  CHECK_THROWS_AS(compute_profile(s, 2, spec), Error);
}
