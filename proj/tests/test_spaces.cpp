#include <doctest.h>

#include <vector>

#include "genbound/errors.hpp"
#include "genbound/spaces.hpp"

using namespace genbound;

TEST_CASE("distribution invariants are enforced") {
  CHECK_THROWS_AS(FiniteDistribution({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteDistribution({-0.1, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteDistribution({{"a", "a"}, {0.5, 0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(FiniteDistribution(std::vector<double>{}), std::invalid_argument);

  const auto u = FiniteDistribution::uniform(4);
  CHECK(u.prob(2) == doctest::Approx(0.25));
  const auto p = FiniteDistribution::point_mass(3, 1);
  CHECK(p.prob(1) == 1.0);
  CHECK(p.prob(0) == 0.0);
}

TEST_CASE("dataset codes follow the least-significant-first convention") {
  const std::vector<std::size_t> zeros{0, 0, 0};
  CHECK(encode_dataset(zeros, 2).code == 0);

  // Z_1 = 1, Z_2 = 0 has code 1: Z_1 is the least-significant digit.
  const std::vector<std::size_t> ten{1, 0};
  CHECK(encode_dataset(ten, 2).code == 1);

  const std::vector<std::size_t> mixed{2, 1, 0};
  CHECK(encode_dataset(mixed, 3).code == 5);  // 2 + 1*3 + 0*9
}

TEST_CASE("encode and decode are mutually inverse over all of Z^n") {
  // Exhaustive round-trip, including a full tuple enumeration at |Z| = 3.
  std::vector<std::size_t> tuple(3, 0);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      for (std::size_t c = 0; c < 3; ++c) {
        tuple = {a, b, c};
        const DatasetIndex s = encode_dataset(tuple, 3);
        CHECK(decode_dataset(s) == tuple);
      }
    }
  }

  for (std::size_t z = 2; z <= 5; ++z) {
    for (std::size_t n = 1; n <= 8; ++n) {
      const std::uint64_t count = dataset_space_size(z, n);
      for (std::uint64_t code = 0; code < count; ++code) {
        const DatasetIndex s{code, n, z};
        CHECK(encode_dataset(s.digits(), z).code == code);
      }
    }
  }
}

TEST_CASE("encode rejects out-of-range entries") {
  const std::vector<std::size_t> bad{0, 2};
  CHECK_THROWS_AS(encode_dataset(bad, 2), std::domain_error);
  CHECK_THROWS_AS(encode_dataset({}, 2), std::invalid_argument);
}

TEST_CASE("capacity guards") {
  CHECK_THROWS_AS(dataset_space_size(3, 50), CapacityError);
  CHECK(checked_enumeration_size(2, 31) == (std::uint64_t{1} << 31));
  CHECK_THROWS_AS(checked_enumeration_size(2, 32), CapacityError);
}

TEST_CASE("product probability") {
  const auto uniform = FiniteDistribution::uniform(2);
  for (std::uint64_t code = 0; code < 8; ++code) {
    CHECK(product_probability(uniform, code, 3) == doctest::Approx(0.125));
  }

  const FiniteDistribution point({1.0, 0.0});
  CHECK(product_probability(point, 0, 3) == 1.0);
  for (std::uint64_t code = 1; code < 8; ++code) {
    CHECK(product_probability(point, code, 3) == 0.0);
  }

  const FiniteDistribution mu({0.3, 0.7});
  const std::vector<std::size_t> tuple{0, 1};
  CHECK(product_probability(mu, encode_dataset(tuple, 2)) ==
        doctest::Approx(0.21).epsilon(1e-12));

  // Total mass over every dataset is 1.
  double total = 0.0;
  for (std::uint64_t code = 0; code < 4; ++code) {
    total += product_probability(mu, code, 2);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

  // Same on a larger space with a skewed distribution.
  const FiniteDistribution skew({0.05, 0.2, 0.75});
  double mass = 0.0;
  for (std::uint64_t code = 0; code < 729; ++code) {
    mass += product_probability(skew, code, 6);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("odometer walks codes in order") {
  DatasetOdometer odo(5, 3, 4);
  for (std::uint64_t code = 5; code < 81; ++code, odo.advance()) {
    const DatasetIndex s{code, 4, 3};
    const auto expected = s.digits();
    const auto digits = odo.digits();
    REQUIRE(digits.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(digits[i] == expected[i]);
  }
}
