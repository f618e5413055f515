#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "zdip/sample.hpp"
#include "zdip/errors.hpp"

using zdip::Sample;
using zdip::canonicalize;
using zdip::from_sorted;

TEST_CASE("canonicalize sorts and keeps duplicates") {
  Sample s = canonicalize({3.0, 1.0, 2.0, 1.0});
  REQUIRE(s.size() == 4);
  REQUIRE(s.values() == std::vector<double>{1.0, 1.0, 2.0, 3.0});
  REQUIRE(s.is_sorted());
}

TEST_CASE("canonicalize accepts a single value") {
  Sample s = canonicalize({5.0});
  REQUIRE(s.size() == 1);
  REQUIRE(s.front() == 5.0);
  REQUIRE(s.back() == 5.0);
}

TEST_CASE("canonicalize rejects empty input") {
  REQUIRE_THROWS_AS(canonicalize({}), zdip::EmptyInput);
}

TEST_CASE("canonicalize rejects non-finite values with the offending index") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(canonicalize({1.0, nan, 2.0}), zdip::NonFiniteValue);
  REQUIRE_THROWS_AS(canonicalize({inf}), zdip::NonFiniteValue);
  REQUIRE_THROWS_AS(canonicalize({1.0, 2.0, -inf}), zdip::NonFiniteValue);
  try {
    canonicalize({1.0, nan, 2.0});
    FAIL("expected NonFiniteValue");
  } catch (const zdip::NonFiniteValue& e) {
    REQUIRE(std::string(e.what()).find("index 1") != std::string::npos);
  }
}

TEST_CASE("from_sorted trusts sorted input and repairs unsorted input") {
  Sample ok = from_sorted({1.0, 2.0, 3.0});
  REQUIRE(ok.values() == std::vector<double>{1.0, 2.0, 3.0});

  Sample fixed = from_sorted({3.0, 1.0, 2.0});
  REQUIRE(fixed.is_sorted());
  REQUIRE(fixed.values() == std::vector<double>{1.0, 2.0, 3.0});

  REQUIRE_THROWS_AS(from_sorted({}), zdip::EmptyInput);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(from_sorted({1.0, nan}), zdip::NonFiniteValue);
}

TEST_CASE("negative zero and positive zero coexist") {
  Sample s = canonicalize({0.0, -0.0, 1.0});
  REQUIRE(s.size() == 3);
  REQUIRE(s.values()[0] == 0.0);
  REQUIRE(s.values()[1] == 0.0);
}
