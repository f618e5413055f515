#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "zdip/calibration.hpp"
#include "zdip/errors.hpp"
#include "zdip/null_table.hpp"

using zdip::NullTable;
using zdip::ThresholdEstimate;

namespace {

const NullTable& test_table() {
  static const NullTable table =
      zdip::generate_table({4, 8, 16, 32, 64, 100, 128}, 1200, 271828, 2);
  return table;
}

ThresholdEstimate estimate_with(double ci_high) {
  ThresholdEstimate e;
  e.ci_high = ci_high;
  return e;
}

}  // namespace

TEST_CASE("sorted_quantile interpolates between order statistics") {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[i] = static_cast<double>(i + 1);
  REQUIRE(zdip::sorted_quantile(v, 0.95) == Catch::Approx(95.05).margin(1e-12));
  REQUIRE(zdip::sorted_quantile(v, 0.0) == 1.0);
  REQUIRE(zdip::sorted_quantile(v, 1.0) == 100.0);
  REQUIRE(zdip::sorted_quantile(v, 0.5) == Catch::Approx(50.5).margin(1e-12));
  REQUIRE(zdip::sorted_quantile({7.0}, 0.3) == 7.0);
  REQUIRE_THROWS_AS(zdip::sorted_quantile({}, 0.5), zdip::EmptyInput);
}

TEST_CASE("universal_cutoff rounds the worst upper bound up to 0.005") {
  REQUIRE(zdip::universal_cutoff({estimate_with(1.971)}) == 1.975);
  REQUIRE(zdip::universal_cutoff({estimate_with(1.96), estimate_with(1.97),
                                  estimate_with(1.973)}) == 1.975);
  REQUIRE(zdip::universal_cutoff({estimate_with(2.012)}) == 2.015);
  // values already on the grid stay put instead of jumping a full step
  REQUIRE(zdip::universal_cutoff({estimate_with(1.97)}) == 1.97);
  REQUIRE(zdip::universal_cutoff({estimate_with(1.975)}) == 1.975);
  REQUIRE(zdip::universal_cutoff({estimate_with(2.0)}) == 2.0);
  REQUIRE_THROWS_AS(zdip::universal_cutoff({}), zdip::EmptyInput);
}

TEST_CASE("calibrate_threshold is deterministic and internally consistent") {
  const ThresholdEstimate a =
      zdip::calibrate_threshold(test_table(), 64, 800, 300, 99, 1);
  const ThresholdEstimate b =
      zdip::calibrate_threshold(test_table(), 64, 800, 300, 99, 4);
  REQUIRE(a.z_at_p05 == b.z_at_p05);
  REQUIRE(a.ci_low == b.ci_low);
  REQUIRE(a.ci_high == b.ci_high);

  REQUIRE(a.n == 64);
  REQUIRE(a.ensemble_size == 800);
  REQUIRE(a.bootstrap_rounds == 300);
  REQUIRE(a.seed == 99);
  REQUIRE(a.ci_low <= a.z_at_p05);
  REQUIRE(a.z_at_p05 <= a.ci_high);

  // the null 95th percentile of a standardized statistic sits near 2
  REQUIRE(a.z_at_p05 > 1.4);
  REQUIRE(a.z_at_p05 < 2.6);
}

TEST_CASE("different seeds give different bootstrap intervals") {
  const ThresholdEstimate a =
      zdip::calibrate_threshold(test_table(), 32, 400, 200, 1, 1);
  const ThresholdEstimate b =
      zdip::calibrate_threshold(test_table(), 32, 400, 200, 2, 1);
  REQUIRE(a.z_at_p05 != b.z_at_p05);
}

TEST_CASE("calibrate_threshold validates its arguments") {
  REQUIRE_THROWS_AS(zdip::calibrate_threshold(test_table(), 3, 400, 200, 0),
                    zdip::InvalidGridPoint);
  REQUIRE_THROWS_AS(zdip::calibrate_threshold(test_table(), 32, 99, 200, 0),
                    zdip::InsufficientEnsemble);
  REQUIRE_THROWS_AS(zdip::calibrate_threshold(test_table(), 32, 400, 99, 0),
                    zdip::InsufficientEnsemble);
}
