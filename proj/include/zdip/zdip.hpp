#pragma once

// Umbrella header for the whole library.

#include "zdip/calibration.hpp"
#include "zdip/dip.hpp"
#include "zdip/errors.hpp"
#include "zdip/mixture.hpp"
#include "zdip/null_table.hpp"
#include "zdip/parallel.hpp"
#include "zdip/random.hpp"
#include "zdip/sample.hpp"
#include "zdip/version.hpp"
#include "zdip/ztest.hpp"
