#pragma once

// Umbrella header for the fracbin library: correlated Bernoulli processes
// with power-law memory, their exact pattern/moment engines, renewal-based
// samplers, and the fractional Poisson / Mittag-Leffler analytics used to
// compare them.

#include "fracbin/errors.hpp"
#include "fracbin/numeric.hpp"
#include "fracbin/types.hpp"
#include "fracbin/params.hpp"
#include "fracbin/exact.hpp"
#include "fracbin/renewal.hpp"
#include "fracbin/mlf.hpp"
#include "fracbin/rng.hpp"
#include "fracbin/sample.hpp"
#include "fracbin/stats.hpp"
#include "fracbin/io.hpp"
#include "fracbin/cli.hpp"
