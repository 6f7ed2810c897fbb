#pragma once

#include "sco/rng.hpp"

#include <vector>

namespace sco {

/// Exact Binomial(n, p) draw. Per-trial for small n, cumulative inversion for
/// small n*p, transformed rejection (BTRS) otherwise.
long binomial_draw(CounterRng& rng, long n, double p);

/// Exact multinomial counts by sequential conditional binomial splitting.
void multinomial_draw(CounterRng& rng, const std::vector<double>& p, long n,
                      std::vector<long>& out);

}  // namespace sco
