#pragma once

#include "nflcast/types.hpp"

namespace nflcast::features {

// Signed bucketed change with bucket width |d| <= w -> 0, w < |d| <= 2w -> 1,
// |d| > 2w -> 2. Boundary values belong to the lower-magnitude bucket.
int categorize_change(double diff, double width);

// Static-width volume change category in {-2,-1,0,1,2}.
int rate_s(double v_old, double v_curr, int delta);

// Proportional-width category; bucket width is theta * v_old. v_old == 0
// maps any growth to the maximal category.
int rate_p(double v_old, double v_curr, double theta);

}  // namespace nflcast::features
