#include "nflcast/rate.hpp"

#include <cmath>

namespace nflcast::features {

int categorize_change(double diff, double width) {
  if (diff == 0.0) return 0;
  const double mag = std::abs(diff);
  int category;
  if (mag <= width)
    category = 0;
  else if (mag <= 2.0 * width)
    category = 1;
  else
    category = 2;
  return diff > 0 ? category : -category;
}

int rate_s(double v_old, double v_curr, int delta) {
  if (delta < 1) throw ParamError("rate_s: delta must be >= 1");
  return categorize_change(v_curr - v_old, static_cast<double>(delta));
}

int rate_p(double v_old, double v_curr, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw ParamError("rate_p: theta must be in (0,1]");
  if (v_old == 0.0) return v_curr > 0.0 ? 2 : 0;
  return categorize_change(v_curr - v_old, theta * v_old);
}

}  // namespace nflcast::features
