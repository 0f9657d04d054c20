#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace semilab::detail {

// 17 significant digits round-trips every double.
inline std::string fmt17(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace semilab::detail
