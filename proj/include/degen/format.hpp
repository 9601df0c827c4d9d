#pragma once

#include <cstdio>
#include <string>

namespace degen {

/// 17 significant digits: enough for exact double round-trips.
inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace degen
