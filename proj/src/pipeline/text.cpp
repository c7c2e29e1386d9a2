#include "text.hpp"

#include <cmath>
#include <cstdio>

namespace elastic::pipeline::text {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

}  // namespace elastic::pipeline::text
