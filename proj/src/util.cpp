#include "tracecensus/util.hpp"

#include <cstdio>

namespace tracecensus {

std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace tracecensus
