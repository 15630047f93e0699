#include "barrierwalk/format.hpp"

#include <charconv>
#include <cmath>

namespace barrierwalk {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

}  // namespace barrierwalk
