#include "floquet/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace floquet {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  std::array<char, 64> buf;
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::scientific, 14);
  return std::string(buf.data(), r.ptr);
}

}  // namespace floquet
