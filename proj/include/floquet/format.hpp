#pragma once

#include <string>

namespace floquet {

/// Locale-independent scientific notation with 15 significant digits.
/// Non-finite values print as "nan", "inf" or "-inf".
std::string format_number(double v);

}  // namespace floquet
