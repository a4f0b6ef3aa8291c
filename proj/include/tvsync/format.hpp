#pragma once

#include <string>

namespace tvsync {

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_number(double v);

}  // namespace tvsync
