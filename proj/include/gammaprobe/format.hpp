#pragma once

#include <string>

namespace gammaprobe {

// Shortest round-trip decimal form of a double, period as separator.
// Keeps CSV output byte-stable across runs.
std::string format_double(double v);

} // namespace gammaprobe
