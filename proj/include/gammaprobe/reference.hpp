#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gammaprobe/dynsys.hpp"
#include "gammaprobe/measures.hpp"

namespace gammaprobe {

// Naive implementations that materialize every difference row. O(k^2) memory;
// oracles for the sliding kernels, exact match expected for k <= 201.
std::vector<std::vector<double>>
naive_triangle(const std::vector<double>& orbit, std::size_t max_order);

std::vector<std::uint8_t> naive_monotony_bits(const std::vector<double>& row);

GammaEstimate naive_gamma(const Orbit& orbit, std::size_t N);

} // namespace gammaprobe
