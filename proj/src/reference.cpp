#include "gammaprobe/reference.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gammaprobe {

std::vector<std::vector<double>>
naive_triangle(const std::vector<double>& orbit, std::size_t max_order) {
    if (orbit.size() < 2)
        throw std::invalid_argument("orbit must have >= 2 values");
    if (max_order > orbit.size() - 1)
        throw std::invalid_argument("max_order exceeds k - 1");

    std::vector<std::vector<double>> rows;
    rows.reserve(max_order + 1);
    rows.push_back(orbit);
    for (std::size_t s = 1; s <= max_order; ++s) {
        const auto& prev = rows.back();
        std::vector<double> row(prev.size() - 1);
        for (std::size_t i = 0; i + 1 < prev.size(); ++i) {
            row[i] = std::fabs(prev[i + 1] - prev[i]);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::uint8_t>
naive_monotony_bits(const std::vector<double>& row) {
    if (row.size() < 2)
        throw std::invalid_argument("row must have >= 2 values");
    std::vector<std::uint8_t> bits(row.size() - 1);
    for (std::size_t i = 0; i + 1 < row.size(); ++i) {
        bits[i] = row[i + 1] < row[i] ? 1 : 0;
    }
    return bits;
}

GammaEstimate naive_gamma(const Orbit& orbit, std::size_t N) {
    if (N < 2) throw std::invalid_argument("N must be >= 2");
    const std::size_t need = 2 * N + 1;
    if (orbit.size() < need) {
        std::ostringstream os;
        os << "need 2N+1 = " << need << " values, got " << orbit.size();
        throw std::runtime_error(os.str());
    }

    const std::vector<double> prefix(orbit.values.begin(),
                                     orbit.values.begin() +
                                         static_cast<std::ptrdiff_t>(N + 2));
    const auto rows = naive_triangle(prefix, N);

    const std::size_t half = N / 2;
    std::size_t flips = 0;
    std::size_t flips_half = 0;
    std::uint8_t prev_bit = 0;
    for (std::size_t s = 1; s <= N; ++s) {
        const std::uint8_t bit = naive_monotony_bits(rows[s])[0];
        if (s >= 2 && bit != prev_bit) ++flips;
        if (s == half) flips_half = flips;
        prev_bit = bit;
    }

    GammaEstimate est;
    est.N = N;
    est.k = need;
    est.flip_count = flips;
    est.gamma = static_cast<double>(flips) / static_cast<double>(N);
    est.convergence_diagnostic =
        est.gamma -
        static_cast<double>(flips_half) / static_cast<double>(half);
    est.provenance = orbit.provenance;
    return est;
}

} // namespace gammaprobe
