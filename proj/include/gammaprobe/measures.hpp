#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "gammaprobe/dynsys.hpp"

namespace gammaprobe {

// gamma = flip_count / N, where the n-th binary symbol is the leading bit of
// the order-n delta-code and flips are counted across orders n = 1..N.
// Orbit sizing k = 2N + 1; only the first N + 2 values enter the triangle.
struct GammaEstimate {
    std::size_t N = 0;
    std::size_t k = 0;
    std::size_t flip_count = 0;
    double gamma = 0.0;
    // gamma(N) - gamma(floor(N/2)), read out of the same sweep.
    double convergence_diagnostic = 0.0;
    std::string provenance;
};

enum class LyapunovMethod { NumericOrbitMean, AnalyticTent, AnalyticStandardLargeK };

struct LyapunovEstimate {
    double lambda = 0.0; // natural-log units
    std::size_t N = 0;
    LyapunovMethod method = LyapunovMethod::NumericOrbitMean;
    bool valid = true; // false for the large-K form below its K >= 6 regime
};

GammaEstimate gamma_estimate(const SystemSpec& spec, std::size_t N,
                             const std::optional<Stimulation>& stim = {},
                             OverflowPolicy policy = OverflowPolicy::Wrap,
                             std::size_t burn_in = 0);

// Entry point for external data; needs at least 2N + 1 values, excess ignored.
// The sweep is the OpenMP kernel; the serial variant is the single-buffer
// reference kept for testing, bit-identical by construction.
GammaEstimate gamma_from_orbit(const Orbit& orbit, std::size_t N);
GammaEstimate gamma_from_orbit_serial(const Orbit& orbit, std::size_t N);

// Mean of ln|F'| along the orbit (tent |F'| = 2t a.e., logistic r(1-2x)).
// Kahan-compensated; a zero derivative is reported with its orbit index.
LyapunovEstimate lyapunov_numeric(const SystemSpec& spec, std::size_t N);

// Tent: ln(2t). StandardTheta: ln(K/2), validity flagged false below K = 6.
LyapunovEstimate lyapunov_analytic(const SystemSpec& spec);

double positive_part(double lambda);

// H(x) = x log2 x + (1-x) log2 (1-x), which is <= 0.
double shannon_H(double x);

double dim_bound_entropy(double gamma);      // -H(gamma)
double dim_bound_runlength(long K);          // 1 - 1/((4 ln 2)(K - 1))

} // namespace gammaprobe
