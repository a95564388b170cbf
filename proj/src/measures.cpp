#include "gammaprobe/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gammaprobe {

namespace {

void check_sizing(std::size_t have, std::size_t N) {
    if (N < 2) throw std::invalid_argument("N must be >= 2");
    const std::size_t need = 2 * N + 1;
    if (have < need) {
        std::ostringstream os;
        os << "need 2N+1 = " << need << " values, got " << have;
        throw std::runtime_error(os.str());
    }
}

GammaEstimate finish(std::size_t N, std::size_t flips, std::size_t flips_half,
                     const std::string& provenance) {
    GammaEstimate est;
    est.N = N;
    est.k = 2 * N + 1;
    est.flip_count = flips;
    est.gamma = static_cast<double>(flips) / static_cast<double>(N);
    const std::size_t half = N / 2;
    const double gamma_half =
        static_cast<double>(flips_half) / static_cast<double>(half);
    est.convergence_diagnostic = est.gamma - gamma_half;
    est.provenance = provenance;
    return est;
}

} // namespace

GammaEstimate gamma_from_orbit_serial(const Orbit& orbit, std::size_t N) {
    check_sizing(orbit.size(), N);

    const std::size_t w = N + 2; // triangle prefix; later values never matter
    std::vector<double> buf(orbit.values.begin(),
                            orbit.values.begin() + static_cast<std::ptrdiff_t>(w));

    const std::size_t half = N / 2;
    std::size_t flips = 0;
    std::size_t flips_half = 0;
    std::uint8_t prev_bit = 0;
    for (std::size_t s = 1; s <= N; ++s) {
        const std::size_t lim = w - s;
        for (std::size_t i = 0; i < lim; ++i) {
            buf[i] = std::fabs(buf[i + 1] - buf[i]);
        }
        const std::uint8_t bit = buf[1] < buf[0] ? 1 : 0;
        if (s >= 2 && bit != prev_bit) ++flips;
        if (s == half) flips_half = flips;
        prev_bit = bit;
    }
    return finish(N, flips, flips_half, orbit.provenance);
}

GammaEstimate gamma_from_orbit(const Orbit& orbit, std::size_t N) {
    check_sizing(orbit.size(), N);

    const std::size_t w = N + 2;
    std::vector<double> a(orbit.values.begin(),
                          orbit.values.begin() + static_cast<std::ptrdiff_t>(w));
    std::vector<double> b(w);
    double* cur = a.data();
    double* nxt = b.data();

    const std::size_t half = N / 2;
    std::size_t flips = 0;
    std::size_t flips_half = 0;
    std::uint8_t prev_bit = 0;
    for (std::size_t s = 1; s <= N; ++s) {
        const std::ptrdiff_t lim = static_cast<std::ptrdiff_t>(w - s);
#pragma omp parallel for schedule(static) if (lim > 4096)
        for (std::ptrdiff_t i = 0; i < lim; ++i) {
            nxt[i] = std::fabs(cur[i + 1] - cur[i]);
        }
        const std::uint8_t bit = nxt[1] < nxt[0] ? 1 : 0;
        if (s >= 2 && bit != prev_bit) ++flips;
        if (s == half) flips_half = flips;
        prev_bit = bit;
        std::swap(cur, nxt);
    }
    return finish(N, flips, flips_half, orbit.provenance);
}

GammaEstimate gamma_estimate(const SystemSpec& spec, std::size_t N,
                             const std::optional<Stimulation>& stim,
                             OverflowPolicy policy, std::size_t burn_in) {
    if (N < 2) throw std::invalid_argument("N must be >= 2");
    const Orbit orbit = generate_orbit(spec, 2 * N + 1, stim, policy, burn_in);
    GammaEstimate est = gamma_from_orbit(orbit, N);
    if (stim) {
        std::ostringstream os;
        os << est.provenance << " stim eps=" << stim->epsilon
           << " tau=" << stim->tau;
        est.provenance = os.str();
    }
    return est;
}

namespace {

LyapunovEstimate lyapunovize(double lambda, std::size_t N,
                             LyapunovMethod method, bool valid) {
    LyapunovEstimate est;
    est.lambda = lambda;
    est.N = N;
    est.method = method;
    est.valid = valid;
    return est;
}

} // namespace

LyapunovEstimate lyapunov_numeric(const SystemSpec& spec, std::size_t N) {
    spec.validate();
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    if (spec.kind != MapKind::Tent && spec.kind != MapKind::Logistic) {
        throw std::invalid_argument(
            "no pointwise log-derivative for this system");
    }

    const Orbit orbit = generate_orbit(spec, std::max<std::size_t>(N, 2));

    // Kahan-compensated; the logistic terms span many magnitudes near the
    // derivative zero at x = 1/2.
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        double term;
        if (spec.kind == MapKind::Tent) {
            term = std::log(2.0 * spec.t);
        } else {
            const double d = spec.r * (1.0 - 2.0 * orbit.values[n]);
            if (d == 0.0) {
                std::ostringstream os;
                os << "derivative is zero at orbit index " << n + 1;
                throw std::runtime_error(os.str());
            }
            term = std::log(std::fabs(d));
        }
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return lyapunovize(sum / static_cast<double>(N), N,
                       LyapunovMethod::NumericOrbitMean, true);
}

LyapunovEstimate lyapunov_analytic(const SystemSpec& spec) {
    spec.validate();
    switch (spec.kind) {
    case MapKind::Tent:
        return lyapunovize(std::log(2.0 * spec.t), 0,
                           LyapunovMethod::AnalyticTent, true);
    case MapKind::StandardTheta:
        return lyapunovize(std::log(spec.K / 2.0), 0,
                           LyapunovMethod::AnalyticStandardLargeK,
                           spec.K >= 6.0);
    default:
        throw std::invalid_argument("no closed form for this system");
    }
}

double positive_part(double lambda) { return std::max(lambda, 0.0); }

double shannon_H(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("entropy argument must be in [0,1]");
    double h = 0.0;
    if (x > 0.0) h += x * std::log2(x);
    if (x < 1.0) h += (1.0 - x) * std::log2(1.0 - x);
    return h;
}

double dim_bound_entropy(double gamma) { return -shannon_H(gamma); }

double dim_bound_runlength(long K) {
    if (K < 2) throw std::invalid_argument("run-length bound requires K >= 2");
    constexpr double four_ln2 = 2.772588722239781; // 4 ln 2
    return 1.0 - 1.0 / (four_ln2 * static_cast<double>(K - 1));
}

} // namespace gammaprobe
