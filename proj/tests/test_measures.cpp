#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "gammaprobe/dynsys.hpp"
#include "gammaprobe/measures.hpp"
#include "gammaprobe/reference.hpp"

using namespace gammaprobe;

namespace {

Orbit random_orbit(std::mt19937& rng, std::size_t k) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Orbit o;
    o.values.resize(k);
    for (double& v : o.values) v = uni(rng);
    o.provenance = "test";
    return o;
}

Orbit cycle_orbit(const std::vector<double>& cycle, std::size_t k) {
    Orbit o;
    o.values.resize(k);
    for (std::size_t i = 0; i < k; ++i) o.values[i] = cycle[i % cycle.size()];
    o.provenance = "test";
    return o;
}

} // namespace

TEST_CASE("gamma kernels agree with the naive reference") {
    std::mt19937 rng(2024);
    for (std::size_t N : {std::size_t(5), std::size_t(23), std::size_t(50),
                          std::size_t(100)}) {
        const Orbit orbit = random_orbit(rng, 2 * N + 1);
        const GammaEstimate s = gamma_from_orbit_serial(orbit, N);
        const GammaEstimate p = gamma_from_orbit(orbit, N);
        const GammaEstimate n = naive_gamma(orbit, N);
        CHECK(s.flip_count == p.flip_count);
        CHECK(s.flip_count == n.flip_count);
        CHECK(s.gamma == p.gamma);
        CHECK(s.gamma == n.gamma);
        CHECK(s.convergence_diagnostic == p.convergence_diagnostic);
        CHECK(s.convergence_diagnostic == n.convergence_diagnostic);
        CHECK(s.N == N);
        CHECK(s.k == 2 * N + 1);
        CHECK(s.gamma >= 0.0);
        CHECK(s.gamma <= 1.0);
    }
}

TEST_CASE("sizing contract") {
    std::mt19937 rng(7);
    const Orbit short_orbit = random_orbit(rng, 57);
    CHECK_THROWS_WITH_AS(gamma_from_orbit(short_orbit, 50),
                         "need 2N+1 = 101 values, got 57", std::runtime_error);
    CHECK_THROWS_WITH_AS(gamma_from_orbit_serial(short_orbit, 50),
                         "need 2N+1 = 101 values, got 57", std::runtime_error);
    CHECK_THROWS_AS(gamma_from_orbit(short_orbit, 1), std::invalid_argument);

    // Excess values beyond 2N+1 never matter.
    Orbit longer = random_orbit(rng, 138);
    Orbit exact = longer;
    exact.values.resize(101);
    CHECK(gamma_from_orbit(longer, 50).flip_count ==
          gamma_from_orbit(exact, 50).flip_count);
}

TEST_CASE("two-periodic orbits never flip") {
    const Orbit orbit = cycle_orbit({0.2, 0.8}, 1001);
    for (std::size_t N : {std::size_t(10), std::size_t(100), std::size_t(500)}) {
        const GammaEstimate est = gamma_from_orbit(orbit, N);
        CHECK(est.flip_count == 0);
        CHECK(est.gamma == 0.0);
        CHECK(est.convergence_diagnostic == 0.0);
    }
}

TEST_CASE("period-three orbit flips at density two thirds") {
    const Orbit orbit = cycle_orbit({0.1, 0.7, 0.4}, 1001);
    CHECK(gamma_from_orbit(orbit, 500).flip_count == 332);
    for (std::size_t N = 10; N <= 500; N += 10) {
        const double flips =
            static_cast<double>(gamma_from_orbit(orbit, N).flip_count);
        CHECK(std::fabs(flips - 2.0 * static_cast<double>(N) / 3.0) <= 2.5);
    }
}

TEST_CASE("convergence diagnostic equals a direct half-size re-run") {
    std::mt19937 rng(99);
    const Orbit orbit = random_orbit(rng, 201);
    const GammaEstimate full = gamma_from_orbit_serial(orbit, 100);
    const GammaEstimate half = gamma_from_orbit_serial(orbit, 50);
    CHECK(full.convergence_diagnostic == full.gamma - half.gamma);
}

TEST_CASE("gamma_estimate generates and measures in one step") {
    const SystemSpec spec = SystemSpec::tent(0.7, 0.17);
    const GammaEstimate est = gamma_estimate(spec, 100);
    const GammaEstimate direct =
        gamma_from_orbit(generate_orbit(spec, 201), 100);
    CHECK(est.gamma == direct.gamma);
    CHECK(est.flip_count == direct.flip_count);
    CHECK(est.provenance.find("tent") != std::string::npos);

    const GammaEstimate stimmed =
        gamma_estimate(spec, 100, Stimulation(0.0001, 5));
    CHECK(stimmed.provenance.find("stim") != std::string::npos);

    CHECK_THROWS_AS(gamma_estimate(spec, 1), std::invalid_argument);
}

TEST_CASE("gamma is invariant under exact affine maps") {
    std::mt19937 rng(31337);
    std::uniform_int_distribution<long> lattice(0, (1L << 20) - 1);
    Orbit orbit;
    orbit.values.resize(101);
    for (double& v : orbit.values) {
        v = std::ldexp(static_cast<double>(lattice(rng)), -20);
    }
    const GammaEstimate base = gamma_from_orbit(orbit, 50);

    const double scales[] = {8.0, -8.0, 0.03125, -0.03125};
    const double offsets[] = {0.0625, 0.0625, 0.625, 1.0};
    for (int c = 0; c < 4; ++c) {
        Orbit mapped = orbit;
        for (double& v : mapped.values) v = scales[c] * v + offsets[c];
        const GammaEstimate got = gamma_from_orbit(mapped, 50);
        CHECK(got.flip_count == base.flip_count);
        CHECK(got.gamma == base.gamma);
        CHECK(got.convergence_diagnostic == base.convergence_diagnostic);
    }
}

TEST_CASE("numeric lyapunov equals the closed form on the tent family") {
    for (double t : {0.55, 0.7, 0.9, 1.0}) {
        const LyapunovEstimate est =
            lyapunov_numeric(SystemSpec::tent(t, 0.17), 1000);
        CHECK(std::fabs(est.lambda - std::log(2.0 * t)) <= 1e-12);
        CHECK(est.method == LyapunovMethod::NumericOrbitMean);
        CHECK(est.N == 1000);
        CHECK(est.valid);
    }
}

TEST_CASE("numeric lyapunov on the fully chaotic logistic map") {
    const LyapunovEstimate est =
        lyapunov_numeric(SystemSpec::logistic(4.0, 0.317), 100000);
    CHECK(std::fabs(est.lambda - std::log(2.0)) <= 1e-2);
    CHECK(est.lambda == doctest::Approx(0.693144654210332).epsilon(1e-6));
}

TEST_CASE("numeric lyapunov error paths") {
    CHECK_THROWS_WITH_AS(lyapunov_numeric(SystemSpec::logistic(4.0, 0.5), 10),
                         "derivative is zero at orbit index 1",
                         std::runtime_error);
    CHECK_THROWS_AS(
        lyapunov_numeric(SystemSpec::standard_theta(0.6, 0.5, 0.2), 10),
        std::invalid_argument);
    CHECK_THROWS_AS(lyapunov_numeric(SystemSpec::fractional(0.25), 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(lyapunov_numeric(SystemSpec::tent(0.7, 0.17), 0),
                    std::invalid_argument);
}

TEST_CASE("analytic lyapunov forms") {
    const LyapunovEstimate tent = lyapunov_analytic(SystemSpec::tent(0.7, 0.17));
    CHECK(tent.lambda == std::log(1.4));
    CHECK(tent.method == LyapunovMethod::AnalyticTent);
    CHECK(tent.valid);

    const LyapunovEstimate low =
        lyapunov_analytic(SystemSpec::standard_theta(0.6, 0.5, 0.2));
    CHECK(low.lambda == std::log(0.3));
    CHECK(low.method == LyapunovMethod::AnalyticStandardLargeK);
    CHECK_FALSE(low.valid); // the ln(K/2) form is trusted only for K >= 6

    CHECK(lyapunov_analytic(SystemSpec::standard_theta(6.0, 0.5, 0.2)).valid);
    const LyapunovEstimate big =
        lyapunov_analytic(SystemSpec::standard_theta(8.0, 0.5, 0.2));
    CHECK(big.lambda == std::log(4.0));
    CHECK(big.valid);

    CHECK_THROWS_AS(lyapunov_analytic(SystemSpec::logistic(3.7, 0.317)),
                    std::invalid_argument);
    CHECK_THROWS_AS(lyapunov_analytic(SystemSpec::fractional(0.25)),
                    std::invalid_argument);
}

TEST_CASE("positive part") {
    CHECK(positive_part(-1.7) == 0.0);
    CHECK(positive_part(0.0) == 0.0);
    CHECK(positive_part(0.42) == 0.42);
}

TEST_CASE("entropy bound values and symmetry") {
    CHECK(shannon_H(0.5) == -1.0);
    CHECK(shannon_H(0.0) == 0.0);
    CHECK(shannon_H(1.0) == 0.0);
    CHECK_THROWS_AS(shannon_H(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(shannon_H(1.1), std::invalid_argument);

    CHECK(dim_bound_entropy(0.62) ==
          doctest::Approx(0.95804202222629953).epsilon(1e-12));
    CHECK(dim_bound_entropy(0.25) ==
          doctest::Approx(0.81127812445913283).epsilon(1e-12));

    for (int i = 0; i <= 20; ++i) {
        const double x = static_cast<double>(i) / 20.0;
        CHECK(std::fabs(shannon_H(x) - shannon_H(1.0 - x)) <= 1e-12);
    }
}

TEST_CASE("run-length dimension bound") {
    CHECK(dim_bound_runlength(2) ==
          doctest::Approx(0.63932623977775915).epsilon(1e-12));
    CHECK(dim_bound_runlength(3) ==
          doctest::Approx(0.81966311988887952).epsilon(1e-12));
    CHECK_THROWS_AS(dim_bound_runlength(1), std::invalid_argument);

    const double independent = 1.0 - 1.0 / (4.0 * std::log(2.0));
    CHECK(std::fabs(dim_bound_runlength(2) - independent) <= 1e-15);
}
