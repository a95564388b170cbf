#include "gammaprobe/response.hpp"

#include <algorithm>
#include <stdexcept>

namespace gammaprobe {

TauSweep sweep_tau(const SystemSpec& spec, double epsilon, long tau_lo,
                   long tau_hi, std::size_t N, OverflowPolicy policy,
                   std::size_t burn_in) {
    spec.validate();
    if (N < 2) throw std::invalid_argument("N must be >= 2");
    if (tau_lo < 2 || tau_lo > tau_hi || tau_hi > 1000000)
        throw std::invalid_argument(
            "tau range must satisfy 2 <= lo <= hi <= 1000000");
    const Stimulation probe(epsilon, tau_lo); // validates epsilon up front
    (void)probe;

    TauSweep sweep;
    sweep.spec = spec;
    sweep.epsilon = epsilon;
    sweep.N = N;
    sweep.baseline_gamma = gamma_estimate(spec, N, {}, policy, burn_in).gamma;

    const std::size_t count = static_cast<std::size_t>(tau_hi - tau_lo + 1);
    sweep.tau_values.resize(count);
    sweep.gammas.resize(count);
    const std::size_t k = 2 * N + 1;

    // Independent pure tasks; writes go by index so thread count and
    // completion order never affect the output.
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(count);
         ++idx) {
        const long tau = tau_lo + idx;
        const Orbit orbit =
            generate_orbit(spec, k, Stimulation(epsilon, tau), policy, burn_in);
        sweep.tau_values[idx] = tau;
        sweep.gammas[idx] = gamma_from_orbit_serial(orbit, N).gamma;
    }
    return sweep;
}

std::pair<double, long> gamma_max_of(const TauSweep& sweep) {
    if (sweep.gammas.empty() ||
        sweep.gammas.size() != sweep.tau_values.size())
        throw std::invalid_argument("empty or misaligned sweep");
    double best = sweep.gammas[0];
    long arg = sweep.tau_values[0];
    for (std::size_t i = 1; i < sweep.gammas.size(); ++i) {
        if (sweep.gammas[i] > best) { // strict: ties keep the smallest tau
            best = sweep.gammas[i];
            arg = sweep.tau_values[i];
        }
    }
    return {best, arg};
}

std::pair<double, long> gamma_max(const SystemSpec& spec, double epsilon,
                                  long tau_max_bound, std::size_t N,
                                  OverflowPolicy policy, std::size_t burn_in) {
    return gamma_max_of(
        sweep_tau(spec, epsilon, 2, tau_max_bound, N, policy, burn_in));
}

double near_max_density(const TauSweep& sweep, double tol) {
    if (sweep.gammas.empty())
        throw std::invalid_argument("empty sweep");
    const double top = *std::max_element(sweep.gammas.begin(),
                                         sweep.gammas.end());
    std::size_t near = 0;
    for (double g : sweep.gammas) {
        if (g >= top - tol) ++near;
    }
    return static_cast<double>(near) / static_cast<double>(sweep.gammas.size());
}

EpsilonSweep sweep_epsilon(const SystemSpec& spec,
                           const std::vector<double>& epsilon_grid,
                           long tau_max_bound, std::size_t N,
                           OverflowPolicy policy, std::size_t burn_in) {
    if (epsilon_grid.empty())
        throw std::invalid_argument("epsilon grid must be nonempty");
    for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
        if (!(epsilon_grid[i] > 0.0 && epsilon_grid[i] < 1.0))
            throw std::invalid_argument("epsilon grid values must be in (0,1)");
        if (i > 0 && epsilon_grid[i] < epsilon_grid[i - 1])
            throw std::invalid_argument("epsilon grid must be nondecreasing");
    }

    EpsilonSweep sweep;
    sweep.spec = spec;
    sweep.epsilon_grid = epsilon_grid;
    sweep.tau_max_bound = tau_max_bound;
    sweep.N = N;
    sweep.gamma_max.reserve(epsilon_grid.size());
    sweep.tau_argmax.reserve(epsilon_grid.size());
    for (double eps : epsilon_grid) {
        const auto [g, tau] =
            gamma_max(spec, eps, tau_max_bound, N, policy, burn_in);
        sweep.gamma_max.push_back(g);
        sweep.tau_argmax.push_back(tau);
    }
    return sweep;
}

std::vector<std::pair<double, double>> mu_smooth(const EpsilonSweep& sweep,
                                                 double s) {
    if (!(s > 0.0)) throw std::invalid_argument("window s must be positive");
    const std::size_t n = sweep.epsilon_grid.size();
    if (n < 2 || sweep.gamma_max.size() != n)
        throw std::invalid_argument("sweep must have >= 2 aligned grid points");

    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = sweep.epsilon_grid[i];
        double acc = 0.0;
        std::size_t count = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double e = sweep.epsilon_grid[j];
            if (e >= lo && e < lo + s) {
                acc += sweep.gamma_max[j];
                ++count;
            }
        }
        // The window [lo, lo+s) always holds its own grid point.
        out.emplace_back(lo, acc / static_cast<double>(count));
    }
    return out;
}

ParamSweep sweep_param(const SystemSpec& prototype,
                       const std::vector<double>& param_grid, std::size_t N,
                       OverflowPolicy policy, std::size_t burn_in) {
    prototype.validate();
    if (prototype.kind == MapKind::FractionalParts)
        throw std::invalid_argument(
            "parameter sweeps cover tent, logistic, and standard only");
    if (param_grid.empty())
        throw std::invalid_argument("parameter grid must be nonempty");

    ParamSweep sweep;
    sweep.family = prototype.kind;
    sweep.param_grid = param_grid;
    sweep.N = N;
    sweep.gammas.reserve(param_grid.size());
    sweep.lambdas.reserve(param_grid.size());
    sweep.lambda_valid.reserve(param_grid.size());

    for (double p : param_grid) {
        SystemSpec spec = prototype;
        switch (prototype.kind) {
        case MapKind::Tent: spec.t = p; break;
        case MapKind::Logistic: spec.r = p; break;
        default: spec.K = p; break;
        }
        spec.validate();
        sweep.gammas.push_back(
            gamma_estimate(spec, N, {}, policy, burn_in).gamma);
        if (prototype.kind == MapKind::StandardTheta) {
            const LyapunovEstimate est = lyapunov_analytic(spec);
            sweep.lambdas.push_back(est.lambda);
            sweep.lambda_valid.push_back(est.valid ? 1 : 0);
        } else {
            const LyapunovEstimate est = lyapunov_numeric(spec, N);
            sweep.lambdas.push_back(est.lambda);
            sweep.lambda_valid.push_back(1);
        }
    }
    return sweep;
}

} // namespace gammaprobe
