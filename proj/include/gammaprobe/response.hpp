#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "gammaprobe/dynsys.hpp"
#include "gammaprobe/measures.hpp"

namespace gammaprobe {

struct TauSweep {
    SystemSpec spec;
    double epsilon = 0.0;
    std::vector<long> tau_values;
    std::vector<double> gammas;
    double baseline_gamma = 0.0;
    std::size_t N = 0;
};

struct EpsilonSweep {
    SystemSpec spec;
    std::vector<double> epsilon_grid;
    std::vector<double> gamma_max;   // per grid point, max over tau
    std::vector<long> tau_argmax;    // smallest tau on ties
    long tau_max_bound = 0;
    std::size_t N = 0;
};

struct ParamSweep {
    MapKind family = MapKind::Tent;
    std::vector<double> param_grid;
    std::vector<double> gammas;
    std::vector<double> lambdas;            // natural-log units
    std::vector<std::uint8_t> lambda_valid; // analytic large-K flag per point
    std::size_t N = 0;
};

TauSweep sweep_tau(const SystemSpec& spec, double epsilon, long tau_lo,
                   long tau_hi, std::size_t N,
                   OverflowPolicy policy = OverflowPolicy::Wrap,
                   std::size_t burn_in = 0);

// Max and argmax over the sweep's tau range; ties break to the smallest tau.
std::pair<double, long> gamma_max_of(const TauSweep& sweep);
std::pair<double, long> gamma_max(const SystemSpec& spec, double epsilon,
                                  long tau_max_bound, std::size_t N,
                                  OverflowPolicy policy = OverflowPolicy::Wrap,
                                  std::size_t burn_in = 0);

// Fraction of tau values within tol of the sweep maximum.
double near_max_density(const TauSweep& sweep, double tol = 0.02);

// Grid must be nondecreasing in (0,1).
EpsilonSweep sweep_epsilon(const SystemSpec& spec,
                           const std::vector<double>& epsilon_grid,
                           long tau_max_bound, std::size_t N,
                           OverflowPolicy policy = OverflowPolicy::Wrap,
                           std::size_t burn_in = 0);

// Forward moving average: mean of gamma_max over grid points in [eps, eps+s).
// The window always contains its own grid point.
std::vector<std::pair<double, double>> mu_smooth(const EpsilonSweep& sweep,
                                                 double s);

// The grid replaces t, r, or K of the prototype spec depending on its kind.
// lambda is numeric for tent/logistic and analytic (flagged) for standard.
ParamSweep sweep_param(const SystemSpec& prototype,
                       const std::vector<double>& param_grid, std::size_t N,
                       OverflowPolicy policy = OverflowPolicy::Wrap,
                       std::size_t burn_in = 0);

} // namespace gammaprobe
