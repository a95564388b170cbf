#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace gammaprobe {

enum class MapKind { Tent, Logistic, StandardTheta, FractionalParts };
enum class OverflowPolicy { Wrap, Clamp };

// Which map plus its control parameters and initial condition.
// Only the fields of the active variant are meaningful.
struct SystemSpec {
    MapKind kind = MapKind::Tent;
    double t = 0.0;      // tent slope, 0 < t <= 1
    double r = 0.0;      // logistic rate, 0 < r <= 4
    double K = 0.0;      // standard-map stochasticity, K > 0
    double x0 = 0.0;     // tent/logistic initial value, 0 < x0 < 1
    double I0 = 0.0;     // standard-map action, 0 < I0 < 2*pi
    double theta0 = 0.0; // standard-map angle, 0 < theta0 < 2*pi
    double alpha = 0.0;  // fractional-parts step, 0 < alpha < 1

    static SystemSpec tent(double t, double x0);
    static SystemSpec logistic(double r, double x0);
    static SystemSpec standard_theta(double K, double I0, double theta0);
    static SystemSpec fractional(double alpha);

    // Throws std::invalid_argument when a parameter is outside its range.
    void validate() const;
    std::string describe() const;
};

// Additive periodic perturbation: s_n = epsilon when tau divides n, else 0.
struct Stimulation {
    double epsilon = 0.0; // 0 < epsilon < 1
    long tau = 0;         // tau >= 2

    Stimulation(double epsilon, long tau);
};

// Finite trajectory with every value in [0,1].
// Standard-map angles are stored as theta / 2*pi.
struct Orbit {
    std::vector<double> values;
    std::string provenance; // producing spec summary, or "external"

    std::size_t size() const { return values.size(); }
};

double iterate_tent(double x, double t);
double iterate_logistic(double x, double r);

// One standard-map step: I' = I + K*sin(theta); theta' = theta + I' mod 2*pi.
// I is not reduced.
struct StandardState {
    double I;
    double theta;
};
StandardState step_standard(double I, double theta, double K);

// x_1 = initial value, x_{n+1} = F(x_n) + s_n.
// The stimulation clock starts at n = 1 on the emitted sequence; burn_in
// unstimulated steps advance the state before x_1 is emitted.
// For StandardTheta the perturbation is added to theta in radians before the
// mod-2*pi reduction; the overflow policy applies to tent/logistic values
// pushed outside [0,1].
Orbit generate_orbit(const SystemSpec& spec, std::size_t k,
                     const std::optional<Stimulation>& stim = {},
                     OverflowPolicy policy = OverflowPolicy::Wrap,
                     std::size_t burn_in = 0);

// ({alpha*1}, ..., {alpha*k}) as an exact running sum reduced mod 1.
// alpha is a dyadic rational M/2^E in double form; the sum is kept as an
// exact integer accumulator mod 2^E, so each value is the correctly rounded
// fractional part and the running-sum drift is zero.
Orbit fractional_parts_orbit(double alpha, std::size_t k);

double stimulation_term(long n, const Stimulation& stim);

} // namespace gammaprobe
