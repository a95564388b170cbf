#include "gammaprobe/dynsys.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gammaprobe {

namespace {

constexpr double two_pi = 6.283185307179586;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace

SystemSpec SystemSpec::tent(double t, double x0) {
    SystemSpec s;
    s.kind = MapKind::Tent;
    s.t = t;
    s.x0 = x0;
    s.validate();
    return s;
}

SystemSpec SystemSpec::logistic(double r, double x0) {
    SystemSpec s;
    s.kind = MapKind::Logistic;
    s.r = r;
    s.x0 = x0;
    s.validate();
    return s;
}

SystemSpec SystemSpec::standard_theta(double K, double I0, double theta0) {
    SystemSpec s;
    s.kind = MapKind::StandardTheta;
    s.K = K;
    s.I0 = I0;
    s.theta0 = theta0;
    s.validate();
    return s;
}

SystemSpec SystemSpec::fractional(double alpha) {
    SystemSpec s;
    s.kind = MapKind::FractionalParts;
    s.alpha = alpha;
    s.validate();
    return s;
}

void SystemSpec::validate() const {
    switch (kind) {
    case MapKind::Tent:
        require(t > 0.0 && t <= 1.0, "tent parameter t must be in (0,1]");
        require(x0 > 0.0 && x0 < 1.0, "tent x0 must be in (0,1)");
        break;
    case MapKind::Logistic:
        require(r > 0.0 && r <= 4.0, "logistic parameter r must be in (0,4]");
        require(x0 > 0.0 && x0 < 1.0, "logistic x0 must be in (0,1)");
        break;
    case MapKind::StandardTheta:
        require(K > 0.0, "standard-map K must be positive");
        require(I0 > 0.0 && I0 < two_pi, "standard-map I0 must be in (0,2pi)");
        require(theta0 > 0.0 && theta0 < two_pi,
                "standard-map theta0 must be in (0,2pi)");
        break;
    case MapKind::FractionalParts:
        require(alpha > 0.0 && alpha < 1.0, "alpha must be in (0,1)");
        break;
    }
}

std::string SystemSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
    case MapKind::Tent:
        os << "tent t=" << t << " x0=" << x0;
        break;
    case MapKind::Logistic:
        os << "logistic r=" << r << " x0=" << x0;
        break;
    case MapKind::StandardTheta:
        os << "standard K=" << K << " I0=" << I0 << " theta0=" << theta0;
        break;
    case MapKind::FractionalParts:
        os << "frac alpha=" << alpha;
        break;
    }
    return os.str();
}

Stimulation::Stimulation(double epsilon_, long tau_)
    : epsilon(epsilon_), tau(tau_) {
    require(epsilon > 0.0 && epsilon < 1.0,
            "stimulation intensity must be in (0,1)");
    require(tau >= 2, "stimulation period must be >= 2");
}

double iterate_tent(double x, double t) {
    require(t > 0.0 && t <= 1.0, "tent parameter t must be in (0,1]");
    require(x >= 0.0 && x <= 1.0, "tent input must be in [0,1]");
    const double h = 2.0 * t;
    return x <= 0.5 ? h * x : h - h * x;
}

double iterate_logistic(double x, double r) {
    require(r > 0.0 && r <= 4.0, "logistic parameter r must be in (0,4]");
    require(x >= 0.0 && x <= 1.0, "logistic input must be in [0,1]");
    return r * x * (1.0 - x);
}

StandardState step_standard(double I, double theta, double K) {
    require(K > 0.0, "standard-map K must be positive");
    const double In = I + K * std::sin(theta);
    double th = std::fmod(theta + In, two_pi);
    if (th < 0.0) th += two_pi;
    return {In, th};
}

double stimulation_term(long n, const Stimulation& stim) {
    require(n >= 1, "stimulation index must be >= 1");
    return (n % stim.tau == 0) ? stim.epsilon : 0.0;
}

namespace {

double apply_overflow(double x, OverflowPolicy policy) {
    // Stimulation is positive and F maps into [0,1], so only the upper edge
    // can be crossed.
    if (x > 1.0) {
        if (policy == OverflowPolicy::Wrap) {
            x -= 1.0;
        } else {
            x = 1.0;
        }
    }
    return x;
}

} // namespace

Orbit generate_orbit(const SystemSpec& spec, std::size_t k,
                     const std::optional<Stimulation>& stim,
                     OverflowPolicy policy, std::size_t burn_in) {
    spec.validate();
    require(k >= 2, "orbit length k must be >= 2");

    Orbit orbit;
    orbit.values.reserve(k);
    orbit.provenance = spec.describe();

    if (spec.kind == MapKind::FractionalParts) {
        if (!stim) {
            Orbit base = fractional_parts_orbit(spec.alpha, k + burn_in);
            orbit.values.assign(base.values.begin() + burn_in,
                                base.values.end());
            return orbit;
        }
        // Perturbation breaks the exact lattice structure, so the recursion
        // runs in plain double arithmetic from the post-burn-in value.
        Orbit base = fractional_parts_orbit(spec.alpha, burn_in + 1);
        double x = base.values[burn_in];
        orbit.values.push_back(x);
        for (std::size_t n = 1; n < k; ++n) {
            x += spec.alpha;
            if (x >= 1.0) x -= 1.0;
            x += stimulation_term(static_cast<long>(n), *stim);
            x = apply_overflow(x, policy);
            orbit.values.push_back(x);
        }
        return orbit;
    }

    if (spec.kind == MapKind::StandardTheta) {
        double I = spec.I0;
        double th = spec.theta0;
        for (std::size_t i = 0; i < burn_in; ++i) {
            const StandardState s = step_standard(I, th, spec.K);
            I = s.I;
            th = s.theta;
        }
        orbit.values.push_back(th / two_pi);
        for (std::size_t n = 1; n < k; ++n) {
            const double In = I + spec.K * std::sin(th);
            double next = th + In;
            if (stim && static_cast<long>(n) % stim->tau == 0) {
                next += stim->epsilon; // radians, before the mod-2pi reduction
            }
            next = std::fmod(next, two_pi);
            if (next < 0.0) next += two_pi;
            I = In;
            th = next;
            orbit.values.push_back(th / two_pi);
        }
        return orbit;
    }

    double x = spec.x0;
    const bool is_tent = spec.kind == MapKind::Tent;
    for (std::size_t i = 0; i < burn_in; ++i) {
        x = is_tent ? iterate_tent(x, spec.t) : iterate_logistic(x, spec.r);
    }
    orbit.values.push_back(x);
    for (std::size_t n = 1; n < k; ++n) {
        x = is_tent ? iterate_tent(x, spec.t) : iterate_logistic(x, spec.r);
        if (stim) {
            x += stimulation_term(static_cast<long>(n), *stim);
            x = apply_overflow(x, policy);
        }
        orbit.values.push_back(x);
    }
    return orbit;
}

Orbit fractional_parts_orbit(double alpha, std::size_t k) {
    require(alpha > 0.0 && alpha < 1.0, "alpha must be in (0,1)");

    Orbit orbit;
    orbit.values.reserve(k);
    {
        std::ostringstream os;
        os << "frac alpha=" << alpha;
        orbit.provenance = os.str();
    }

    // alpha = M / 2^E exactly. E <= 127 covers every alpha >= 2^-74.
    int e2 = 0;
    const double mant = std::frexp(alpha, &e2); // alpha = mant * 2^e2
    auto M = static_cast<unsigned long long>(std::ldexp(mant, 53));
    int E = 53 - e2;
    while (E > 0 && (M & 1ULL) == 0ULL) {
        M >>= 1;
        --E;
    }

    if (E <= 127) {
        const unsigned __int128 mod = static_cast<unsigned __int128>(1) << E;
        unsigned __int128 acc = 0;
        const unsigned __int128 step = M;
        for (std::size_t n = 0; n < k; ++n) {
            acc += step;
            if (acc >= mod) acc -= mod;
            orbit.values.push_back(std::ldexp(static_cast<double>(acc), -E));
        }
    } else {
        double x = 0.0;
        for (std::size_t n = 0; n < k; ++n) {
            x += alpha;
            if (x >= 1.0) x -= 1.0;
            orbit.values.push_back(x);
        }
    }
    return orbit;
}

} // namespace gammaprobe
