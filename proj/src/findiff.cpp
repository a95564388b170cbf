#include "gammaprobe/findiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gammaprobe {

DifferenceRow difference_row(const Orbit& orbit, std::size_t s) {
    const std::size_t k = orbit.size();
    if (k < 2) throw std::invalid_argument("orbit must have >= 2 values");
    if (s > k - 1)
        throw std::invalid_argument("difference order exceeds k - 1");

    DifferenceRow row;
    row.order = s;
    row.values = orbit.values;
    for (std::size_t pass = 1; pass <= s; ++pass) {
        const std::size_t lim = k - pass;
        for (std::size_t i = 0; i < lim; ++i) {
            row.values[i] = std::fabs(row.values[i + 1] - row.values[i]);
        }
    }
    row.values.resize(k - s);
    return row;
}

MonotonySequence monotony_sequence(const DifferenceRow& row) {
    const std::size_t len = row.values.size();
    if (len < 2)
        throw std::invalid_argument("row must have >= 2 values to encode");

    MonotonySequence ms;
    ms.order = row.order;
    ms.bits.resize(len - 1);
    for (std::size_t i = 0; i + 1 < len; ++i) {
        ms.bits[i] = row.values[i + 1] < row.values[i] ? 1 : 0;
    }
    std::size_t run = 1;
    ms.max_run = 1;
    for (std::size_t i = 1; i < ms.bits.size(); ++i) {
        if (ms.bits[i] != ms.bits[i - 1]) {
            ++ms.flip_count;
            run = 1;
        } else {
            ++run;
        }
        ms.max_run = std::max(ms.max_run, run);
    }
    return ms;
}

std::size_t max_run_length(const MonotonySequence& ms) {
    if (ms.bits.empty()) return 0;
    std::size_t best = 1;
    std::size_t run = 1;
    for (std::size_t i = 1; i < ms.bits.size(); ++i) {
        run = ms.bits[i] == ms.bits[i - 1] ? run + 1 : 1;
        best = std::max(best, run);
    }
    return best;
}

ZetaRepresentation decompose(const Orbit& orbit, std::size_t m) {
    const std::size_t k = orbit.size();
    if (k < 2) throw std::invalid_argument("orbit must have >= 2 values");
    if (m < 1 || m > k - 1)
        throw std::invalid_argument("decomposition depth must be in [1, k-1]");

    ZetaRepresentation zeta;
    zeta.m = m;
    zeta.r_codes.reserve(m);
    zeta.mu.reserve(m);

    std::vector<double> row = orbit.values;
    for (std::size_t s = 0; s < m; ++s) {
        const std::size_t len = k - s;
        std::vector<std::uint8_t> code(len - 1);
        double lo = row[0];
        for (std::size_t i = 0; i + 1 < len; ++i) {
            code[i] = row[i + 1] < row[i] ? 1 : 0;
            lo = std::min(lo, row[i + 1]);
        }
        zeta.r_codes.push_back(std::move(code));
        zeta.mu.push_back(lo);
        for (std::size_t i = 0; i + 1 < len; ++i) {
            row[i] = std::fabs(row[i + 1] - row[i]);
        }
        row.resize(len - 1);
    }
    zeta.rho = std::move(row);
    return zeta;
}

Orbit reconstruct(const ZetaRepresentation& zeta) {
    if (zeta.m < 1 || zeta.r_codes.size() != zeta.m ||
        zeta.mu.size() != zeta.m || zeta.rho.empty()) {
        throw std::invalid_argument("malformed zeta representation");
    }

    std::vector<double> row = zeta.rho;
    for (std::size_t s = zeta.m; s >= 1; --s) {
        const auto& code = zeta.r_codes[s - 1];
        if (code.size() != row.size())
            throw std::invalid_argument("code/row length mismatch");

        // Signed prefix sums; the empty prefix participates in the minimum,
        // which anchors the offset so the round trip is exact.
        std::vector<double> prefix(row.size() + 1);
        prefix[0] = 0.0;
        double lo = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            prefix[j + 1] =
                prefix[j] + (code[j] ? -row[j] : row[j]);
            lo = std::min(lo, prefix[j + 1]);
        }
        for (std::size_t j = 0; j < prefix.size(); ++j) {
            prefix[j] = zeta.mu[s - 1] + (prefix[j] - lo);
        }
        row = std::move(prefix);
    }

    Orbit orbit;
    orbit.values = std::move(row);
    orbit.provenance = "reconstructed";
    return orbit;
}

ConjugateOrbit conjugate_orbit(const Orbit& orbit, std::size_t n_max,
                               std::size_t L) {
    if (n_max < 1 || L < 1)
        throw std::invalid_argument("n_max and L must be >= 1");
    const std::size_t need = n_max + L + 1;
    if (orbit.size() < need)
        throw std::invalid_argument("orbit too short: need n_max + L + 1 values");

    ConjugateOrbit conj;
    conj.L = L;
    conj.terms.reserve(n_max);

    std::vector<double> buf(orbit.values.begin(),
                            orbit.values.begin() + static_cast<std::ptrdiff_t>(need));
    for (std::size_t s = 1; s <= n_max; ++s) {
        const std::size_t lim = need - s;
        for (std::size_t i = 0; i < lim; ++i) {
            buf[i] = std::fabs(buf[i + 1] - buf[i]);
        }
        std::vector<std::uint8_t> term(L);
        for (std::size_t p = 0; p < L; ++p) {
            term[p] = buf[p + 1] < buf[p] ? 1 : 0;
        }
        conj.terms.push_back(std::move(term));
    }
    return conj;
}

std::optional<PeriodResult>
detect_period(const std::vector<std::vector<std::uint8_t>>& terms) {
    const std::size_t len = terms.size();
    if (len < 4) return std::nullopt;

    const std::size_t half = len / 2;
    for (std::size_t p = 1; p < len; ++p) {
        // Minimal preperiod for this p: one past the last mismatch among the
        // comparable pairs (n, n + p).
        std::size_t pre = 0;
        for (std::size_t n = 0; n + p < len; ++n) {
            if (terms[n] != terms[n + p]) pre = n + 1;
        }
        if (pre <= half) {
            PeriodResult res;
            res.period = p;
            res.preperiod = pre;
            const std::size_t comparable = len - p;
            res.verified = comparable > pre ? comparable - pre : 0;
            return res;
        }
    }
    return std::nullopt;
}

} // namespace gammaprobe
