#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gammaprobe/dynsys.hpp"

namespace gammaprobe {

// Order-s absolute finite differences; length k - s for a length-k orbit.
struct DifferenceRow {
    std::size_t order = 0;
    std::vector<double> values;
};

// Binary delta-code of one difference row: bit p is 0 iff row[p+1] >= row[p].
// Ties compare with plain floating-point equality, no epsilon band.
struct MonotonySequence {
    std::size_t order = 0;
    std::vector<std::uint8_t> bits;
    std::size_t flip_count = 0; // indices i with bits[i+1] != bits[i]
    std::size_t max_run = 0;    // longest constant run
};

// Lossless orbit encoding: codes of rows 0..m-1, minima of rows 0..m-1, and
// the order-m row itself. r_codes[s-1] signs the reconstruction of row s-1
// from row s, and mu[s-1] restores its offset, so mu[0] is the orbit minimum.
struct ZetaRepresentation {
    std::size_t m = 0;
    std::vector<std::vector<std::uint8_t>> r_codes; // s-th has length k - s
    std::vector<double> mu;
    std::vector<double> rho; // length k - m
};

// Term n is the first L bits of the order-n code, kept exact.
struct ConjugateOrbit {
    std::size_t L = 0;
    std::vector<std::vector<std::uint8_t>> terms; // terms[n-1], n = 1..n_max
};

struct PeriodResult {
    std::size_t period = 0;
    std::size_t preperiod = 0;
    std::size_t verified = 0; // comparisons actually made beyond the preperiod
};

DifferenceRow difference_row(const Orbit& orbit, std::size_t s);
MonotonySequence monotony_sequence(const DifferenceRow& row);
std::size_t max_run_length(const MonotonySequence& ms);

ZetaRepresentation decompose(const Orbit& orbit, std::size_t m);
Orbit reconstruct(const ZetaRepresentation& zeta);

// Requires orbit length >= n_max + L + 1.
ConjugateOrbit conjugate_orbit(const Orbit& orbit, std::size_t n_max,
                               std::size_t L);

// Smallest p >= 1 whose minimal preperiod (last mismatch over comparable
// pairs, plus one) is at most half the sequence; exact bit-string equality.
// The verified count exposes how many comparisons actually back the match;
// near p = len/2 the comparable range can be empty, and callers should treat
// verified == 0 as a boundary artifact rather than evidence of periodicity.
std::optional<PeriodResult>
detect_period(const std::vector<std::vector<std::uint8_t>>& terms);

} // namespace gammaprobe
