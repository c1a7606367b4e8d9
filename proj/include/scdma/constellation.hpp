#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace scdma {

using cplx = std::complex<double>;

inline constexpr double kSqrt2 = 1.41421356237309504880168872420969808;

// Difference of two QPSK symbols together with the number of ordered
// symbol pairs (x, x') with x - x' equal to it.
struct DiffSymbol {
    cplx value;
    int pair_count;
};

// The four unit-energy QPSK points, quadrant order I, IV, II, III.
// Index k encodes two data bits: bit0 = sign of Re, bit1 = sign of Im.
const std::array<cplx, 4>& qpsk_alphabet();

// The nine values of the symbol-difference set. Index 0 is the zero
// difference; indices 1..4 are representatives and 5..8 their negatives,
// so negate_diff() maps each index to the index of its negation.
const std::array<DiffSymbol, 9>& difference_alphabet();

inline int negate_diff(int i) { return i == 0 ? 0 : (i <= 4 ? i + 4 : i - 4); }

// Gray bit pattern (2 bits) of symbol index k.
inline unsigned symbol_bits(int k) { return static_cast<unsigned>(k); }

}  // namespace scdma
