#include "scdma/constellation.hpp"

namespace scdma {

const std::array<cplx, 4>& qpsk_alphabet() {
    static const double a = 1.0 / kSqrt2;
    static const std::array<cplx, 4> alphabet = {
        cplx{a, a},    // quadrant I
        cplx{a, -a},   // quadrant IV
        cplx{-a, a},   // quadrant II
        cplx{-a, -a},  // quadrant III
    };
    return alphabet;
}

const std::array<DiffSymbol, 9>& difference_alphabet() {
    static const double s = kSqrt2;
    static const std::array<DiffSymbol, 9> diffs = {{
        {cplx{0.0, 0.0}, 4},
        {cplx{s, 0.0}, 2},
        {cplx{0.0, s}, 2},
        {cplx{s, s}, 1},
        {cplx{-s, s}, 1},
        {cplx{-s, 0.0}, 2},
        {cplx{0.0, -s}, 2},
        {cplx{-s, -s}, 1},
        {cplx{s, -s}, 1},
    }};
    return diffs;
}

}  // namespace scdma
