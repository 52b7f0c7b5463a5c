#include "projmerge/rational.hpp"

#include <cmath>

namespace projmerge {

std::int64_t ceil_fraction_times(double fraction, std::uint64_t base) {
    if (!(fraction >= 0.0) || !(fraction <= 1.0))
        throw std::domain_error("fraction must lie in [0, 1]");
    int exp = 0;
    double mant = std::frexp(fraction, &exp);  // fraction = mant * 2^exp, mant in [0.5, 1)
    // scale mantissa to an exact integer: mant * 2^53 is integral for doubles
    __int128 num = static_cast<__int128>(std::ldexp(mant, 53));
    int shift = 53 - exp;  // fraction = num / 2^shift
    __int128 n = num * static_cast<__int128>(base);
    if (n == 0) return 0;
    if (shift >= 120) return 1;  // positive but below 2^-60: ceil is 1 for any sane base
    if (shift <= 0) return static_cast<std::int64_t>(n << (-shift));
    __int128 den = static_cast<__int128>(1) << shift;
    return static_cast<std::int64_t>((n + den - 1) / den);
}

}  // namespace projmerge
