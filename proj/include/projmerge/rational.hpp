#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>

namespace projmerge {

using Rat = boost::rational<long long>;

/// Exact ceiling of fraction * base, where fraction may come from a double
/// (doubles are dyadic rationals, so the conversion below is lossless).
/// All arithmetic is integral; no floating-point ceiling is involved.
std::int64_t ceil_fraction_times(double fraction, std::uint64_t base);

inline std::int64_t ceil_rat_times(const Rat& fraction, std::uint64_t base) {
    if (fraction < Rat(0)) throw std::domain_error("fraction must be >= 0");
    __int128 num = static_cast<__int128>(fraction.numerator()) * static_cast<__int128>(base);
    __int128 den = fraction.denominator();
    return static_cast<std::int64_t>((num + den - 1) / den);
}

inline double to_double(const Rat& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace projmerge
