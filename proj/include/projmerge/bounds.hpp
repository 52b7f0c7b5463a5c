#pragma once

#include <cstdint>

#include "projmerge/rational.hpp"

namespace projmerge {

struct BoundConstants {
    double u_golden;      // positive root of x^2 + x = 1
    double eta0;          // three-part projection constant
    double u_of_eta0;     // u(eta0) = 2 - 2*sqrt(1 - eta0)
    double lambda_star;   // 4 - 6*eta0, by construction
    double solver_tolerance;
    std::uint32_t solver_iterations;
};

/// (1/c)^(s/t): the guaranteed max projection fraction for c parts.
double shearer_bound(std::uint64_t c, std::uint32_t s, std::uint32_t t);

/// u(a) = 2 - 2*sqrt(1 - a) on [0, 1].
double u_fn(double a);

/// Bisection root of (2-3h)*u(h) + (3h-1) - (4-6h) on [0.5, 2/3].
/// This is the form consistent with the other printed constants; the
/// literal printed right-hand side (1/6)(4-h) is available separately.
BoundConstants solve_eta0(double tolerance);

/// Bisection root of (2-3h)*u(h) + (3h-1) - (1/6)(4-h) on [0, 0.5].
/// Solves the equation exactly as printed; its root (~0.414) disagrees with
/// every other constant around it, so it is exposed for documentation only.
double solve_eta0_literal_equation(double tolerance);

/// ceil(fraction * N^s) with exact integral arithmetic.
std::int64_t discrete_bound(double fraction, std::uint64_t n, std::uint32_t s);
std::int64_t discrete_bound(const Rat& fraction, std::uint64_t n, std::uint32_t s);

}  // namespace projmerge
