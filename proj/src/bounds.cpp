#include "projmerge/bounds.hpp"

#include "projmerge/grid.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace projmerge {

double shearer_bound(std::uint64_t c, std::uint32_t s, std::uint32_t t) {
    if (c < 1) throw std::invalid_argument("part count must be >= 1");
    if (s == 0 || s > t) throw std::invalid_argument("need 1 <= s <= t");
    return std::pow(1.0 / static_cast<double>(c),
                    static_cast<double>(s) / static_cast<double>(t));
}

double u_fn(double a) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::domain_error("u(a) requires a in [0, 1]");
    return 2.0 - 2.0 * std::sqrt(1.0 - a);
}

namespace {

struct BisectionResult {
    double root;
    std::uint32_t iterations;
};

template <class F>
BisectionResult bisect(F f, double lo, double hi, double tolerance) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return {lo, 0};
    if (fhi == 0.0) return {hi, 0};
    if ((flo < 0.0) == (fhi < 0.0))
        throw std::logic_error("bisection bracket does not straddle a sign change");
    std::uint32_t iters = 0;
    double mid = lo;
    while (true) {
        mid = 0.5 * (lo + hi);
        double fm = f(mid);
        ++iters;
        if (std::fabs(fm) <= tolerance || iters > 200) break;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return {mid, iters};
}

double eta_residual(double h) {
    return (2.0 - 3.0 * h) * u_fn(h) + (3.0 * h - 1.0) - (4.0 - 6.0 * h);
}

double eta_residual_literal(double h) {
    return (2.0 - 3.0 * h) * u_fn(h) + (3.0 * h - 1.0) - (4.0 - h) / 6.0;
}

}  // namespace

BoundConstants solve_eta0(double tolerance) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    assert(eta_residual(0.5) < 0.0 && eta_residual(2.0 / 3.0) > 0.0);
    auto r = bisect(eta_residual, 0.5, 2.0 / 3.0, tolerance);
    BoundConstants out;
    out.u_golden = (std::sqrt(5.0) - 1.0) / 2.0;
    out.eta0 = r.root;
    out.u_of_eta0 = u_fn(r.root);
    out.lambda_star = 4.0 - 6.0 * r.root;
    out.solver_tolerance = tolerance;
    out.solver_iterations = r.iterations;
    return out;
}

double solve_eta0_literal_equation(double tolerance) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    return bisect(eta_residual_literal, 0.0, 0.5, tolerance).root;
}

std::int64_t discrete_bound(double fraction, std::uint64_t n, std::uint32_t s) {
    return ceil_fraction_times(fraction, GridDims(s, n).cell_count());
}

std::int64_t discrete_bound(const Rat& fraction, std::uint64_t n, std::uint32_t s) {
    if (fraction < Rat(0) || fraction > Rat(1))
        throw std::domain_error("fraction must lie in [0, 1]");
    return ceil_rat_times(fraction, GridDims(s, n).cell_count());
}

}  // namespace projmerge
