#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "projmerge/bounds.hpp"

using namespace projmerge;

TEST_CASE("shearer bound values") {
    CHECK(shearer_bound(1, 2, 3) == doctest::Approx(1.0));
    CHECK(shearer_bound(2, 2, 3) == doctest::Approx(std::pow(0.5, 2.0 / 3.0)));
    CHECK(shearer_bound(4, 1, 2) == doctest::Approx(0.5));
    CHECK(shearer_bound(3, 3, 3) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("u function") {
    CHECK(u_fn(0.0) == doctest::Approx(0.0));
    CHECK(u_fn(1.0) == doctest::Approx(2.0));
    CHECK(u_fn(0.75) == doctest::Approx(1.0));
    CHECK_THROWS_AS(u_fn(-0.1), std::domain_error);
    CHECK_THROWS_AS(u_fn(1.1), std::domain_error);
}

TEST_CASE("solved constants") {
    auto bc = solve_eta0(1e-10);
    // frozen 10-digit values from an independent bisection
    CHECK(bc.u_golden == doctest::Approx(0.6180339887).epsilon(1e-9));
    CHECK(bc.eta0 == doctest::Approx(0.5263970746).epsilon(1e-8));
    CHECK(bc.u_of_eta0 == doctest::Approx(0.6236237064).epsilon(1e-8));
    CHECK(bc.lambda_star == doctest::Approx(0.8416175524).epsilon(1e-8));
    CHECK(bc.lambda_star == doctest::Approx(4.0 - 6.0 * bc.eta0));
    CHECK(bc.solver_tolerance == 1e-10);

    // headline approximations
    CHECK(std::abs(bc.eta0 - 0.5264) < 5e-4);
    CHECK(std::abs(bc.u_of_eta0 - 0.6237) < 7e-4);
    CHECK(std::abs(bc.lambda_star - 0.8416) < 3e-3);
}

TEST_CASE("tighter tolerance refines") {
    auto loose = solve_eta0(1e-4);
    auto tight = solve_eta0(1e-12);
    CHECK(tight.solver_iterations > loose.solver_iterations);
    CHECK(std::abs(tight.eta0 - loose.eta0) < 1e-4);
}

TEST_CASE("literal equation root is the inconsistent one") {
    const double root = solve_eta0_literal_equation(1e-10);
    CHECK(root == doctest::Approx(0.4140633969).epsilon(1e-8));
    // nowhere near the consistent constant
    CHECK(std::abs(root - 0.5264) > 0.1);
}

TEST_CASE("discrete bound ceilings") {
    CHECK(discrete_bound(0.75, 10, 2) == 75);
    CHECK(discrete_bound(0.75, 2, 2) == 3);          // ceil(3)
    CHECK(discrete_bound(Rat(3, 4), 2, 2) == 3);
    CHECK(discrete_bound(Rat(3, 4), 3, 2) == 7);     // ceil(6.75)
    CHECK(discrete_bound(0.5264, 2, 2) == 3);        // ceil(2.1056)
    CHECK(discrete_bound(solve_eta0(1e-10).eta0, 3, 2) == 5);
    CHECK(discrete_bound(0.0, 5, 2) == 0);
    CHECK(discrete_bound(1.0, 5, 2) == 25);
}
