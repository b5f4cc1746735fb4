#include <cmath>
#include <random>

#include "aitsde/error.hpp"
#include "aitsde/solver.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace aitsde;

TEST_CASE("linear residual") {
  const auto r = solve_implicit(ImplicitProblem{[](double z) { return z - 2.0; }, [](double) { return 1.0; }, 1.0, 3.0});
  CHECK(r.root == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::abs(r.residual) <= 1e-12);
}

TEST_CASE("root near the lower edge of a wide bracket") {
  auto res = [](double z) { return std::log(z / 1e-8); };
  auto der = [](double z) { return 1.0 / z; };
  const auto r = solve_implicit(ImplicitProblem{res, der, 1e-12, 10.0});
  CHECK(std::abs(r.residual) <= 1e-12);
  CHECK(std::abs(r.root - oracle::bisect(res, 1e-12, 10.0)) <= 1e-20);
  CHECK(r.root > 1e-12);
  CHECK(r.root < 10.0);

  // Linear residual with a tiny root.
  auto lin = [](double z) { return z - 1e-8; };
  const auto q = solve_implicit(ImplicitProblem{lin, [](double) { return 1.0; }, 1e-12, 10.0});
  CHECK(std::abs(q.residual) <= 1e-12);
}

TEST_CASE("errors") {
  auto res = [](double z) { return z * z + 1.0; };
  auto der = [](double z) { return 2.0 * z; };
  try {
    solve_implicit(ImplicitProblem{res, der, 1.0, 3.0});
    FAIL("expected NoSignChange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoSignChange);
  }
  // Residual too steep for the absolute tolerance to be reachable.
  auto steep = [](double z) { return 1e9 * (z - 2.0) + 1e-3; };
  try {
    solve_implicit(ImplicitProblem{steep, [](double) { return 1e9; }, 1.0, 4.0});
    FAIL("expected MaxIterations");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MaxIterations);
  }
}

TEST_CASE("safeguarded Newton agrees with bisection on random monotone residuals") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int worst_iters = 0;
  for (int i = 0; i < 10000; ++i) {
    const double r0 = std::pow(10.0, -2.0 + 4.0 * u(rng));
    const double a = 1.0 + 9.0 * u(rng);
    const double b = 5.0 * u(rng);
    const double c = 3.0 * u(rng);
    const double d = 2.0 * u(rng);
    auto res = [=](double z) {
      return a * (z - r0) + b * (z * z * z - r0 * r0 * r0) + c * std::log(z / r0) - d * (1.0 / z - 1.0 / r0);
    };
    auto der = [=](double z) { return a + 3.0 * b * z * z + c / z + d / (z * z); };
    const double lo = 1e-3 * r0;
    const double hi = 10.0 * r0 + 1.0;
    const auto r = solve_implicit(ImplicitProblem{res, der, lo, hi});
    CHECK(std::abs(r.residual) <= 1e-12);
    CHECK(std::abs(r.root - oracle::bisect(res, lo, hi)) <= 1e-12);
    worst_iters = std::max(worst_iters, r.iterations);
  }
  CHECK(worst_iters < kMaxSolverIterations);
}
