#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spgarch/error.hpp"
#include "spgarch/quadrature.hpp"

using namespace spgarch;

TEST(Quadrature, PolynomialExact) {
  const auto r = integrate_adaptive([](double x) { return 3 * x * x - 2 * x + 1; }, -1.0, 2.0);
  EXPECT_NEAR(r.value, 9.0 - 3.0 + 3.0, 1e-13);
}

TEST(Quadrature, SmoothAndPeakedIntegrands) {
  EXPECT_NEAR(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value,
              2.0, 1e-12);
  // Narrow Gaussian bump forces refinement.
  const double s = 1e-3;
  const auto r = integrate_adaptive([&](double x) { return std::exp(-0.5 * x * x / (s * s)); }, -1.0, 1.0);
  EXPECT_NEAR(r.value, s * std::sqrt(2.0 * std::numbers::pi), 1e-12);
  EXPECT_GT(r.intervals, 1u);
}

TEST(Quadrature, KinkAtInteriorPoint) {
  const auto r = integrate_adaptive([](double x) { return std::abs(x - 0.3); }, -1.0, 1.0);
  const double exact = 0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7;
  EXPECT_NEAR(r.value, exact, 1e-10 * exact);
  EXPECT_LE(std::abs(r.value - exact), r.abs_error + 1e-15);
}

TEST(Quadrature, ErrorEstimateBoundsTrueError) {
  const auto r = integrate_adaptive([](double x) { return 1.0 / (1.0 + 25 * x * x); }, -1.0, 1.0,
                                    {1e-8, 0.0, 2000});
  const double exact = 2.0 / 5.0 * std::atan(5.0);
  EXPECT_LE(std::abs(r.value - exact), std::max(r.abs_error, 1e-15));
}

TEST(Quadrature, BudgetExhaustionThrows) {
  // 1/sqrt|x| has an integrable singularity that 3 intervals cannot resolve.
  EXPECT_THROW(integrate_adaptive([](double x) { return 1.0 / std::sqrt(std::abs(x) + 1e-300); },
                                  -1.0, 1.0, {1e-14, 0.0, 3}),
               NumericError);
}

TEST(Quadrature, RejectsInfiniteLimits) {
  EXPECT_THROW(integrate_adaptive([](double) { return 1.0; }, 0.0, INFINITY), ContractViolation);
}
