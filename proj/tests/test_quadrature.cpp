#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qfid/quadrature.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

TEST(Quadrature, SmoothIntegrands) {
  EXPECT_NEAR(qfid::adaptive_simpson([](double x) { return std::sin(x); }, 0.0, kPi, 1e-12), 2.0,
              1e-11);
  EXPECT_NEAR(qfid::adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12),
              std::exp(1.0) - 1.0, 1e-11);
  EXPECT_EQ(qfid::adaptive_simpson([](double) { return 1.0; }, 2.0, 2.0, 1e-9), 0.0);
}

TEST(Quadrature, LogSingularEndpoints) {
  // int_0^1 -ln x dx = 1,  int_0^pi -ln sin x dx = pi ln 2.
  EXPECT_NEAR(qfid::integrate_endpoint_singular([](double x) { return -std::log(x); }, 0.0, 1.0,
                                                1e-11),
              1.0, 1e-9);
  EXPECT_NEAR(qfid::integrate_endpoint_singular([](double x) { return -std::log(std::sin(x)); },
                                                0.0, kPi, 1e-11),
              kPi * std::log(2.0), 1e-9);
}

TEST(Quadrature, InteriorLogSingularityNeedsBreakpoint) {
  // int_0^2 -ln|x - 1| dx = 2.
  const auto f = [](double x) { return -std::log(std::abs(x - 1.0)); };
  const std::vector<double> breaks{1.0, 5.0, -1.0};
  EXPECT_NEAR(qfid::integrate_piecewise(f, 0.0, 2.0, breaks, 1e-11), 2.0, 1e-9);
}

TEST(Quadrature, InverseSquareRootEndpoint) {
  EXPECT_NEAR(qfid::integrate_endpoint_singular([](double x) { return 1.0 / std::sqrt(x); }, 0.0,
                                                4.0, 1e-11),
              4.0, 1e-7);
}

TEST(Quadrature, NonFiniteIntegrandIsNotHidden) {
  const double v = qfid::adaptive_simpson(
      [](double x) { return x > 0.3 && x < 0.31 ? std::nan("") : 1.0; }, 0.0, 1.0, 1e-9);
  EXPECT_FALSE(std::isfinite(v));
}

}  // namespace
