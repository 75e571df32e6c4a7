#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "kernelsurf/kernels.hpp"
#include "kernelsurf/rng.hpp"

using namespace kernelsurf;

namespace {

double relu(double v) { return v > 0.0 ? v : 0.0; }

// defining integral: (1/2) sum over a = +-1 of the bias integral of
// [a x + b]_+ [a x' + b]_+ over [-k, k], by composite Simpson
double quadrature_kernel(double x, double xp, double k, int n = 20001) {
  double total = 0.0;
  for (double a : {1.0, -1.0}) {
    double h = 2.0 * k / (n - 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      double b = -k + i * h;
      double f = relu(a * x + b) * relu(a * xp + b);
      double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc += w * f;
    }
    total += acc * h / 3.0;
  }
  return 0.5 * total;
}

}  // namespace

TEST(spline1d, pinned_values) {
  EXPECT_NEAR(spline1d_kernel(0.0, 0.0, 1.0), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(spline1d_kernel(1.0, 1.0, 1.0), 4.0 / 3.0, 1e-12);
}

TEST(spline1d, matches_the_defining_integral) {
  const double pairs[][2] = {
      {0.0, 0.0}, {1.0, 1.0}, {0.3, -0.5}, {-0.9, 0.7}, {0.25, 0.25}};
  for (const auto& p : pairs) {
    double closed = spline1d_kernel(p[0], p[1], 1.0);
    double quad = quadrature_kernel(p[0], p[1], 1.0);
    EXPECT_NEAR(closed, quad, 1e-7) << "pair (" << p[0] << "," << p[1] << ")";
  }
  EXPECT_NEAR(spline1d_kernel(0.3, -0.5, 1.0), 0.226, 1e-12);
  EXPECT_NEAR(spline1d_kernel(-0.9, 0.7, 1.0), 0.044666666666667, 1e-12);

  // a wider support bound
  EXPECT_NEAR(spline1d_kernel(0.8, -1.3, 2.0),
              quadrature_kernel(0.8, -1.3, 2.0), 1e-6);
}

TEST(spline1d, symmetric_in_its_arguments) {
  SeededRng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    double x = rng.uniform(-1.0, 1.0);
    double xp = rng.uniform(-1.0, 1.0);
    EXPECT_NEAR(spline1d_kernel(x, xp, 1.0), spline1d_kernel(xp, x, 1.0),
                1e-15);
  }
}

TEST(spline1d, rejects_arguments_outside_the_support) {
  EXPECT_THROW(spline1d_kernel(1.2, 0.0, 1.0), std::domain_error);
  EXPECT_THROW(spline1d_kernel(0.0, -1.01, 1.0), std::domain_error);
  EXPECT_NO_THROW(spline1d_kernel(1.0, -1.0, 1.0));
  EXPECT_NO_THROW(spline1d_kernel(1.9, -1.3, 2.0));
}

TEST(spline1d, twice_differentiable_across_the_diagonal) {
  // g(x) = K(x, 0.3) is piecewise cubic with its knot at x = 0.3; first and
  // second one-sided derivatives must meet there, the third may jump
  const double knot = 0.3;
  const double h = 1e-4;

  auto g = [&](double x) { return spline1d_kernel(x, knot, 1.0); };
  auto d1 = [&](double x) { return (g(x + h) - g(x - h)) / (2.0 * h); };
  auto d2 = [&](double x) { return (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h); };
  auto d3 = [&](double x) {
    return (g(x + 2 * h) - 2.0 * g(x + h) + 2.0 * g(x - h) - g(x - 2 * h)) /
           (2.0 * h * h * h);
  };

  // continuity of the first two derivatives in the limit: compare linear
  // extrapolations toward the knot from each side (exact for cubics; the
  // stencils stay entirely on one side)
  double d2_left = 2.0 * d2(knot - 3.0 * h) - d2(knot - 6.0 * h);
  double d2_right = 2.0 * d2(knot + 3.0 * h) - d2(knot + 6.0 * h);
  EXPECT_NEAR(d2_left, d2_right, 1e-5);

  double d1_left = 2.0 * d1(knot - 3.0 * h) - d1(knot - 6.0 * h);
  double d1_right = 2.0 * d1(knot + 3.0 * h) - d1(knot + 6.0 * h);
  EXPECT_NEAR(d1_left, d1_right, 1e-7);

  // third derivative is constant within each side
  EXPECT_NEAR(d3(knot - 3.0 * h), d3(knot - 10.0 * h), 1e-3);
  EXPECT_NEAR(d3(knot + 3.0 * h), d3(knot + 10.0 * h), 1e-3);
}
