#include <stdexcept>
#include <utility>

#include "kernelsurf/kernels.hpp"

namespace kernelsurf {

// Sum over a = +-1 of (1/2) * integral over b in [-k, k] of
// [a x + b]+ [a x' + b]+, in closed form. Piecewise cubic, C^2 across x = x'.
double spline1d_kernel(double x, double x_prime, double k) {
  if (!(k > 0.0)) {
    throw std::invalid_argument("support bound k must be positive");
  }
  if (x < -k || x > k || x_prime < -k || x_prime > k) {
    throw std::domain_error("outside kernel support bound");
  }
  if (x > x_prime) std::swap(x, x_prime);
  double lo = x + k;
  double hi = x_prime - k;
  return (3.0 * x_prime - x + 2.0 * k) * lo * lo / 12.0 -
         (3.0 * x - x_prime - 2.0 * k) * hi * hi / 12.0;
}

}  // namespace kernelsurf
