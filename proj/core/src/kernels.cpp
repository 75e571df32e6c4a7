#include "kernelsurf/kernels.hpp"

#include <stdexcept>

namespace kernelsurf {

KernelBlock KernelBlock::zero(int dimension) {
  KernelBlock b;
  b.k00 = 0.0;
  b.k0g = Eigen::VectorXd::Zero(dimension);
  b.kg0 = Eigen::VectorXd::Zero(dimension);
  b.kgg = Eigen::MatrixXd::Zero(dimension, dimension);
  return b;
}

Eigen::MatrixXd KernelBlock::as_matrix() const {
  int d = static_cast<int>(k0g.size());
  Eigen::MatrixXd m(d + 1, d + 1);
  m(0, 0) = k00;
  m.block(0, 1, 1, d) = k0g.transpose();
  m.block(1, 0, d, 1) = kg0;
  m.block(1, 1, d, d) = kgg;
  return m;
}

void Kernel::value_row(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime,
                       double& k00, Eigen::VectorXd& k0g) const {
  KernelBlock b = block(x, x_prime);
  k00 = b.k00;
  k0g = std::move(b.k0g);
}

std::shared_ptr<const Kernel> make_kernel(KernelFamily family, int dimension,
                                          double support_k) {
  switch (family) {
    case KernelFamily::gaussian:
      return std::make_shared<GaussianKernel>(dimension);
    case KernelFamily::uniform:
      return std::make_shared<UniformKernel>(dimension, support_k);
    case KernelFamily::poisson_radial:
      if (dimension != 3) {
        throw std::invalid_argument("poisson-radial kernel is 3D only");
      }
      return std::make_shared<PoissonRadialKernel>(2);
    case KernelFamily::empirical:
      throw std::invalid_argument(
          "empirical kernel needs a weight ensemble; construct it directly");
  }
  throw std::invalid_argument("unknown kernel family");
}

}  // namespace kernelsurf
