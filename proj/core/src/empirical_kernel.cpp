#include <stdexcept>
#include <utility>

#include "kernelsurf/kernels.hpp"

namespace kernelsurf {

WeightEnsemble sample_weights(WeightDistribution tag, Eigen::Index m,
                              int dimension, double support_k, SeededRng& rng) {
  if (m < 1) {
    throw std::invalid_argument("weight count must be >= 1");
  }
  if (dimension < 1) {
    throw std::invalid_argument("weight dimension must be >= 1");
  }
  if (tag == WeightDistribution::uniform && support_k <= 0.0) {
    throw std::invalid_argument("support bound k must be positive");
  }
  WeightEnsemble w;
  w.distribution = tag;
  w.support_k = support_k;
  w.a.resize(m, dimension);
  w.b.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (int j = 0; j < dimension; ++j) {
      w.a(i, j) = rng.normal();
    }
    if (tag == WeightDistribution::uniform) {
      double len = w.a.row(i).norm();
      // redraw the (measure-zero) degenerate direction
      while (len <= 0.0) {
        for (int j = 0; j < dimension; ++j) {
          w.a(i, j) = rng.normal();
        }
        len = w.a.row(i).norm();
      }
      w.a.row(i) /= len;
      w.b(i) = rng.uniform(-support_k, support_k);
    } else {
      w.b(i) = rng.normal();
    }
  }
  return w;
}

KernelBlock empirical_kernel_block(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& x_prime,
                                   const WeightEnsemble& w) {
  const int d = w.dimension();
  if (x.size() != d || x_prime.size() != d) {
    throw std::invalid_argument("kernel input dimensions disagree");
  }
  const Eigen::Index m = w.count();
  KernelBlock out = KernelBlock::zero(d);
  for (Eigen::Index i = 0; i < m; ++i) {
    double zx = w.a.row(i).dot(x) + w.b(i);
    double zxp = w.a.row(i).dot(x_prime) + w.b(i);
    // indicator at exactly zero pre-activation is 0
    bool ax = zx > 0.0;
    bool axp = zxp > 0.0;
    if (!ax && !axp) continue;
    double px = ax ? zx : 0.0;
    double pxp = axp ? zxp : 0.0;
    out.k00 += px * pxp;
    if (axp) out.k0g += px * w.a.row(i).transpose();
    if (ax) out.kg0 += pxp * w.a.row(i).transpose();
    if (ax && axp) {
      out.kgg.noalias() += w.a.row(i).transpose() * w.a.row(i);
    }
  }
  double inv_m = 1.0 / static_cast<double>(m);
  out.k00 *= inv_m;
  out.k0g *= inv_m;
  out.kg0 *= inv_m;
  out.kgg *= inv_m;
  return out;
}

EmpiricalKernel::EmpiricalKernel(WeightEnsemble w) : ensemble_(std::move(w)) {
  if (ensemble_.count() < 1) {
    throw std::invalid_argument("empty weight ensemble");
  }
}

KernelBlock EmpiricalKernel::block(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& x_prime) const {
  return empirical_kernel_block(x, x_prime, ensemble_);
}

}  // namespace kernelsurf
