#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "permbo/error.hpp"
#include "permbo/featurize.hpp"
#include "permbo/permutation.hpp"

namespace permbo {

struct KernelParams {
  double lengthscale = 1.0;
  double signal_variance = 1.0;
  double jitter = 1e-8;

  void validate() const {
    if (!(lengthscale > 0.0)) throw Error(ErrorKind::InvalidArgument, "lengthscale must be > 0");
    if (!(signal_variance > 0.0)) throw Error(ErrorKind::InvalidArgument, "signal variance must be > 0");
    if (!(jitter >= 0.0)) throw Error(ErrorKind::InvalidArgument, "jitter must be >= 0");
  }
};

inline constexpr double kMaxJitter = 1e-4;

inline double squared_distance(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size(), "squared_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

/// Kernel value from a precomputed squared distance.
inline double rbf_from_sqdist(double sqdist, const KernelParams& p) {
  return p.signal_variance * std::exp(-sqdist / (2.0 * p.lengthscale * p.lengthscale));
}

/// signal_variance * exp(-|x - y|^2 / (2 l^2)).
inline double rbf(std::span<const double> x, std::span<const double> y, const KernelParams& p) {
  return rbf_from_sqdist(squared_distance(x, y), p);
}

/// exp(-l * kendall_tau(pi, sigma)).
inline double mallows_closed_form(const Permutation& pi, const Permutation& sigma, double l) {
  if (!(l >= 0.0)) throw Error(ErrorKind::InvalidArgument, "Mallows lengthscale must be >= 0");
  return std::exp(-l * static_cast<double>(kendall_tau(pi, sigma)));
}

/// RBF lengthscale for which the RBF over the enumeration map equals the
/// Mallows kernel with parameter l: each discordant pair adds 4 to |x - y|^2,
/// so exp(-4 d / (2 l^2)) = exp(-l d) gives l = 2 / lengthscale^2.
inline double mallows_parameter_for_lengthscale(double lengthscale) {
  return 2.0 / (lengthscale * lengthscale);
}

/// Pairwise squared distances; depends on the features only, so the GP fit
/// reuses it for every hyperparameter candidate.
inline Eigen::MatrixXd pairwise_sqdist(std::span<const FeatureVector> features) {
  const auto m = static_cast<Eigen::Index>(features.size());
  Eigen::MatrixXd d(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double v = squared_distance(features[i], features[j]);
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

inline Eigen::MatrixXd kernel_from_sqdist(const Eigen::MatrixXd& sqdist, const KernelParams& p) {
  const double scale = -1.0 / (2.0 * p.lengthscale * p.lengthscale);
  return (sqdist.array() * scale).exp().matrix() * p.signal_variance;
}

/// Result of a Cholesky factorization with the diagonal shift that made it succeed.
struct FactorizedGram {
  Eigen::MatrixXd matrix;   // kernel + (diag_shift) I, as factorized
  Eigen::MatrixXd lower;    // L with L L^T = matrix
  double jitter_used = 0.0;
};

/// Factorizes K + (base + jitter) I, escalating jitter x10 up to kMaxJitter.
/// `base_diag` carries observation noise for the GP; the Gram alone passes 0.
inline FactorizedGram factorize_with_jitter(const Eigen::MatrixXd& kernel, double base_diag, double jitter) {
  const auto m = kernel.rows();
  double j = jitter;
  for (;;) {
    Eigen::MatrixXd shifted = kernel;
    shifted.diagonal().array() += base_diag + j;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd lower = llt.matrixL();
      if ((lower.diagonal().array() > 0.0).all()) return {std::move(shifted), std::move(lower), j};
    }
    if (j >= kMaxJitter) break;
    j = (j == 0.0) ? 1e-10 : std::min(j * 10.0, kMaxJitter);
  }
  throw Error(ErrorKind::NotPositiveDefinite,
              "Gram matrix of size " + std::to_string(m) + " not factorizable with jitter up to " +
                  std::to_string(kMaxJitter));
}

/// G[i][j] = rbf(f_i, f_j) + jitter [i == j].
inline Eigen::MatrixXd gram(std::span<const FeatureVector> features, const KernelParams& p) {
  p.validate();
  if (features.empty()) throw Error(ErrorKind::InvalidArgument, "gram of zero vectors");
  for (const auto& f : features) require_same_length(f.size(), features[0].size(), "gram");
  Eigen::MatrixXd g = kernel_from_sqdist(pairwise_sqdist(features), p);
  g.diagonal().array() += p.jitter;
  return g;
}

/// Gram matrix and its Cholesky factor; jitter escalates on failure.
inline FactorizedGram factorized_gram(std::span<const FeatureVector> features, const KernelParams& p) {
  p.validate();
  if (features.empty()) throw Error(ErrorKind::InvalidArgument, "gram of zero vectors");
  for (const auto& f : features) require_same_length(f.size(), features[0].size(), "gram");
  return factorize_with_jitter(kernel_from_sqdist(pairwise_sqdist(features), p), 0.0, p.jitter);
}

}  // namespace permbo
