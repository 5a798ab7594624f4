#pragma once

// Exact Gaussian-process regression over feature vectors, with
// hyperparameters chosen by log-marginal-likelihood grid search and a short
// coordinate-descent refinement in log space.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "permbo/error.hpp"
#include "permbo/featurize.hpp"
#include "permbo/kernel.hpp"

namespace permbo {

/// `count` points spaced evenly in log space over [lo, hi].
inline std::vector<double> log_uniform_grid(double lo, double hi, int count) {
  std::vector<double> out;
  if (count <= 1) {
    out.push_back(lo);
    return out;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int k = 0; k < count; ++k) out.push_back(std::exp(a + (b - a) * k / (count - 1)));
  return out;
}

struct SearchSpace {
  std::vector<double> lengthscales = log_uniform_grid(0.1, 100.0, 25);
  std::vector<double> signal_variances = {0.5, 1.0, 2.0, 4.0};
  std::vector<double> noise_variances = log_uniform_grid(1e-6, 1e-1, 7);
  int refine_sweeps = 3;
  double shrink = 0.5;
  double jitter = 1e-8;

  /// Pins every hyperparameter; fitting reduces to conditioning.
  static SearchSpace fixed(double lengthscale, double signal, double noise) {
    SearchSpace s;
    s.lengthscales = {lengthscale};
    s.signal_variances = {signal};
    s.noise_variances = {noise};
    s.refine_sweeps = 0;
    return s;
  }
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

class GPModel {
 public:
  /// Conditions on data with fixed hyperparameters. m >= 1.
  static GPModel condition(std::vector<FeatureVector> features, std::vector<double> targets,
                           const KernelParams& params, double noise_variance) {
    params.validate();
    if (!(noise_variance > 0.0)) throw Error(ErrorKind::InvalidArgument, "noise variance must be > 0");
    check_data(features, targets, 1);
    GPModel m;
    m.features_ = std::move(features);
    m.targets_raw_ = std::move(targets);
    m.standardize();
    m.sqdist_ = pairwise_sqdist(m.features_);
    m.refactor(params, noise_variance);
    return m;
  }

  /// Chooses (lengthscale, signal, noise) maximizing the log marginal
  /// likelihood over `space`. m >= 2; identical features throw DegenerateData.
  static GPModel fit(std::vector<FeatureVector> features, std::vector<double> targets,
                     const SearchSpace& space = {}) {
    check_data(features, targets, 2);
    if (space.lengthscales.empty() || space.signal_variances.empty() || space.noise_variances.empty())
      throw Error(ErrorKind::InvalidArgument, "empty hyperparameter grid");

    GPModel m;
    m.features_ = std::move(features);
    m.targets_raw_ = std::move(targets);
    m.standardize();
    m.sqdist_ = pairwise_sqdist(m.features_);
    if (m.sqdist_.maxCoeff() == 0.0)
      throw Error(ErrorKind::DegenerateData, "all training feature vectors are identical");

    struct Candidate {
      double log_ls, log_sig, log_noise;
      double lml = -std::numeric_limits<double>::infinity();
    };
    auto evaluate = [&](double log_ls, double log_sig, double log_noise) {
      KernelParams p{std::exp(log_ls), std::exp(log_sig), space.jitter};
      return m.lml_for(p, std::exp(log_noise));
    };

    Candidate best{0, 0, 0};
    bool found = false;
    for (double ls : space.lengthscales) {
      for (double sig : space.signal_variances) {
        for (double noise : space.noise_variances) {
          Candidate c{std::log(ls), std::log(sig), std::log(noise)};
          c.lml = evaluate(c.log_ls, c.log_sig, c.log_noise);
          // Strict improvement keeps the first grid point on ties.
          if (!found || c.lml > best.lml) {
            best = c;
            found = true;
          }
        }
      }
    }

    auto bounds = [](const std::vector<double>& g) {
      const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
      return std::pair{std::log(*lo), std::log(*hi)};
    };
    auto initial_step = [](const std::pair<double, double>& b, std::size_t count) {
      return count > 1 ? (b.second - b.first) / static_cast<double>(count - 1) : 0.0;
    };
    const std::pair<double, double> box[3] = {bounds(space.lengthscales), bounds(space.signal_variances),
                                              bounds(space.noise_variances)};
    double step[3] = {initial_step(box[0], space.lengthscales.size()),
                      initial_step(box[1], space.signal_variances.size()),
                      initial_step(box[2], space.noise_variances.size())};

    for (int sweep = 0; sweep < space.refine_sweeps; ++sweep) {
      for (int c = 0; c < 3; ++c) {
        if (step[c] == 0.0) continue;
        for (double dir : {+1.0, -1.0}) {
          Candidate trial = best;
          double* coord = c == 0 ? &trial.log_ls : c == 1 ? &trial.log_sig : &trial.log_noise;
          *coord = std::clamp(*coord + dir * step[c], box[c].first, box[c].second);
          trial.lml = evaluate(trial.log_ls, trial.log_sig, trial.log_noise);
          if (trial.lml > best.lml) best = trial;
        }
      }
      for (double& s : step) s *= space.shrink;
    }

    if (!std::isfinite(best.lml))
      throw Error(ErrorKind::NotPositiveDefinite, "no hyperparameter candidate produced a factorizable Gram");
    m.refactor(KernelParams{std::exp(best.log_ls), std::exp(best.log_sig), space.jitter},
               std::exp(best.log_noise));
    return m;
  }

  /// -1/2 y^T alpha - sum log diag(L) - (m/2) log 2 pi, on standardized targets.
  double log_marginal_likelihood() const {
    return lml_from(chol_, alpha_);
  }

  /// Posterior mean and latent variance in raw target units.
  Prediction predict(std::span<const double> x) const {
    require_same_length(x.size(), features_.front().size(), "predict");
    const auto m = static_cast<Eigen::Index>(features_.size());
    Eigen::VectorXd k(m);
    for (Eigen::Index i = 0; i < m; ++i) k(i) = rbf(x, features_[i], params_);
    const double mean_std = k.dot(alpha_);
    const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(k);
    const double var_std = std::max(0.0, params_.signal_variance - v.squaredNorm());
    return {target_mean_ + target_std_ * mean_std, std::max(0.0, var_std * target_std_ * target_std_)};
  }

  const std::vector<FeatureVector>& train_features() const noexcept { return features_; }
  const std::vector<double>& train_targets() const noexcept { return targets_raw_; }
  double target_mean() const noexcept { return target_mean_; }
  double target_std() const noexcept { return target_std_; }
  const KernelParams& params() const noexcept { return params_; }
  double noise_variance() const noexcept { return noise_variance_; }
  /// Jitter that was actually needed on top of the noise term.
  double jitter_used() const noexcept { return jitter_used_; }
  const Eigen::MatrixXd& chol() const noexcept { return chol_; }
  const Eigen::MatrixXd& covariance() const noexcept { return covariance_; }
  const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
  const Eigen::VectorXd& standardized_targets() const noexcept { return y_; }

 private:
  GPModel() = default;

  static void check_data(const std::vector<FeatureVector>& features, const std::vector<double>& targets,
                         std::size_t min_count) {
    if (features.size() < min_count)
      throw Error(ErrorKind::InvalidArgument, "need at least " + std::to_string(min_count) + " training points");
    require_same_length(features.size(), targets.size(), "training features vs targets");
    for (const auto& f : features) require_same_length(f.size(), features.front().size(), "training features");
    for (double t : targets)
      if (!std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "non-finite training target");
  }

  void standardize() {
    const auto m = static_cast<double>(targets_raw_.size());
    double mean = 0.0;
    for (double t : targets_raw_) mean += t;
    mean /= m;
    double var = 0.0;
    for (double t : targets_raw_) var += (t - mean) * (t - mean);
    var /= m;
    target_mean_ = mean;
    target_std_ = var > 0.0 ? std::sqrt(var) : 1.0;
    y_.resize(static_cast<Eigen::Index>(targets_raw_.size()));
    for (std::size_t i = 0; i < targets_raw_.size(); ++i)
      y_(static_cast<Eigen::Index>(i)) = (targets_raw_[i] - target_mean_) / target_std_;
  }

  double lml_from(const Eigen::MatrixXd& lower, const Eigen::VectorXd& alpha) const {
    const double m = static_cast<double>(y_.size());
    return -0.5 * y_.dot(alpha) - lower.diagonal().array().log().sum() -
           0.5 * m * std::log(2.0 * std::numbers::pi);
  }

  double lml_for(const KernelParams& p, double noise) const {
    try {
      const auto f = factorize_with_jitter(kernel_from_sqdist(sqdist_, p), noise, p.jitter);
      const Eigen::VectorXd alpha = solve_with(f.lower, y_);
      const double v = lml_from(f.lower, alpha);
      return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
    } catch (const Error&) {
      return -std::numeric_limits<double>::infinity();
    }
  }

  static Eigen::VectorXd solve_with(const Eigen::MatrixXd& lower, const Eigen::VectorXd& rhs) {
    const Eigen::VectorXd z = lower.triangularView<Eigen::Lower>().solve(rhs);
    return lower.transpose().triangularView<Eigen::Upper>().solve(z);
  }

  void refactor(const KernelParams& p, double noise) {
    auto f = factorize_with_jitter(kernel_from_sqdist(sqdist_, p), noise, p.jitter);
    params_ = p;
    noise_variance_ = noise;
    jitter_used_ = f.jitter_used;
    covariance_ = std::move(f.matrix);
    chol_ = std::move(f.lower);
    alpha_ = solve_with(chol_, y_);
  }

  std::vector<FeatureVector> features_;
  std::vector<double> targets_raw_;
  Eigen::VectorXd y_;
  double target_mean_ = 0.0;
  double target_std_ = 1.0;
  KernelParams params_{};
  double noise_variance_ = 0.0;
  double jitter_used_ = 0.0;
  Eigen::MatrixXd sqdist_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
};

}  // namespace permbo
