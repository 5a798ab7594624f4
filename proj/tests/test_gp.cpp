#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "permbo/gp.hpp"

using permbo::FeatureVector;
using permbo::GPModel;
using permbo::KernelParams;
using permbo::SearchSpace;

namespace {

// LML by Gaussian elimination with partial pivoting on plain vectors.
double dense_lml(const std::vector<FeatureVector>& x, const std::vector<double>& y, const KernelParams& p,
                 double diag_shift) {
  const std::size_t m = x.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double d2 = 0;
      for (std::size_t k = 0; k < x[i].size(); ++k) d2 += (x[i][k] - x[j][k]) * (x[i][k] - x[j][k]);
      a[i][j] = p.signal_variance * std::exp(-d2 / (2 * p.lengthscale * p.lengthscale)) + (i == j ? diag_shift : 0);
    }
    a[i][m] = y[i];
  }
  double logdet = 0;
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    logdet += std::log(std::abs(a[c][c]));
    for (std::size_t r = c + 1; r < m; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= m; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> sol(m);
  for (std::size_t i = m; i-- > 0;) {
    double s = a[i][m];
    for (std::size_t k = i + 1; k < m; ++k) s -= a[i][k] * sol[k];
    sol[i] = s / a[i][i];
  }
  double quad = 0;
  for (std::size_t i = 0; i < m; ++i) quad += y[i] * sol[i];
  return -0.5 * quad - 0.5 * logdet - 0.5 * static_cast<double>(m) * std::log(2 * std::numbers::pi);
}

struct Data {
  std::vector<FeatureVector> x;
  std::vector<double> y;
};

// Noisy Kendall distance to a fixed target, featurized with the merge map.
Data smooth_problem(std::size_t n, int m, double noise_sd, std::uint64_t seed) {
  permbo::Rng rng(seed);
  const auto target = permbo::random_permutation(n, rng);
  permbo::FeaturizerConfig cfg;
  cfg.window_length = 3;
  Data d;
  std::set<permbo::Permutation> used;
  while (static_cast<int>(d.x.size()) < m) {
    const auto p = permbo::random_permutation(n, rng);
    if (!used.insert(p).second) continue;
    d.x.push_back(permbo::phi_concat(p, cfg));
    const double u1 = permbo::uniform_unit(rng) + 1e-12, u2 = permbo::uniform_unit(rng);
    const double gauss = std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
    d.y.push_back(static_cast<double>(permbo::kendall_tau(p, target)) + noise_sd * gauss);
  }
  return d;
}

}  // namespace

TEST(LogMarginalLikelihood, SinglePointClosedForm) {
  // One point standardizes to y = 0; K + noise = 1 exactly.
  const auto m = GPModel::condition({{1.0, -1.0}}, {3.7}, {1.0, 0.5, 0.0}, 0.5);
  EXPECT_NEAR(m.log_marginal_likelihood(), -0.5 * std::log(2 * std::numbers::pi), 1e-15);
}

TEST(LogMarginalLikelihood, MatchesDenseOracle) {
  const auto d = smooth_problem(7, 25, 0.3, 1);
  for (double ls : {0.5, 2.0, 8.0}) {
    const KernelParams p{ls, 1.7, 1e-8};
    const auto m = GPModel::condition(d.x, d.y, p, 1e-3);
    const std::vector<double> ys(m.standardized_targets().data(),
                                 m.standardized_targets().data() + m.standardized_targets().size());
    EXPECT_NEAR(m.log_marginal_likelihood(), dense_lml(d.x, ys, p, 1e-3 + m.jitter_used()), 1e-8);
  }
}

TEST(LogMarginalLikelihood, DuplicatePointGainIsBoundedByNoise) {
  auto d = smooth_problem(6, 15, 0.2, 2);
  d.x.push_back(d.x[3]);
  d.y.push_back(d.y[3]);
  const KernelParams p{2.0, 1.0, 1e-8};
  const double noise = 1e-2;
  const auto m = GPModel::condition(d.x, d.y, p, noise);
  const std::vector<double> ys(m.standardized_targets().data(),
                               m.standardized_targets().data() + m.standardized_targets().size());
  const double shift = noise + m.jitter_used();
  EXPECT_NEAR(m.log_marginal_likelihood(), dense_lml(d.x, ys, p, shift), 1e-8);

  // log p(y_dup | rest) <= log of the peak density of a variance-`shift` Gaussian.
  const std::vector<FeatureVector> rest_x(d.x.begin(), d.x.end() - 1);
  const std::vector<double> rest_y(ys.begin(), ys.end() - 1);
  const double gain = m.log_marginal_likelihood() - dense_lml(rest_x, rest_y, p, shift);
  EXPECT_LE(gain, -0.5 * std::log(2 * std::numbers::pi * shift) + 1e-9);
}

TEST(LogMarginalLikelihood, FiniteAcrossDefaultGrid) {
  const auto d = smooth_problem(8, 20, 0.1, 3);
  const SearchSpace grid;
  for (double ls : grid.lengthscales)
    for (double s : grid.signal_variances)
      for (double nz : grid.noise_variances)
        ASSERT_TRUE(std::isfinite(GPModel::condition(d.x, d.y, {ls, s, 1e-8}, nz).log_marginal_likelihood()));
}

TEST(Fit, ConstantTargetsRevertToConstant) {
  const auto d = smooth_problem(6, 12, 0.0, 4);
  const std::vector<double> flat(d.y.size(), 5.0);
  const auto m = GPModel::fit(d.x, flat);
  EXPECT_EQ(m.target_std(), 1.0);
  EXPECT_NEAR(m.predict(d.x[0]).mean, 5.0, 1e-9);
  const FeatureVector far(d.x[0].size(), 1e4);
  const auto pr = m.predict(far);
  EXPECT_NEAR(pr.mean, 5.0, 1e-9);
  EXPECT_NEAR(pr.variance, m.params().signal_variance, 1e-9);
}

TEST(Fit, NoisySmoothObjectiveHasSmallNoise) {
  const auto d = smooth_problem(8, 40, 0.1, 5);
  const auto m = GPModel::fit(d.x, d.y);
  EXPECT_LT(m.noise_variance(), m.params().signal_variance);
  EXPECT_GT(m.log_marginal_likelihood(), GPModel::condition(d.x, d.y, {0.1, 0.5, 1e-8}, 1e-1).log_marginal_likelihood());
}

TEST(Fit, Deterministic) {
  const auto d = smooth_problem(7, 30, 0.2, 6);
  const auto a = GPModel::fit(d.x, d.y), b = GPModel::fit(d.x, d.y);
  EXPECT_EQ(a.params().lengthscale, b.params().lengthscale);
  EXPECT_EQ(a.params().signal_variance, b.params().signal_variance);
  EXPECT_EQ(a.noise_variance(), b.noise_variance());
  EXPECT_EQ(a.log_marginal_likelihood(), b.log_marginal_likelihood());
}

TEST(Fit, RefinementNeverLosesToGrid) {
  const auto d = smooth_problem(7, 30, 0.2, 7);
  SearchSpace no_refine;
  no_refine.refine_sweeps = 0;
  EXPECT_GE(GPModel::fit(d.x, d.y).log_marginal_likelihood(),
            GPModel::fit(d.x, d.y, no_refine).log_marginal_likelihood());
}

TEST(Fit, RejectsDegenerateData) {
  const std::vector<FeatureVector> same(4, FeatureVector{1, -1, 1});
  try {
    GPModel::fit(same, {1, 2, 3, 4});
    FAIL();
  } catch (const permbo::Error& e) {
    EXPECT_EQ(e.kind(), permbo::ErrorKind::DegenerateData);
  }
  EXPECT_THROW(GPModel::fit({{1.0}}, {1.0}), permbo::Error);
  EXPECT_THROW(GPModel::fit({{1.0}, {2.0}}, {1.0}), permbo::Error);
}

TEST(Predict, InterpolatesTrainingPoints) {
  const auto d = smooth_problem(8, 30, 0.5, 8);
  const auto m = GPModel::fit(d.x, d.y, SearchSpace::fixed(3.0, 1.0, 1e-8));
  ASSERT_LT((m.chol() * m.chol().transpose() - m.covariance()).norm(), 1e-8 * m.covariance().norm());
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    const auto pr = m.predict(d.x[i]);
    EXPECT_NEAR(pr.mean, d.y[i], 1e-6 * m.target_std());
    EXPECT_LT(pr.variance, 1e-4);
  }
}

TEST(Predict, RevertsToPriorFarAway) {
  const auto d = smooth_problem(8, 20, 0.5, 9);
  const auto m = GPModel::fit(d.x, d.y);
  const FeatureVector far(d.x[0].size(), 1e3);
  const auto pr = m.predict(far);
  EXPECT_NEAR(pr.mean, m.target_mean(), 1e-9);
  EXPECT_NEAR(pr.variance, m.params().signal_variance * m.target_std() * m.target_std(), 1e-9);
  EXPECT_THROW(m.predict(FeatureVector{1.0}), permbo::Error);
}

TEST(Predict, VarianceNonNegativeOnRandomQueries) {
  const auto d = smooth_problem(8, 30, 0.3, 10);
  const auto m = GPModel::fit(d.x, d.y);
  permbo::Rng rng(10);
  permbo::FeaturizerConfig cfg;
  cfg.window_length = 3;
  for (int t = 0; t < 1000; ++t) {
    const auto pr = m.predict(permbo::phi_concat(permbo::random_permutation(8, rng), cfg));
    ASSERT_GE(pr.variance, 0.0);
    ASSERT_TRUE(std::isfinite(pr.mean));
  }
}

TEST(Predict, InvariantToTrainingOrder) {
  const auto d = smooth_problem(7, 25, 0.3, 11);
  std::vector<std::size_t> order(d.x.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
  std::swap(order[2], order[9]);
  Data r;
  for (auto i : order) {
    r.x.push_back(d.x[i]);
    r.y.push_back(d.y[i]);
  }
  const auto space = SearchSpace::fixed(2.5, 2.0, 1e-3);
  const auto a = GPModel::fit(d.x, d.y, space), b = GPModel::fit(r.x, r.y, space);
  permbo::Rng rng(12);
  permbo::FeaturizerConfig cfg;
  cfg.window_length = 3;
  for (int t = 0; t < 50; ++t) {
    const auto q = permbo::phi_concat(permbo::random_permutation(7, rng), cfg);
    EXPECT_NEAR(a.predict(q).mean, b.predict(q).mean, 1e-10);
    EXPECT_NEAR(a.predict(q).variance, b.predict(q).variance, 1e-10);
  }
}

TEST(Predict, ContinuousInInput) {
  const auto d = smooth_problem(7, 25, 0.3, 13);
  const auto m = GPModel::fit(d.x, d.y, SearchSpace::fixed(2.0, 1.0, 1e-3));
  FeatureVector q = d.x[0];
  q[1] += 0.3;
  const auto base = m.predict(q);
  for (double eps : {1e-3, 1e-5, 1e-7}) {
    FeatureVector r = q;
    r[0] += eps;
    const auto pr = m.predict(r);
    EXPECT_LT(std::abs(pr.mean - base.mean), 1e3 * eps);
    EXPECT_LT(std::abs(pr.variance - base.variance), 1e3 * eps);
  }
}
