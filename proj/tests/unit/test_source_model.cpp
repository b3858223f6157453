#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "gshare/source_model.hpp"

using gshare::Error;
using gshare::ErrorCode;
using gshare::SourceSpec;
using gshare::Subset;

namespace {

Eigen::MatrixXd random_spd(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = g(rng);
  }
  Eigen::MatrixXd c = a * a.transpose();
  c.diagonal().array() += 0.5;
  return c;
}

// 1/2 log2(det Sigma_{Y_S} sigma2_x / det Sigma_{(X, Y_S)}) straight from the
// covariance, using Eigen's LU determinant.
double logdet_mi(const Eigen::MatrixXd& c, const std::vector<int>& members) {
  const int m = static_cast<int>(members.size());
  Eigen::MatrixXd ys(m, m), joint(m + 1, m + 1);
  joint(0, 0) = c(0, 0);
  for (int i = 0; i < m; ++i) {
    joint(0, i + 1) = joint(i + 1, 0) = c(0, members[i]);
    for (int j = 0; j < m; ++j) ys(i, j) = joint(i + 1, j + 1) = c(members[i], members[j]);
  }
  return 0.5 * std::log2(ys.determinant() * c(0, 0) / joint.determinant());
}

}  // namespace

TEST(DeriveGainVector, UnitGainUnitNoiseCovariance) {
  Eigen::MatrixXd c(2, 2);
  c << 1, 1, 1, 2;
  const auto g = gshare::derive_gain_vector(SourceSpec::from_covariance(c), Subset{1});
  ASSERT_EQ(g.h.size(), 1);
  EXPECT_NEAR(g.h(0), 1.0, 1e-15);
  EXPECT_NEAR(g.o, 1.0, 1e-15);
}

TEST(DeriveGainVector, GainsModeReturnsSubVector) {
  const auto spec = SourceSpec::from_gains(2.0, {0.5, 1.0, 0.8});
  const auto g = gshare::derive_gain_vector(spec, Subset{1, 2});
  ASSERT_EQ(g.h.size(), 2);
  EXPECT_EQ(g.h(0), 0.5);
  EXPECT_EQ(g.h(1), 1.0);
  EXPECT_DOUBLE_EQ(g.o, 1.25);
}

TEST(DeriveGainVector, EmptySubsetHasZeroGain) {
  const auto spec = SourceSpec::from_gains(2.0, {0.5, 1.0, 0.8});
  const auto g = gshare::derive_gain_vector(spec, Subset{});
  EXPECT_EQ(g.h.size(), 0);
  EXPECT_EQ(g.o, 0.0);
}

TEST(DeriveGainVector, RandomCovarianceMatchesLogDet) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::MatrixXd c = random_spd(4, rng);
    const auto spec = SourceSpec::from_covariance(c);
    const auto g = gshare::derive_gain_vector(spec, Subset{1, 2, 3});
    const double expected = logdet_mi(c, {1, 2, 3});
    EXPECT_NEAR(0.5 * std::log2(c(0, 0) * g.o + 1.0), expected, 1e-9 * std::max(1.0, expected));
    EXPECT_NEAR(g.o, g.h.squaredNorm(), 1e-12 * std::max(1.0, g.o));
  }
}

TEST(DeriveGainVector, NormalizedModelPreservesInformation) {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::MatrixXd c = random_spd(5, rng);
    const auto spec = SourceSpec::from_covariance(c);
    const Subset s{1, 3, 4};
    const auto g = gshare::derive_gain_vector(spec, s);
    // Rebuild (X, Y'_S) with Y'_S = H_S X + unit noise.
    const double s2 = c(0, 0);
    Eigen::MatrixXd rebuilt(4, 4);
    rebuilt(0, 0) = s2;
    for (int i = 0; i < 3; ++i) {
      rebuilt(0, i + 1) = rebuilt(i + 1, 0) = s2 * g.h(i);
      for (int j = 0; j < 3; ++j) rebuilt(i + 1, j + 1) = s2 * g.h(i) * g.h(j) + (i == j ? 1.0 : 0.0);
    }
    EXPECT_NEAR(logdet_mi(rebuilt, {1, 2, 3}), logdet_mi(c, {1, 3, 4}), 1e-9);
  }
}

TEST(DeriveGainVector, GainsMonotoneUnderInclusion) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> h(6);
    for (double& x : h) x = u(rng);
    const auto spec = SourceSpec::from_gains(1.5, h);
    for (std::uint32_t a = 0; a < 64; ++a) {
      for (std::uint32_t b = a; b < 64; b = (b + 1) | a) {
        EXPECT_LE(gshare::derive_gain_vector(spec, Subset(a)).o, gshare::derive_gain_vector(spec, Subset(b)).o);
      }
    }
  }
}

TEST(DeriveGainVector, RejectsOutOfRangeSubset) {
  const auto spec = SourceSpec::from_gains(1.0, {1.0, 2.0});
  try {
    gshare::derive_gain_vector(spec, Subset{3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(SourceSpec, RejectsSingularCovariance) {
  Eigen::MatrixXd c(3, 3);
  c << 1, 1, 1, 1, 1, 1, 1, 1, 2;
  try {
    SourceSpec::from_covariance(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveDefinite);
  }
}

TEST(SourceSpec, RejectsAsymmetricCovariance) {
  Eigen::MatrixXd c(2, 2);
  c << 1, 0.5, 0.4, 2;
  EXPECT_THROW(SourceSpec::from_covariance(c), Error);
}

TEST(SourceSpec, RejectsBadGainsInput) {
  EXPECT_THROW(SourceSpec::from_gains(0.0, {1.0}), Error);
  EXPECT_THROW(SourceSpec::from_gains(-1.0, {1.0}), Error);
  EXPECT_THROW(SourceSpec::from_gains(1.0, {}), Error);
  try {
    SourceSpec::from_gains(1.0, std::vector<double>(21, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooManyParticipants);
  }
}

TEST(SourceSpec, FullCovarianceOfGainsModel) {
  const auto spec = SourceSpec::from_gains(2.0, {0.5, 1.0});
  const Eigen::MatrixXd c = spec.full_covariance();
  EXPECT_DOUBLE_EQ(c(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(c(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(c(1, 1), 1.5);
  EXPECT_DOUBLE_EQ(c(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(c(2, 2), 3.0);
}

TEST(MutualInformationSource, IndependentObservationIsZero) {
  const auto spec = SourceSpec::from_gains(2.0, {0.0, 1.0});
  EXPECT_EQ(gshare::mutual_information_source(spec, Subset{1}), 0.0);
}

TEST(MutualInformationSource, ThreeParticipantExample) {
  const auto spec = SourceSpec::from_gains(2.0, {0.5, 1.0, 0.8});
  EXPECT_NEAR(gshare::mutual_information_source(spec, Subset{1, 2}), 0.5 * std::log2(3.5), 1e-15);
  EXPECT_NEAR(gshare::mutual_information_source(spec, Subset{1, 2}), 0.903677, 1e-6);
}

TEST(MutualInformationSource, UnitGainCovarianceIsHalfBit) {
  Eigen::MatrixXd c(2, 2);
  c << 1, 1, 1, 2;
  EXPECT_NEAR(gshare::mutual_information_source(SourceSpec::from_covariance(c), Subset{1}), 0.5, 1e-15);
}

TEST(MutualInformationSource, CovarianceModeCrossCheckPasses) {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 100; ++rep) {
    const auto spec = SourceSpec::from_covariance(random_spd(6, rng));
    for (std::uint32_t m = 1; m < 32; ++m) EXPECT_NO_THROW(gshare::mutual_information_source(spec, Subset(m)));
  }
}

TEST(WeinsteinAronszajn, RankOneDeterminantIdentity) {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 8);
  std::uniform_real_distribution<double> var(0.01, 10.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const int q = dim(rng);
    Eigen::VectorXd a(q);
    for (int i = 0; i < q; ++i) a(i) = g(rng);
    const double s2 = var(rng);
    const Eigen::MatrixXd m = s2 * a * a.transpose() + Eigen::MatrixXd::Identity(q, q);
    const double rhs = a.squaredNorm() * s2 + 1.0;
    EXPECT_NEAR(m.determinant(), rhs, 1e-10 * rhs);
  }
}

TEST(Cholesky, RejectsSmallPivotRelativeToDiagonal) {
  Eigen::MatrixXd a(2, 2);
  a << 1e6, 1e6 * (1 - 1e-20), 1e6 * (1 - 1e-20), 1e6;
  EXPECT_THROW(gshare::cholesky_lower(a), Error);
  Eigen::MatrixXd b(2, 2);
  b << 4, 2, 2, 3;
  const Eigen::MatrixXd l = gshare::cholesky_lower(b);
  EXPECT_NEAR((l * l.transpose() - b).cwiseAbs().maxCoeff(), 0.0, 1e-14);
  EXPECT_EQ(l(0, 1), 0.0);
}
