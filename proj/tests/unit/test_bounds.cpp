#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gshare/bounds.hpp"
#include "support/oracles.hpp"

using gshare::AuthorizedSetTerms;
using gshare::DiscreteModel;
using gshare::ErrorBoundInputs;
using gshare::JointPmf;
using gshare::RateBoundInputs;
using gshare::Subset;
using gshare::UnauthorizedSetTerms;

using gshare_test::reference_delta;
using gshare_test::reference_rs_lower;
using gshare_test::random_error_inputs;
using gshare_test::random_rate_inputs;

namespace {

// p(v, x, y1, y2) with V = X uniform binary and Y_i = X through a binary
// symmetric channel with crossover c_i.
DiscreteModel binary_symmetric(double c1, double c2) {
  std::vector<double> probs(16, 0.0);
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y1 = 0; y1 < 2; ++y1) {
      for (std::size_t y2 = 0; y2 < 2; ++y2) {
        probs[((x * 2 + x) * 2 + y1) * 2 + y2] = 0.5 * (y1 == x ? 1 - c1 : c1) * (y2 == x ? 1 - c2 : c2);
      }
    }
  }
  return DiscreteModel::from_pmf(JointPmf({2, 2, 2, 2}, probs));
}

double bsc_capacity(double c) { return 1 + c * std::log2(c) + (1 - c) * std::log2(1 - c); }

}  // namespace

TEST(ErrorBound, MatchesReferenceOnRandomParameters) {
  std::mt19937_64 rng(71);
  for (int rep = 0; rep < 20; ++rep) {
    const auto in = random_error_inputs(rng);
    const std::size_t n = 1 + rng() % 2000;
    const double eps = std::uniform_real_distribution<double>(0.01, 0.9)(rng);
    const auto b = gshare::error_bound(n, eps, in);
    double worst = 0.0;
    for (std::size_t s = 0; s < in.sets.size(); ++s) {
      const auto& t = in.sets[s];
      const double d = reference_delta(static_cast<double>(n), eps, static_cast<double>(in.x_size),
                                       static_cast<double>(in.v_size), in.h_v, in.mu_vx, t.y_size, t.mu_xy, t.mu_vxy);
      if (std::isinf(d)) {
        EXPECT_EQ(b.per_set[s].delta, d);
      } else {
        EXPECT_NEAR(b.per_set[s].delta, d, 1e-12 * std::max(1.0, d));
      }
      worst = std::max(worst, d);
    }
    const double expected = static_cast<double>(in.sets.size()) * worst;
    if (std::isinf(expected)) {
      EXPECT_EQ(b.value, expected);
    } else {
      EXPECT_NEAR(b.value, expected, 1e-12 * std::max(1.0, expected));
    }
    EXPECT_EQ(b.vacuous, b.value >= 1.0);
    EXPECT_EQ(b.clamped, std::min(1.0, b.value));
  }
}

TEST(ErrorBound, BinaryFiftyExample) {
  ErrorBoundInputs in;
  in.x_size = 2;
  in.v_size = 2;
  in.h_v = 1.0;
  in.mu_vx = 0.25;
  in.sets.push_back({Subset{1}, 2.0, 0.25, 0.25});
  const auto b = gshare::error_bound(50, 0.1, in);
  const double d = reference_delta(50, 0.1, 2, 2, 1.0, 0.25, 2, 0.25, 0.25);
  EXPECT_NEAR(b.value, d, 1e-12 * d);
  const auto& t = b.per_set[0];
  EXPECT_NEAR(t.source_atypical + t.wrong_index + t.no_codeword + t.markov, t.delta, 1e-15 * t.delta);
}

TEST(ErrorBound, SingleLetterIsVacuous) {
  ErrorBoundInputs in;
  in.h_v = 1.0;
  in.mu_vx = 0.25;
  in.sets.push_back({Subset{1}, 2.0, 0.25, 0.25});
  const auto b = gshare::error_bound(1, 0.9, in);
  EXPECT_TRUE(b.vacuous);
  EXPECT_EQ(b.clamped, 1.0);
  EXPECT_GE(b.value, 1.0);
}

TEST(ErrorBound, DecaysForLongBlocks) {
  ErrorBoundInputs in;
  in.h_v = 1.0;
  in.mu_vx = 0.25;
  in.sets.push_back({Subset{1}, 2.0, 0.25, 0.25});
  double prev = INFINITY;
  bool seen_useful = false;
  for (std::size_t n = 1000; n <= 200000; n += 1000) {
    const double v = gshare::error_bound(n, 0.5, in).value;
    if (v < 1.0) seen_useful = true;
    if (seen_useful) {
      EXPECT_LE(v, prev);
    }
    prev = v;
  }
  EXPECT_TRUE(seen_useful);
  EXPECT_LT(prev, 1e-6);
}

TEST(ErrorBound, DomainErrors) {
  ErrorBoundInputs in;
  in.sets.push_back({Subset{1}, 2.0, 0.25, 0.25});
  for (double bad : {0.0, -0.1, 1.5}) {
    auto copy = in;
    copy.mu_vx = bad;
    try {
      gshare::error_bound(10, 0.1, copy);
      FAIL();
    } catch (const gshare::Error& e) {
      EXPECT_EQ(e.code(), gshare::ErrorCode::DomainError);
    }
    copy = in;
    copy.sets[0].mu_vxy = bad;
    EXPECT_THROW(gshare::error_bound(10, 0.1, copy), gshare::Error);
  }
  EXPECT_THROW(gshare::error_bound(0, 0.1, in), gshare::Error);
  EXPECT_THROW(gshare::error_bound(10, 1.0, in), gshare::Error);
}

TEST(ErrorBound, InputsFromModel) {
  const auto m = binary_symmetric(0.1, 0.3);
  const auto in = gshare::error_bound_inputs(m, gshare::monotone_closure(2, {Subset{1}}));
  EXPECT_EQ(in.sets.size(), 2u);
  EXPECT_NEAR(in.h_v, 1.0, 1e-12);
  // p_{VX} lives on the diagonal; the minimum runs over the support.
  EXPECT_NEAR(in.mu_vx, 0.5, 1e-15);
  for (const auto& t : in.sets) {
    EXPECT_GT(t.mu_xy, 0.0);
    EXPECT_LE(t.mu_vxy, t.mu_xy);
  }
  EXPECT_NO_THROW(gshare::error_bound(10, 0.1, in));
}

TEST(RateBound, MatchesReferenceOnRandomParameters) {
  std::mt19937_64 rng(72);
  for (int rep = 0; rep < 20; ++rep) {
    const auto in = random_rate_inputs(rng);
    const std::size_t n = 1 + rng() % 3;
    const std::size_t q = 1000 + rng() % 10000000;
    const double eps = std::uniform_real_distribution<double>(0.01, 0.5)(rng);
    const auto r = gshare::achievable_rate_bound(in, n, q, eps);
    const double expected = reference_rs_lower(in, static_cast<double>(n), static_cast<double>(q), eps);
    if (std::isinf(expected)) {
      EXPECT_EQ(r.rs_lower, expected);
    } else {
      EXPECT_NEAR(r.rs_lower, expected, 1e-12 * std::max(1.0, std::abs(expected)));
    }
    double rp = in.i_x_v_given_y_authorized[0];
    for (double v : in.i_x_v_given_y_authorized) rp = std::max(rp, v);
    EXPECT_NEAR(r.rp_upper, rp + 6 * eps * in.h_v, 1e-12);
  }
}

TEST(RateBound, FiniteCaseHasFinitePenalty) {
  RateBoundInputs in;
  in.h_v = 1.0;
  in.mu_xv = 0.25;
  in.i_v_y_authorized = {0.6};
  in.i_x_v_given_y_authorized = {0.4};
  UnauthorizedSetTerms u;
  u.support_vy = 2;
  u.mu_vy = 0.5;
  in.unauthorized = {u};
  const auto r = gshare::achievable_rate_bound(in, 1, 1000000, 0.1);
  EXPECT_TRUE(std::isfinite(r.rs_lower));
  EXPECT_NEAR(r.rs_lower, reference_rs_lower(in, 1, 1000000, 0.1), 1e-12);
  EXPECT_LT(r.rs_lower, r.rs_asymptotic);
}

TEST(RateBound, AsymptoticFlagIsExact) {
  const auto m = binary_symmetric(0.1, 0.3);
  const auto a = gshare::monotone_closure(2, {Subset{1}});
  const auto r = gshare::achievable_rate_bound(m, a, 1, 1, 0.5, true);
  const double i1 = gshare::mutual_information(m.pmf(), {DiscreteModel::kV}, {DiscreteModel::y_var(1)});
  const double i2 = gshare::mutual_information(m.pmf(), {DiscreteModel::kV}, {DiscreteModel::y_var(2)});
  const double i12 = gshare::mutual_information(m.pmf(), {DiscreteModel::kV}, DiscreteModel::y_vars(Subset{1, 2}));
  EXPECT_EQ(r.rs_lower, std::min(i1, i12) - std::max(0.0, i2));
  EXPECT_TRUE(r.asymptotic);
  EXPECT_NEAR(r.rs_lower, bsc_capacity(0.1) - bsc_capacity(0.3), 1e-12);
}

TEST(RateBound, BinarySymmetricBelowAsymptote) {
  const auto m = binary_symmetric(0.1, 0.3);
  const auto a = gshare::monotone_closure(2, {Subset{1}});
  const auto asym = gshare::achievable_rate_bound(m, a, 32, 32, 0.05, true);
  const auto fin = gshare::achievable_rate_bound(m, a, 32, 32, 0.05);
  EXPECT_LT(fin.rs_lower, asym.rs_lower);
  EXPECT_GT(fin.rp_upper, asym.rp_upper);
}

TEST(RateBound, OnlyEmptyUnauthorized) {
  const auto m = binary_symmetric(0.1, 0.3);
  const auto a = gshare::threshold_structure(2, 1);
  const auto in = gshare::rate_bound_inputs(m, a);
  ASSERT_EQ(in.unauthorized.size(), 1u);
  EXPECT_EQ(in.unauthorized[0].i_v_y, 0.0);
  const auto r = gshare::achievable_rate_bound(in, 4, 4, 0.1, true);
  EXPECT_NEAR(r.rs_lower, bsc_capacity(0.3), 1e-12);
}

TEST(RateBound, DomainErrors) {
  const auto m = binary_symmetric(0.1, 0.3);
  const auto a = gshare::monotone_closure(2, {Subset{1}});
  EXPECT_THROW(gshare::achievable_rate_bound(m, a, 0, 1, 0.1), gshare::Error);
  EXPECT_THROW(gshare::achievable_rate_bound(m, a, 1, 1, 0.0), gshare::Error);
}
