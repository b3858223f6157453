#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gshare/access_structure.hpp"

using gshare::AccessStructure;
using gshare::Error;
using gshare::ErrorCode;
using gshare::SourceSpec;
using gshare::Subset;

namespace {

std::vector<Subset> sorted(std::vector<Subset> v) {
  std::sort(v.begin(), v.end());
  return v;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an exception";
  return ErrorCode::InvalidInput;
}

AccessStructure random_structure(int l, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(1, (1u << l) - 1);
  std::uniform_int_distribution<int> count(1, 4);
  std::vector<Subset> gens;
  const int c = count(rng);
  for (int i = 0; i < c; ++i) gens.emplace_back(pick(rng));
  return gshare::monotone_closure(l, gens);
}

}  // namespace

TEST(MonotoneClosure, ThreeParticipantExample) {
  const auto a = gshare::monotone_closure(3, {Subset{1, 2}, Subset{2, 3}});
  EXPECT_EQ(a.authorized(), sorted({Subset{1, 2}, Subset{2, 3}, Subset{1, 2, 3}}));
  EXPECT_EQ(a.unauthorized(), sorted({Subset{}, Subset{1}, Subset{2}, Subset{3}, Subset{1, 3}}));
  EXPECT_EQ(a.minimal_sets(), sorted({Subset{1, 2}, Subset{2, 3}}));
}

TEST(MonotoneClosure, SingletonGenerator) {
  const auto a = gshare::monotone_closure(2, {Subset{1}});
  EXPECT_EQ(a.authorized(), sorted({Subset{1}, Subset{1, 2}}));
}

TEST(MonotoneClosure, AntichainReduction) {
  const auto a = gshare::monotone_closure(4, {Subset{1, 2}, Subset{1, 2, 3}});
  EXPECT_EQ(a.minimal_sets(), std::vector<Subset>{Subset({1, 2})});
}

TEST(MonotoneClosure, Errors) {
  EXPECT_EQ(code_of([] { gshare::monotone_closure(21, {Subset{1}}); }), ErrorCode::TooManyParticipants);
  EXPECT_EQ(code_of([] { gshare::monotone_closure(3, {}); }), ErrorCode::EmptyGenerator);
  EXPECT_EQ(code_of([] { gshare::monotone_closure(3, {Subset{}}); }), ErrorCode::EmptyGenerator);
  EXPECT_EQ(code_of([] { gshare::monotone_closure(3, {Subset{4}}); }), ErrorCode::IndexOutOfRange);
}

TEST(MonotoneClosure, IdempotentAndPartitions) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 200; ++rep) {
    const int l = 1 + static_cast<int>(rng() % 6);
    const AccessStructure a = random_structure(l, rng);
    EXPECT_EQ(gshare::monotone_closure(l, a.authorized()), a);
    EXPECT_EQ(gshare::monotone_closure(l, a.minimal_sets()), a);
    EXPECT_EQ(a.authorized().size() + a.unauthorized().size(), std::size_t{1} << l);
    for (std::uint32_t m = 0; m < (1u << l); ++m) {
      const Subset s(m);
      const bool in_a = std::find(a.authorized().begin(), a.authorized().end(), s) != a.authorized().end();
      const bool in_u = std::find(a.unauthorized().begin(), a.unauthorized().end(), s) != a.unauthorized().end();
      EXPECT_NE(in_a, in_u);
      EXPECT_EQ(a.is_authorized(s), in_a);
      // Monotone: every superset of an authorized set is authorized.
      if (in_a) {
        for (std::uint32_t t = m; t < (1u << l); t = (t + 1) | m) EXPECT_TRUE(a.is_authorized(Subset(t)));
      }
    }
    // Antichain.
    for (Subset x : a.minimal_sets()) {
      for (Subset y : a.minimal_sets()) {
        if (x != y) {
          EXPECT_FALSE(x.includes(y));
        }
      }
    }
  }
}

TEST(ThresholdStructure, Unanimity) {
  EXPECT_EQ(gshare::threshold_structure(3, 3).authorized(), std::vector<Subset>{Subset({1, 2, 3})});
}

TEST(ThresholdStructure, AnySingleParticipant) {
  EXPECT_EQ(gshare::threshold_structure(3, 1).unauthorized(), std::vector<Subset>{Subset{}});
}

TEST(ThresholdStructure, FourOfFiveCount) {
  EXPECT_EQ(gshare::threshold_structure(5, 4).authorized().size(), 6u);
}

TEST(ThresholdStructure, OutOfRange) {
  EXPECT_EQ(code_of([] { gshare::threshold_structure(3, 0); }), ErrorCode::ThresholdOutOfRange);
  EXPECT_EQ(code_of([] { gshare::threshold_structure(3, 4); }), ErrorCode::ThresholdOutOfRange);
}

TEST(ExtremalSets, ThreeParticipantExample) {
  const auto spec = SourceSpec::from_gains(2.0, {0.5, 1.0, 0.8});
  const auto e = gshare::extremal_sets(gshare::monotone_closure(3, {Subset{1, 2}, Subset{2, 3}}), spec);
  EXPECT_EQ(e.a_star, Subset({1, 2}));
  EXPECT_EQ(e.u_star, Subset({2}));
  EXPECT_DOUBLE_EQ(e.o_a_star, 1.25);
  EXPECT_DOUBLE_EQ(e.o_u_star, 1.0);
}

TEST(ExtremalSets, OnlyEmptyUnauthorized) {
  const auto spec = SourceSpec::from_gains(1.0, {0.3, 0.7});
  const auto e = gshare::extremal_sets(gshare::threshold_structure(2, 1), spec);
  EXPECT_EQ(e.u_star, Subset{});
  EXPECT_EQ(e.o_u_star, 0.0);
}

TEST(ExtremalSets, FiveParticipantThresholdFour) {
  const auto spec = SourceSpec::from_gains(2.0, {1.0, 0.85, 0.9, 0.95, 0.75});
  const auto e = gshare::extremal_sets(gshare::threshold_structure(5, 4), spec);
  EXPECT_NEAR(e.o_a_star, 2.9975, 1e-12);
  EXPECT_NEAR(e.o_u_star, 2.7125, 1e-12);
}

TEST(ExtremalSets, TiesBreakBySizeThenLexicographic) {
  const auto spec = SourceSpec::from_gains(1.0, {1.0, 1.0, 1.0});
  const auto e = gshare::extremal_sets(gshare::threshold_structure(3, 2), spec);
  EXPECT_EQ(e.a_star, Subset({1, 2}));
  EXPECT_EQ(e.u_star, Subset({1}));
  const auto z = gshare::extremal_sets(gshare::monotone_closure(3, {Subset{3}}),
                                       SourceSpec::from_gains(1.0, {0.0, 0.0, 1.0}));
  EXPECT_EQ(z.u_star, Subset{});
}

TEST(ThresholdStarChain, FiveParticipantExample) {
  const auto spec = SourceSpec::from_gains(2.0, {1.0, 0.85, 0.9, 0.95, 0.75});
  const auto chain = gshare::threshold_star_chain(spec);
  ASSERT_EQ(chain.size(), 5u);
  const auto a3 = gshare::derive_gain_vector(spec, chain[2].a_star).h;
  std::vector<double> ga(a3.data(), a3.data() + a3.size());
  std::sort(ga.begin(), ga.end());
  EXPECT_EQ(ga, (std::vector<double>{0.75, 0.85, 0.9}));
  const auto u3 = gshare::derive_gain_vector(spec, chain[2].u_star).h;
  std::vector<double> gu(u3.data(), u3.data() + u3.size());
  std::sort(gu.begin(), gu.end(), std::greater<>());
  EXPECT_EQ(gu, (std::vector<double>{1.0, 0.95}));
  EXPECT_NEAR(chain[3].o_a_star, 2.9975, 1e-12);
  EXPECT_NEAR(chain[3].o_u_star, 2.7125, 1e-12);
  EXPECT_NEAR(chain[4].o_a_star, 3.9975, 1e-12);
  EXPECT_NEAR(chain[4].o_u_star, 3.4350, 1e-12);
}

TEST(ThresholdStarChain, FirstLevelHasEmptyUnauthorized) {
  const auto chain = gshare::threshold_star_chain(SourceSpec::from_gains(1.0, {0.4, 0.2, 0.9}));
  EXPECT_EQ(chain[0].u_star, Subset{});
  EXPECT_EQ(chain[0].o_u_star, 0.0);
}

TEST(ThresholdStarChain, NestedAndMatchesBruteForce) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int rep = 0; rep < 100; ++rep) {
    const int l = 1 + static_cast<int>(rng() % 7);
    std::vector<double> h(static_cast<std::size_t>(l));
    for (double& x : h) x = u(rng);
    const auto spec = SourceSpec::from_gains(0.5 + std::abs(u(rng)), h);
    const auto chain = gshare::threshold_star_chain(spec);
    for (int t = 1; t <= l; ++t) {
      const auto& c = chain[static_cast<std::size_t>(t - 1)];
      EXPECT_EQ(c.a_star.size(), t);
      EXPECT_EQ(c.u_star.size(), t - 1);
      if (t < l) {
        EXPECT_TRUE(chain[static_cast<std::size_t>(t)].a_star.includes(c.a_star));
        EXPECT_TRUE(chain[static_cast<std::size_t>(t)].u_star.includes(c.u_star));
      }
      // Brute force over all subsets of each size class.
      double min_a = INFINITY;
      double max_u = -INFINITY;
      for (std::uint32_t m = 0; m < (1u << l); ++m) {
        const Subset s(m);
        double o = 0.0;
        for (int p : s.members()) o += h[static_cast<std::size_t>(p - 1)] * h[static_cast<std::size_t>(p - 1)];
        if (s.size() >= t) min_a = std::min(min_a, o);
        if (s.size() < t) max_u = std::max(max_u, o);
      }
      EXPECT_NEAR(c.o_a_star, min_a, 1e-12);
      EXPECT_NEAR(c.o_u_star, max_u, 1e-12);
      const auto e = gshare::extremal_sets(gshare::threshold_structure(l, t), spec);
      EXPECT_NEAR(c.o_a_star, e.o_a_star, 1e-12);
      EXPECT_NEAR(c.o_u_star, e.o_u_star, 1e-12);
    }
  }
}

TEST(ThresholdStarChain, RequiresGains) {
  Eigen::MatrixXd c(2, 2);
  c << 1, 1, 1, 2;
  EXPECT_THROW(gshare::threshold_star_chain(SourceSpec::from_covariance(c)), Error);
}

TEST(SubsetOrder, CardinalityThenLexicographic) {
  EXPECT_LT(Subset({3}), Subset({1, 2}));
  EXPECT_LT(Subset({1, 3}), Subset({2, 3}));
  EXPECT_LT(Subset({1, 2}), Subset({1, 3}));
  EXPECT_LT(Subset{}, Subset({1}));
  EXPECT_EQ(Subset({2, 1}).to_string(), "{1,2}");
}
