#include "capstan/mechanics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace capstan;

namespace {

constexpr double kPi = std::numbers::pi;

// Values below were computed with 30-digit arithmetic (mpmath), independently of this library.
constexpr double kExp06Pi = 6.58606196269472439893671831769;
constexpr double kExp062Pi = 7.01315341575804067171818167859;
constexpr double kHundredOverExp06Pi = 15.1835801980648897474177621479;

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(AmplificationFactor, FrictionlessIsIdentity) {
  EXPECT_EQ(amplification_factor(Wrapd{0.0, 6.283}), 1.0);
  EXPECT_EQ(amplification_factor(Wrapd{0.7, 0.0}), 1.0);
}

TEST(AmplificationFactor, MatchesHighPrecisionExponential) {
  EXPECT_NEAR(amplification_factor(Wrapd{0.3, 2 * kPi}), kExp06Pi, 1e-12);
}

TEST(AmplificationFactor, PeakTwoRockValue) {
  const double mu = std::log(774.0) / (4 * kPi);
  EXPECT_NEAR(amplification_factor(Wrapd{mu, 4 * kPi}), 774.0, 1e-9);
}

TEST(AmplificationFactor, RejectsNegativeInputs) {
  EXPECT_THROW(amplification_factor(Wrapd{-0.1, 1.0}), DomainError);
  EXPECT_THROW(amplification_factor(Wrapd{0.1, -1.0}), DomainError);
  EXPECT_THROW(amplification_factor(Wrapd{std::nan(""), 1.0}), DomainError);
}

TEST(AmplificationFactor, WorksForLongDouble) {
  const Wrap<long double> w{0.3L, 2.0L * std::numbers::pi_v<long double>};
  EXPECT_NEAR(static_cast<double>(amplification_factor(w)), kExp06Pi, 1e-15);
}

TEST(SerialAmplification, EmptyChainIsOne) {
  EXPECT_EQ(serial_amplification(std::vector<Wrapd>{}), 1.0);
}

TEST(SerialAmplification, SplitWrapEqualsSingleWrapExactly) {
  const std::vector<Wrapd> split{{0.6, kPi}, {0.6, kPi}};
  EXPECT_EQ(serial_amplification(split), amplification_factor(Wrapd{0.6, 2 * kPi}));
}

TEST(SerialAmplification, MixedMaterials) {
  const std::vector<Wrapd> chain{{0.5, kPi}, {0.24, kPi / 2}};
  EXPECT_NEAR(serial_amplification(chain), kExp062Pi, 1e-12);
}

TEST(SerialAmplification, RejectsInvalidWrap) {
  const std::vector<Wrapd> chain{{0.5, kPi}, {-0.24, kPi / 2}};
  EXPECT_THROW(serial_amplification(chain), DomainError);
}

TEST(SerialAmplification, OrderInvariantBitForBit) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mu(0.0, 0.9);
  std::uniform_real_distribution<double> theta(0.0, 4 * kPi);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Wrapd> chain(5);
    for (auto& w : chain) w = {mu(rng), theta(rng)};
    const double ref = serial_amplification(chain);
    std::sort(chain.begin(), chain.end(), [](auto& a, auto& b) { return a.mu < b.mu; });
    do {
      ASSERT_EQ(serial_amplification(chain), ref);
    } while (std::next_permutation(chain.begin(), chain.end(), [](auto& a, auto& b) { return a.mu < b.mu; }));
  }
}

TEST(HoldingRequirement, Examples) {
  EXPECT_NEAR(holding_requirement(100.0, std::vector<Wrapd>{{0.3, 2 * kPi}}), kHundredOverExp06Pi, 1e-12);
  EXPECT_EQ(holding_requirement(42.0, std::vector<Wrapd>{}), 42.0);
  const double mu = std::log(774.0) / (4 * kPi);
  EXPECT_NEAR(holding_requirement(774.0, std::vector<Wrapd>{{mu, 2 * kPi}, {mu, 2 * kPi}}), 1.0, 1e-12);
}

TEST(HoldingRequirement, NeverExceedsLoad) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double load = 1000.0 * u(rng);
    const std::vector<Wrapd> chain{{u(rng), 10 * u(rng)}, {u(rng), 10 * u(rng)}};
    EXPECT_LE(holding_requirement(load, chain), load);
  }
  EXPECT_THROW(holding_requirement(-1.0, std::vector<Wrapd>{}), DomainError);
}

TEST(ParallelNetTension, SingleUnamplifiedBranch) {
  const std::vector<TensionBranchd> b{{1.0, {0.0, 0.0}, Vec2(1, 0)}};
  const Vec2 net = parallel_net_tension(b);
  EXPECT_DOUBLE_EQ(net.x(), 1.0);
  EXPECT_DOUBLE_EQ(net.y(), 0.0);
}

TEST(ParallelNetTension, SymmetricPairAt45Degrees) {
  const double c = std::cos(kPi / 4);
  const double s = std::sin(kPi / 4);
  const std::vector<TensionBranchd> b{{1.0, {1.0, std::log(10.0)}, Vec2(c, s)},
                                      {1.0, {1.0, std::log(10.0)}, Vec2(c, -s)}};
  const Vec2 net = parallel_net_tension(b);
  EXPECT_NEAR(net.x(), 14.1421356237309504880, 1e-12);
  EXPECT_NEAR(net.y(), 0.0, 1e-12);
}

TEST(ParallelNetTension, OpposingBranchesCancel) {
  const std::vector<TensionBranchd> b{{3.0, {0.4, 2.0}, Vec2(1, 0)}, {3.0, {0.4, 2.0}, Vec2(-1, 0)}};
  EXPECT_EQ(parallel_net_tension(b), Vec2::Zero());
}

TEST(ParallelNetTension, LinearInHoldingForce) {
  const Vec2 dir = Vec2(3, 4).normalized();
  const std::vector<TensionBranchd> one{{2.0, {0.3, 1.5}, dir}};
  const std::vector<TensionBranchd> five{{10.0, {0.3, 1.5}, dir}};
  EXPECT_LT((parallel_net_tension(five) - 5.0 * parallel_net_tension(one)).norm(), 1e-12);
}

TEST(ParallelNetTension, RejectsNonUnitDirection) {
  const std::vector<TensionBranchd> b{{1.0, {0.0, 0.0}, Vec2(1.1, 0)}};
  EXPECT_THROW(parallel_net_tension(b), DomainError);
}

TEST(Sensitivity, VanishesAtOrigin) {
  const auto s = sensitivity(Wrapd{0.0, 0.0});
  EXPECT_EQ(s.d_mu, 0.0);
  EXPECT_EQ(s.d_theta, 0.0);
}

TEST(Sensitivity, TenfoldAmplification) {
  const auto s = sensitivity(Wrapd{0.3, std::log(10.0) / 0.3});
  EXPECT_NEAR(s.d_mu, 76.7528364331348589743585889346, 1e-10);
  EXPECT_NEAR(s.d_theta, 3.0, 1e-12);
}

TEST(Sensitivity, MatchesCentralDifferences) {
  const double h = 1e-6;
  for (double mu = 0.05; mu <= 0.8; mu += 0.05) {
    for (double theta = 0.1; theta <= 8 * kPi; theta += 0.7) {
      const auto s = sensitivity(Wrapd{mu, theta});
      const double fd_mu = (std::exp((mu + h) * theta) - std::exp((mu - h) * theta)) / (2 * h);
      const double fd_theta = (std::exp(mu * (theta + h)) - std::exp(mu * (theta - h))) / (2 * h);
      EXPECT_LT(rel_err(s.d_mu, fd_mu), 1e-6) << mu << " " << theta;
      EXPECT_LT(rel_err(s.d_theta, fd_theta), 1e-6) << mu << " " << theta;
    }
  }
}

TEST(Monotonicity, IncreasingInBothArguments) {
  for (double mu = 0.05; mu < 1.0; mu += 0.1) {
    for (double theta = 0.1; theta < 20.0; theta += 0.9) {
      const double a = amplification_factor(Wrapd{mu, theta});
      EXPECT_GT(amplification_factor(Wrapd{mu + 0.01, theta}), a);
      EXPECT_GT(amplification_factor(Wrapd{mu, theta + 0.01}), a);
    }
  }
}

TEST(CapstanReaction, HalfWrap) {
  const Vec2 r = capstan_reaction(ReactionInputd{5.0, 5.0, Vec2(1, 0), Vec2(1, 0)});
  EXPECT_DOUBLE_EQ(r.x(), 10.0);
  EXPECT_DOUBLE_EQ(r.y(), 0.0);
}

TEST(CapstanReaction, QuarterWrap) {
  const Vec2 r = capstan_reaction(ReactionInputd{1.0, 1.0, Vec2(1, 0), Vec2(0, 1)});
  EXPECT_DOUBLE_EQ(r.x(), 1.0);
  EXPECT_DOUBLE_EQ(r.y(), 1.0);
  EXPECT_NEAR(r.norm(), 2.0 * std::sin(kPi / 4), 1e-15);
}

TEST(CapstanReaction, CollinearDifference) {
  const Vec2 r = capstan_reaction(ReactionInputd{1.0, 2.0, Vec2(-1, 0), Vec2(1, 0)});
  EXPECT_DOUBLE_EQ(r.x(), 1.0);
  EXPECT_DOUBLE_EQ(r.y(), 0.0);
}

TEST(CapstanReaction, BoundedAndMatchesChordFormula) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  std::uniform_real_distribution<double> ten(0.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    // Tether contacting a disk over [a, a + wrap]; the free ends leave along the tangents.
    const double a = ang(rng);
    const double wrap = ang(rng);
    const Vec2 hold_dir(std::sin(a), -std::cos(a));
    const Vec2 load_dir(-std::sin(a + wrap), std::cos(a + wrap));
    const double t1 = ten(rng);
    const double t2 = ten(rng);
    EXPECT_LE(capstan_reaction(ReactionInputd{t1, t2, hold_dir, load_dir}).norm(), t1 + t2 + 1e-12);
    const Vec2 eq = capstan_reaction(ReactionInputd{t1, t1, hold_dir, load_dir});
    EXPECT_NEAR(eq.norm(), 2.0 * t1 * std::abs(std::sin(wrap / 2)), 1e-9);
  }
}

TEST(CapstanReaction, RejectsBadInput) {
  EXPECT_THROW(capstan_reaction(ReactionInputd{-1.0, 1.0, Vec2(1, 0), Vec2(1, 0)}), DomainError);
  EXPECT_THROW(capstan_reaction(ReactionInputd{1.0, 1.0, Vec2(2, 0), Vec2(1, 0)}), DomainError);
}
