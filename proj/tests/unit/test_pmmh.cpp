#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/inverse_gamma.hpp>
#include <gtest/gtest.h>

#include "alive/errors.hpp"
#include "alive/models/linear_gaussian.hpp"
#include "alive/pmmh.hpp"
#include "stats.hpp"

namespace alive {
namespace {

// Estimator returning a fixed log value per theta[0]; never touches a filter.
LikelihoodEstimator exact_estimator(std::function<double(double)> log_value) {
  return [log_value](const Theta& th, std::uint64_t) {
    return LikelihoodDraw{log_value(th[0]), {}, 1};
  };
}

LikelihoodEstimator capped_estimator() {
  return [](const Theta&, std::uint64_t) -> LikelihoodDraw { throw CapExceeded(1, 10); };
}

ModelFamily lg_family(std::vector<double> y, double eps) {
  return [y, eps](const Theta& th) { return make_lg_model({th[0], 1.0, 2.0, 0.0}, y, eps); };
}

TEST(LogPrior, InverseGammaModeAtScaleOverShapePlusOne) {
  PriorSpec pr{{InverseGammaPrior{2.0, 1.0 / 100.0}}};
  const double mode = (1.0 / 100.0) / 3.0;
  const double at_mode = log_prior_density({mode}, pr);
  for (double f : {0.5, 0.9, 0.99, 1.01, 1.1, 2.0}) EXPECT_LT(log_prior_density({mode * f}, pr), at_mode);
}

TEST(LogPrior, NormalAtMean) {
  PriorSpec pr{{NormalPrior{0.0, 10.0}}};
  EXPECT_NEAR(log_prior_density({0.0}, pr), -0.5 * std::log(2.0 * std::numbers::pi * 10.0), 1e-15);
}

TEST(LogPrior, OutsideSupport) {
  PriorSpec pr{{InverseGammaPrior{2.0, 0.02}}};
  EXPECT_EQ(log_prior_density({-0.1}, pr), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(log_prior_density({0.0}, pr), -std::numeric_limits<double>::infinity());
  PriorSpec grid{{DiscreteUniformPrior{{1.0, 2.0}}}};
  EXPECT_EQ(log_prior_density({1.5}, grid), -std::numeric_limits<double>::infinity());
  EXPECT_DOUBLE_EQ(log_prior_density({2.0}, grid), -std::log(2.0));
  EXPECT_THROW(log_prior_density({1.0, 2.0}, grid), std::invalid_argument);
}

TEST(PriorSpec, Validation) {
  EXPECT_THROW((PriorSpec{{NormalPrior{0.0, 0.0}}}).validate(), std::invalid_argument);
  EXPECT_THROW((PriorSpec{{InverseGammaPrior{0.0, 1.0}}}).validate(), std::invalid_argument);
  EXPECT_THROW((PriorSpec{{DiscreteUniformPrior{}}}).validate(), std::invalid_argument);
  EXPECT_THROW(PriorSpec{}.validate(), std::invalid_argument);
}

TEST(Propose, GammaCenteredMoments) {
  const ProposalSpec q{{GammaCentered{0.04}}};
  Rng rng(1);
  std::vector<double> x(200'000);
  for (auto& v : x) v = propose({0.5}, q, rng)[0];
  const auto s = test::summarize(x);
  EXPECT_LT(std::abs(s.mean - 0.5), 3.0 * s.se);
  EXPECT_NEAR(s.variance, 0.04, 0.001);
  EXPECT_THROW(propose({-1.0}, q, rng), std::domain_error);
  EXPECT_EQ(log_proposal_density({0.3}, {-1.0}, q), -std::numeric_limits<double>::infinity());
}

TEST(Propose, RandomWalkDensityIsSymmetric) {
  const ProposalSpec q{{RandomWalkNormal{0.3}}};
  EXPECT_DOUBLE_EQ(log_proposal_density({1.2}, {0.4}, q), log_proposal_density({0.4}, {1.2}, q));
}

TEST(PmmhInit, DegeneratePriorGivesItsPoint) {
  Rng rng(1);
  const auto state = pmmh_init(exact_estimator([](double) { return -1.0; }),
                               PriorSpec{{DiscreteUniformPrior{{2.5}}}}, rng);
  EXPECT_EQ(state.theta, Theta{2.5});
  EXPECT_EQ(state.log_gamma_hat, -1.0);
}

TEST(PmmhInit, InitialDrawsFollowThePrior) {
  const PriorSpec pr{{NormalPrior{1.0, 4.0}, InverseGammaPrior{2.0, 0.02}}};
  const auto est = exact_estimator([](double) { return 0.0; });
  Rng rng(2);
  std::vector<double> a(10'000), b(10'000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto s = pmmh_init(est, pr, rng);
    a[i] = s.theta[0];
    b[i] = s.theta[1];
  }
  const double crit = test::ks_coefficient(1e-3) / std::sqrt(static_cast<double>(a.size()));
  EXPECT_LT(test::ks_one_sample_stat(a, [](double x) { return normal_cdf((x - 1.0) / 2.0); }), crit);
  const boost::math::inverse_gamma_distribution<double> ig(2.0, 0.02);
  EXPECT_LT(test::ks_one_sample_stat(b, [&ig](double x) { return boost::math::cdf(ig, x); }), crit);
}

TEST(PmmhInit, StoredEstimateReplaysFromSeed) {
  const std::vector<double> y{0.5, 1.2, 2.0};
  const auto est = alive_likelihood(lg_family(y, 1.0), 20);
  Rng rng(3);
  const auto state = pmmh_init(est, PriorSpec{{DiscreteUniformPrior{{0.5, 1.0, 2.0}}}}, rng);
  const auto again = est(state.theta, state.filter_seed);
  EXPECT_EQ(again.log_gamma, state.log_gamma_hat);
  ASSERT_EQ(again.trajectory.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(again.trajectory[k].z, state.trajectory[k].z);
}

TEST(PmmhInit, FailsAfterBoundedAttempts) {
  Rng rng(4);
  EXPECT_THROW(pmmh_init(capped_estimator(), PriorSpec{{NormalPrior{0.0, 1.0}}}, rng, 5), InitFailed);
}

TEST(AliveLikelihood, UsesEveryStepFactor) {
  const std::vector<double> y{0.5, 1.2, 2.0, 1.0};
  const auto family = lg_family(y, 1.0);
  const auto est = alive_likelihood(family, 30);
  FilterOptions o;
  o.n_alive = 30;
  o.lean = true;
  const auto run = run_filter(family({0.8}), o, 77);
  const auto draw = est({0.8}, 77);
  EXPECT_EQ(draw.log_gamma, run.log_gamma_through_horizon());
  EXPECT_EQ(draw.trials, run.total_trials());
  for (std::size_t k = 0; k < y.size(); ++k) EXPECT_LT(std::abs(draw.trajectory[k].u - y[k]), 1.0);
}

TEST(PmmhStep, OutsidePriorRejectedWithoutFilterRun) {
  int calls = 0;
  LikelihoodEstimator est = [&calls](const Theta&, std::uint64_t) {
    ++calls;
    return LikelihoodDraw{0.0, {}, 1};
  };
  const PriorSpec pr{{DiscreteUniformPrior{{1.0, 2.0}}}};
  const ProposalSpec q{{UniformGridJump{{5.0}}}};
  Rng rng(5);
  auto state = pmmh_init(est, pr, rng);
  const auto before = state;
  calls = 0;
  const auto out = pmmh_step(state, q, pr, est, rng);
  EXPECT_TRUE(out.outside_prior);
  EXPECT_FALSE(out.accepted);
  EXPECT_EQ(calls, 0);
  EXPECT_EQ(state.theta, before.theta);
  EXPECT_EQ(state.log_gamma_hat, before.log_gamma_hat);
}

TEST(PmmhStep, EqualTargetsAlwaysAccepted) {
  const PriorSpec pr{{DiscreteUniformPrior{{1.0, 2.0, 3.0}}}};
  const ProposalSpec q{{UniformGridJump{{1.0, 2.0, 3.0}}}};
  const auto est = exact_estimator([](double) { return -3.0; });
  Rng rng(6);
  auto state = pmmh_init(est, pr, rng);
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(pmmh_step(state, q, pr, est, rng).accepted);
}

TEST(PmmhStep, CapCountsAsRejection) {
  const PriorSpec pr{{NormalPrior{0.0, 1.0}}};
  const ProposalSpec q{{RandomWalkNormal{0.1}}};
  Rng rng(7);
  auto state = pmmh_init(exact_estimator([](double) { return 0.0; }), pr, rng);
  const auto before = state.theta;
  const auto out = pmmh_step(state, q, pr, capped_estimator(), rng);
  EXPECT_TRUE(out.cap_exceeded);
  EXPECT_FALSE(out.accepted);
  EXPECT_EQ(state.theta, before);
}

TEST(PmmhStep, StoredEstimateUnchangedAcrossRejections) {
  const std::vector<double> y{0.5, 1.2, 2.0};
  const auto est = alive_likelihood(lg_family(y, 1.0), 5);
  const PriorSpec pr{{DiscreteUniformPrior{{0.25, 0.5, 1.0, 2.0, 4.0}}}};
  const ProposalSpec q{{UniformGridJump{{0.25, 0.5, 1.0, 2.0, 4.0}}}};
  Rng rng(8);
  auto state = pmmh_init(est, pr, rng);
  int rejections = 0;
  for (int i = 0; i < 500; ++i) {
    const auto before = state;
    const auto out = pmmh_step(state, q, pr, est, rng);
    if (!out.accepted) {
      ++rejections;
      EXPECT_EQ(state.log_gamma_hat, before.log_gamma_hat);
      EXPECT_EQ(state.filter_seed, before.filter_seed);
      EXPECT_EQ(state.theta, before.theta);
    }
  }
  EXPECT_GT(rejections, 0);
}

TEST(PmmhStep, DetailedBalanceOnTwoPoints) {
  // exact targets 0.3 and 0.7: pi(a) P(a, b) = pi(b) P(b, a)
  const PriorSpec pr{{DiscreteUniformPrior{{0.0, 1.0}}}};
  const ProposalSpec q{{UniformGridJump{{0.0, 1.0}}}};
  const auto est = exact_estimator([](double x) { return std::log(x == 0.0 ? 0.3 : 0.7); });
  Rng rng(9);
  auto state = pmmh_init(est, pr, rng);
  const int steps = 400'000;
  double ab = 0, ba = 0, at_a = 0;
  for (int i = 0; i < steps; ++i) {
    const double from = state.theta[0];
    pmmh_step(state, q, pr, est, rng);
    const double to = state.theta[0];
    if (from == 0.0) ++at_a;
    if (from == 0.0 && to == 1.0) ++ab;
    if (from == 1.0 && to == 0.0) ++ba;
  }
  EXPECT_LE(std::abs(ab - ba), 1.0);  // a two-state path alternates
  const double freq = at_a / steps;
  // proposal moves with prob 1/2; a->b always accepted, b->a with 3/7
  EXPECT_NEAR(ab / steps, 0.3 * 0.5, 0.005);
  EXPECT_NEAR(freq, 0.3, 0.01);
}

TEST(RunChain, SingleIterationTrace) {
  ChainConfig c;
  c.priors = PriorSpec{{NormalPrior{0.0, 1.0}}};
  c.proposals = ProposalSpec{{RandomWalkNormal{0.5}}};
  c.iterations = 1;
  const auto r = run_chain(c, exact_estimator([](double x) { return -x * x; }));
  EXPECT_EQ(r.trace.size(), 2u);
  EXPECT_EQ(r.trace[0].iteration, 0u);
  EXPECT_EQ(r.trace[1].iteration, 1u);
}

TEST(RunChain, SameSeedSameTrace) {
  const std::vector<double> y{0.5, 1.2, 2.0};
  ChainConfig c;
  c.priors = PriorSpec{{DiscreteUniformPrior{{0.5, 1.0, 2.0}}}};
  c.proposals = ProposalSpec{{UniformGridJump{{0.5, 1.0, 2.0}}}};
  c.iterations = 200;
  c.seed = 42;
  const auto est = alive_likelihood(lg_family(y, 1.0), 10);
  const auto a = run_chain(c, est);
  const auto b = run_chain(c, est);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace[i].theta, b.trace[i].theta);
    EXPECT_EQ(a.trace[i].log_gamma_hat, b.trace[i].log_gamma_hat);
    EXPECT_EQ(a.trace[i].trials, b.trace[i].trials);
  }
  EXPECT_EQ(a.total_trials, b.total_trials);
}

TEST(RunChain, BurnInAndThinning) {
  ChainConfig c;
  c.priors = PriorSpec{{NormalPrior{0.0, 1.0}}};
  c.proposals = ProposalSpec{{RandomWalkNormal{0.5}}};
  c.iterations = 100;
  c.burn_in = 20;
  c.thinning = 10;
  const auto r = run_chain(c, exact_estimator([](double x) { return -x * x; }));
  ASSERT_EQ(r.trace.size(), 9u);
  EXPECT_EQ(r.trace[1].iteration, 30u);
  EXPECT_EQ(r.trace.back().iteration, 100u);
  EXPECT_EQ(r.iterations, 100u);
}

TEST(RunChain, RejectsMismatchedSpecs) {
  ChainConfig c;
  c.priors = PriorSpec{{NormalPrior{0.0, 1.0}, NormalPrior{0.0, 1.0}}};
  c.proposals = ProposalSpec{{RandomWalkNormal{0.5}}};
  EXPECT_THROW(run_chain(c, exact_estimator([](double) { return 0.0; })), std::invalid_argument);
  c.proposals.components.push_back(RandomWalkNormal{0.5});
  c.iterations = 0;
  EXPECT_THROW(run_chain(c, exact_estimator([](double) { return 0.0; })), std::invalid_argument);
}

}  // namespace
}  // namespace alive
