#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "alive/errors.hpp"
#include "alive/models/abc_hmm.hpp"
#include "alive/models/linear_gaussian.hpp"
#include "alive/models/returns_csv.hpp"
#include "alive/models/stable.hpp"
#include "alive/models/stochastic_volatility.hpp"
#include "stats.hpp"

namespace alive {
namespace {

AbcHmm<double> fixed_latent_hmm(double epsilon) {
  AbcHmm<double> h;
  h.latent_sampler = [](const double&, double, Rng&) { return 0.0; };
  h.obs_sampler = [](const double& sd, double z, Rng& rng) { return z + sd * rng.normal(); };
  h.epsilon = epsilon;
  h.observations = {0.0, 0.5, -1.0};
  return h;
}

TEST(CompileAbcHmm, InfiniteToleranceAcceptsAll) {
  const auto model = compile_abc_hmm(fixed_latent_hmm(std::numeric_limits<double>::infinity()), 100.0);
  EXPECT_EQ(model.horizon, 3);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto x = model.sample(2, model.initial_point, rng);
    EXPECT_TRUE(model.alive(2, x));
  }
}

TEST(CompileAbcHmm, CentreOfBallIsAlive) {
  const auto tiny = compile_abc_hmm(fixed_latent_hmm(1e-12), 1.0);
  EXPECT_TRUE(tiny.alive(2, AbcState{0.0, 0.5}));
  // distance exactly epsilon is outside the open ball
  const auto model = compile_abc_hmm(fixed_latent_hmm(0.25), 1.0);
  EXPECT_TRUE(model.alive(2, AbcState{0.0, 0.7}));
  EXPECT_FALSE(model.alive(2, AbcState{0.0, 0.75}));
  EXPECT_FALSE(model.alive(2, AbcState{0.0, 0.25}));
}

TEST(CompileAbcHmm, AliveFractionMatchesNormalMass) {
  const auto model = compile_abc_hmm(fixed_latent_hmm(0.7), 1.0);
  const std::size_t probes = 10'000;
  Rng rng(2);
  std::size_t alive = 0;
  for (std::size_t i = 0; i < probes; ++i) alive += model.alive(2, model.sample(2, model.initial_point, rng)) ? 1 : 0;
  const double p = normal_cdf(1.2) - normal_cdf(-0.2);
  const double frac = static_cast<double>(alive) / probes;
  EXPECT_LT(std::abs(frac - p), 3.0 * std::sqrt(p * (1 - p) / probes));
}

TEST(CompileAbcHmm, RecompiledModelsAgree) {
  const auto hmm = make_lg_hmm({1.0, 2.0, 3.0}, 1.5);
  const LinearGaussianParams th{0.7, 1.3, 2.0, 0.0};
  const auto a = compile_abc_hmm(hmm, th);
  const auto b = compile_abc_hmm(hmm, th);
  Rng ra(5), rb(5);
  AbcState xa = a.initial_point, xb = b.initial_point;
  for (int p = 1; p <= 3; ++p) {
    xa = a.sample(p, xa, ra);
    xb = b.sample(p, xb, rb);
    EXPECT_EQ(xa.z, xb.z);
    EXPECT_EQ(xa.u, xb.u);
    EXPECT_EQ(a.alive(p, xa), b.alive(p, xb));
  }
}

TEST(CompileAbcHmm, RejectsInvalidHmm) {
  EXPECT_THROW(compile_abc_hmm(fixed_latent_hmm(0.0), 1.0), std::invalid_argument);
  auto h = fixed_latent_hmm(1.0);
  h.observations.clear();
  EXPECT_THROW(compile_abc_hmm(h, 1.0), std::invalid_argument);
}

TEST(LgSimulate, ZeroNoiseIsDegenerate) {
  const auto d = lg_simulate({0.0, 0.0, 2.0, 1.5}, 10, 3);
  for (double z : d.latent) EXPECT_EQ(z, 1.5);
  for (double y : d.observations) EXPECT_EQ(y, 3.0);
}

TEST(LgSimulate, FirstObservationCentred) {
  std::vector<double> y(100'000);
  for (std::size_t s = 0; s < y.size(); ++s) y[s] = lg_simulate({1.0, 1.0, 2.0, 0.0}, 1, s).observations[0];
  const auto st = test::summarize(y);
  EXPECT_LT(std::abs(st.mean), 3.0 * st.se);
}

TEST(LgSimulate, SecondLatentVariance) {
  const double sv2 = 0.8;
  std::vector<double> z(100'000);
  for (std::size_t s = 0; s < z.size(); ++s) z[s] = lg_simulate({sv2, 1.0, 2.0, 0.0}, 2, s).latent[1];
  const auto st = test::summarize(z);
  // SE of a normal sample variance: sigma^2 sqrt(2 / (n - 1))
  const double se = st.variance * std::sqrt(2.0 / static_cast<double>(z.size() - 1));
  EXPECT_LT(std::abs(st.variance - 2.0 * sv2), 3.0 * se);
}

TEST(LgSimulate, Deterministic) {
  const auto a = lg_simulate({1.0, 2.0, 2.0, 0.0}, 50, 9);
  const auto b = lg_simulate({1.0, 2.0, 2.0, 0.0}, 50, 9);
  EXPECT_EQ(a.observations, b.observations);
  EXPECT_EQ(a.latent, b.latent);
}

TEST(InjectOutliers, TinyProbabilityLeavesSeriesAlone) {
  const std::vector<double> y(100, 1.25);
  const auto levels = default_outlier_levels();
  const auto out = inject_outliers(y, 1e-9, levels, 4);
  if (out.replaced.empty()) {
    EXPECT_EQ(out.observations, y);
  }
}

TEST(InjectOutliers, CountMatchesBinomialMean) {
  const auto levels = default_outlier_levels();
  ASSERT_EQ(levels.size(), 8u);
  EXPECT_EQ(levels.front(), 80.0);
  EXPECT_EQ(levels.back(), 150.0);
  const std::vector<double> y(5000, 0.0);
  std::vector<double> counts(200);
  std::vector<std::size_t> level_counts(levels.size(), 0);
  for (std::size_t s = 0; s < counts.size(); ++s) {
    const auto out = inject_outliers(y, 1.0 / 500.0, levels, s);
    counts[s] = static_cast<double>(out.replaced.size());
    for (auto i : out.replaced) {
      const auto it = std::find(levels.begin(), levels.end(), out.observations[i]);
      ASSERT_NE(it, levels.end());
      ++level_counts[static_cast<std::size_t>(it - levels.begin())];
    }
  }
  const auto st = test::summarize(counts);
  EXPECT_LT(std::abs(st.mean - 10.0), 3.0 * st.se);
  EXPECT_GT(test::chi_square_uniform_pvalue(level_counts), 1e-3);
}

TEST(InjectOutliers, RejectsBadInputs) {
  const auto levels = default_outlier_levels();
  EXPECT_THROW(inject_outliers({1.0}, 0.0, levels, 1), std::invalid_argument);
  EXPECT_THROW(inject_outliers({1.0}, 0.5, {}, 1), std::invalid_argument);
}

TEST(SampleStable, StabilityTwoIsGaussianWithDoubledVariance) {
  const StableParams p{0.7, 0.4, 2.0};
  Rng rng(11);
  std::vector<double> x(1'000'000);
  for (auto& v : x) v = sample_stable(p, rng);
  const auto st = test::summarize(x);
  EXPECT_NEAR(st.variance, 2.0 * 0.49, 0.01 * 2.0 * 0.49);
}

TEST(SampleStable, StabilityTwoPassesAndersonDarling) {
  const StableParams p{1.0, 0.0, 2.0};
  Rng rng(12);
  std::vector<double> x(100'000);
  for (auto& v : x) v = sample_stable(p, rng);
  const double sd = std::sqrt(2.0);
  const double a2 = test::anderson_darling(x, [sd](double v) { return normal_cdf(v / sd); });
  EXPECT_LT(a2, test::kAndersonDarlingCritical001);
}

TEST(SampleStable, CauchyQuantiles) {
  const StableParams p{1.0, 0.0, 1.0};
  Rng rng(13);
  std::vector<double> x(1'000'000);
  for (auto& v : x) v = sample_stable(p, rng);
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  const double median = x[x.size() / 2];
  // asymptotic SE of the median: 1 / (2 f(0) sqrt(n)) with f(0) = 1/pi
  EXPECT_LT(std::abs(median), 3.0 * std::numbers::pi / (2.0 * std::sqrt(n)));
  const double iqr = x[3 * x.size() / 4] - x[x.size() / 4];
  EXPECT_NEAR(iqr, 2.0, 0.04);
}

TEST(SampleStable, SymmetricSignBalance) {
  const StableParams p{1.0, 0.0, 1.75};
  Rng rng(14);
  std::vector<double> s(1'000'000);
  for (auto& v : s) v = sample_stable(p, rng) > 0.0 ? 1.0 : -1.0;
  const auto st = test::summarize(s);
  EXPECT_LT(std::abs(st.mean), 3.0 * st.se);
}

TEST(SampleStable, PositiveMassMatchesClosedForm) {
  // P(X > 0) = 1/2 + arctan(skew tan(pi stability / 2)) / (pi stability)
  for (const StableParams p : {StableParams{1.0, 1.0, 1.75}, StableParams{2.0, -0.5, 0.8}, StableParams{1.0, 1.0, 1.5}}) {
    const double rho = 0.5 + std::atan(p.skewness * std::tan(std::numbers::pi * p.stability / 2.0)) /
                                 (std::numbers::pi * p.stability);
    Rng rng(15);
    std::vector<double> pos(200'000);
    for (auto& v : pos) v = sample_stable(p, rng) > 0.0 ? 1.0 : 0.0;
    const auto st = test::summarize(pos);
    EXPECT_LT(std::abs(st.mean - rho), 3.0 * st.se) << p.stability << " " << p.skewness;
  }
}

TEST(StableParams, Validation) {
  EXPECT_THROW((StableParams{0.0, 0.0, 2.0}).validate(), std::invalid_argument);
  EXPECT_THROW((StableParams{1.0, 1.5, 2.0}).validate(), std::invalid_argument);
  EXPECT_THROW((StableParams{1.0, 0.0, 2.5}).validate(), std::invalid_argument);
  EXPECT_THROW((StableParams{1.0, 0.0, 0.0}).validate(), std::invalid_argument);
  EXPECT_NO_THROW((StableParams{1.0, -1.0, 1.0}).validate());
}

TEST(AbcObsDensity, SmallToleranceApproachesModeDensity) {
  const LinearGaussianParams p{1.0, 2.0, 2.0, 0.0};
  const double sw = std::sqrt(p.sigma_w2);
  const double v = lg_abc_obs_density(p, 3.0, 1.5, 1e-4 * sw);
  const double mode = 1.0 / (sw * std::sqrt(2.0 * std::numbers::pi));
  EXPECT_NEAR(v / mode, 1.0, 1e-6);
}

TEST(AbcObsDensity, IntegratesToOneInY) {
  const LinearGaussianParams p{1.0, 1.0, 2.0, 0.0};
  const double z = 0.3, eps = 0.8;
  const double lo = 2.0 * z - 15.0, hi = 2.0 * z + 15.0;
  const int cells = 200'000;
  const double h = (hi - lo) / cells;
  double sum = 0.0;
  for (int i = 0; i < cells; ++i) sum += lg_abc_obs_density(p, lo + (i + 0.5) * h, z, eps) * h;
  EXPECT_NEAR(sum, 1.0, 1e-6);
}

TEST(AbcObsDensity, HugeToleranceIsUniform) {
  const LinearGaussianParams p{1.0, 1.0, 2.0, 0.0};
  const double eps = 1e7;
  EXPECT_NEAR(lg_abc_obs_density(p, 4.0, -1.0, eps) * 2.0 * eps, 1.0, 1e-9);
}

TEST(AbcObsDensity, PositiveAndDecreasingInDistance) {
  const LinearGaussianParams p{1.0, 0.5, 2.0, 0.0};
  double prev = std::numeric_limits<double>::infinity();
  for (double d = 0.0; d < 15.0; d += 0.25) {
    const double v = lg_abc_obs_density(p, d, 0.0, 0.3);
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, prev);
    prev = v;
  }
  EXPECT_THROW(lg_abc_obs_density(p, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST(ReturnsCsv, FlatSeries) {
  std::istringstream in("100\n100\n100\n");
  EXPECT_EQ(parse_returns_csv(in), (std::vector<double>{0.0, 0.0}));
}

TEST(ReturnsCsv, HeaderAndSingleReturn) {
  std::istringstream in("close\n100\n110\n");
  const auto r = parse_returns_csv(in);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_DOUBLE_EQ(r[0], std::log(1.1));
}

TEST(ReturnsCsv, BadRowReportsRowNumber) {
  std::istringstream in("100\n101\nabc\n");
  try {
    parse_returns_csv(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 3u);
  }
}

TEST(ReturnsCsv, NonPositiveLevel) {
  std::istringstream in("100\n0\n");
  try {
    parse_returns_csv(in);
    FAIL();
  } catch (const NonPositiveIndex& e) {
    EXPECT_EQ(e.row(), 2u);
  }
}

TEST(ReturnsCsv, MissingFile) {
  EXPECT_THROW(load_returns_csv("/nonexistent/returns.csv"), ParseError);
}

TEST(StochasticVolatility, SimulationShapes) {
  const StableSvParams th{1.0, 0.01, 0.5, {1.0, 1.0, 1.75}};
  const auto d = sv_simulate(th, 200, 0.0, 3);
  EXPECT_EQ(d.observations.size(), 200u);
  EXPECT_EQ(d.latent.size(), 200u);
  for (double y : d.observations) EXPECT_TRUE(std::isfinite(y));
  const auto again = sv_simulate(th, 200, 0.0, 3);
  EXPECT_EQ(d.observations, again.observations);
  EXPECT_THROW(sv_simulate({1.0, 0.0, 0.5, {}}, 10, 0.0, 1), std::invalid_argument);
}

TEST(StochasticVolatility, CompiledModelHorizon) {
  const StableSvParams th{1.0, 0.01, 0.5, {1.0, 1.0, 1.75}};
  const auto d = sv_simulate(th, 30, 0.0, 4);
  const auto model = compile_abc_hmm(make_sv_hmm(d.observations, 0.5), th);
  EXPECT_EQ(model.horizon, 30);
}

}  // namespace
}  // namespace alive
