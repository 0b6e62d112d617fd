#include "vrig/cmaes.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "vrig/random.hpp"

using namespace vrig;
using namespace vrig::cmaes;

namespace {

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<int>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Config basic_config(int n, double lo = -5.0, double hi = 5.0, double delta = 1e-6) {
  Config cfg;
  cfg.initial_mean = Vec::Zero(n);
  cfg.lower = Vec::Constant(n, lo);
  cfg.upper = Vec::Constant(n, hi);
  cfg.grid_delta = Vec::Constant(n, delta);
  return cfg;
}

// ---------------------------------------------------------------------------
// Pinned randomness

TEST(Random, Uniform01UsesTopFiftyThreeBits) {
  std::mt19937_64 rng(42), copy(42);
  for (int i = 0; i < 100; ++i) {
    const double expected = static_cast<double>(copy() >> 11) * 0x1.0p-53;
    EXPECT_EQ(uniform01(rng), expected);
  }
}

TEST(Random, Uniform01StaysInHalfOpenUnitInterval) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(rng);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Random, StandardNormalConsumesExactlyTwoDraws) {
  std::mt19937_64 a(7), b(7);
  standard_normal(a);
  b();
  b();
  EXPECT_EQ(a(), b());
}

TEST(Random, StandardNormalMatchesBoxMullerFormula) {
  std::mt19937_64 rng(99), copy(99);
  for (int i = 0; i < 50; ++i) {
    double u1 = uniform01(copy);
    const double u2 = uniform01(copy);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double expected = std::sqrt(-2.0 * std::log(u1)) *
                            std::cos(2.0 * std::numbers::pi * u2);
    EXPECT_EQ(standard_normal(rng), expected);
  }
}

TEST(Random, StandardNormalMomentsAreSane) {
  std::mt19937_64 rng(1234);
  const int n = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = standard_normal(rng);
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.03);
  EXPECT_NEAR(var, 1.0, 0.05);
}

// ---------------------------------------------------------------------------
// Expected norm of N(0, I)

TEST(ExpectedNormalNorm, HandEvaluated) {
  // n = 1: 1 - 1/4 + 1/21 = 67/84.
  EXPECT_NEAR(expected_normal_norm(1), 67.0 / 84.0, 1e-15);
  // n = 4: 2 (1 - 1/16 + 1/336) = 2 * 0.9404761904761905.
  EXPECT_NEAR(expected_normal_norm(4), 1.880952380952381, 1e-14);
}

TEST(ExpectedNormalNorm, ApproachesSqrtN) {
  EXPECT_NEAR(expected_normal_norm(10000) / 100.0, 1.0, 1e-4);
}

// ---------------------------------------------------------------------------
// Configuration resolution

TEST(Resolve, DefaultPopulationAndElites) {
  const ResolvedConfig r = resolve(basic_config(10));
  EXPECT_EQ(r.population, 10);  // 4 + floor(3 ln 10) = 4 + 6
  EXPECT_EQ(r.elites, 5);
  ASSERT_EQ(r.weights.size(), 5u);

  // Normalized, positive, descending log weights.
  double sum = 0.0;
  for (size_t i = 0; i < r.weights.size(); ++i) {
    EXPECT_GT(r.weights[i], 0.0);
    if (i > 0) EXPECT_LE(r.weights[i], r.weights[i - 1]);
    sum += r.weights[i];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);

  // Proportions follow ln(M + 0.5) - ln(i).
  const double raw0 = std::log(5.5) - std::log(1.0);
  const double raw4 = std::log(5.5) - std::log(5.0);
  EXPECT_NEAR(r.weights[0] / r.weights[4], raw0 / raw4, 1e-12);

  double sq = 0.0;
  for (double w : r.weights) sq += w * w;
  EXPECT_NEAR(r.mu_eff, 1.0 / sq, 1e-12);
  EXPECT_NEAR(r.c_cov, 2.0 / ((10.0 + 1.3) * (10.0 + 1.3) + r.mu_eff), 1e-15);
  EXPECT_NEAR(r.c_sigma, (r.mu_eff + 2.0) / (10.0 + r.mu_eff + 5.0), 1e-15);
  EXPECT_NEAR(r.d_sigma, 1.0 + r.c_sigma, 1e-15);
}

TEST(Resolve, SmallDimensionPopulation) {
  EXPECT_EQ(resolve(basic_config(1)).population, 4);   // ln 1 = 0
  EXPECT_EQ(resolve(basic_config(2)).population, 6);   // floor(3 * 0.693) = 2
  EXPECT_EQ(resolve(basic_config(20)).population, 12);  // floor(3 * 2.9957) = 8
}

TEST(Resolve, ExplicitOverridesAreKept) {
  Config cfg = basic_config(3);
  cfg.population = 20;
  cfg.elites = 4;
  cfg.weights = {4.0, 3.0, 2.0, 1.0};
  cfg.c_cov = 0.25;
  cfg.c_sigma = 0.125;
  cfg.d_sigma = 3.0;
  const ResolvedConfig r = resolve(cfg);
  EXPECT_EQ(r.population, 20);
  EXPECT_EQ(r.elites, 4);
  EXPECT_DOUBLE_EQ(r.weights[0], 0.4);
  EXPECT_DOUBLE_EQ(r.weights[3], 0.1);
  EXPECT_DOUBLE_EQ(r.c_cov, 0.25);
  EXPECT_DOUBLE_EQ(r.c_sigma, 0.125);
  EXPECT_DOUBLE_EQ(r.d_sigma, 3.0);
  EXPECT_NEAR(r.mu_eff, 1.0 / (0.16 + 0.09 + 0.04 + 0.01), 1e-12);
}

TEST(Resolve, RejectsInvalidConfigs) {
  EXPECT_THROW(resolve(Config{}), std::invalid_argument);  // empty mean

  Config cfg = basic_config(2);
  cfg.lower[0] = 1.0;
  cfg.upper[0] = -1.0;
  EXPECT_THROW(resolve(cfg), std::invalid_argument);

  cfg = basic_config(2);
  cfg.grid_delta[1] = 0.0;
  EXPECT_THROW(resolve(cfg), std::invalid_argument);

  cfg = basic_config(2);
  cfg.initial_sigma = 0.0;
  EXPECT_THROW(resolve(cfg), std::invalid_argument);

  cfg = basic_config(2);
  cfg.lower = Vec::Zero(3);  // dimension mismatch
  EXPECT_THROW(resolve(cfg), std::invalid_argument);

  cfg = basic_config(2);
  cfg.population = 4;
  cfg.elites = 5;  // more elites than candidates
  EXPECT_THROW(resolve(cfg), std::invalid_argument);

  cfg = basic_config(2);
  cfg.population = 4;
  cfg.elites = 2;
  cfg.weights = {0.25, 0.5};  // increasing
  EXPECT_THROW(resolve(cfg), std::invalid_argument);

  cfg = basic_config(2);
  cfg.population = 4;
  cfg.elites = 2;
  cfg.weights = {0.5, 0.0};  // non-positive
  EXPECT_THROW(resolve(cfg), std::invalid_argument);

  cfg = basic_config(2);
  cfg.c_cov = 1.0;  // must be < 1
  EXPECT_THROW(resolve(cfg), std::invalid_argument);

  cfg = basic_config(2);
  cfg.d_sigma = 0.0;
  EXPECT_THROW(resolve(cfg), std::invalid_argument);

  cfg = basic_config(2);
  cfg.max_iters = -1;
  EXPECT_THROW(resolve(cfg), std::invalid_argument);
}

TEST(Resolve, ZeroRatesAreAllowed) {
  Config cfg = basic_config(2);
  cfg.c_cov = 0.0;
  cfg.c_sigma = 0.0;
  const ResolvedConfig r = resolve(cfg);
  EXPECT_EQ(r.c_cov, 0.0);
  EXPECT_EQ(r.c_sigma, 0.0);
}

// ---------------------------------------------------------------------------
// Grid snapping

TEST(ClampAndSnap, HandEvaluated) {
  Config cfg = basic_config(1, 0.0, 1.0, 0.3);
  // Grid points: 0, 0.3, 0.6, 0.9 (k_max = 3; 1.0 itself is unreachable).
  EXPECT_NEAR(clamp_and_snap(make_vec({0.44}), cfg)[0], 0.3, 1e-15);
  EXPECT_NEAR(clamp_and_snap(make_vec({0.95}), cfg)[0], 0.9, 1e-15);
  EXPECT_NEAR(clamp_and_snap(make_vec({2.0}), cfg)[0], 0.9, 1e-15);
  EXPECT_NEAR(clamp_and_snap(make_vec({-1.0}), cfg)[0], 0.0, 1e-15);
}

TEST(ClampAndSnap, ExactGridEndpoints) {
  Config cfg = basic_config(1, -1.0, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(clamp_and_snap(make_vec({1.0}), cfg)[0], 1.0);    // k = 4
  EXPECT_DOUBLE_EQ(clamp_and_snap(make_vec({-1.0}), cfg)[0], -1.0);  // k = 0
  EXPECT_DOUBLE_EQ(clamp_and_snap(make_vec({0.24}), cfg)[0], 0.0);
  EXPECT_DOUBLE_EQ(clamp_and_snap(make_vec({0.26}), cfg)[0], 0.5);
}

TEST(ClampAndSnap, DegenerateBoundsFreezeCoordinate) {
  Config cfg = basic_config(2, -5.0, 5.0, 0.1);
  cfg.lower[1] = cfg.upper[1] = 2.5;
  for (double probe : {-100.0, 0.0, 2.5, 100.0}) {
    const Vec out = clamp_and_snap(make_vec({0.0, probe}), cfg);
    EXPECT_DOUBLE_EQ(out[1], 2.5);
  }
}

TEST(ClampAndSnap, GridAnchoredAtLowerBound) {
  Config cfg = basic_config(1, 0.05, 10.0, 0.1);
  // Grid is 0.05, 0.15, 0.25, ...: 0.1 snaps to 0.15 (round(0.5) away from zero).
  EXPECT_NEAR(clamp_and_snap(make_vec({0.1}), cfg)[0], 0.15, 1e-15);
  EXPECT_NEAR(clamp_and_snap(make_vec({0.09}), cfg)[0], 0.05, 1e-15);
}

// ---------------------------------------------------------------------------
// Sampling

TEST(SampleCandidate, MatchesHandComputedDrawOnIdentityCovariance) {
  Config cfg = basic_config(3, -100.0, 100.0, 1e-9);
  cfg.initial_mean = make_vec({1.0, -2.0, 0.5});
  cfg.initial_sigma = 0.7;
  const ResolvedConfig r = resolve(cfg);
  State state = initial_state(r);

  std::mt19937_64 rng(2024), copy(2024);
  const Vec got = sample_candidate(state, r, rng);

  Vec z(3);
  for (int i = 0; i < 3; ++i) z[i] = standard_normal(copy);  // index draw order
  Vec expected(3);
  for (int i = 0; i < 3; ++i) expected[i] = state.mean[i] + state.sigma * z[i];
  expected = clamp_and_snap(expected, cfg);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(got[i], expected[i], 1e-12) << i;
}

TEST(SampleCandidate, DiagonalCovarianceScalesCoordinates) {
  Config cfg = basic_config(2, -1000.0, 1000.0, 1e-9);
  const ResolvedConfig r = resolve(cfg);
  State state = initial_state(r);
  state.C = make_vec({4.0, 9.0}).asDiagonal();  // L = diag(2, 3) exactly

  std::mt19937_64 rng(55), copy(55);
  const Vec got = sample_candidate(state, r, rng);
  const double z0 = standard_normal(copy);
  const double z1 = standard_normal(copy);
  EXPECT_NEAR(got[0], 2.0 * z0, 1e-9);
  EXPECT_NEAR(got[1], 3.0 * z1, 1e-9);
}

TEST(SampleCandidate, ResultRespectsBoundsAndGrid) {
  Config cfg = basic_config(4, -1.0, 2.0, 0.25);
  cfg.initial_sigma = 5.0;  // force frequent clamping
  const ResolvedConfig r = resolve(cfg);
  State state = initial_state(r);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 500; ++i) {
    const Vec x = sample_candidate(state, r, rng);
    for (int j = 0; j < 4; ++j) {
      EXPECT_GE(x[j], -1.0);
      EXPECT_LE(x[j], 2.0);
      const double k = (x[j] + 1.0) / 0.25;
      EXPECT_NEAR(k, std::round(k), 1e-9);
    }
  }
}

TEST(SampleCandidate, SingularCovarianceIsJittered) {
  Config cfg = basic_config(2, -10.0, 10.0, 1e-6);
  const ResolvedConfig r = resolve(cfg);
  State state = initial_state(r);
  state.C = Mat::Zero(2, 2);  // rank-deficient; plain LLT fails
  std::mt19937_64 rng(1);
  const Vec x = sample_candidate(state, r, rng);  // must not throw
  // With C ~ jitter * I the step is ~sigma * sqrt(1e-12) ~ 1e-6.
  EXPECT_NEAR(x[0], 0.0, 1e-3);
  EXPECT_NEAR(x[1], 0.0, 1e-3);
}

// ---------------------------------------------------------------------------
// Mean recombination

TEST(UpdateMean, SingleEliteIsCopied) {
  const Vec e = make_vec({3.0, -1.0});
  const Vec m = update_mean({e}, {1.0});
  EXPECT_EQ(m[0], 3.0);
  EXPECT_EQ(m[1], -1.0);
}

TEST(UpdateMean, EqualWeightsGiveMidpoint) {
  const Vec m = update_mean({make_vec({0.0, 0.0}), make_vec({1.0, 2.0})}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(m[0], 0.5);
  EXPECT_DOUBLE_EQ(m[1], 1.0);
}

TEST(UpdateMean, HandWeightedSum) {
  const Vec m = update_mean(
      {make_vec({1.0, 0.0}), make_vec({0.0, 1.0}), make_vec({10.0, 10.0})},
      {0.7, 0.2, 0.1});
  EXPECT_NEAR(m[0], 1.7, 1e-15);
  EXPECT_NEAR(m[1], 1.2, 1e-15);
}

TEST(UpdateMean, RejectsMismatchedSizes) {
  EXPECT_THROW(update_mean({}, {}), std::invalid_argument);
  EXPECT_THROW(update_mean({make_vec({1.0})}, {0.5, 0.5}), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Path, covariance, and step-size updates

ResolvedConfig unit_rates_config() {
  Config cfg = basic_config(2, -100.0, 100.0, 1e-9);
  cfg.population = 2;
  cfg.elites = 1;
  cfg.weights = {1.0};  // mu_eff = 1, scale = 1
  cfg.c_cov = 0.5;
  cfg.c_sigma = 0.5;
  cfg.d_sigma = 2.0;
  return resolve(cfg);
}

TEST(UpdatePaths, ZeroStepShrinksSigmaByFixedFactor) {
  const ResolvedConfig r = unit_rates_config();
  State state = initial_state(r);
  state.sigma = 2.0;
  update_paths_and_cov(state, state.mean, r);  // new mean == old mean
  EXPECT_EQ(state.p_cov.norm(), 0.0);
  EXPECT_EQ(state.p_sigma.norm(), 0.0);
  // C' = 0.5 C + 0.5 * 0 = 0.5 I.
  EXPECT_DOUBLE_EQ(state.C(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(state.C(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(state.C(0, 1), 0.0);
  // sigma' = 2 exp((0.5/2)(0 - 1)) = 2 exp(-1/4).
  EXPECT_NEAR(state.sigma, 2.0 * std::exp(-0.25), 1e-15);
}

TEST(UpdatePaths, HandEvaluatedSingleStep) {
  const ResolvedConfig r = unit_rates_config();
  State state = initial_state(r);
  state.sigma = 2.0;
  update_paths_and_cov(state, make_vec({1.0, 0.0}), r);

  // delta = (1,0)/2 = (0.5, 0); p' = 0.5*0 + sqrt(0.75)*1*(0.5, 0).
  const double p0 = std::sqrt(0.75) * 0.5;
  EXPECT_NEAR(state.p_cov[0], p0, 1e-15);
  EXPECT_EQ(state.p_cov[1], 0.0);
  EXPECT_NEAR(state.p_sigma[0], p0, 1e-15);

  // C' = 0.5 I + 0.5 p p^T with p0^2 = 0.1875.
  EXPECT_NEAR(state.C(0, 0), 0.5 + 0.5 * 0.1875, 1e-12);
  EXPECT_DOUBLE_EQ(state.C(1, 1), 0.5);
  EXPECT_EQ(state.C(0, 1), state.C(1, 0));
  EXPECT_NEAR(state.C(0, 1), 0.0, 1e-15);

  // sigma' = 2 exp((0.5/2)(p0 / E||N_2|| - 1)), E||N_2|| = sqrt(2)(1 - 1/8 + 1/84).
  const double e_norm = std::sqrt(2.0) * (1.0 - 1.0 / 8.0 + 1.0 / 84.0);
  EXPECT_NEAR(state.sigma, 2.0 * std::exp(0.25 * (p0 / e_norm - 1.0)), 1e-12);
}

TEST(UpdatePaths, EquilibriumPathLeavesSigmaUnchanged) {
  const ResolvedConfig r = unit_rates_config();
  State state = initial_state(r);
  state.sigma = 2.0;
  // After decay by (1 - c_sigma) = 0.5 with zero step, the path norm equals
  // exactly E||N||, so the exponent vanishes.
  state.p_sigma = make_vec({2.0 * expected_normal_norm(2), 0.0});
  update_paths_and_cov(state, state.mean, r);
  EXPECT_NEAR(state.p_sigma.norm(), expected_normal_norm(2), 1e-12);
  EXPECT_NEAR(state.sigma, 2.0, 1e-12);
}

TEST(UpdatePaths, ZeroRatesFreezeEverything) {
  Config cfg = basic_config(2, -100.0, 100.0, 1e-9);
  cfg.population = 2;
  cfg.elites = 1;
  cfg.weights = {1.0};
  cfg.c_cov = 0.0;
  cfg.c_sigma = 0.0;
  const ResolvedConfig r = resolve(cfg);
  State state = initial_state(r);
  state.sigma = 1.5;
  update_paths_and_cov(state, make_vec({3.0, -4.0}), r);
  EXPECT_EQ(state.p_cov.norm(), 0.0);
  EXPECT_EQ(state.p_sigma.norm(), 0.0);
  EXPECT_EQ(state.C(0, 0), 1.0);
  EXPECT_EQ(state.C(1, 1), 1.0);
  EXPECT_EQ(state.sigma, 1.5);
}

// ---------------------------------------------------------------------------
// Full optimization loop

double sphere_off_center(const Vec& u) {
  double s = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    const double d = u[i] - (i % 2 == 0 ? 0.5 : -0.25);
    s += d * d;
  }
  return s;
}

TEST(Optimize, DeterministicForFixedSeed) {
  Config cfg = basic_config(3, -5.0, 5.0, 0.05);
  cfg.initial_sigma = 1.0;
  cfg.max_iters = 40;
  cfg.seed = 17;
  const Result a = optimize(sphere_off_center, cfg);
  const Result b = optimize(sphere_off_center, cfg);
  EXPECT_EQ(a.best_error, b.best_error);
  EXPECT_EQ(a.evaluations, b.evaluations);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].best_error, b.history[i].best_error);
    EXPECT_EQ(a.history[i].sigma, b.history[i].sigma);
    for (int j = 0; j < 3; ++j) EXPECT_EQ(a.history[i].mean[j], b.history[i].mean[j]);
  }
  for (int j = 0; j < 3; ++j) EXPECT_EQ(a.best[j], b.best[j]);
}

TEST(Optimize, DifferentSeedsDiverge) {
  Config cfg = basic_config(3, -5.0, 5.0, 0.05);
  cfg.max_iters = 5;
  cfg.seed = 1;
  const Result a = optimize(sphere_off_center, cfg);
  cfg.seed = 2;
  const Result b = optimize(sphere_off_center, cfg);
  bool any_different = a.best_error != b.best_error;
  for (size_t i = 0; i < a.history.size() && !any_different; ++i)
    any_different = a.history[i].sigma != b.history[i].sigma;
  EXPECT_TRUE(any_different);
}

TEST(Optimize, ZeroIterationsEvaluatesSnappedInitialMean) {
  Config cfg = basic_config(2, -1.0, 1.0, 0.25);
  cfg.initial_mean = make_vec({0.6, 10.0});  // 10 clamps to 1
  cfg.max_iters = 0;
  int calls = 0;
  const Result res = optimize(
      [&](const Vec& u) {
        ++calls;
        return u.squaredNorm();
      },
      cfg);
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(res.evaluations, 1);
  EXPECT_TRUE(res.history.empty());
  EXPECT_DOUBLE_EQ(res.best[0], 0.5);  // snapped to the 0.25 grid
  EXPECT_DOUBLE_EQ(res.best[1], 1.0);
  EXPECT_DOUBLE_EQ(res.best_error, res.best.squaredNorm());
}

TEST(Optimize, EvaluationCountMatchesBudget) {
  Config cfg = basic_config(2, -5.0, 5.0, 0.01);
  cfg.population = 7;
  cfg.elites = 3;
  cfg.max_iters = 11;
  const Result res = optimize([](const Vec& u) { return u.squaredNorm(); }, cfg);
  EXPECT_EQ(res.evaluations, 1 + 7 * 11);
  EXPECT_EQ(res.history.size(), 11u);
}

TEST(Optimize, BestErrorIsMonotoneNonIncreasing) {
  Config cfg = basic_config(4, -5.0, 5.0, 0.05);
  cfg.max_iters = 60;
  cfg.seed = 5;
  const Result res = optimize(sphere_off_center, cfg);
  double last = std::numeric_limits<double>::infinity();
  for (const HistoryRecord& h : res.history) {
    EXPECT_LE(h.best_error, last);
    last = h.best_error;
  }
  EXPECT_EQ(res.history.back().best_error, res.best_error);
  EXPECT_DOUBLE_EQ(sphere_off_center(res.best), res.best_error);
}

TEST(Optimize, HistoryMeansStayInBoundsAndSigmaPositive) {
  Config cfg = basic_config(3, -0.5, 0.75, 0.05);
  cfg.initial_sigma = 2.0;  // aggressive steps so clamping matters
  cfg.max_iters = 50;
  cfg.seed = 23;
  const Result res = optimize(sphere_off_center, cfg);
  for (const HistoryRecord& h : res.history) {
    EXPECT_GT(h.sigma, 0.0);
    for (int j = 0; j < 3; ++j) {
      EXPECT_GE(h.mean[j], -0.5);
      EXPECT_LE(h.mean[j], 0.75);
    }
  }
}

TEST(Optimize, ZeroRatesKeepSigmaConstant) {
  Config cfg = basic_config(2, -5.0, 5.0, 0.05);
  cfg.c_cov = 0.0;
  cfg.c_sigma = 0.0;
  cfg.initial_sigma = 0.8;
  cfg.max_iters = 10;
  const Result res = optimize(sphere_off_center, cfg);
  for (const HistoryRecord& h : res.history) EXPECT_EQ(h.sigma, 0.8);
}

TEST(Optimize, FrozenCoordinateNeverMovesInCandidates) {
  Config cfg = basic_config(3, -5.0, 5.0, 0.05);
  cfg.lower[1] = cfg.upper[1] = 1.25;
  cfg.initial_mean[1] = 0.0;  // clamped to 1.25 by initial_state
  cfg.max_iters = 20;
  const Result res = optimize(
      [](const Vec& u) {
        EXPECT_DOUBLE_EQ(u[1], 1.25);
        return sphere_off_center(u);
      },
      cfg);
  EXPECT_DOUBLE_EQ(res.best[1], 1.25);
}

TEST(Optimize, ConvergesOnSmoothSphere) {
  // Optimum (0.5, -0.25, 0.5, -0.25) lies exactly on the 0.05 grid.
  Config cfg = basic_config(4, -5.0, 5.0, 0.05);
  cfg.initial_sigma = 1.5;
  cfg.max_iters = 150;
  cfg.seed = 11;
  const Result res = optimize(sphere_off_center, cfg);
  EXPECT_LT(res.best_error, 1e-4);
}

TEST(Optimize, StatePreservesCovarianceInvariants) {
  // Drive the loop manually to observe C between iterations.
  Config base = basic_config(3, -5.0, 5.0, 0.01);
  base.population = 8;
  base.elites = 4;
  const ResolvedConfig cfg = resolve(base);
  State state = initial_state(cfg);
  std::mt19937_64 rng(31);

  std::vector<Vec> candidates(cfg.population);
  std::vector<double> errors(cfg.population);
  for (int t = 1; t <= 30; ++t) {
    for (int i = 0; i < cfg.population; ++i) {
      candidates[i] = sample_candidate(state, cfg, rng);
      errors[i] = sphere_off_center(candidates[i]);
    }
    std::vector<int> order(cfg.population);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return errors[a] != errors[b] ? errors[a] < errors[b] : a < b; });
    std::vector<Vec> elites;
    for (int i = 0; i < cfg.elites; ++i) elites.push_back(candidates[order[i]]);
    const Vec new_mean = update_mean(elites, cfg.weights);
    update_paths_and_cov(state, new_mean, cfg);
    state.mean = new_mean.cwiseMax(base.lower).cwiseMin(base.upper);

    EXPECT_NEAR((state.C - state.C.transpose()).norm(), 0.0, 1e-12) << "t=" << t;
    Eigen::LLT<Mat> llt(state.C);
    EXPECT_EQ(llt.info(), Eigen::Success) << "covariance lost definiteness at t=" << t;
    EXPECT_GT(state.sigma, 0.0);
  }
}

}  // namespace
