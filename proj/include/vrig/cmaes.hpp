#pragma once

// Covariance-matrix-adaptation evolution strategy over a bounded,
// grid-discretized search space.
//
// This is the rank-one-update variant: the covariance is adapted from the
// evolution path alone (no rank-mu term), the step-size path is smoothed
// with the same form as the covariance path (no C^{-1/2} whitening), and
// candidates are snapped to a per-coordinate delta-grid anchored at the
// lower bound before evaluation while the mean, covariance, and paths
// evolve in continuous space. Updates per iteration t:
//
//   m'    = sum_i w_i u_i                       (elites, best first)
//   p_C'  = (1-c_C) p_C + sqrt(1-(1-c_C)^2) sqrt(1/sum w_i^2) (m'-m)/sigma
//   C'    = (1-c_C) C + c_C p_C' p_C'^T
//   p_s'  = (1-c_s) p_s + sqrt(1-(1-c_s)^2) sqrt(1/sum w_i^2) (m'-m)/sigma
//   sigma'= sigma exp((c_s/d_s)(||p_s'|| / E||N(0,I)|| - 1))
//
// with E||N(0,I)|| ~= sqrt(n) (1 - 1/(4n) + 1/(21 n^2)).
//
// All randomness comes from the pinned helpers in random.hpp, so runs are
// reproducible bit-for-bit for a given seed on any platform.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "vrig/errors.hpp"
#include "vrig/random.hpp"

namespace vrig::cmaes {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Expectation of the norm of an n-dimensional standard normal vector.
inline double expected_normal_norm(int n) {
  const double nd = n;
  return std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));
}

struct Config {
  Vec initial_mean;
  double initial_sigma = 1.0;
  Vec lower;       // per-coordinate bounds; lower == upper freezes a coordinate
  Vec upper;
  Vec grid_delta;  // per-coordinate grid density, > 0, anchored at lower

  int population = 0;   // N; 0 selects 4 + floor(3 ln n)
  int elites = 0;       // M; 0 selects population / 2
  std::vector<double> weights;  // size M, descending, > 0; empty selects
                                // w_i proportional to ln(M + 0.5) - ln(i)

  // Learning rates; unset selects the standard values
  //   c_C = 2 / ((n + 1.3)^2 + mu_eff),
  //   c_sigma = (mu_eff + 2) / (n + mu_eff + 5),
  //   d_sigma = 1 + c_sigma,
  // with mu_eff = 1 / sum w_i^2. Zero is allowed and freezes the
  // corresponding adaptation.
  std::optional<double> c_cov;
  std::optional<double> c_sigma;
  std::optional<double> d_sigma;

  int max_iters = 100;  // T; 0 evaluates only the snapped initial mean
  uint64_t seed = 0;
  double jitter = 1e-12;  // added to C's diagonal if factorization fails

  int dim() const { return static_cast<int>(initial_mean.size()); }
};

// Config with defaults materialized and invariants checked.
struct ResolvedConfig {
  Config base;
  int population = 0;
  int elites = 0;
  std::vector<double> weights;  // normalized to sum 1
  double mu_eff = 0.0;
  double c_cov = 0.0;
  double c_sigma = 0.0;
  double d_sigma = 0.0;
};

inline ResolvedConfig resolve(const Config& cfg) {
  const int n = cfg.dim();
  if (n < 1) throw std::invalid_argument("cmaes: empty parameter vector");
  if (cfg.lower.size() != n || cfg.upper.size() != n || cfg.grid_delta.size() != n)
    throw std::invalid_argument("cmaes: bounds and grid sizes must match the dimension");
  for (int i = 0; i < n; ++i) {
    if (!(cfg.lower[i] <= cfg.upper[i]))
      throw std::invalid_argument("cmaes: lower bound exceeds upper bound");
    if (!(cfg.grid_delta[i] > 0.0))
      throw std::invalid_argument("cmaes: grid deltas must be positive");
  }
  if (!(cfg.initial_sigma > 0.0)) throw std::invalid_argument("cmaes: sigma must be positive");
  if (cfg.max_iters < 0) throw std::invalid_argument("cmaes: negative iteration budget");

  ResolvedConfig r;
  r.base = cfg;
  r.population = cfg.population > 0 ? cfg.population
                                    : 4 + static_cast<int>(std::floor(3.0 * std::log(n)));
  r.elites = cfg.elites > 0 ? cfg.elites : std::max(1, r.population / 2);
  if (r.elites < 1 || r.elites > r.population)
    throw std::invalid_argument("cmaes: elite count must be in [1, population]");

  if (!cfg.weights.empty()) {
    if (static_cast<int>(cfg.weights.size()) != r.elites)
      throw std::invalid_argument("cmaes: weight count must equal the elite count");
    r.weights = cfg.weights;
  } else {
    r.weights.resize(r.elites);
    for (int i = 0; i < r.elites; ++i)
      r.weights[i] = std::log(r.elites + 0.5) - std::log(i + 1.0);
  }
  double sum = 0.0;
  for (int i = 0; i < r.elites; ++i) {
    if (!(r.weights[i] > 0.0)) throw std::invalid_argument("cmaes: weights must be positive");
    if (i > 0 && r.weights[i] > r.weights[i - 1] + 1e-15)
      throw std::invalid_argument("cmaes: weights must be non-increasing");
    sum += r.weights[i];
  }
  for (double& w : r.weights) w /= sum;

  double sq = 0.0;
  for (double w : r.weights) sq += w * w;
  r.mu_eff = 1.0 / sq;

  r.c_cov = cfg.c_cov ? *cfg.c_cov : 2.0 / ((n + 1.3) * (n + 1.3) + r.mu_eff);
  r.c_sigma = cfg.c_sigma ? *cfg.c_sigma : (r.mu_eff + 2.0) / (n + r.mu_eff + 5.0);
  r.d_sigma = cfg.d_sigma ? *cfg.d_sigma : 1.0 + r.c_sigma;
  if (!(r.c_cov >= 0.0 && r.c_cov < 1.0) || !(r.c_sigma >= 0.0 && r.c_sigma < 1.0))
    throw std::invalid_argument("cmaes: learning rates must lie in [0, 1)");
  if (!(r.d_sigma > 0.0)) throw std::invalid_argument("cmaes: damping must be positive");
  return r;
}

struct State {
  Vec mean;
  double sigma = 1.0;
  Mat C;        // symmetric positive-definite
  Vec p_cov;    // evolution path for C
  Vec p_sigma;  // evolution path for sigma
  int t = 0;
};

inline State initial_state(const ResolvedConfig& cfg) {
  State s;
  const int n = cfg.base.dim();
  s.mean = cfg.base.initial_mean.cwiseMax(cfg.base.lower).cwiseMin(cfg.base.upper);
  s.sigma = cfg.base.initial_sigma;
  s.C = Mat::Identity(n, n);
  s.p_cov = Vec::Zero(n);
  s.p_sigma = Vec::Zero(n);
  return s;
}

// Clamps to bounds and snaps each coordinate to its nearest grid point
// (grid anchored at the lower bound, last point clamped inside the range).
inline Vec clamp_and_snap(const Vec& x, const Config& cfg) {
  Vec out = x;
  for (int i = 0; i < x.size(); ++i) {
    const double lo = cfg.lower[i];
    const double hi = cfg.upper[i];
    const double delta = cfg.grid_delta[i];
    double v = std::clamp(out[i], lo, hi);
    const double k_max = std::floor((hi - lo) / delta + 1e-9);
    const double k = std::clamp(std::round((v - lo) / delta), 0.0, k_max);
    out[i] = lo + k * delta;
  }
  return out;
}

// Draws one candidate: x = clamp-and-snap(m + sigma * L z) where L L^T = C
// and z has n standard-normal coordinates drawn in index order.
inline Vec sample_candidate(const State& state, const ResolvedConfig& cfg,
                            std::mt19937_64& rng) {
  const int n = cfg.base.dim();
  Eigen::LLT<Mat> llt(state.C);
  if (llt.info() != Eigen::Success) {
    Mat jittered = state.C + cfg.base.jitter * Mat::Identity(n, n);
    llt.compute(jittered);
    if (llt.info() != Eigen::Success)
      throw OptimizerFailure("cmaes: covariance is not positive-definite even after jitter");
  }
  Vec z(n);
  for (int i = 0; i < n; ++i) z[i] = standard_normal(rng);
  const Vec step = llt.matrixL() * z;
  const Vec x = state.mean + state.sigma * step;
  return clamp_and_snap(x, cfg.base);
}

// Weighted recombination of the elites (sorted ascending by objective
// value, so weights[0] multiplies the best candidate).
inline Vec update_mean(const std::vector<Vec>& sorted_elites, const std::vector<double>& weights) {
  if (sorted_elites.empty() || sorted_elites.size() != weights.size())
    throw std::invalid_argument("cmaes: elites and weights must match and be non-empty");
  Vec m = Vec::Zero(sorted_elites[0].size());
  for (size_t i = 0; i < sorted_elites.size(); ++i) m += weights[i] * sorted_elites[i];
  return m;
}

// Applies the path, covariance, and step-size updates in place given the
// recombined mean. Uses the pre-update mean and sigma on the right-hand
// sides; state.mean itself is left for the caller to advance (clamped).
inline void update_paths_and_cov(State& state, const Vec& new_mean, const ResolvedConfig& cfg) {
  const Vec delta = (new_mean - state.mean) / state.sigma;
  const double scale = std::sqrt(cfg.mu_eff);

  const double cc = cfg.c_cov;
  state.p_cov = (1.0 - cc) * state.p_cov +
                std::sqrt(1.0 - (1.0 - cc) * (1.0 - cc)) * scale * delta;
  state.C = (1.0 - cc) * state.C + cc * (state.p_cov * state.p_cov.transpose());
  state.C = ((state.C + state.C.transpose()) / 2.0).eval();  // keep exactly symmetric

  const double cs = cfg.c_sigma;
  state.p_sigma = (1.0 - cs) * state.p_sigma +
                  std::sqrt(1.0 - (1.0 - cs) * (1.0 - cs)) * scale * delta;
  state.sigma *= std::exp((cs / cfg.d_sigma) *
                          (state.p_sigma.norm() / expected_normal_norm(cfg.base.dim()) - 1.0));
}

struct HistoryRecord {
  int iteration = 0;
  double best_error = 0.0;
  double sigma = 0.0;
  Vec mean;
};

struct Result {
  Vec best;
  double best_error = 0.0;
  std::vector<HistoryRecord> history;  // one record per iteration
  int64_t evaluations = 0;
};

using Objective = std::function<double(const Vec&)>;

// Runs the full loop: evaluate the snapped initial mean, then per
// iteration sample a population, evaluate, recombine the elites, and
// update the state. Returns the best candidate ever evaluated.
inline Result optimize(const Objective& objective, const Config& config) {
  const ResolvedConfig cfg = resolve(config);
  State state = initial_state(cfg);
  std::mt19937_64 rng(config.seed);

  Result result;
  result.best = clamp_and_snap(state.mean, cfg.base);
  result.best_error = objective(result.best);
  result.evaluations = 1;

  std::vector<Vec> candidates(cfg.population);
  std::vector<double> errors(cfg.population);
  std::vector<int> order(cfg.population);

  for (int t = 1; t <= config.max_iters; ++t) {
    for (int i = 0; i < cfg.population; ++i) {
      candidates[i] = sample_candidate(state, cfg, rng);
      errors[i] = objective(candidates[i]);
      ++result.evaluations;
      if (errors[i] < result.best_error) {
        result.best_error = errors[i];
        result.best = candidates[i];
      }
    }

    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return errors[a] != errors[b] ? errors[a] < errors[b] : a < b;
    });
    std::vector<Vec> elites(cfg.elites);
    for (int i = 0; i < cfg.elites; ++i) elites[i] = candidates[order[i]];

    const Vec new_mean = update_mean(elites, cfg.weights);
    update_paths_and_cov(state, new_mean, cfg);
    state.mean = new_mean.cwiseMax(config.lower).cwiseMin(config.upper);
    state.t = t;

    result.history.push_back({t, result.best_error, state.sigma, state.mean});
  }
  return result;
}

}  // namespace vrig::cmaes
