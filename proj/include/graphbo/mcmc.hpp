#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "graphbo/blr.hpp"
#include "graphbo/mat.hpp"

namespace graphbo {

struct PriorSpec {
  double lognormal_mean = -10.0;  // normal prior on ln(1/sigma_w2)
  double lognormal_std = 0.1;
  double horseshoe_scale = 0.1;   // tau, on sigma_noise2
};

// ln N(ln sigma_w^-2; mean, std^2) + ln ln(1 + 2 tau^2 / sigma_noise2);
// -inf for non-positive hyperparameters.
double log_prior(const BLRHyper& theta, const PriorSpec& prior = {});
double log_posterior(const BLRHyper& theta, const DesignStats& stats,
                     const PriorSpec& prior = {});

struct McmcConfig {
  int walkers = 20;
  double stretch = 2.0;        // a; z ~ g(z) ∝ 1/sqrt(z) on [1/a, a]
  int burn_in_sweeps = 200;
  int thin_sweeps = 10;        // sweeps between retained draws
  double init_jitter = 0.1;    // stddev of walker initialization noise
  int stall_limit = 50;        // consecutive all-rejected sweeps before erroring
};

// Affine-invariant stretch-move ensemble over an arbitrary log target. One
// sweep updates each ensemble half against the other (red-black). After
// burn-in, `sink` receives every walker position once per sweep for
// `sweeps_after_burn_in` sweeps. Deterministic given the seed.
struct EnsembleStats {
  long long proposals = 0;
  long long accepted = 0;
};
EnsembleStats ensemble_run(const std::function<double(const Vec&)>& log_target, int dim,
                           const Vec& init_center, const McmcConfig& cfg,
                           int sweeps_after_burn_in,
                           const std::function<void(const std::vector<Vec>&)>& sink,
                           std::uint64_t seed);

// Thinned harvest: after burn-in, one draw every thin_sweeps sweeps, cycling
// over walkers, until num_draws are collected.
std::vector<Vec> ensemble_sample(const std::function<double(const Vec&)>& log_target, int dim,
                                 const Vec& init_center, const McmcConfig& cfg, int num_draws,
                                 std::uint64_t seed);

struct HyperSample {
  BLRHyper theta;
  double log_post = 0.0;
  BLRPosterior posterior;
};
struct HyperSampleSet {
  std::vector<HyperSample> samples;
};

// Draw S hyperparameter samples from p(theta | data) with the priors above,
// sampling in u = (ln sigma_w^-2, ln sigma_noise2) with the Jacobian
// correction, and fit each sample's posterior eagerly.
HyperSampleSet sample_posterior(const Mat& phi, const Vec& y, int s, std::uint64_t seed,
                                const PriorSpec& prior = {}, const McmcConfig& cfg = {});
HyperSampleSet sample_posterior(const DesignStats& stats, int s, std::uint64_t seed,
                                const PriorSpec& prior = {}, const McmcConfig& cfg = {});

}  // namespace graphbo
