#include "graphbo/mcmc.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "graphbo/rng.hpp"

namespace graphbo {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double normal_lpdf(double x, double mean, double std) {
  const double z = (x - mean) / std;
  return -0.5 * z * z - std::log(std) - 0.5 * std::log(2.0 * std::numbers::pi);
}
}  // namespace

double log_prior(const BLRHyper& theta, const PriorSpec& prior) {
  if (!(theta.sigma_w2 > 0.0) || !(theta.sigma_noise2 > 0.0)) return kNegInf;
  const double u1 = std::log(1.0 / theta.sigma_w2);
  const double tau = prior.horseshoe_scale;
  const double horseshoe =
      std::log(std::log1p(2.0 * tau * tau / theta.sigma_noise2));
  return normal_lpdf(u1, prior.lognormal_mean, prior.lognormal_std) + horseshoe;
}

double log_posterior(const BLRHyper& theta, const DesignStats& stats, const PriorSpec& prior) {
  const double lp = log_prior(theta, prior);
  if (!std::isfinite(lp)) return kNegInf;
  return lp + log_marginal_likelihood(stats, theta);
}

EnsembleStats ensemble_run(const std::function<double(const Vec&)>& log_target, int dim,
                           const Vec& init_center, const McmcConfig& cfg,
                           int sweeps_after_burn_in,
                           const std::function<void(const std::vector<Vec>&)>& sink,
                           std::uint64_t seed) {
  if (cfg.walkers < 4 || cfg.walkers % 2 != 0)
    throw std::invalid_argument("ensemble_run: walkers must be even and >= 4");
  if (static_cast<int>(init_center.size()) != dim)
    throw std::invalid_argument("ensemble_run: init_center has wrong dimension");
  if (!(cfg.stretch > 1.0)) throw std::invalid_argument("ensemble_run: stretch must be > 1");

  Rng rng(seed);
  const int w = cfg.walkers;
  std::vector<Vec> pos(static_cast<std::size_t>(w), Vec(static_cast<std::size_t>(dim)));
  Vec logp(static_cast<std::size_t>(w));
  for (int i = 0; i < w; ++i) {
    for (int d = 0; d < dim; ++d)
      pos[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] =
          init_center[static_cast<std::size_t>(d)] + cfg.init_jitter * rng.normal();
    logp[static_cast<std::size_t>(i)] = log_target(pos[static_cast<std::size_t>(i)]);
    if (!std::isfinite(logp[static_cast<std::size_t>(i)]))
      throw std::runtime_error("ensemble_run: non-finite log target at initialization");
  }

  EnsembleStats stats;
  const int half = w / 2;
  const double a = cfg.stretch;
  int stalled = 0;
  Vec proposal(static_cast<std::size_t>(dim));
  const int total_sweeps = cfg.burn_in_sweeps + sweeps_after_burn_in;
  for (int sweep = 0; sweep < total_sweeps; ++sweep) {
    int accepted_this_sweep = 0;
    for (int block = 0; block < 2; ++block) {
      const int lo = block == 0 ? 0 : half;
      const int hi = block == 0 ? half : w;
      const int other_lo = block == 0 ? half : 0;
      for (int i = lo; i < hi; ++i) {
        const int j = other_lo + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(half)));
        const double u = rng.u01();
        const double z = (a - 1.0) * u + 1.0;
        const double zz = z * z / a;
        const Vec& xi = pos[static_cast<std::size_t>(i)];
        const Vec& xj = pos[static_cast<std::size_t>(j)];
        for (int d = 0; d < dim; ++d)
          proposal[static_cast<std::size_t>(d)] =
              xj[static_cast<std::size_t>(d)] +
              zz * (xi[static_cast<std::size_t>(d)] - xj[static_cast<std::size_t>(d)]);
        const double lp = log_target(proposal);
        const double log_accept = (dim - 1) * std::log(zz) + lp - logp[static_cast<std::size_t>(i)];
        ++stats.proposals;
        if (std::log(rng.u01()) < log_accept) {
          pos[static_cast<std::size_t>(i)] = proposal;
          logp[static_cast<std::size_t>(i)] = lp;
          ++stats.accepted;
          ++accepted_this_sweep;
        }
      }
    }
    if (accepted_this_sweep == 0) {
      if (++stalled >= cfg.stall_limit)
        throw std::runtime_error(
            "ensemble_run: all proposals rejected for " + std::to_string(cfg.stall_limit) +
            " consecutive sweeps; the target is pathologically peaked");
    } else {
      stalled = 0;
    }
    if (sweep >= cfg.burn_in_sweeps && sink) sink(pos);
  }
  return stats;
}

std::vector<Vec> ensemble_sample(const std::function<double(const Vec&)>& log_target, int dim,
                                 const Vec& init_center, const McmcConfig& cfg, int num_draws,
                                 std::uint64_t seed) {
  if (num_draws < 1) throw std::invalid_argument("ensemble_sample: num_draws must be >= 1");
  if (cfg.thin_sweeps < 1) throw std::invalid_argument("ensemble_sample: thin_sweeps must be >= 1");
  std::vector<Vec> draws;
  draws.reserve(static_cast<std::size_t>(num_draws));
  int sweep_index = 0;
  const int sweeps_needed = num_draws * cfg.thin_sweeps;
  ensemble_run(
      log_target, dim, init_center, cfg, sweeps_needed,
      [&](const std::vector<Vec>& pos) {
        ++sweep_index;
        if (sweep_index % cfg.thin_sweeps == 0 &&
            static_cast<int>(draws.size()) < num_draws) {
          const int walker = static_cast<int>(draws.size()) % cfg.walkers;
          draws.push_back(pos[static_cast<std::size_t>(walker)]);
        }
      },
      seed);
  return draws;
}

HyperSampleSet sample_posterior(const DesignStats& stats, int s, std::uint64_t seed,
                                const PriorSpec& prior, const McmcConfig& cfg) {
  if (s < 1) throw std::invalid_argument("sample_posterior: need at least one sample");
  const double tau = prior.horseshoe_scale;
  // u = (ln sigma_w^-2, ln sigma_noise2); the second prior has no finite mode,
  // so walkers start at the scale parameter's natural location ln(tau^2)
  const Vec init_center = {prior.lognormal_mean, 2.0 * std::log(tau)};
  const auto target = [&](const Vec& u) {
    const BLRHyper theta{std::exp(-u[0]), std::exp(u[1])};
    const double horseshoe = std::log(std::log1p(2.0 * tau * tau / theta.sigma_noise2));
    return log_marginal_likelihood(stats, theta) +
           normal_lpdf(u[0], prior.lognormal_mean, prior.lognormal_std) + horseshoe +
           u[1];  // Jacobian of sigma_noise2 = exp(u2)
  };
  const std::vector<Vec> draws = ensemble_sample(target, 2, init_center, cfg, s, seed);
  HyperSampleSet out;
  out.samples.reserve(draws.size());
  for (const Vec& u : draws) {
    HyperSample hs;
    hs.theta = BLRHyper{std::exp(-u[0]), std::exp(u[1])};
    hs.log_post = log_posterior(hs.theta, stats, prior);
    hs.posterior = fit(stats, hs.theta);
    out.samples.push_back(std::move(hs));
  }
  return out;
}

HyperSampleSet sample_posterior(const Mat& phi, const Vec& y, int s, std::uint64_t seed,
                                const PriorSpec& prior, const McmcConfig& cfg) {
  return sample_posterior(design_stats(phi, y), s, seed, prior, cfg);
}

}  // namespace graphbo
