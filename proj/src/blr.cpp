#include "graphbo/blr.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "graphbo/kernels.hpp"

namespace graphbo {

void check_hyper(const BLRHyper& theta) {
  if (!(theta.sigma_w2 > 0.0) || !std::isfinite(theta.sigma_w2) ||
      !(theta.sigma_noise2 > 0.0) || !std::isfinite(theta.sigma_noise2))
    throw std::invalid_argument("hyperparameters must be strictly positive and finite");
}

DesignStats design_stats(const Mat& phi, const Vec& y) {
  if (phi.rows < 1) throw std::invalid_argument("design_stats: need at least one observation");
  if (static_cast<int>(y.size()) != phi.rows)
    throw std::invalid_argument("design_stats: target length mismatch");
  if (!phi.all_finite()) throw std::invalid_argument("design_stats: non-finite features");
  DesignStats s;
  s.n = phi.rows;
  s.gram = Mat(phi.cols, phi.cols);
  matmul_tn_acc(phi, phi, s.gram);
  s.phi_y.assign(static_cast<std::size_t>(phi.cols), 0.0);
  for (int i = 0; i < phi.rows; ++i)
    kernels::active().axpy(phi.cols, y[static_cast<std::size_t>(i)], phi.row(i), s.phi_y.data());
  s.yty = dot(y, y);
  return s;
}

namespace {

Mat assemble_k(const DesignStats& stats, const BLRHyper& theta) {
  Mat k = stats.gram;
  const double inv_noise = 1.0 / theta.sigma_noise2;
  scale_inplace(k, inv_noise);
  const double inv_w = 1.0 / theta.sigma_w2;
  for (int i = 0; i < k.rows; ++i) k.at(i, i) += inv_w;
  return k;
}

Cholesky factorize_k(const Mat& k) {
  try {
    return cholesky_spd(k);
  } catch (const std::runtime_error&) {
    throw std::runtime_error(
        "posterior system is numerically non-SPD; a larger sigma_noise2 would regularize it");
  }
}

}  // namespace

BLRPosterior fit(const DesignStats& stats, const BLRHyper& theta) {
  check_hyper(theta);
  BLRPosterior post;
  post.theta = theta;
  post.m = stats.gram.rows;
  post.n = stats.n;
  const Mat k = assemble_k(stats, theta);
  post.chol_k = factorize_k(k);
  post.logdet_k = post.chol_k.logdet;
  post.kinv_phi_y = solve_cholesky(post.chol_k, stats.phi_y);
  return post;
}

BLRPosterior fit(const Mat& phi, const Vec& y, const BLRHyper& theta) {
  return fit(design_stats(phi, y), theta);
}

Prediction predict(const BLRPosterior& post, const Vec& phi_star) {
  if (static_cast<int>(phi_star.size()) != post.m)
    throw std::invalid_argument("predict: feature length mismatch");
  Prediction p;
  p.mu = dot(phi_star, post.kinv_phi_y) / post.theta.sigma_noise2;
  p.var = quad_form_inv(post.chol_k, phi_star) + post.theta.sigma_noise2;
  return p;
}

double log_marginal_likelihood(const DesignStats& stats, const BLRHyper& theta) {
  check_hyper(theta);
  const Mat k = assemble_k(stats, theta);
  const Cholesky chol = factorize_k(k);
  const double inv_noise = 1.0 / theta.sigma_noise2;
  const double fit_term = inv_noise * stats.yty -
                          inv_noise * inv_noise * quad_form_inv(chol, stats.phi_y);
  return -0.5 * (fit_term + chol.logdet + stats.gram.rows * std::log(theta.sigma_w2) +
                 stats.n * std::log(2.0 * std::numbers::pi * theta.sigma_noise2));
}

double log_marginal_likelihood(const Mat& phi, const Vec& y, const BLRHyper& theta) {
  return log_marginal_likelihood(design_stats(phi, y), theta);
}

}  // namespace graphbo
