#pragma once

#include "graphbo/mat.hpp"

namespace graphbo {

struct BLRHyper {
  double sigma_w2 = 1.0;     // prior weight variance
  double sigma_noise2 = 1.0; // observation noise variance
};
void check_hyper(const BLRHyper& theta);

// Sufficient statistics of a design: gram = sum_i phi_i phi_i^T, phi_y =
// sum_i y_i phi_i, yty = y^T y. Computing them once makes each hyperparameter
// evaluation O(M^3) instead of O(M^2 N).
struct DesignStats {
  Mat gram;   // M x M
  Vec phi_y;  // M
  double yty = 0.0;
  int n = 0;
};
// phi holds one observation per row (N x M)
DesignStats design_stats(const Mat& phi, const Vec& y);

// Posterior over linear weights on the basis features, solved through the
// M x M system K = sigma_noise^-2 * gram + sigma_w^-2 * I.
struct BLRPosterior {
  BLRHyper theta;
  int m = 0;
  int n = 0;
  Cholesky chol_k;
  Vec kinv_phi_y;
  double logdet_k = 0.0;
};

BLRPosterior fit(const DesignStats& stats, const BLRHyper& theta);
BLRPosterior fit(const Mat& phi, const Vec& y, const BLRHyper& theta);

struct Prediction {
  double mu = 0.0;
  double var = 0.0;  // includes the noise floor: var >= sigma_noise2
};
Prediction predict(const BLRPosterior& post, const Vec& phi_star);

// Evidence ln p(y | theta), equal to the N-dimensional Gaussian log-density
// ln N(y; 0, sigma_w2 * Phi^T Phi + sigma_noise2 * I) by the matrix
// determinant lemma, but computed through the M x M system.
double log_marginal_likelihood(const DesignStats& stats, const BLRHyper& theta);
double log_marginal_likelihood(const Mat& phi, const Vec& y, const BLRHyper& theta);

}  // namespace graphbo
