#pragma once

#include <functional>

#include "graphbo/graph.hpp"
#include "graphbo/mcmc.hpp"
#include "graphbo/rng.hpp"
#include "graphbo/surrogate.hpp"

namespace graphbo {

double normal_cdf(double z);
double normal_pdf(double z);

// (mu - y_max) * Phi(z) + sigma * phi(z) with z = (mu - y_max) / sigma;
// the sigma -> 0 limit is max(mu - y_max, 0). Never negative.
double expected_improvement(double mu, double sigma, double y_max);

// Sum of EI across hyperparameter samples (unnormalized; only the argmax is
// consumed). phi is the basis feature vector of one graph.
double integrated_ei_phi(const Vec& phi, const HyperSampleSet& samples, double y_max);
double integrated_ei(const AttributedGraph& g, const SurrogateParams& params,
                     const SurrogateConfig& cfg, const HyperSampleSet& samples, double y_max);

struct SelectionResult {
  int pool_index = -1;
  int graph_id = -1;
  double acquisition = 0.0;
  int scored = 0;  // distinct candidates scored
};

// Scores min(candidate_budget, #unevaluated) distinct unevaluated graphs
// (uniformly subsampled when over budget) and returns the acquisition argmax;
// exact ties are broken uniformly at random. phi_of maps a pool index to that
// graph's basis features. Throws when every graph is already evaluated.
SelectionResult select_next(const GraphPool& pool, const std::vector<bool>& evaluated,
                            const std::function<const Vec&(int)>& phi_of,
                            const HyperSampleSet& samples, double y_max, int candidate_budget,
                            Rng& rng);

// Pool-size-dependent default: exhaustive scoring up to 2048 graphs, else 1024.
int default_candidate_budget(int pool_size);

}  // namespace graphbo
