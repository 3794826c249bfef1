#include "graphbo/acquisition.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace graphbo {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double expected_improvement(double mu, double sigma, double y_max) {
  if (sigma < 0.0) throw std::invalid_argument("expected_improvement: sigma must be >= 0");
  const double diff = mu - y_max;
  if (sigma == 0.0) return diff > 0.0 ? diff : 0.0;
  const double z = diff / sigma;
  const double ei = diff * normal_cdf(z) + sigma * normal_pdf(z);
  return ei > 0.0 ? ei : 0.0;
}

double integrated_ei_phi(const Vec& phi, const HyperSampleSet& samples, double y_max) {
  if (samples.samples.empty()) throw std::invalid_argument("integrated_ei: no samples");
  double acc = 0.0;
  for (const HyperSample& s : samples.samples) {
    const Prediction p = predict(s.posterior, phi);
    acc += expected_improvement(p.mu, std::sqrt(p.var), y_max);
  }
  return acc;
}

double integrated_ei(const AttributedGraph& g, const SurrogateParams& params,
                     const SurrogateConfig& cfg, const HyperSampleSet& samples, double y_max) {
  const ForwardResult fr = forward(g, params, cfg, ForwardMode::predict);
  return integrated_ei_phi(fr.phi, samples, y_max);
}

int default_candidate_budget(int pool_size) { return pool_size <= 2048 ? pool_size : 1024; }

SelectionResult select_next(const GraphPool& pool, const std::vector<bool>& evaluated,
                            const std::function<const Vec&(int)>& phi_of,
                            const HyperSampleSet& samples, double y_max, int candidate_budget,
                            Rng& rng) {
  if (evaluated.size() != pool.graphs.size())
    throw std::invalid_argument("select_next: evaluated mask length mismatch");
  std::vector<int> candidates;
  for (std::size_t i = 0; i < pool.graphs.size(); ++i)
    if (!evaluated[i]) candidates.push_back(static_cast<int>(i));
  if (candidates.empty())
    throw std::runtime_error("select_next: pool exhausted, nothing left to evaluate");
  if (candidate_budget < 1) throw std::invalid_argument("select_next: budget must be >= 1");
  if (candidate_budget < static_cast<int>(candidates.size())) {
    rng.shuffle(candidates);
    candidates.resize(static_cast<std::size_t>(candidate_budget));
  }

  double best = -1.0;
  std::vector<int> ties;
  for (int idx : candidates) {
    const double score = integrated_ei_phi(phi_of(idx), samples, y_max);
    if (score > best) {
      best = score;
      ties.assign(1, idx);
    } else if (score == best) {
      ties.push_back(idx);
    }
  }
  const int chosen =
      ties[static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(ties.size())))];
  SelectionResult out;
  out.pool_index = chosen;
  out.graph_id = pool.graphs[static_cast<std::size_t>(chosen)].id;
  out.acquisition = best;
  out.scored = static_cast<int>(candidates.size());
  return out;
}

}  // namespace graphbo
