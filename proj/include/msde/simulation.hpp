#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "msde/costs.hpp"
#include "msde/integrators.hpp"

namespace msde {

struct SimulationConfig {
  double T = 1.0;
  int n_div = 100;
  int n_path = 100;
  std::uint64_t seed = 0;
  IntegratorId integrator = IntegratorId::ItoEm;
  IntegratorOptions options;
  // Worker count; 0 reads MANIFOLD_SDE_THREADS (0 or unset = hardware concurrency).
  int threads = 0;
  // Paths whose state Frobenius norm exceeds the cap are stopped and reported as divergent.
  std::optional<double> state_norm_cap;

  double h() const { return T / n_div; }
  void validate() const;
};

struct SampleSet {
  std::vector<double> samples;     // completed paths, ordered by path index
  std::vector<long> path_index;    // parallel to samples
  std::vector<long> divergent;     // paths stopped by the norm cap
  double mean = 0.0;
  double stderr_ = 0.0;
  long n_path = 0;                 // samples.size()
  long total_retries = 0;
};

// Fills mean / stderr_ / n_path from samples.
void summarize(SampleSet& s);

// Worker count after applying MANIFOLD_SDE_THREADS when requested == 0.
int resolve_threads(int requested);

// Riemannian Brownian motion in the form the integrator consumes.
SdeSpec brownian_for(IntegratorId id, ManifoldHandle m, double scale = 1.0);

SampleSet simulate(const SimulationConfig& cfg, ManifoldHandle m, const SdeSpec& sde,
                   const CostFunctional& cost, const Mat& x0);
// Several costs on the same paths.
std::vector<SampleSet> simulate_multi(const SimulationConfig& cfg, ManifoldHandle m,
                                      const SdeSpec& sde, const std::vector<CostFunctional>& costs,
                                      const Mat& x0);

struct ComparisonCell {
  IntegratorId integrator;
  int n_div = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  long n_path = 0;
  long divergent = 0;
};

struct ComparisonTable {
  std::vector<ComparisonCell> cells;
  double max_abs_diff = 0.0;
  // max over pairs of |mean_a - mean_b| / sqrt(se_a^2 + se_b^2)
  double max_z = 0.0;
  bool consistent = true;  // max_z <= 3
  bool unstable = false;   // inconsistent on a noncompact manifold
};

using SdeFactory = std::function<SdeSpec(IntegratorId)>;

// One simulate() per (integrator, n_div); cfg.integrator and cfg.n_div are overridden and cell k
// uses seed cfg.seed + k, so cells are statistically independent.
ComparisonTable compare_methods(const SimulationConfig& cfg,
                                const std::vector<IntegratorId>& integrators,
                                const std::vector<int>& n_divs, ManifoldHandle m,
                                const SdeFactory& sde, const CostFunctional& cost, const Mat& x0);

// Brownian motion from the base point up to cfg.T (40 by convention); compact manifolds only.
std::vector<SampleSet> uniform_limit_run(const SimulationConfig& cfg, ManifoldHandle m,
                                         const std::vector<CostFunctional>& costs,
                                         double scale = 1.0);

}  // namespace msde
