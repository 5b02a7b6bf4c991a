#include "msde/simulation.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "msde/geometry.hpp"

namespace msde {

void SimulationConfig::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("simulation: T must be positive");
  if (n_div < 1) throw ParameterError("simulation: n_div must be >= 1");
  if (n_path < 1) throw ParameterError("simulation: n_path must be >= 1");
  if (state_norm_cap && !(*state_norm_cap > 0.0))
    throw ParameterError("simulation: state_norm_cap must be positive");
}

void summarize(SampleSet& s) {
  s.n_path = static_cast<long>(s.samples.size());
  s.mean = 0.0;
  s.stderr_ = 0.0;
  if (s.samples.empty()) return;
  double sum = 0.0;
  for (double v : s.samples) sum += v;
  s.mean = sum / s.n_path;
  if (s.n_path < 2) return;
  double ss = 0.0;
  for (double v : s.samples) ss += (v - s.mean) * (v - s.mean);
  s.stderr_ = std::sqrt(ss / (s.n_path - 1)) / std::sqrt(static_cast<double>(s.n_path));
}

int resolve_threads(int requested) {
  int n = requested;
  if (n <= 0) {
    n = 0;
    if (const char* env = std::getenv("MANIFOLD_SDE_THREADS")) n = std::atoi(env);
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  }
  return n < 1 ? 1 : n;
}

SdeSpec brownian_for(IntegratorId id, ManifoldHandle m, double scale) {
  return brownian_sde(std::move(m), integrator_form(id), scale);
}

namespace {

struct PathOutcome {
  std::vector<double> values;
  bool divergent = false;
  long retries = 0;
};

PathOutcome run_path(const SimulationConfig& cfg, const Integrator& integ,
                     const std::vector<CostFunctional>& costs, const Mat& x0, long path) {
  RngStream rng(cfg.seed, static_cast<std::uint64_t>(path));
  const double h = cfg.h();
  PathOutcome out;
  out.values.assign(costs.size(), 0.0);
  Mat x = x0;
  for (int j = 0; j < cfg.n_div; ++j) {
    StepResult r;
    try {
      r = integ.advance(x, j * h, h, rng);
    } catch (const StepFailure& e) {
      throw StepFailure(std::string(e.what()) + " [path " + std::to_string(path) + ", step " +
                            std::to_string(j) + "]",
                        path, j);
    }
    out.retries += r.retries;
    x = std::move(r.next);
    for (std::size_t c = 0; c < costs.size(); ++c)
      if (costs[c].running) out.values[c] += costs[c].running(x, j * h) * h;
    if (cfg.state_norm_cap && !(x.norm() <= *cfg.state_norm_cap)) {
      out.divergent = true;
      return out;
    }
  }
  for (std::size_t c = 0; c < costs.size(); ++c)
    if (costs[c].terminal) out.values[c] += costs[c].terminal(x, cfg.T);
  return out;
}

}  // namespace

std::vector<SampleSet> simulate_multi(const SimulationConfig& cfg, ManifoldHandle m,
                                      const SdeSpec& sde, const std::vector<CostFunctional>& costs,
                                      const Mat& x0) {
  cfg.validate();
  require_on_manifold(*m, x0, "simulate");
  const Integrator integ(cfg.integrator, m, sde, cfg.options);

  std::vector<PathOutcome> outcomes(cfg.n_path);
  std::atomic<long> next{0};
  std::mutex fail_mu;
  std::optional<StepFailure> failure;
  std::exception_ptr other;

  auto worker = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= cfg.n_path) return;
      try {
        outcomes[i] = run_path(cfg, integ, costs, x0, i);
      } catch (const StepFailure& e) {
        std::lock_guard<std::mutex> lock(fail_mu);
        if (!failure || e.path() < failure->path()) failure.emplace(e);
      } catch (...) {
        std::lock_guard<std::mutex> lock(fail_mu);
        if (!other) other = std::current_exception();
      }
    }
  };

  const int nt = std::min(resolve_threads(cfg.threads), cfg.n_path);
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) throw *failure;
  if (other) std::rethrow_exception(other);

  std::vector<SampleSet> sets(costs.size());
  for (long i = 0; i < cfg.n_path; ++i) {
    for (std::size_t c = 0; c < costs.size(); ++c) {
      SampleSet& s = sets[c];
      s.total_retries += outcomes[i].retries;
      if (outcomes[i].divergent) {
        s.divergent.push_back(i);
      } else {
        s.samples.push_back(outcomes[i].values[c]);
        s.path_index.push_back(i);
      }
    }
  }
  for (auto& s : sets) summarize(s);
  return sets;
}

SampleSet simulate(const SimulationConfig& cfg, ManifoldHandle m, const SdeSpec& sde,
                   const CostFunctional& cost, const Mat& x0) {
  return simulate_multi(cfg, std::move(m), sde, {cost}, x0).front();
}

ComparisonTable compare_methods(const SimulationConfig& cfg,
                                const std::vector<IntegratorId>& integrators,
                                const std::vector<int>& n_divs, ManifoldHandle m,
                                const SdeFactory& sde, const CostFunctional& cost, const Mat& x0) {
  ComparisonTable table;
  for (IntegratorId id : integrators) {
    for (int nd : n_divs) {
      SimulationConfig c = cfg;
      c.integrator = id;
      c.n_div = nd;
      c.seed = cfg.seed + table.cells.size();
      SampleSet s = simulate(c, m, sde(id), cost, x0);
      table.cells.push_back({id, nd, s.mean, s.stderr_, s.n_path,
                             static_cast<long>(s.divergent.size())});
    }
  }
  for (std::size_t a = 0; a < table.cells.size(); ++a) {
    for (std::size_t b = a + 1; b < table.cells.size(); ++b) {
      const auto& A = table.cells[a];
      const auto& B = table.cells[b];
      const double d = std::abs(A.mean - B.mean);
      const double se = std::hypot(A.stderr_, B.stderr_);
      table.max_abs_diff = std::max(table.max_abs_diff, d);
      const double z = se > 0.0 ? d / se : (d > 0.0 ? INFINITY : 0.0);
      table.max_z = std::max(table.max_z, z);
    }
  }
  table.consistent = table.max_z <= 3.0;
  table.unstable = !table.consistent && !m->is_compact();
  return table;
}

std::vector<SampleSet> uniform_limit_run(const SimulationConfig& cfg, ManifoldHandle m,
                                         const std::vector<CostFunctional>& costs, double scale) {
  if (!m->is_compact())
    throw PreconditionError("uniform_limit_run: " + m->name() + " is not compact");
  return simulate_multi(cfg, m, brownian_for(cfg.integrator, m, scale), costs, m->base_point());
}

}  // namespace msde
