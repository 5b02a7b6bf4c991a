#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

#include "msde/config.hpp"
#include "msde/costs.hpp"
#include "msde/oracles.hpp"
#include "msde/simulation.hpp"

namespace msde {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string summary_path(const std::string& out) {
  const std::string ext = ".csv";
  if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0)
    return out.substr(0, out.size() - ext.size()) + ".summary.csv";
  return out + ".summary.csv";
}

constexpr const char* kSummaryHeader = "metric,mean,stderr,n_path,n_div,T,integrator,manifold";

struct SummaryRow {
  std::string metric;
  double mean = 0.0;
  double stderr_ = 0.0;
  long n_path = 0;
  int n_div = 0;
  double T = 0.0;
  std::string integrator;
};

class SummaryWriter {
 public:
  SummaryWriter(const RunConfig& c, std::string manifold) : c_(c), manifold_(std::move(manifold)) {}
  void add(SummaryRow r) { rows_.push_back(std::move(r)); }

  void emit(std::ostream& os) const {
    os << kSummaryHeader << '\n';
    for (const auto& r : rows_)
      os << csv_field(r.metric) << ',' << format_double(r.mean) << ',' << format_double(r.stderr_)
         << ',' << r.n_path << ',' << r.n_div << ',' << format_double(r.T) << ','
         << csv_field(r.integrator) << ',' << csv_field(manifold_) << '\n';
  }

  void write(std::ostream& out) const {
    emit(out);
    if (c_.out.empty()) return;
    std::ofstream f(summary_path(c_.out), std::ios::binary);
    if (!f) throw ConfigError("cannot write " + summary_path(c_.out));
    emit(f);
  }

 private:
  const RunConfig& c_;
  std::string manifold_;
  std::vector<SummaryRow> rows_;
};

void write_paths(const std::string& path, const SampleSet& s) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << "path_index,value\n";
  for (std::size_t i = 0; i < s.samples.size(); ++i)
    f << s.path_index[i] << ',' << format_double(s.samples[i]) << '\n';
}

SimulationConfig sim_config(const RunConfig& c, IntegratorId id, int n_div) {
  SimulationConfig s;
  s.T = *c.T;
  s.n_div = n_div;
  s.n_path = static_cast<int>(*c.n_path);
  s.seed = *c.seed;
  s.integrator = id;
  s.options.r = c.r;
  s.state_norm_cap = c.norm_cap;
  return s;
}

int run_validate(const RunConfig& c, std::ostream& out) {
  ManifoldHandle m = make_manifold(c.manifold, c.params);
  RngStream rng(c.seed.value_or(0), 0);
  double idem = 0, adj = 0, gsym = 0, compat = 0, soo = 0, ito = 0, strat = 0;
  for (int k = 0; k < 10; ++k) {
    const Mat x = m->random_point(rng);
    const ProjectionReport pr = check_projection(*m, x, 5, rng);
    idem = std::max(idem, pr.idempotence);
    adj = std::max(adj, pr.self_adjointness);
    const Mat xi = m->random_tangent(x, rng), eta = m->random_tangent(x, rng);
    gsym = std::max(gsym, (m->christoffel(x, xi, eta) - m->christoffel(x, eta, xi)).cwiseAbs().maxCoeff());
    compat = std::max(compat, check_metric_compatibility(*m, x, 1e-5, 3, rng));
    soo = std::max(soo, soo_residual(*m, x, brownian_soo(*m, x)));
    ito = std::max(ito, (m->ito_drift(x) - brownian_ito_drift(*m, x)).cwiseAbs().maxCoeff());
    strat = std::max(strat, (m->strat_drift(x) - brownian_strat_drift(*m, x)).cwiseAbs().maxCoeff());
  }
  struct Check {
    const char* name;
    double value;
    double limit;
  };
  const Check checks[] = {{"projection_idempotence", idem, 1e-9},
                          {"projection_self_adjointness", adj, 1e-9},
                          {"christoffel_symmetry", gsym, 1e-10},
                          {"metric_compatibility", compat, 1e-5},
                          {"soo_residual", soo, 1e-8},
                          {"ito_drift", ito, 1e-9},
                          {"stratonovich_drift", strat, 1e-5}};
  bool ok = true;
  out << "check,max_residual,threshold,status\n";
  for (const auto& ch : checks) {
    const bool pass = ch.value < ch.limit;
    ok = ok && pass;
    out << ch.name << ',' << format_double(ch.value) << ',' << format_double(ch.limit) << ','
        << (pass ? "PASS" : "FAIL") << '\n';
  }
  out << m->name() << (ok ? ": all checks passed\n" : ": validation failed\n");
  return ok ? 0 : 1;
}

int run_simulate(const RunConfig& c, std::ostream& out) {
  ManifoldHandle m = make_manifold(c.manifold, c.params);
  const IntegratorId id = c.integrators.front();
  const SimulationConfig s = sim_config(c, id, c.n_div.front());
  const CostFunctional cost = make_cost_for(c.costs.front(), *m);
  const SampleSet set =
      simulate(s, m, brownian_for(id, m, c.brownian_scale()), cost, m->base_point());
  if (!c.out.empty()) write_paths(c.out, set);
  SummaryWriter w(c, m->name());
  w.add({cost.id, set.mean, set.stderr_, set.n_path, s.n_div, s.T, integrator_name(id)});
  w.write(out);
  if (!set.divergent.empty())
    out << set.divergent.size() << " divergent paths excluded (norm cap)\n";
  return 0;
}

int run_compare(const RunConfig& c, std::ostream& out) {
  ManifoldHandle m = make_manifold(c.manifold, c.params);
  std::vector<IntegratorId> ids = c.integrators;
  if (ids.empty())
    ids = {IntegratorId::ItoEm, IntegratorId::StratHeun, IntegratorId::GeodesicWalk,
           IntegratorId::RetractiveEm};
  const CostFunctional cost = make_cost_for(c.costs.front(), *m);
  const double scale = c.brownian_scale();
  const ComparisonTable t = compare_methods(
      sim_config(c, ids.front(), c.n_div.front()), ids, c.n_div, m,
      [&](IntegratorId id) { return brownian_for(id, m, scale); }, cost, m->base_point());
  SummaryWriter w(c, m->name());
  for (const auto& cell : t.cells)
    w.add({cost.id, cell.mean, cell.stderr_, cell.n_path, cell.n_div, *c.T,
           integrator_name(cell.integrator)});
  w.write(out);
  out << "max_abs_diff=" << format_double(t.max_abs_diff) << " max_z=" << format_double(t.max_z)
      << " consistent=" << (t.consistent ? "yes" : "no")
      << (t.unstable ? " (unstable: noncompact manifold)" : "") << '\n';
  return 0;
}

int run_uniform(const RunConfig& c, std::ostream& out) {
  ManifoldHandle m = make_manifold(c.manifold, c.params);
  const IntegratorId id = c.integrators.front();
  const SimulationConfig s = sim_config(c, id, c.n_div.front());
  std::vector<CostFunctional> costs;
  for (const auto& name : c.costs) costs.push_back(make_cost_for(name, *m));
  const auto sets = uniform_limit_run(s, m, costs, c.brownian_scale());

  // Direct sampling on streams disjoint from the path streams.
  std::vector<SampleSet> direct(costs.size());
  for (long i = 0; i < *c.n_path; ++i) {
    RngStream rng(*c.seed, (std::uint64_t{1} << 32) + static_cast<std::uint64_t>(i));
    const Mat x = sample_uniform(*m, rng);
    for (std::size_t k = 0; k < costs.size(); ++k) {
      direct[k].samples.push_back(costs[k].terminal(x, s.T));
      direct[k].path_index.push_back(i);
    }
  }
  SummaryWriter w(c, m->name());
  for (std::size_t k = 0; k < costs.size(); ++k) {
    summarize(direct[k]);
    w.add({costs[k].id + ":brownian", sets[k].mean, sets[k].stderr_, sets[k].n_path, s.n_div, s.T,
           integrator_name(id)});
    w.add({costs[k].id + ":uniform", direct[k].mean, direct[k].stderr_, direct[k].n_path, 0, 0.0,
           "direct"});
  }
  w.write(out);
  return 0;
}

int run_heat(const RunConfig& c, std::ostream& out) {
  const std::string& id = c.costs.front();
  auto cost = [&id](double phi) {
    return id == "phi_5_2" ? std::pow(phi, 2.5) : std::pow(phi, 1.5) + std::pow(phi, 2.5);
  };
  const double v = c.params.n == 3 ? heat_expectation_s2(cost, *c.T, c.diffusion, c.radius)
                                   : heat_expectation_s3(cost, *c.T, c.diffusion, c.radius);
  SummaryWriter w(c, make_sphere(c.params.n)->name());
  w.add({id, v, 0.0, 0, 0, *c.T, "heat-kernel"});
  w.write(out);
  return 0;
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    switch (c.command) {
      case Command::Validate: return run_validate(c, out);
      case Command::Simulate: return run_simulate(c, out);
      case Command::Compare: return run_compare(c, out);
      case Command::Uniform: return run_uniform(c, out);
      case Command::HeatKernel: return run_heat(c, out);
    }
  } catch (const StepFailure& e) {
    err << "step failure: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 3;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return 3;
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace msde
