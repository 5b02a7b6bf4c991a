#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msde/integrators.hpp"
#include "msde/manifolds.hpp"

namespace msde {

enum class Command { Validate, Simulate, Compare, Uniform, HeatKernel };

std::string command_name(Command c);

// Keys: command, manifold, n, p, N, alpha0, alpha1, metric_seed, integrator, T, n_div, n_path,
// seed, r, cost, diffusion, radius, norm_cap, out. integrator, n_div and cost take
// comma-separated lists for the compare and uniform commands.
struct RunConfig {
  Command command = Command::Simulate;
  std::string manifold;
  ManifoldParams params;
  std::vector<IntegratorId> integrators;
  std::optional<double> T;
  std::vector<int> n_div;
  std::optional<long> n_path;
  std::optional<std::uint64_t> seed;
  double r = 1.0;
  std::vector<std::string> costs;
  // Generator diffusion * Delta on the sphere of the given radius; the defaults give Delta / 2.
  double diffusion = 0.5;
  double radius = 1.0;
  std::optional<double> norm_cap;
  std::string out;

  // Scale s of the simulated generator s Delta / 2 on the embedded (unit) manifold.
  double brownian_scale() const { return 2.0 * diffusion / (radius * radius); }
};

// Throws ConfigError with the offending line number or key.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides = {});
// Canonical key=value text; parse_config(normalized_config(c)) reproduces it exactly.
std::string normalized_config(const RunConfig& c);

// Shortest round-trip decimal form, independent of locale.
std::string format_double(double v);

// Executes the command. Exit codes: 0 ok, 1 validation failure, 2 step failure,
// 3 configuration or parameter error.
int run(const RunConfig& c, std::ostream& out, std::ostream& err);

}  // namespace msde
