#pragma once

#include <functional>
#include <string>
#include <vector>

#include "msde/manifold.hpp"

namespace msde {

using ScalarFn = std::function<double(const Mat&, double)>;

// Running cost g (optional) integrated as a right-point Riemann sum plus terminal cost f.
struct CostFunctional {
  std::string id;
  ScalarFn running;
  ScalarFn terminal;
};

// Geodesic angle from e_1: arccos(x_1 / |x|).
double polar_angle(const Mat& x);

// Registered ids: phi_5_2, phi_32_52, abs11, sq11, sum_abs, exp_half_sum, inv_sqrt_sum,
// spd_running. With lift_projector the cost is evaluated on Y Y^T (Grassmann representatives).
CostFunctional make_cost(const std::string& id, bool lift_projector = false);
// Picks lift_projector for Grassmann manifolds.
CostFunctional make_cost_for(const std::string& id, const Manifold& m);
const std::vector<std::string>& cost_names();

// f o (X -> X^{-1}) for square matrix groups.
CostFunctional inverse_cost(CostFunctional c);

}  // namespace msde
