#pragma once

#include <functional>

#include "msde/geometry.hpp"

namespace msde {

constexpr double kTauMin = 1e-4;

// Heat kernel densities on the unit spheres at geodesic angle phi after time tau, i.e. the
// transition density of the process with generator Delta (not Delta / 2).
double heat_kernel_s2(double phi, double tau);
double heat_kernel_s3(double phi, double tau);

// E[cost(phi(X_T))] for Brownian motion with generator diffusion * Delta on the sphere of the
// given radius started at a pole; tau = diffusion * T / radius^2.
double heat_expectation_s2(const std::function<double(double)>& cost, double T, double diffusion,
                           double radius);
double heat_expectation_s3(const std::function<double(double)>& cost, double T, double diffusion,
                           double radius);

// Haar / normalized uniform draw on Sphere, SO(N), Stiefel or Grassmann.
Mat sample_uniform(const Manifold& m, RngStream& rng);

// sum_j <v_j, ehess(v^j)> - <egrad, Gamma(v_j, v^j)> over a g-dual tangent frame.
double laplacian_frame_oracle(const Manifold& m, const Mat& x, const Mat& egrad,
                              const HessianOp& ehess);

}  // namespace msde
