#pragma once

#include <string>
#include <vector>

#include "msde/geometry.hpp"

namespace msde {

struct WienerIncrement {
  Vec raw;
  Vec truncated;
  double h = 0.0;
  double r = 1.0;
};

// A_h = sqrt(2 r |ln h|); requires 0 < h < 1 and r >= 1.
double truncation_bound(double h, double r);
WienerIncrement truncate_increment(Vec raw, double h, double r);
WienerIncrement truncated_increment(RngStream& rng, Eigen::Index k, double h, double r);

struct StepResult {
  Mat next;
  int retries = 0;
  double residual = 0.0;
};

// The pure steppers take the noise sample shaped noise_rows x noise_cols.

// pi(x + h mu + sqrt(h) sigma_o zeta); Ito form.
Mat step_ito_projected(const Manifold& m, const SdeSpec& sde, const Mat& x, double t, double h,
                       const Mat& zeta);

// pi(x + h mu_S + sqrt(h)/2 (sigma_o(x) + sigma_o(x + sqrt(h) sigma_o(x) zeta)) zeta).
Mat step_stratonovich_heun_projected(const Manifold& m, const SdeSpec& sde, const Mat& x, double t,
                                     double h, const Mat& zeta);

// mu - 1/2 sum_j r2(x, 0; sigma_o w_j, sigma_o w_j) over the noise basis.
Mat mu_retraction_adjusted(const Manifold& m, const SdeSpec& sde, const TangentRetraction& r,
                           const Mat& x, double t);

// r(x, sqrt(h) sigma_o zeta + h mu_r).
Mat step_retractive_em(const Manifold& m, const SdeSpec& sde, const TangentRetraction& r,
                       const Mat& x, double t, double h, const Mat& zeta);

// r(x, sqrt(h d c / <sigma_o xi, sigma_o xi>_g) sigma_o xi) with c the noise metric scale.
// experimental_drift adds h mu_r to the tangent move.
Mat step_geodesic_walk(const Manifold& m, const SdeSpec& sde, const TangentRetraction& r,
                       const Mat& x, double t, double h, const Mat& xi,
                       bool experimental_drift = false);

struct GeodesicState {
  Mat x;
  Mat v;
};

// Classical RK4 on (x, v)' = (v, -Gamma(x; v, v)); after each step x is retracted with the
// tubular retraction and v projected onto the new tangent space.
GeodesicState integrate_geodesic_rk4_projected(const Manifold& m, const Mat& x, const Mat& v,
                                               double T, int steps);

// Exponential map evaluated by integrate_geodesic_rk4_projected over unit time.
class Rk4ExpRetraction : public TangentRetraction {
 public:
  Rk4ExpRetraction(ManifoldHandle m, int substeps) : m_(std::move(m)), substeps_(substeps) {}
  Mat retract(const Mat& x, const Mat& v) const override;
  Mat second_derivative(const Mat& x, const Mat& v, const Mat& w) const override;

 private:
  ManifoldHandle m_;
  int substeps_;
};

enum class IntegratorId { ItoEm, StratHeun, GeodesicWalk, RetractiveEm, Rk4Geodesic };

IntegratorId parse_integrator(const std::string& id);
std::string integrator_name(IntegratorId id);
const std::vector<std::string>& integrator_names();
// Form of SdeSpec the integrator consumes.
SdeForm integrator_form(IntegratorId id);

struct IntegratorOptions {
  double r = 1.0;
  int max_retries = 5;
  double feasibility_tol = 1e-8;
  bool experimental_drift = false;
  int rk4_substeps = 4;
};

class Integrator {
 public:
  // retraction defaults to second_order_retraction(m) (or the RK4 exponential map).
  Integrator(IntegratorId id, ManifoldHandle m, SdeSpec sde, IntegratorOptions opts = {},
             RetractionHandle retraction = nullptr);

  IntegratorId id() const { return id_; }
  const Manifold& manifold() const { return *m_; }
  const SdeSpec& sde() const { return sde_; }
  const IntegratorOptions& options() const { return opts_; }

  // Draws the noise (truncated unless the scheme normalizes its step) and applies the scheme.
  Mat draw_noise(RngStream& rng, double h) const;
  Mat step_with_noise(const Mat& x, double t, double h, const Mat& noise) const;

  // Resamples on domain failures or infeasible results, up to max_retries times.
  StepResult advance(const Mat& x, double t, double h, RngStream& rng) const;

 private:
  IntegratorId id_;
  ManifoldHandle m_;
  SdeSpec sde_;
  IntegratorOptions opts_;
  RetractionHandle r_;
};

}  // namespace msde
