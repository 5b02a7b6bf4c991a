#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "msde/manifold.hpp"

namespace msde {

constexpr double kOnManifoldTol = 1e-9;

// Max-abs constraint residual; infinity when x leaves the manifold's open domain.
double constraint_residual(const Manifold& m, const Mat& x);
void require_on_manifold(const Manifold& m, const Mat& x, const char* op);

// Drift A and symmetric diffusion operator M (ambient_dim x ambient_dim, column-major vec).
struct SecondOrderTangent {
  Mat A;
  Mat M;
};

struct ProjectionReport {
  double idempotence = 0.0;
  double self_adjointness = 0.0;  // asymmetry of Pi g^{-1}
  bool pass = false;
};

ProjectionReport check_projection(const Manifold& m, const Mat& x, int trials, RngStream& rng);

// Max over trials of |D_xi <Y,Y>_g - 2 <Y, D_xi Y + Gamma(xi, Y)>_g| for Y(y) = Pi(y) w.
double check_metric_compatibility(const Manifold& m, const Mat& x, double step, int trials,
                                  RngStream& rng);

// -1/2 sum_i Gamma(x; e_i, Pi g^{-1} e_i) over the ambient basis.
Mat brownian_ito_drift(const Manifold& m, const Mat& x);

// -1/2 sum_i [D_{Pi sigma e_i}(Pi sigma e_i) + Gamma(Pi sigma e_i, Pi sigma e_i)], the
// directional derivative by central differences.
Mat brownian_strat_drift(const Manifold& m, const Mat& x);

using HessianOp = std::function<Mat(const Mat&)>;

double laplace_beltrami(const Manifold& m, const Mat& x, const Mat& egrad, const HessianOp& ehess);

// (2 mu, sigma_o sigma_o^T) with mu the closed-form Ito drift.
SecondOrderTangent brownian_soo(const Manifold& m, const Mat& x);

double soo_residual(const Manifold& m, const Mat& x, const SecondOrderTangent& sot);

struct TangentFrame {
  std::vector<Mat> basis;
  std::vector<Mat> dual;
};

// Frame from projected ambient basis vectors (pivoted Gram-Schmidt under g) and its g-dual.
TangentFrame dual_tangent_frame(const Manifold& m, const Mat& x);

Mat tubular_differential(const Manifold& m, const Mat& x, const Mat& w);

class TangentRetraction {
 public:
  virtual ~TangentRetraction() = default;
  virtual Mat retract(const Mat& x, const Mat& v) const = 0;
  // r^{(2)}(x, 0; v, w); the default is a central second difference plus polarisation.
  virtual Mat second_derivative(const Mat& x, const Mat& v, const Mat& w) const;
};

using RetractionHandle = std::shared_ptr<const TangentRetraction>;

// r(x, v) = pi(x + v - 1/2 pi'(x) Gamma(x; v, v)) built on the manifold's tubular retraction.
class SecondOrderRetraction : public TangentRetraction {
 public:
  explicit SecondOrderRetraction(ManifoldHandle m) : m_(std::move(m)) {}
  Mat retract(const Mat& x, const Mat& v) const override;
  Mat second_derivative(const Mat& x, const Mat& v, const Mat& w) const override;

 private:
  ManifoldHandle m_;
};

// r(x, v) = pi(x + v); second derivative supplied by the caller or finite differences.
class PlusRetraction : public TangentRetraction {
 public:
  using SecondDerivative = std::function<Mat(const Mat&, const Mat&, const Mat&)>;
  explicit PlusRetraction(ManifoldHandle m, SecondDerivative d2 = {})
      : m_(std::move(m)), d2_(std::move(d2)) {}
  Mat retract(const Mat& x, const Mat& v) const override;
  Mat second_derivative(const Mat& x, const Mat& v, const Mat& w) const override;

 private:
  ManifoldHandle m_;
  SecondDerivative d2_;
};

RetractionHandle second_order_retraction(ManifoldHandle m);

// Finite-difference d^2/dt^2 r(x, t v) at t = 0.
Mat retraction_second_derivative_fd(const TangentRetraction& r, const Mat& x, const Mat& v);

enum class SdeForm { Ito, Stratonovich };

struct SdeSpec {
  SdeForm form = SdeForm::Ito;
  std::function<Mat(const Mat&, double)> drift;
  // sigma_o(x, t) applied to a noise sample of shape noise_rows x noise_cols.
  std::function<Mat(const Mat&, double, const Mat&)> diffusion;
  Eigen::Index noise_rows = 0;
  Eigen::Index noise_cols = 0;
  // c with sigma_o sigma_o^T = c Pi g^{-1} on T_xM; the normalized geodesic walk measures its
  // step in the metric g / c induced by the noise.
  double noise_metric_scale = 1.0;
  Eigen::Index noise_dim() const { return noise_rows * noise_cols; }
};

// Riemannian Brownian motion with generator scale * Delta / 2 (ambient noise).
SdeSpec brownian_sde(ManifoldHandle m, SdeForm form, double scale = 1.0);

}  // namespace msde
