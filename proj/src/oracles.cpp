#include "msde/oracles.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "msde/manifolds.hpp"

namespace msde {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailTol = 1e-14;
constexpr int kMaxOrder = 200000;

void check_tau(double tau) {
  if (!std::isfinite(tau) || tau < kTauMin)
    throw ParameterError("heat kernel: tau = " + std::to_string(tau) + " below tau_min 1e-4");
}

// Series order where (2l+1) e^{-l(l+1) tau} (resp. (l+1)^2 e^{-l(l+2) tau}) drops below the tail
// tolerance; the terms are bounded by these in absolute value.
int series_order(double tau, bool s3) {
  for (int l = 1; l < kMaxOrder; ++l) {
    const double lf = l;
    const double bound = s3 ? (lf + 1) * (lf + 1) * std::exp(-lf * (lf + 2) * tau)
                            : (2 * lf + 1) * std::exp(-lf * (lf + 1) * tau);
    if (bound < kTailTol && lf * lf * tau > 1.0) return l;
  }
  throw ParameterError("heat kernel: series did not converge");
}

double s2_sum(double phi, double tau, int L) {
  const double c = std::cos(phi);
  double p0 = 1.0, p1 = c;
  double sum = 1.0 + 3.0 * std::exp(-2.0 * tau) * c;
  for (int l = 2; l <= L; ++l) {
    const double p2 = ((2.0 * l - 1.0) * c * p1 - (l - 1.0) * p0) / l;
    sum += (2.0 * l + 1.0) * std::exp(-l * (l + 1.0) * tau) * p2;
    p0 = p1;
    p1 = p2;
  }
  return sum / (4.0 * kPi);
}

double s3_sum(double phi, double tau, int L) {
  // Chebyshev U_l(cos phi) = sin((l+1) phi) / sin phi by recurrence, stable at the poles.
  const double c = std::cos(phi);
  double u0 = 1.0, u1 = 2.0 * c;
  double sum = 1.0 + 2.0 * std::exp(-3.0 * tau) * u1;
  for (int l = 2; l <= L; ++l) {
    const double u2 = 2.0 * c * u1 - u0;
    sum += (l + 1.0) * std::exp(-l * (l + 2.0) * tau) * u2;
    u0 = u1;
    u1 = u2;
  }
  return sum / (2.0 * kPi * kPi);
}

// Composite 16-point Gauss-Legendre on [0, pi] with `panels` panels.
template <class F>
double composite_gl(const F& f, int panels) {
  const double w = kPi / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k)
    total += boost::math::quadrature::gauss<double, 16>::integrate(f, k * w, (k + 1) * w);
  return total;
}

template <class F>
double integrate_checked(const F& f) {
  constexpr double kAbsTol = 1e-10;
  int panels = 128;  // 2048 nodes
  double coarse = composite_gl(f, panels);
  for (int it = 0; it < 6; ++it) {
    panels *= 2;
    const double fine = composite_gl(f, panels);
    if (std::abs(fine - coarse) < kAbsTol) return fine;
    coarse = fine;
  }
  throw ParameterError("heat kernel: quadrature did not reach 1e-10");
}

}  // namespace

double heat_kernel_s2(double phi, double tau) {
  check_tau(tau);
  return s2_sum(phi, tau, series_order(tau, false));
}

double heat_kernel_s3(double phi, double tau) {
  check_tau(tau);
  return s3_sum(phi, tau, series_order(tau, true));
}

double heat_expectation_s2(const std::function<double(double)>& cost, double T, double diffusion,
                           double radius) {
  if (!(T > 0.0)) throw ParameterError("heat_expectation_s2: T must be positive");
  if (!(diffusion > 0.0) || !(radius > 0.0))
    throw ParameterError("heat_expectation_s2: diffusion and radius must be positive");
  const double tau = diffusion * T / (radius * radius);
  check_tau(tau);
  const int L = series_order(tau, false);
  return integrate_checked(
      [&](double phi) { return cost(phi) * s2_sum(phi, tau, L) * 2.0 * kPi * std::sin(phi); });
}

double heat_expectation_s3(const std::function<double(double)>& cost, double T, double diffusion,
                           double radius) {
  if (!(T > 0.0)) throw ParameterError("heat_expectation_s3: T must be positive");
  if (!(diffusion > 0.0) || !(radius > 0.0))
    throw ParameterError("heat_expectation_s3: diffusion and radius must be positive");
  const double tau = diffusion * T / (radius * radius);
  check_tau(tau);
  const int L = series_order(tau, true);
  return integrate_checked([&](double phi) {
    const double s = std::sin(phi);
    return cost(phi) * s3_sum(phi, tau, L) * 4.0 * kPi * s * s;
  });
}

Mat sample_uniform(const Manifold& m, RngStream& rng) {
  if (dynamic_cast<const Sphere*>(&m)) {
    for (;;) {
      Mat z = gaussian_matrix(rng, m.rows(), 1);
      const double r = z.norm();
      if (r > 0.0) return z / r;
    }
  }
  if (auto g = dynamic_cast<const LieGroup*>(&m); g && g->structure().kind() == LieKind::SO) {
    Mat q = polar_orth(gaussian_matrix(rng, m.rows(), m.cols()));
    if (q.determinant() < 0.0) q.col(q.cols() - 1) *= -1.0;
    return q;
  }
  if (dynamic_cast<const Stiefel*>(&m) || dynamic_cast<const Grassmann*>(&m))
    return polar_orth(gaussian_matrix(rng, m.rows(), m.cols()));
  throw PreconditionError("sample_uniform: no uniform sampler for " + m.name());
}

double laplacian_frame_oracle(const Manifold& m, const Mat& x, const Mat& egrad,
                              const HessianOp& ehess) {
  require_on_manifold(m, x, "laplacian_frame_oracle");
  const TangentFrame f = dual_tangent_frame(m, x);
  double total = 0.0;
  for (std::size_t j = 0; j < f.basis.size(); ++j) {
    total += frobenius_inner(f.basis[j], ehess(f.dual[j]));
    total -= frobenius_inner(egrad, m.christoffel(x, f.basis[j], f.dual[j]));
  }
  return total;
}

}  // namespace msde
