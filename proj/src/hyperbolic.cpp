#include <cmath>
#include <string>

#include "msde/manifolds.hpp"

namespace msde {

namespace {

double last(const Mat& x) { return x(x.rows() - 1, 0); }

}  // namespace

Hyperbolic::Hyperbolic(int n) : Manifold(n, 1) {
  if (n < 2) throw ParameterError("hyperbolic: n must be at least 2");
}

std::string Hyperbolic::name() const { return "hyperbolic(" + std::to_string(rows()) + ")"; }

Mat Hyperbolic::metric(const Mat& x, const Mat& w) const { return w / (last(x) * last(x)); }

Mat Hyperbolic::metric_inv(const Mat& x, const Mat& w) const { return (last(x) * last(x)) * w; }

Mat Hyperbolic::christoffel(const Mat& x, const Mat& xi, const Mat& eta) const {
  const Eigen::Index n = rows() - 1;
  Mat g = xi(n, 0) * eta + eta(n, 0) * xi;
  g(n, 0) -= xi.col(0).dot(eta.col(0));
  return -g / last(x);
}

Mat Hyperbolic::sigma(const Mat& x, const Mat& w) const { return last(x) * w; }

Mat Hyperbolic::sigma_adjoint(const Mat& x, const Mat& w) const { return last(x) * w; }

bool Hyperbolic::in_domain(const Mat& x) const { return last(x) > 0.0; }

Mat Hyperbolic::tubular_retract(const Mat& q) const {
  if (!(last(q) > 0.0) || !q.allFinite()) throw DomainError("hyperbolic: x_n must be positive");
  return q;
}

Mat Hyperbolic::ito_drift(const Mat& x) const {
  Mat d = Mat::Zero(rows(), 1);
  d(rows() - 1, 0) = -0.5 * static_cast<double>(rows() - 2) * last(x);
  return d;
}

Mat Hyperbolic::strat_drift(const Mat& x) const {
  Mat d = Mat::Zero(rows(), 1);
  d(rows() - 1, 0) = -0.5 * static_cast<double>(rows() - 1) * last(x);
  return d;
}

Mat Hyperbolic::base_point() const { return ambient_basis(rows(), 1, rows() - 1); }

Mat Hyperbolic::random_point(RngStream& rng) const {
  Mat x = gaussian_matrix(rng, rows(), 1);
  x(rows() - 1, 0) = std::exp(0.5 * x(rows() - 1, 0));
  return x;
}

ManifoldHandle make_hyperbolic(int n) { return std::make_shared<Hyperbolic>(n); }

}  // namespace msde
