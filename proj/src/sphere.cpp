#include <cmath>
#include <string>

#include "msde/manifolds.hpp"

namespace msde {

Sphere::Sphere(int n) : Manifold(n, 1) {
  if (n < 2) throw ParameterError("sphere: n must be at least 2");
}

std::string Sphere::name() const { return "sphere(" + std::to_string(rows()) + ")"; }

Mat Sphere::proj(const Mat& x, const Mat& w) const { return w - x * (x.transpose() * w); }

Mat Sphere::christoffel(const Mat& x, const Mat& xi, const Mat& eta) const {
  return x * xi.col(0).dot(eta.col(0));
}

Vec Sphere::constraints(const Mat& x) const {
  Vec c(1);
  c(0) = x.squaredNorm() - 1.0;
  return c;
}

Mat Sphere::constraint_jacobian(const Mat& x) const { return 2.0 * x.transpose(); }

Mat Sphere::constraint_hessian(const Mat&, Eigen::Index) const {
  return 2.0 * Mat::Identity(rows(), rows());
}

Mat Sphere::tubular_retract(const Mat& q) const {
  const double nq = q.norm();
  if (!(nq > 1e-12) || !std::isfinite(nq)) throw DomainError("sphere: cannot rescale a zero vector");
  return q / nq;
}

Mat Sphere::tubular_differential(const Mat& x, const Mat& w) const {
  return w - x * x.col(0).dot(w.col(0));
}

Mat Sphere::ito_drift(const Mat& x) const { return -0.5 * static_cast<double>(rows() - 1) * x; }

Mat Sphere::strat_drift(const Mat& x) const { return Mat::Zero(x.rows(), 1); }

Mat Sphere::base_point() const { return ambient_basis(rows(), 1, 0); }

Mat Sphere::random_point(RngStream& rng) const {
  return tubular_retract(gaussian_matrix(rng, rows(), 1));
}

ManifoldHandle make_sphere(int n) { return std::make_shared<Sphere>(n); }

}  // namespace msde
