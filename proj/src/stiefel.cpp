#include <cmath>
#include <string>

#include "msde/manifolds.hpp"
#include "orth_constraints.hpp"

namespace msde {

namespace {

Mat polar_or_domain_error(const Mat& q, const std::string& who) {
  if (!q.allFinite()) throw DomainError(who + ": non-finite point");
  try {
    return polar_orth(q);
  } catch (const SingularityError& e) {
    throw DomainError(who + ": " + e.what());
  }
}

Mat standard_frame(Eigen::Index n, Eigen::Index p) { return Mat::Identity(n, p); }

}  // namespace

Stiefel::Stiefel(StiefelParams params) : Manifold(params.n, params.p), prm_(params) {
  if (params.p < 1 || params.p >= params.n) throw ParameterError("stiefel: need 1 <= p < n");
  if (!(params.alpha0 > 0.0) || !(params.alpha1 > 0.0))
    throw ParameterError("stiefel: alpha0 and alpha1 must be positive");
}

std::string Stiefel::name() const {
  return "stiefel(" + std::to_string(prm_.n) + "," + std::to_string(prm_.p) + ")";
}

Eigen::Index Stiefel::dim() const {
  const Eigen::Index n = prm_.n, p = prm_.p;
  return n * p - p * (p + 1) / 2;
}

Mat Stiefel::metric(const Mat& x, const Mat& w) const {
  return prm_.alpha0 * w + (prm_.alpha1 - prm_.alpha0) * x * (x.transpose() * w);
}

Mat Stiefel::metric_inv(const Mat& x, const Mat& w) const {
  return w / prm_.alpha0 + (1.0 / prm_.alpha1 - 1.0 / prm_.alpha0) * x * (x.transpose() * w);
}

Mat Stiefel::proj(const Mat& x, const Mat& w) const { return w - x * sym(x.transpose() * w); }

Mat Stiefel::christoffel(const Mat& x, const Mat& xi, const Mat& eta) const {
  Mat g = x * sym(xi.transpose() * eta);
  const double c = 2.0 * (prm_.alpha0 - prm_.alpha1) / prm_.alpha0;
  if (c != 0.0) {
    Mat sy = sym(xi * eta.transpose()) * x;
    g += c * (sy - x * (x.transpose() * sy));
  }
  return g;
}

Mat Stiefel::sigma(const Mat& x, const Mat& w) const {
  const double a = 1.0 / std::sqrt(prm_.alpha0), b = 1.0 / std::sqrt(prm_.alpha1);
  return a * w + (b - a) * x * (x.transpose() * w);
}

Mat Stiefel::sigma_tangent(const Mat& x, const Mat& w) const {
  const double a = 1.0 / std::sqrt(prm_.alpha0), b = 1.0 / std::sqrt(prm_.alpha1);
  Mat ytw = x.transpose() * w;
  return a * (w - x * ytw) + b * x * skew(ytw);
}

Eigen::Index Stiefel::n_constraints() const { return detail::orth_count(prm_.p); }

Vec Stiefel::constraints(const Mat& x) const {
  Vec c(n_constraints());
  detail::orth_values(x, detail::whole(x), c, 0);
  return c;
}

Mat Stiefel::constraint_jacobian(const Mat& x) const {
  Mat J = Mat::Zero(n_constraints(), ambient_dim());
  detail::orth_jacobian(x, detail::whole(x), J, 0);
  return J;
}

Mat Stiefel::constraint_hessian(const Mat& x, Eigen::Index i) const {
  return detail::orth_hessian(detail::whole(x), i, ambient_dim());
}

Mat Stiefel::tubular_retract(const Mat& q) const { return polar_or_domain_error(q, name()); }

Mat Stiefel::tubular_differential(const Mat& x, const Mat& w) const {
  return w - x * sym(x.transpose() * w);
}

Mat Stiefel::ito_drift(const Mat& x) const {
  const double n = prm_.n, p = prm_.p;
  return -((n - p) / (2.0 * prm_.alpha0) + (p - 1.0) / (4.0 * prm_.alpha1)) * x;
}

Mat Stiefel::strat_drift(const Mat& x) const { return Mat::Zero(x.rows(), x.cols()); }

Mat Stiefel::base_point() const { return standard_frame(rows(), cols()); }

Mat Stiefel::random_point(RngStream& rng) const {
  return polar_orth(gaussian_matrix(rng, rows(), cols()));
}

Grassmann::Grassmann(int n, int p) : Manifold(n, p) {
  if (p < 1 || p >= n) throw ParameterError("grassmann: need 1 <= p < n");
}

std::string Grassmann::name() const {
  return "grassmann(" + std::to_string(rows()) + "," + std::to_string(cols()) + ")";
}

Mat Grassmann::proj(const Mat& x, const Mat& w) const { return w - x * (x.transpose() * w); }

Mat Grassmann::christoffel(const Mat& x, const Mat& xi, const Mat& eta) const {
  return x * sym(xi.transpose() * eta);
}

Eigen::Index Grassmann::n_constraints() const { return detail::orth_count(cols()); }

Vec Grassmann::constraints(const Mat& x) const {
  Vec c(n_constraints());
  detail::orth_values(x, detail::whole(x), c, 0);
  return c;
}

Mat Grassmann::constraint_jacobian(const Mat& x) const {
  Mat J = Mat::Zero(n_constraints(), ambient_dim());
  detail::orth_jacobian(x, detail::whole(x), J, 0);
  return J;
}

Mat Grassmann::constraint_hessian(const Mat& x, Eigen::Index i) const {
  return detail::orth_hessian(detail::whole(x), i, ambient_dim());
}

Mat Grassmann::tubular_retract(const Mat& q) const { return polar_or_domain_error(q, name()); }

Mat Grassmann::tubular_differential(const Mat& x, const Mat& w) const {
  return w - x * sym(x.transpose() * w);
}

Mat Grassmann::ito_drift(const Mat& x) const {
  return -0.5 * static_cast<double>(rows() - cols()) * x;
}

Mat Grassmann::strat_drift(const Mat& x) const { return Mat::Zero(x.rows(), x.cols()); }

Mat Grassmann::base_point() const { return standard_frame(rows(), cols()); }

Mat Grassmann::random_point(RngStream& rng) const {
  return polar_orth(gaussian_matrix(rng, rows(), cols()));
}

ManifoldHandle make_stiefel(StiefelParams params) { return std::make_shared<Stiefel>(params); }

ManifoldHandle make_grassmann(int n, int p) { return std::make_shared<Grassmann>(n, p); }

}  // namespace msde
