#include <cmath>
#include <string>

#include "msde/manifolds.hpp"

namespace msde {

Hypersurface::Hypersurface(Vec d, int p) : Manifold(d.size(), 1), d_(std::move(d)), p_(p) {
  if (d_.size() < 2) throw ParameterError("hypersurface: need at least two coordinates");
  if (p < 2 || p % 2 != 0) throw ParameterError("hypersurface: exponent must be even and >= 2");
  if (!(d_.minCoeff() > 0.0)) throw ParameterError("hypersurface: weights must be positive");
}

std::string Hypersurface::name() const {
  return "hypersurface(" + std::to_string(rows()) + "," + std::to_string(p_) + ")";
}

double Hypersurface::c(const Mat& x) const {
  return (d_.array() * x.col(0).array().pow(p_)).sum();
}

Vec Hypersurface::grad(const Mat& x) const {
  return static_cast<double>(p_) * (d_.array() * x.col(0).array().pow(p_ - 1)).matrix();
}

Vec Hypersurface::hess_diag(const Mat& x) const {
  return static_cast<double>(p_ * (p_ - 1)) * (d_.array() * x.col(0).array().pow(p_ - 2)).matrix();
}

Mat Hypersurface::proj(const Mat& x, const Mat& w) const {
  Vec g = grad(x);
  return w - g * (g.dot(w.col(0)) / g.squaredNorm());
}

Mat Hypersurface::christoffel(const Mat& x, const Mat& xi, const Mat& eta) const {
  Vec g = grad(x);
  double q = (hess_diag(x).array() * xi.col(0).array() * eta.col(0).array()).sum();
  return g * (q / g.squaredNorm());
}

Vec Hypersurface::constraints(const Mat& x) const {
  Vec r(1);
  r(0) = c(x) - 1.0;
  return r;
}

Mat Hypersurface::constraint_jacobian(const Mat& x) const { return grad(x).transpose(); }

Mat Hypersurface::constraint_hessian(const Mat& x, Eigen::Index) const {
  return hess_diag(x).asDiagonal();
}

Mat Hypersurface::tubular_retract(const Mat& q) const {
  const double cq = c(q);
  if (!(cq > 0.0) || !std::isfinite(cq)) throw DomainError("hypersurface: cannot rescale the origin");
  return q * std::pow(cq, -1.0 / static_cast<double>(p_));
}

Mat Hypersurface::tubular_differential(const Mat& x, const Mat& w) const {
  return w - x * (grad(x).dot(w.col(0)) / static_cast<double>(p_));
}

Mat Hypersurface::ito_drift(const Mat& x) const {
  Vec g = grad(x), h = hess_diag(x);
  const double gg = g.squaredNorm();
  const double tr = h.sum() - (h.array() * g.array().square()).sum() / gg;
  return -0.5 * (tr / gg) * g;
}

// Embedded metric with sigma = I: the Stratonovich form has no drift.
Mat Hypersurface::strat_drift(const Mat& x) const { return Mat::Zero(x.rows(), 1); }

Mat Hypersurface::base_point() const {
  Mat x = Mat::Zero(rows(), 1);
  x(0, 0) = std::pow(d_(0), -1.0 / static_cast<double>(p_));
  return x;
}

Mat Hypersurface::random_point(RngStream& rng) const {
  return tubular_retract(gaussian_matrix(rng, rows(), 1));
}

RetractionHandle hypersurface_plus_retraction(std::shared_ptr<const Hypersurface> m) {
  const Hypersurface* raw = m.get();
  auto d2 = [raw](const Mat& x, const Mat& v, const Mat& w) -> Mat {
    const int p = raw->exponent();
    double s = (raw->weights().array() * x.col(0).array().pow(p - 2) * v.col(0).array() *
                w.col(0).array()).sum();
    return (1.0 - p) * s * x;
  };
  return std::make_shared<PlusRetraction>(std::move(m), d2);
}

std::shared_ptr<const Hypersurface> make_hypersurface(Vec d, int p) {
  return std::make_shared<Hypersurface>(std::move(d), p);
}

}  // namespace msde
