#pragma once

#include <memory>
#include <string>
#include <vector>

#include "msde/numerics.hpp"

namespace msde {

// Embedded manifold in the ambient space R^{rows x cols} with the Frobenius pairing.
// Metric, projection and Christoffel function are given as operators on ambient matrices;
// all of them accept points in a neighbourhood of the manifold (needed by finite
// differences and by the Heun predictor).
class Manifold {
 public:
  Manifold(Eigen::Index rows, Eigen::Index cols) : rows_(rows), cols_(cols) {}
  virtual ~Manifold() = default;

  virtual std::string name() const = 0;
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  Eigen::Index ambient_dim() const { return rows_ * cols_; }
  virtual Eigen::Index dim() const = 0;
  virtual bool is_compact() const = 0;

  virtual Mat metric(const Mat& x, const Mat& w) const = 0;
  virtual Mat metric_inv(const Mat& x, const Mat& w) const = 0;
  virtual Mat proj(const Mat& x, const Mat& w) const = 0;
  virtual Mat proj_metric_inv(const Mat& x, const Mat& w) const { return proj(x, metric_inv(x, w)); }
  virtual Mat christoffel(const Mat& x, const Mat& xi, const Mat& eta) const = 0;

  // sigma(x) with sigma sigma^T g Pi = Pi on tangent vectors; noise lives in the ambient space.
  virtual Mat sigma(const Mat& x, const Mat& w) const = 0;
  virtual Mat sigma_adjoint(const Mat& x, const Mat& w) const = 0;
  // Projected noise map Pi(x) sigma(x).
  virtual Mat sigma_tangent(const Mat& x, const Mat& w) const { return proj(x, sigma(x, w)); }

  virtual Eigen::Index n_constraints() const = 0;
  virtual Vec constraints(const Mat& x) const = 0;
  // Rows are gradients of the constraint components w.r.t. the column-major vectorised x.
  virtual Mat constraint_jacobian(const Mat& x) const;
  virtual Mat constraint_hessian(const Mat& x, Eigen::Index i) const;
  // Open-set condition (det > 0, positive definite, x_n > 0); true when there is none.
  virtual bool in_domain(const Mat&) const { return true; }

  // Tubular retraction from a neighbourhood of the manifold; throws DomainError outside it.
  virtual Mat tubular_retract(const Mat& q) const = 0;
  virtual Mat tubular_differential(const Mat& x, const Mat& w) const;

  // Closed-form drifts; the defaults evaluate the generic formulas.
  virtual Mat ito_drift(const Mat& x) const;
  virtual Mat strat_drift(const Mat& x) const;

  virtual Mat base_point() const = 0;
  virtual Mat random_point(RngStream& rng) const = 0;
  // A random unit-Frobenius-norm tangent vector at x.
  Mat random_tangent(const Mat& x, RngStream& rng) const;

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
};

using ManifoldHandle = std::shared_ptr<const Manifold>;

inline Eigen::Map<const Vec> as_vec(const Mat& x) { return {x.data(), x.size()}; }
inline Mat as_mat(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}
// Standard ambient basis element with a one at column-major index k.
Mat ambient_basis(Eigen::Index rows, Eigen::Index cols, Eigen::Index k);

// sqrt(machine epsilon) * (1 + |x|), the first-difference step.
double fd_step(const Mat& x);

}  // namespace msde
