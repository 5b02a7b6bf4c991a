#include <cmath>
#include <string>

#include "msde/manifolds.hpp"

namespace msde {

Mat spd_strat_adjustment(const Mat& x) {
  SymEigDecomposition e = sym_eig(sym(x));
  if (!(e.values(0) > 0.0)) throw DomainError("spd: matrix is not positive definite");
  Vec beta = e.values.cwiseSqrt();
  const Eigen::Index n = beta.size();
  Vec d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.25;
    for (Eigen::Index j = 0; j < n; ++j) s += beta(j) / (2.0 * (beta(i) + beta(j)));
    d(i) = beta(i) * beta(i) * s;
  }
  return -(e.vectors * d.asDiagonal() * e.vectors.transpose());
}

Spd::Spd(int N) : Manifold(N, N) {
  if (N < 2) throw ParameterError("spd: N must be at least 2");
}

std::string Spd::name() const { return "spd(" + std::to_string(rows()) + ")"; }

Mat Spd::metric(const Mat& x, const Mat& w) const {
  Mat xi = x.partialPivLu().inverse();
  return xi * w * xi;
}

Mat Spd::metric_inv(const Mat& x, const Mat& w) const { return x * w * x; }

Mat Spd::proj_metric_inv(const Mat& x, const Mat& w) const { return sym(x * w * x); }

Mat Spd::christoffel(const Mat& x, const Mat& xi, const Mat& eta) const {
  auto lu = x.partialPivLu();
  return -0.5 * sym(xi * lu.solve(eta) + eta * lu.solve(xi));
}

Mat Spd::sigma(const Mat& x, const Mat& w) const {
  Mat r = spd_sqrt(sym(x));
  return r * w * r;
}

Mat Spd::sigma_tangent(const Mat& x, const Mat& w) const { return sym(sigma(x, w)); }

Vec Spd::constraints(const Mat& x) const {
  Vec c(n_constraints());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < rows(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) c(k++) = x(i, j) - x(j, i);
  return c;
}

Mat Spd::constraint_jacobian(const Mat&) const {
  const Eigen::Index n = rows();
  Mat J = Mat::Zero(n_constraints(), ambient_dim());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i, ++k) {
      J(k, i + j * n) = 1.0;
      J(k, j + i * n) = -1.0;
    }
  return J;
}

Mat Spd::constraint_hessian(const Mat&, Eigen::Index) const {
  return Mat::Zero(ambient_dim(), ambient_dim());
}

bool Spd::in_domain(const Mat& x) const {
  Eigen::SelfAdjointEigenSolver<Mat> es(sym(x), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) > 1e-10;
}

Mat Spd::tubular_retract(const Mat& q) const {
  if (!q.allFinite() || !in_domain(q)) throw DomainError("spd: point is not positive definite");
  return sym(q);
}

Mat Spd::ito_drift(const Mat& x) const { return 0.25 * static_cast<double>(rows() + 1) * x; }

Mat Spd::strat_drift(const Mat& x) const { return spd_strat_adjustment(x) + ito_drift(x); }

Mat Spd::base_point() const { return Mat::Identity(rows(), rows()); }

Mat Spd::random_point(RngStream& rng) const {
  Mat a = gaussian_matrix(rng, rows(), rows());
  return sym(a * a.transpose() / static_cast<double>(rows())) + 0.5 * Mat::Identity(rows(), rows());
}

ManifoldHandle make_spd(int N) { return std::make_shared<Spd>(N); }

}  // namespace msde
