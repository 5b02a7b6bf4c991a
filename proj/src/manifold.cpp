#include "msde/manifold.hpp"

#include <cmath>
#include <limits>

#include "msde/geometry.hpp"

namespace msde {

double fd_step(const Mat& x) {
  return std::sqrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
}

Mat ambient_basis(Eigen::Index rows, Eigen::Index cols, Eigen::Index k) {
  Mat e = Mat::Zero(rows, cols);
  e.data()[k] = 1.0;
  return e;
}

Mat Manifold::constraint_jacobian(const Mat& x) const {
  const Eigen::Index k = n_constraints(), D = ambient_dim();
  Mat J(k, D);
  const double h = fd_step(x);
  for (Eigen::Index a = 0; a < D; ++a) {
    Mat xp = x, xm = x;
    xp.data()[a] += h;
    xm.data()[a] -= h;
    J.col(a) = (constraints(xp) - constraints(xm)) / (2.0 * h);
  }
  return J;
}

Mat Manifold::constraint_hessian(const Mat& x, Eigen::Index i) const {
  const Eigen::Index D = ambient_dim();
  // Second differences need a larger step than first differences.
  const double h = std::pow(std::numeric_limits<double>::epsilon(), 0.25) * (1.0 + x.norm());
  auto c = [&](const Mat& y) { return constraints(y)(i); };
  Mat H(D, D);
  for (Eigen::Index a = 0; a < D; ++a)
    for (Eigen::Index b = a; b < D; ++b) {
      Mat pp = x, pm = x, mp = x, mm = x;
      pp.data()[a] += h; pp.data()[b] += h;
      pm.data()[a] += h; pm.data()[b] -= h;
      mp.data()[a] -= h; mp.data()[b] += h;
      mm.data()[a] -= h; mm.data()[b] -= h;
      H(a, b) = H(b, a) = (c(pp) - c(pm) - c(mp) + c(mm)) / (4.0 * h * h);
    }
  return H;
}

Mat Manifold::tubular_differential(const Mat& x, const Mat& w) const {
  const double wn = w.norm();
  if (wn == 0.0) return Mat::Zero(w.rows(), w.cols());
  const double h = fd_step(x) / wn;
  return (tubular_retract(x + h * w) - tubular_retract(x - h * w)) / (2.0 * h);
}

Mat Manifold::ito_drift(const Mat& x) const { return brownian_ito_drift(*this, x); }

Mat Manifold::strat_drift(const Mat& x) const { return brownian_strat_drift(*this, x); }

Mat Manifold::random_tangent(const Mat& x, RngStream& rng) const {
  Mat v = proj(x, gaussian_matrix(rng, rows(), cols()));
  return v / v.norm();
}

}  // namespace msde
