#include "msde/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace msde {

double constraint_residual(const Manifold& m, const Mat& x) {
  if (x.rows() != m.rows() || x.cols() != m.cols())
    throw DimensionError(m.name() + ": point has the wrong shape");
  if (!x.allFinite() || !m.in_domain(x)) return std::numeric_limits<double>::infinity();
  if (m.n_constraints() == 0) return 0.0;
  return m.constraints(x).lpNorm<Eigen::Infinity>();
}

void require_on_manifold(const Manifold& m, const Mat& x, const char* op) {
  double r = constraint_residual(m, x);
  if (!(r < kOnManifoldTol))
    throw PreconditionError(std::string(op) + ": point is not on " + m.name() +
                            " (residual " + std::to_string(r) + ")");
}

ProjectionReport check_projection(const Manifold& m, const Mat& x, int trials, RngStream& rng) {
  require_on_manifold(m, x, "check_projection");
  ProjectionReport rep;
  for (int t = 0; t < trials; ++t) {
    Mat w = gaussian_matrix(rng, m.rows(), m.cols());
    w /= w.norm();
    Mat pw = m.proj(x, w);
    rep.idempotence = std::max(rep.idempotence, (m.proj(x, pw) - pw).norm());

    Mat a = gaussian_matrix(rng, m.rows(), m.cols());
    Mat b = gaussian_matrix(rng, m.rows(), m.cols());
    a /= a.norm();
    b /= b.norm();
    double asym = frobenius_inner(a, m.proj_metric_inv(x, b)) -
                  frobenius_inner(m.proj_metric_inv(x, a), b);
    rep.self_adjointness = std::max(rep.self_adjointness, std::abs(asym));
  }
  rep.pass = rep.idempotence < 1e-9 && rep.self_adjointness < 1e-9;
  return rep;
}

double check_metric_compatibility(const Manifold& m, const Mat& x, double step, int trials,
                                  RngStream& rng) {
  require_on_manifold(m, x, "check_metric_compatibility");
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Mat xi = m.random_tangent(x, rng);
    Mat w = gaussian_matrix(rng, m.rows(), m.cols());
    w /= w.norm();
    auto field = [&](const Mat& y) { return m.proj(y, w); };
    auto sqnorm = [&](const Mat& y) {
      Mat Y = field(y);
      return frobenius_inner(Y, m.metric(y, Y));
    };
    const Mat xp = x + step * xi, xm = x - step * xi;
    double lhs = (sqnorm(xp) - sqnorm(xm)) / (2.0 * step);
    Mat Y = field(x);
    Mat dY = (field(xp) - field(xm)) / (2.0 * step);
    double rhs = 2.0 * frobenius_inner(Y, m.metric(x, dY + m.christoffel(x, xi, Y)));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

Mat brownian_ito_drift(const Manifold& m, const Mat& x) {
  require_on_manifold(m, x, "brownian_ito_drift");
  Mat acc = Mat::Zero(m.rows(), m.cols());
  for (Eigen::Index k = 0; k < m.ambient_dim(); ++k) {
    Mat e = ambient_basis(m.rows(), m.cols(), k);
    acc += m.christoffel(x, e, m.proj_metric_inv(x, e));
  }
  return -0.5 * acc;
}

Mat brownian_strat_drift(const Manifold& m, const Mat& x) {
  require_on_manifold(m, x, "brownian_strat_drift");
  Mat acc = Mat::Zero(m.rows(), m.cols());
  for (Eigen::Index k = 0; k < m.ambient_dim(); ++k) {
    Mat e = ambient_basis(m.rows(), m.cols(), k);
    Mat v = m.sigma_tangent(x, e);
    double vn = v.norm();
    if (vn == 0.0) continue;
    double h = fd_step(x) / vn;
    Mat dv = (m.sigma_tangent(x + h * v, e) - m.sigma_tangent(x - h * v, e)) / (2.0 * h);
    acc += dv + m.christoffel(x, v, v);
  }
  return -0.5 * acc;
}

double laplace_beltrami(const Manifold& m, const Mat& x, const Mat& egrad, const HessianOp& ehess) {
  require_on_manifold(m, x, "laplace_beltrami");
  Mat gsum = Mat::Zero(m.rows(), m.cols());
  double trace = 0.0;
  for (Eigen::Index k = 0; k < m.ambient_dim(); ++k) {
    Mat e = ambient_basis(m.rows(), m.cols(), k);
    gsum += m.christoffel(x, e, m.proj_metric_inv(x, e));
    trace += m.proj_metric_inv(x, ehess(e)).data()[k];
  }
  return -frobenius_inner(egrad, gsum) + trace;
}

SecondOrderTangent brownian_soo(const Manifold& m, const Mat& x) {
  const Eigen::Index D = m.ambient_dim();
  Mat S(D, D);
  for (Eigen::Index k = 0; k < D; ++k)
    S.col(k) = as_vec(m.sigma_tangent(x, ambient_basis(m.rows(), m.cols(), k)));
  return {2.0 * m.ito_drift(x), S * S.transpose()};
}

double soo_residual(const Manifold& m, const Mat& x, const SecondOrderTangent& sot) {
  if (m.n_constraints() == 0) return 0.0;
  Mat J = m.constraint_jacobian(x);
  Vec a = as_vec(sot.A);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.n_constraints(); ++i) {
    Mat H = m.constraint_hessian(x, i);
    double second = (H.array() * sot.M.transpose().array()).sum() + J.row(i).dot(a);
    double first = (J.row(i) * sot.M).norm();
    worst = std::max({worst, std::abs(second), first});
  }
  return worst;
}

TangentFrame dual_tangent_frame(const Manifold& m, const Mat& x) {
  require_on_manifold(m, x, "dual_tangent_frame");
  const Eigen::Index D = m.ambient_dim(), d = m.dim();
  auto gip = [&](const Mat& a, const Mat& b) { return frobenius_inner(a, m.metric(x, b)); };

  std::vector<Mat> cand, resid;
  cand.reserve(D);
  for (Eigen::Index k = 0; k < D; ++k) {
    cand.push_back(m.proj(x, ambient_basis(m.rows(), m.cols(), k)));
    resid.push_back(cand.back());
  }
  double scale = 0.0;
  for (const Mat& c : cand) scale = std::max(scale, std::sqrt(std::abs(gip(c, c))));
  if (scale == 0.0) throw FrameError("dual_tangent_frame: projection is zero");

  TangentFrame fr;
  std::vector<bool> used(D, false);
  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::Index best = -1;
    double best_norm = 0.0;
    for (Eigen::Index k = 0; k < D; ++k) {
      if (used[k]) continue;
      double nk = std::sqrt(std::max(0.0, gip(resid[k], resid[k])));
      if (nk > best_norm) best_norm = nk, best = k;
    }
    if (best < 0 || best_norm <= 1e-8 * scale)
      throw FrameError("dual_tangent_frame: projected basis spans fewer than dim() directions");
    used[best] = true;
    fr.basis.push_back(cand[best]);
    Mat q = resid[best] / best_norm;
    for (Eigen::Index k = 0; k < D; ++k)
      if (!used[k]) resid[k] -= gip(q, resid[k]) * q;
  }
  for (Eigen::Index k = 0; k < D; ++k)
    if (!used[k] && std::sqrt(std::max(0.0, gip(resid[k], resid[k]))) > 1e-6 * scale)
      throw FrameError("dual_tangent_frame: tangent space larger than dim()");

  Mat G(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i; j < d; ++j) G(i, j) = G(j, i) = gip(fr.basis[i], fr.basis[j]);
  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  double lo = es.eigenvalues()(0), hi = es.eigenvalues()(d - 1);
  if (!(lo > 0.0) || hi / lo > 1e8) throw FrameError("dual_tangent_frame: frame is degenerate");
  Mat Ginv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
             es.eigenvectors().transpose();
  for (Eigen::Index j = 0; j < d; ++j) {
    Mat v = Mat::Zero(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < d; ++k) v += Ginv(j, k) * fr.basis[k];
    fr.dual.push_back(v);
  }
  return fr;
}

Mat tubular_differential(const Manifold& m, const Mat& x, const Mat& w) {
  return m.tubular_differential(x, w);
}

Mat retraction_second_derivative_fd(const TangentRetraction& r, const Mat& x, const Mat& v) {
  const double vn = v.norm();
  if (vn == 0.0) return Mat::Zero(x.rows(), x.cols());
  const double t = std::pow(std::numeric_limits<double>::epsilon(), 0.25) * (1.0 + x.norm()) / vn;
  return (r.retract(x, t * v) - 2.0 * x + r.retract(x, -t * v)) / (t * t);
}

Mat TangentRetraction::second_derivative(const Mat& x, const Mat& v, const Mat& w) const {
  return 0.25 * (retraction_second_derivative_fd(*this, x, v + w) -
                 retraction_second_derivative_fd(*this, x, v - w));
}

Mat SecondOrderRetraction::retract(const Mat& x, const Mat& v) const {
  Mat corr = m_->tubular_differential(x, m_->christoffel(x, v, v));
  return m_->tubular_retract(x + v - 0.5 * corr);
}

Mat SecondOrderRetraction::second_derivative(const Mat& x, const Mat& v, const Mat& w) const {
  return -0.5 * (m_->christoffel(x, v, w) + m_->christoffel(x, w, v));
}

Mat PlusRetraction::retract(const Mat& x, const Mat& v) const { return m_->tubular_retract(x + v); }

Mat PlusRetraction::second_derivative(const Mat& x, const Mat& v, const Mat& w) const {
  if (d2_) return d2_(x, v, w);
  return TangentRetraction::second_derivative(x, v, w);
}

RetractionHandle second_order_retraction(ManifoldHandle m) {
  return std::make_shared<SecondOrderRetraction>(std::move(m));
}

SdeSpec brownian_sde(ManifoldHandle m, SdeForm form, double scale) {
  if (!(scale > 0.0)) throw ParameterError("brownian_sde: scale must be positive");
  SdeSpec s;
  s.form = form;
  s.noise_rows = m->rows();
  s.noise_cols = m->cols();
  s.noise_metric_scale = scale;
  if (form == SdeForm::Ito)
    s.drift = [m, scale](const Mat& x, double) -> Mat { return scale * m->ito_drift(x); };
  else
    s.drift = [m, scale](const Mat& x, double) -> Mat { return scale * m->strat_drift(x); };
  const double root = std::sqrt(scale);
  s.diffusion = [m, root](const Mat& x, double, const Mat& w) -> Mat {
    return root * m->sigma_tangent(x, w);
  };
  return s;
}

}  // namespace msde
