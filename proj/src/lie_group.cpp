#include <cmath>
#include <string>

#include "msde/manifolds.hpp"
#include "orth_constraints.hpp"

namespace msde {

std::string lie_kind_name(LieKind kind) {
  switch (kind) {
    case LieKind::GLPlus: return "GL+";
    case LieKind::SL: return "SL";
    case LieKind::SO: return "SO";
    case LieKind::SE: return "SE";
    case LieKind::Aff: return "Aff";
  }
  return "?";
}

namespace {

bool affine_kind(LieKind k) { return k == LieKind::SE || k == LieKind::Aff; }

Mat spd_power(const Mat& C, double power) {
  SymEigDecomposition e = sym_eig(C);
  Vec d = e.values.array().pow(power);
  return e.vectors * d.asDiagonal() * e.vectors.transpose();
}

}  // namespace

LieStructure::LieStructure(LieKind kind, int N)
    : kind_(kind), N_(N), size_(affine_kind(kind) ? N + 1 : N) {
  if (N < 2) throw ParameterError("lie group: N must be at least 2");
  const Eigen::Index D = size_ * size_;
  std::vector<Vec> q;
  for (Eigen::Index k = 0; k < D; ++k) {
    Vec v = as_vec(p_g(ambient_basis(size_, size_, k)));
    for (const Vec& u : q) v -= u.dot(v) * u;
    double nv = v.norm();
    if (nv > 1e-8) q.push_back(v / nv);
  }
  basis_.resize(D, static_cast<Eigen::Index>(q.size()));
  for (std::size_t j = 0; j < q.size(); ++j) basis_.col(static_cast<Eigen::Index>(j)) = q[j];
  coeffs_ = Mat::Identity(basis_.cols(), basis_.cols());
}

LieStructure LieStructure::identity(LieKind kind, int N) { return LieStructure(kind, N); }

LieStructure LieStructure::from_coefficients(LieKind kind, int N, const Mat& coeffs) {
  LieStructure s(kind, N);
  s.set_coefficients(coeffs);
  return s;
}

LieStructure LieStructure::random(LieKind kind, int N, std::uint64_t seed, double max_cond) {
  if (!(max_cond >= 1.0)) throw ParameterError("lie metric: condition cap must be >= 1");
  LieStructure s(kind, N);
  const Eigen::Index d = s.dim();
  RngStream rng(seed, 0);
  Mat Q = polar_orth(gaussian_matrix(rng, d, d));
  Vec lambda(d);
  for (Eigen::Index i = 0; i < d; ++i) lambda(i) = std::pow(max_cond, rng.next_uniform() - 0.5);
  s.set_coefficients(Q * lambda.asDiagonal() * Q.transpose());
  return s;
}

LieStructure LieStructure::entrywise(int N, const Mat& Ibar) {
  if (Ibar.rows() != N || Ibar.cols() != N)
    throw DimensionError("lie metric: entrywise matrix must be N x N");
  if ((Ibar - Ibar.transpose()).norm() > 1e-12 * Ibar.norm() || !(Ibar.minCoeff() > 0.0))
    throw ParameterError("lie metric: entrywise matrix must be symmetric with positive entries");
  LieStructure s(LieKind::SO, N);
  Vec w = as_vec(Ibar);
  s.set_coefficients(s.basis_.transpose() * w.asDiagonal() * s.basis_);
  return s;
}

void LieStructure::set_coefficients(const Mat& C) {
  const Eigen::Index d = dim();
  if (C.rows() != d || C.cols() != d)
    throw DimensionError("lie metric: coefficient matrix must be dim(g) x dim(g)");
  Mat Cs = sym(C);
  if ((C - Cs).norm() > 1e-10 * std::max(1.0, C.norm()))
    throw ParameterError("lie metric: coefficient matrix is not symmetric");
  SymEigDecomposition e = sym_eig(Cs);
  if (!(e.values(0) > 0.0)) throw ParameterError("lie metric: coefficient matrix is not SPD");
  coeffs_ = Cs;
  identity_ = (Cs - Mat::Identity(d, d)).norm() == 0.0;
  const Eigen::Index D = size_ * size_;
  const Mat I_D = Mat::Identity(D, D), I_d = Mat::Identity(d, d);
  op_ = I_D + basis_ * (Cs - I_d) * basis_.transpose();
  op_inv_ = I_D + basis_ * (spd_power(Cs, -1.0) - I_d) * basis_.transpose();
  op_inv_sqrt_ = I_D + basis_ * (spd_power(Cs, -0.5) - I_d) * basis_.transpose();
}

Mat LieStructure::p_g(const Mat& w) const {
  const Eigen::Index N = N_;
  switch (kind_) {
    case LieKind::GLPlus: return w;
    case LieKind::SL: return w - (w.trace() / static_cast<double>(N)) * Mat::Identity(N, N);
    case LieKind::SO: return skew(w);
    case LieKind::SE: {
      Mat r = Mat::Zero(N + 1, N + 1);
      r.topLeftCorner(N, N) = skew(w.topLeftCorner(N, N));
      r.topRightCorner(N, 1) = w.topRightCorner(N, 1);
      return r;
    }
    case LieKind::Aff: {
      Mat r = w;
      r.row(N).setZero();
      return r;
    }
  }
  return w;
}

Mat LieStructure::apply_matrix(const Mat& op, const Mat& w) const {
  if (identity_) return w;
  return as_mat(op * as_vec(w), w.rows(), w.cols());
}

Mat LieStructure::apply(const Mat& w) const { return apply_matrix(op_, w); }
Mat LieStructure::apply_inv(const Mat& w) const { return apply_matrix(op_inv_, w); }
Mat LieStructure::apply_inv_sqrt(const Mat& w) const { return apply_matrix(op_inv_sqrt_, w); }

double LieStructure::inv_spectral_radius() const { return 1.0 / sym_eig(coeffs_).values(0); }

LieDriftSums lie_basis_drift_sums(const LieStructure& s) {
  const Eigen::Index n = s.size();
  Mat first = Mat::Zero(n, n), bracket = Mat::Zero(n, n);
  for (Eigen::Index k = 0; k < n * n; ++k) {
    Mat E = ambient_basis(n, n, k);
    Mat pE = s.p_g(E);
    first += E * s.apply_inv(pE);
    bracket += pE * E.transpose() - E.transpose() * pE;
  }
  LieDriftSums out;
  out.strat = s.apply_inv(s.p_g(bracket));
  out.ito = first - out.strat;
  return out;
}

LieGroup::LieGroup(LieStructure s, std::optional<double> bound)
    : Manifold(s.size(), s.size()), s_(std::move(s)), sums_(lie_basis_drift_sums(s_)) {
  if (bound) {
    if (!(*bound > 0.0)) throw ParameterError("lie group: spectral bound must be positive");
    if (s_.inv_spectral_radius() > *bound)
      throw ParameterError("lie group: metric violates the spectral bound on I^{-1}");
  } else if (!is_compact()) {
    warnings_.push_back(name() + ": noncompact group without a spectral bound on I^{-1}; "
                        "long simulations may grow without control");
  }
}

std::string LieGroup::name() const {
  return lie_kind_name(s_.kind()) + "(" + std::to_string(s_.N()) + ")";
}

Mat LieGroup::inverse(const Mat& x) const { return x.partialPivLu().inverse(); }

Mat LieGroup::metric(const Mat& x, const Mat& w) const {
  Mat xi = inverse(x);
  return xi.transpose() * s_.apply(xi * w);
}

Mat LieGroup::metric_inv(const Mat& x, const Mat& w) const {
  return x * s_.apply_inv(x.transpose() * w);
}

Mat LieGroup::proj(const Mat& x, const Mat& w) const { return x * s_.p_g(inverse(x) * w); }

Mat LieGroup::proj_metric_inv(const Mat& x, const Mat& w) const {
  return x * s_.apply_inv(s_.p_g(x.transpose() * w));
}

Mat LieGroup::christoffel(const Mat& x, const Mat& xi, const Mat& eta) const {
  Mat xinv = inverse(x);
  Mat a = xinv * xi, b = xinv * eta;
  Mat Ia = s_.apply(a), Ib = s_.apply(b);
  Mat br = Ia * b.transpose() - b.transpose() * Ia + Ib * a.transpose() - a.transpose() * Ib;
  return -0.5 * (xi * b + eta * a) + 0.5 * x * s_.apply_inv(s_.p_g(br));
}

Mat LieGroup::sigma(const Mat& x, const Mat& w) const {
  return x * s_.apply_inv_sqrt(s_.p_g(w));
}

Mat LieGroup::sigma_adjoint(const Mat& x, const Mat& w) const {
  return s_.apply_inv_sqrt(s_.p_g(x.transpose() * w));
}

Eigen::Index LieGroup::n_constraints() const {
  const Eigen::Index N = s_.N();
  switch (s_.kind()) {
    case LieKind::GLPlus: return 0;
    case LieKind::SL: return 1;
    case LieKind::SO: return detail::orth_count(N);
    case LieKind::SE: return detail::orth_count(N) + N + 1;
    case LieKind::Aff: return N + 1;
  }
  return 0;
}

Vec LieGroup::constraints(const Mat& x) const {
  const Eigen::Index N = s_.N();
  Vec c(n_constraints());
  switch (s_.kind()) {
    case LieKind::GLPlus: break;
    case LieKind::SL: c(0) = x.determinant() - 1.0; break;
    case LieKind::SO: detail::orth_values(x, detail::whole(x), c, 0); break;
    case LieKind::SE:
    case LieKind::Aff: {
      Eigen::Index off = 0;
      if (s_.kind() == LieKind::SE) {
        detail::orth_values(x, {0, 0, N, N, N + 1}, c, 0);
        off = detail::orth_count(N);
      }
      for (Eigen::Index j = 0; j <= N; ++j) c(off + j) = x(N, j) - (j == N ? 1.0 : 0.0);
      break;
    }
  }
  return c;
}

Mat LieGroup::constraint_jacobian(const Mat& x) const {
  const Eigen::Index N = s_.N(), n = rows(), D = ambient_dim();
  Mat J = Mat::Zero(n_constraints(), D);
  switch (s_.kind()) {
    case LieKind::GLPlus: break;
    case LieKind::SL: J.row(0) = x.determinant() * as_vec(Mat(inverse(x).transpose())).transpose(); break;
    case LieKind::SO: detail::orth_jacobian(x, detail::whole(x), J, 0); break;
    case LieKind::SE:
    case LieKind::Aff: {
      Eigen::Index off = 0;
      if (s_.kind() == LieKind::SE) {
        detail::orth_jacobian(x, {0, 0, N, N, n}, J, 0);
        off = detail::orth_count(N);
      }
      for (Eigen::Index j = 0; j <= N; ++j) J(off + j, N + j * n) = 1.0;
      break;
    }
  }
  return J;
}

Mat LieGroup::constraint_hessian(const Mat& x, Eigen::Index i) const {
  const Eigen::Index N = s_.N(), n = rows(), D = ambient_dim();
  if (i < 0 || i >= n_constraints()) throw DimensionError("lie group: constraint index out of range");
  switch (s_.kind()) {
    case LieKind::SL: {
      // det [tr(X^{-1} xi) tr(X^{-1} eta) - tr(X^{-1} xi X^{-1} eta)] with xi = E_ab, eta = E_cd.
      Mat Xi = inverse(x);
      const double det = x.determinant();
      Mat H(D, D);
      for (Eigen::Index b = 0; b < n; ++b)
        for (Eigen::Index a = 0; a < n; ++a)
          for (Eigen::Index d = 0; d < n; ++d)
            for (Eigen::Index c = 0; c < n; ++c)
              H(a + b * n, c + d * n) = det * (Xi(b, a) * Xi(d, c) - Xi(d, a) * Xi(b, c));
      return H;
    }
    case LieKind::SO: return detail::orth_hessian(detail::whole(x), i, D);
    case LieKind::SE:
      if (i < detail::orth_count(N)) return detail::orth_hessian({0, 0, N, N, n}, i, D);
      return Mat::Zero(D, D);
    default: return Mat::Zero(D, D);
  }
}

bool LieGroup::in_domain(const Mat& x) const {
  const Eigen::Index N = s_.N();
  if (affine_kind(s_.kind())) return Mat(x.topLeftCorner(N, N)).determinant() > 0.0;
  return x.determinant() > 0.0;
}

Mat LieGroup::tubular_retract(const Mat& q) const {
  const Eigen::Index N = s_.N();
  if (!q.allFinite() || !in_domain(q))
    throw DomainError(name() + ": retraction needs a positive determinant");
  try {
    switch (s_.kind()) {
      case LieKind::GLPlus: return q;
      case LieKind::SL: return q / std::pow(q.determinant(), 1.0 / static_cast<double>(N));
      case LieKind::SO: return polar_orth(q);
      case LieKind::SE:
      case LieKind::Aff: {
        Mat r = q;
        if (s_.kind() == LieKind::SE) r.topLeftCorner(N, N) = polar_orth(q.topLeftCorner(N, N));
        r.row(N).setZero();
        r(N, N) = 1.0;
        return r;
      }
    }
  } catch (const SingularityError& e) {
    throw DomainError(name() + ": " + e.what());
  }
  return q;
}

Mat LieGroup::tubular_differential(const Mat& x, const Mat& w) const {
  const Eigen::Index N = s_.N();
  switch (s_.kind()) {
    case LieKind::GLPlus: return w;
    case LieKind::SL: return w - ((inverse(x) * w).trace() / static_cast<double>(N)) * x;
    case LieKind::SO: return w - x * sym(x.transpose() * w);
    case LieKind::SE:
    case LieKind::Aff: {
      Mat r = w;
      if (s_.kind() == LieKind::SE) {
        Mat R = x.topLeftCorner(N, N);
        r.topLeftCorner(N, N) -= R * sym(R.transpose() * w.topLeftCorner(N, N));
      }
      r.row(N).setZero();
      return r;
    }
  }
  return w;
}

Mat LieGroup::ito_drift(const Mat& x) const { return 0.5 * x * sums_.ito; }

Mat LieGroup::strat_drift(const Mat& x) const { return -0.5 * x * sums_.strat; }

Mat LieGroup::base_point() const { return Mat::Identity(rows(), rows()); }

Mat LieGroup::random_point(RngStream& rng) const {
  if (s_.kind() == LieKind::SO) {
    Mat q = polar_orth(gaussian_matrix(rng, rows(), rows()));
    if (q.determinant() < 0.0) q.col(rows() - 1) *= -1.0;
    return q;
  }
  // Near the identity, rejecting nearly singular draws so test points stay well conditioned.
  const Eigen::Index N = s_.N();
  for (;;) {
    Mat q = Mat::Identity(rows(), rows()) + 0.5 * s_.p_g(gaussian_matrix(rng, rows(), rows()));
    if (!in_domain(q)) continue;
    Mat x = tubular_retract(q);
    Eigen::JacobiSVD<Mat> svd(x.topLeftCorner(N, N));
    if (svd.singularValues().minCoeff() >= 0.25) return x;
  }
}

std::shared_ptr<const LieGroup> make_lie_group(LieKind kind, int N, std::optional<LieStructure> metric,
                                               std::optional<double> bound) {
  LieStructure s = metric ? std::move(*metric) : LieStructure::identity(kind, N);
  if (s.kind() != kind || s.N() != N)
    throw ParameterError("make_lie_group: metric structure belongs to a different group");
  return std::make_shared<LieGroup>(std::move(s), bound);
}

SdeSpec lie_frame_brownian_sde(std::shared_ptr<const LieGroup> g, SdeForm form, double scale) {
  SdeSpec spec = brownian_sde(g, form, scale);
  spec.noise_rows = g->structure().dim();
  spec.noise_cols = 1;
  const double root = std::sqrt(scale);
  spec.diffusion = [g, root](const Mat& x, double, const Mat& w) -> Mat {
    const LieStructure& s = g->structure();
    Mat v = as_mat(s.basis() * as_vec(w), s.size(), s.size());
    return root * x * s.apply_inv_sqrt(v);
  };
  return spec;
}

}  // namespace msde
