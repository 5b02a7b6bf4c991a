#include "msde/integrators.hpp"

#include <cmath>
#include <string>

namespace msde {

double truncation_bound(double h, double r) {
  if (!(h > 0.0) || !(h < 1.0)) throw ParameterError("truncation: need 0 < h < 1");
  if (!(r >= 1.0)) throw ParameterError("truncation: need r >= 1");
  return std::sqrt(2.0 * r * std::abs(std::log(h)));
}

WienerIncrement truncate_increment(Vec raw, double h, double r) {
  const double A = truncation_bound(h, r);
  WienerIncrement inc;
  inc.truncated = raw.cwiseMax(-A).cwiseMin(A);
  inc.raw = std::move(raw);
  inc.h = h;
  inc.r = r;
  return inc;
}

WienerIncrement truncated_increment(RngStream& rng, Eigen::Index k, double h, double r) {
  Vec raw(k);
  for (Eigen::Index i = 0; i < k; ++i) raw(i) = rng.next_normal();
  return truncate_increment(std::move(raw), h, r);
}

Mat step_ito_projected(const Manifold& m, const SdeSpec& sde, const Mat& x, double t, double h,
                       const Mat& zeta) {
  return m.tubular_retract(x + h * sde.drift(x, t) + std::sqrt(h) * sde.diffusion(x, t, zeta));
}

Mat step_stratonovich_heun_projected(const Manifold& m, const SdeSpec& sde, const Mat& x, double t,
                                     double h, const Mat& zeta) {
  const double sh = std::sqrt(h);
  Mat s0 = sde.diffusion(x, t, zeta);
  Mat s1 = sde.diffusion(x + sh * s0, t, zeta);
  return m.tubular_retract(x + h * sde.drift(x, t) + 0.5 * sh * (s0 + s1));
}

Mat mu_retraction_adjusted(const Manifold& m, const SdeSpec& sde, const TangentRetraction& r,
                           const Mat& x, double t) {
  (void)m;
  Mat mu = sde.drift(x, t);
  for (Eigen::Index j = 0; j < sde.noise_dim(); ++j) {
    Mat v = sde.diffusion(x, t, ambient_basis(sde.noise_rows, sde.noise_cols, j));
    mu -= 0.5 * r.second_derivative(x, v, v);
  }
  return mu;
}

Mat step_retractive_em(const Manifold& m, const SdeSpec& sde, const TangentRetraction& r,
                       const Mat& x, double t, double h, const Mat& zeta) {
  Mat move = std::sqrt(h) * sde.diffusion(x, t, zeta) + h * mu_retraction_adjusted(m, sde, r, x, t);
  return r.retract(x, move);
}

Mat step_geodesic_walk(const Manifold& m, const SdeSpec& sde, const TangentRetraction& r,
                       const Mat& x, double t, double h, const Mat& xi, bool experimental_drift) {
  Mat v = sde.diffusion(x, t, xi);
  const double g2 = frobenius_inner(v, m.metric(x, v));
  if (!(g2 > 0.0)) throw DomainError("geodesic walk: degenerate noise direction");
  const double d = static_cast<double>(m.dim());
  Mat move = std::sqrt(h * d * sde.noise_metric_scale / g2) * v;
  if (experimental_drift) move += h * mu_retraction_adjusted(m, sde, r, x, t);
  return r.retract(x, move);
}

GeodesicState integrate_geodesic_rk4_projected(const Manifold& m, const Mat& x0, const Mat& v0,
                                               double T, int steps) {
  if (steps < 1) throw ParameterError("rk4 geodesic: steps must be positive");
  const double h = T / steps;
  const double limit = 1e6 * (1.0 + v0.norm());
  Mat x = x0, v = v0;
  auto acc = [&m](const Mat& y, const Mat& u) -> Mat { return -m.christoffel(y, u, u); };
  for (int s = 0; s < steps; ++s) {
    Mat k1x = v, k1v = acc(x, v);
    Mat k2x = v + 0.5 * h * k1v, k2v = acc(x + 0.5 * h * k1x, k2x);
    Mat k3x = v + 0.5 * h * k2v, k3v = acc(x + 0.5 * h * k2x, k3x);
    Mat k4x = v + h * k3v, k4v = acc(x + h * k3x, k4x);
    Mat xn = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    Mat vn = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    x = m.tubular_retract(xn);
    v = m.proj(x, vn);
    if (!v.allFinite() || v.norm() > limit) throw DivergenceError("rk4 geodesic: velocity blew up");
  }
  return {x, v};
}

Mat Rk4ExpRetraction::retract(const Mat& x, const Mat& v) const {
  return integrate_geodesic_rk4_projected(*m_, x, v, 1.0, substeps_).x;
}

Mat Rk4ExpRetraction::second_derivative(const Mat& x, const Mat& v, const Mat& w) const {
  return -0.5 * (m_->christoffel(x, v, w) + m_->christoffel(x, w, v));
}

namespace {

struct IdName {
  IntegratorId id;
  const char* name;
};

constexpr IdName kIds[] = {{IntegratorId::ItoEm, "ito-em"},
                           {IntegratorId::StratHeun, "strat-heun"},
                           {IntegratorId::GeodesicWalk, "geodesic-walk"},
                           {IntegratorId::RetractiveEm, "retractive-em"},
                           {IntegratorId::Rk4Geodesic, "rk4-geodesic"}};

bool normalized(IntegratorId id) {
  return id == IntegratorId::GeodesicWalk || id == IntegratorId::Rk4Geodesic;
}

}  // namespace

const std::vector<std::string>& integrator_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : kIds) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

IntegratorId parse_integrator(const std::string& id) {
  for (const auto& e : kIds)
    if (id == e.name) return e.id;
  std::string valid;
  for (const auto& s : integrator_names()) valid += (valid.empty() ? "" : ", ") + s;
  throw ParameterError("unknown integrator '" + id + "' (valid: " + valid + ")");
}

std::string integrator_name(IntegratorId id) {
  for (const auto& e : kIds)
    if (id == e.id) return e.name;
  return "?";
}

SdeForm integrator_form(IntegratorId id) {
  return id == IntegratorId::StratHeun ? SdeForm::Stratonovich : SdeForm::Ito;
}

Integrator::Integrator(IntegratorId id, ManifoldHandle m, SdeSpec sde, IntegratorOptions opts,
                       RetractionHandle retraction)
    : id_(id), m_(std::move(m)), sde_(std::move(sde)), opts_(opts), r_(std::move(retraction)) {
  if (sde_.form != integrator_form(id_))
    throw ParameterError(integrator_name(id_) + ": SDE is given in the wrong form");
  if (opts_.max_retries < 0) throw ParameterError("integrator: max_retries must be >= 0");
  if (!r_) {
    if (id_ == IntegratorId::Rk4Geodesic)
      r_ = std::make_shared<Rk4ExpRetraction>(m_, opts_.rk4_substeps);
    else
      r_ = second_order_retraction(m_);
  }
}

Mat Integrator::draw_noise(RngStream& rng, double h) const {
  Mat z = gaussian_matrix(rng, sde_.noise_rows, sde_.noise_cols);
  if (normalized(id_)) return z;
  const double A = truncation_bound(h, opts_.r);
  return z.cwiseMax(-A).cwiseMin(A);
}

Mat Integrator::step_with_noise(const Mat& x, double t, double h, const Mat& noise) const {
  switch (id_) {
    case IntegratorId::ItoEm: return step_ito_projected(*m_, sde_, x, t, h, noise);
    case IntegratorId::StratHeun: return step_stratonovich_heun_projected(*m_, sde_, x, t, h, noise);
    case IntegratorId::RetractiveEm: return step_retractive_em(*m_, sde_, *r_, x, t, h, noise);
    case IntegratorId::GeodesicWalk:
    case IntegratorId::Rk4Geodesic:
      return step_geodesic_walk(*m_, sde_, *r_, x, t, h, noise, opts_.experimental_drift);
  }
  return x;
}

StepResult Integrator::advance(const Mat& x, double t, double h, RngStream& rng) const {
  std::string last_reason;
  for (int attempt = 0; attempt <= opts_.max_retries; ++attempt) {
    Mat noise = draw_noise(rng, h);
    try {
      Mat next = step_with_noise(x, t, h, noise);
      double res = constraint_residual(*m_, next);
      if (res < opts_.feasibility_tol) return {std::move(next), attempt, res};
      last_reason = "constraint residual " + std::to_string(res);
    } catch (const DomainError& e) {
      last_reason = e.what();
    } catch (const SpectrumError& e) {
      last_reason = e.what();
    } catch (const SingularityError& e) {
      last_reason = e.what();
    }
  }
  throw StepFailure(integrator_name(id_) + ": step failed after " +
                    std::to_string(opts_.max_retries) + " resamples (" + last_reason + ")");
}

}  // namespace msde
