#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "msde/integrators.hpp"
#include "msde/manifolds.hpp"
#include "test_support.hpp"

using namespace msde;

TEST(Truncation, ClampRule) {
  const double h = std::exp(-2.0);
  EXPECT_NEAR(truncation_bound(h, 1.0), 2.0, 1e-14);
  Vec raw(3);
  raw << 3.0, 1.0, -5.0;
  WienerIncrement inc = truncate_increment(raw, h, 1.0);
  EXPECT_NEAR(inc.truncated(0), 2.0, 1e-14);
  EXPECT_EQ(inc.truncated(1), 1.0);
  EXPECT_NEAR(inc.truncated(2), -2.0, 1e-14);
  EXPECT_EQ(inc.raw, raw);
}

TEST(Truncation, ParameterErrors) {
  EXPECT_THROW(truncation_bound(1.0, 1.0), ParameterError);
  EXPECT_THROW(truncation_bound(2.0, 1.0), ParameterError);
  EXPECT_THROW(truncation_bound(0.1, 0.5), ParameterError);
  RngStream rng(1, 0);
  EXPECT_THROW(truncated_increment(rng, 3, 1.5, 1.0), ParameterError);
}

TEST(Truncation, MeanStaysCentred) {
  RngStream rng(2, 0);
  const int n = 1000000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n / 4; ++i) {
    WienerIncrement inc = truncated_increment(rng, 4, 0.01, 1.0);
    for (int k = 0; k < 4; ++k) {
      sum += inc.truncated(k);
      sq += inc.truncated(k) * inc.truncated(k);
    }
  }
  const double mean = sum / n, se = std::sqrt((sq / n - mean * mean) / n);
  EXPECT_LT(std::abs(mean), 5 * se);
}

TEST(Steppers, SphereDriftOnlyStepIsExact) {
  auto s = make_sphere(3);
  SdeSpec sde = brownian_sde(s, SdeForm::Ito);
  Mat x = s->base_point();
  Mat zero = Mat::Zero(3, 1);
  EXPECT_LT((step_ito_projected(*s, sde, x, 0.0, 0.01, zero) - x).norm(), 1e-15);
  SdeSpec strat = brownian_sde(s, SdeForm::Stratonovich);
  EXPECT_LT((step_stratonovich_heun_projected(*s, strat, x, 0.0, 0.01, zero) - x).norm(), 1e-15);
}

TEST(Steppers, DriftOnlyStepIsFirstOrder) {
  auto g = make_lie_group(LieKind::SL, 3);
  SdeSpec sde = brownian_sde(g, SdeForm::Ito);
  RngStream rng(3, 0);
  Mat x = g->random_point(rng);
  Mat zero = Mat::Zero(3, 3);
  for (double h : {1e-2, 1e-3, 1e-4}) {
    Mat y = step_ito_projected(*g, sde, x, 0.0, h, zero);
    Mat first = h * g->tubular_differential(x, sde.drift(x, 0.0));
    EXPECT_LT((y - x - first).norm(), 10 * h * h * (1 + x.norm()));
  }
}

TEST(Steppers, HeunWithConstantDiffusionMatchesEuler) {
  auto h = make_hyperbolic(3);
  SdeSpec sde;
  sde.form = SdeForm::Stratonovich;
  sde.noise_rows = 3;
  sde.noise_cols = 1;
  sde.drift = [](const Mat& x, double) { return Mat(0.1 * x); };
  sde.diffusion = [](const Mat&, double, const Mat& z) { return Mat(0.2 * z); };
  SdeSpec ito = sde;
  ito.form = SdeForm::Ito;
  RngStream rng(4, 0);
  Mat x = h->base_point();
  Mat z = gaussian_matrix(rng, 3, 1);
  EXPECT_LT((step_stratonovich_heun_projected(*h, sde, x, 0, 0.01, z) -
             step_ito_projected(*h, ito, x, 0, 0.01, z))
                .norm(),
            1e-15);
}

TEST(Steppers, SoStepIsOrthogonal) {
  auto g = make_lie_group(LieKind::SO, 3);
  SdeSpec sde = brownian_sde(g, SdeForm::Ito);
  RngStream rng(5, 0);
  Mat x = g->random_point(rng);
  Mat y = step_ito_projected(*g, sde, x, 0.0, 0.01, gaussian_matrix(rng, 3, 3));
  EXPECT_LT((y.transpose() * y - Mat::Identity(3, 3)).norm(), 1e-12);
}

TEST(Steppers, SphereRetractionAdjustedDriftIsZero) {
  auto s = make_sphere(5);
  SdeSpec sde = brownian_sde(s, SdeForm::Ito);
  RetractionHandle r = second_order_retraction(s);
  RngStream rng(6, 0);
  for (int k = 0; k < 5; ++k) {
    Mat x = s->random_point(rng);
    EXPECT_LT(mu_retraction_adjusted(*s, sde, *r, x, 0.0).norm(), 1e-12);
  }
}

TEST(Steppers, HypersurfaceRetractionAdjustedDrift) {
  auto hs = make_hypersurface(Vec::LinSpaced(3, 1.0, 3.0), 4);
  SdeSpec sde = brownian_sde(hs, SdeForm::Ito);
  RetractionHandle r = hypersurface_plus_retraction(hs);
  RngStream rng(7, 0);
  const Vec d = hs->weights();
  for (int k = 0; k < 5; ++k) {
    Mat x = hs->random_point(rng);
    Mat expect = sde.drift(x, 0.0);
    for (int j = 0; j < 3; ++j) {
      Vec v = sde.diffusion(x, 0.0, ambient_basis(3, 1, j));
      double s = 0;
      for (int i = 0; i < 3; ++i) s += d(i) * std::pow(x(i, 0), 2) * v(i) * v(i);
      expect -= 0.5 * (1 - 4) * s * x;
    }
    EXPECT_LT((mu_retraction_adjusted(*hs, sde, *r, x, 0.0) - expect).norm(), 1e-12);
  }
}

TEST(Steppers, RetractiveEmWithoutNoise) {
  auto st = make_stiefel({5, 3, 1.0, 0.5});
  SdeSpec sde = brownian_sde(st, SdeForm::Ito);
  RetractionHandle r = second_order_retraction(st);
  RngStream rng(8, 0);
  Mat x = st->random_point(rng);
  Mat zero = Mat::Zero(5, 3);
  Mat mu = mu_retraction_adjusted(*st, sde, *r, x, 0.0);
  EXPECT_LT((step_retractive_em(*st, sde, *r, x, 0.0, 0.01, zero) - r->retract(x, 0.01 * mu)).norm(), 1e-15);
  // Brownian motion with a second-order retraction: the step is the drift-free retraction.
  Mat z = gaussian_matrix(rng, 5, 3);
  EXPECT_LT((step_retractive_em(*st, sde, *r, x, 0.0, 0.01, z) -
             r->retract(x, 0.1 * sde.diffusion(x, 0.0, z)))
                .norm(),
            1e-9);
}

TEST(Steppers, GeodesicWalkStepLength) {
  for (const auto& nm : msde::testing::geometry_family()) {
    const Manifold& m = *nm.m;
    SdeSpec sde = brownian_sde(nm.m, SdeForm::Ito, 0.4);
    RngStream rng(9, 0);
    Mat x = m.random_point(rng);
    Mat xi = gaussian_matrix(rng, m.rows(), m.cols());
    struct Capture : TangentRetraction {
      mutable Mat last;
      Mat retract(const Mat& x, const Mat& v) const override {
        last = v;
        return x;
      }
    } cap;
    const double h = 0.01;
    step_geodesic_walk(m, sde, cap, x, 0.0, h, xi);
    const double g2 = frobenius_inner(cap.last, m.metric(x, cap.last)) / sde.noise_metric_scale;
    EXPECT_NEAR(g2, h * m.dim(), 1e-10 * h * m.dim()) << nm.label;
  }
}

TEST(Steppers, GeodesicWalkDirectionIsUniformOnSphere) {
  // Tangent plane of S^2 at e_1: the angle of the step must be uniform on the circle.
  auto s = make_sphere(3);
  SdeSpec sde = brownian_sde(s, SdeForm::Ito);
  struct Capture : TangentRetraction {
    mutable Mat last;
    Mat retract(const Mat& x, const Mat& v) const override {
      last = v;
      return x;
    }
  } cap;
  RngStream rng(10, 0);
  const int bins = 20, n = 10000;
  std::vector<int> count(bins, 0);
  Mat x = s->base_point();
  for (int k = 0; k < n; ++k) {
    step_geodesic_walk(*s, sde, cap, x, 0.0, 0.01, gaussian_matrix(rng, 3, 1));
    const double a = std::atan2(cap.last(2, 0), cap.last(1, 0)) + std::numbers::pi;
    count[std::min(bins - 1, static_cast<int>(a / (2 * std::numbers::pi) * bins))]++;
  }
  double chi2 = 0;
  const double e = static_cast<double>(n) / bins;
  for (int c : count) chi2 += (c - e) * (c - e) / e;
  EXPECT_LT(chi2, 43.82);  // chi^2_{19} upper 0.001 quantile
}

TEST(Rk4Geodesic, SphereHalfTurn) {
  auto s = make_sphere(3);
  Mat x = s->base_point();
  Mat v = Mat::Zero(3, 1);
  v(1, 0) = 1.0;
  GeodesicState end = integrate_geodesic_rk4_projected(*s, x, v, std::numbers::pi, 200);
  EXPECT_LT((end.x + x).norm(), 1e-6);
  GeodesicState rest = integrate_geodesic_rk4_projected(*s, x, Mat::Zero(3, 1), 1.0, 10);
  EXPECT_LT((rest.x - x).norm(), 1e-15);
  EXPECT_LT(rest.v.norm(), 1e-15);
  EXPECT_THROW(integrate_geodesic_rk4_projected(*s, x, v, 1.0, 0), ParameterError);
}

TEST(Rk4Geodesic, SoOneParameterSubgroup) {
  auto g = make_lie_group(LieKind::SO, 3);
  RngStream rng(11, 0);
  Mat x = g->random_point(rng);
  Mat v = g->random_tangent(x, rng);
  GeodesicState end = integrate_geodesic_rk4_projected(*g, x, v, 1.0, 100);
  Mat a = x.transpose() * v;
  Mat expect = x * a.exp();
  EXPECT_LT((end.x - expect).norm(), 1e-6);
}

TEST(Rk4Geodesic, DivergenceIsDetected) {
  // A huge downward speed pushes the first RK4 stage through x_n = 0.
  auto h = make_hyperbolic(2);
  Mat x = h->base_point();
  Mat v(2, 1);
  v << 0.0, -1e4;
  EXPECT_ANY_THROW(integrate_geodesic_rk4_projected(*h, x, v, 1.0, 2));
}

TEST(IntegratorIds, ParseAndNames) {
  for (const auto& n : integrator_names()) EXPECT_EQ(integrator_name(parse_integrator(n)), n);
  try {
    parse_integrator("milstein");
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("ito-em"), std::string::npos);
  }
  EXPECT_EQ(integrator_form(IntegratorId::StratHeun), SdeForm::Stratonovich);
  EXPECT_EQ(integrator_form(IntegratorId::GeodesicWalk), SdeForm::Ito);
}

TEST(Integrator, RejectsWrongForm) {
  auto s = make_sphere(3);
  EXPECT_THROW(Integrator(IntegratorId::StratHeun, s, brownian_sde(s, SdeForm::Ito)), ParameterError);
}

TEST(Integrator, FeasibilityForAllSchemesOnCompactManifolds) {
  const IntegratorId ids[] = {IntegratorId::ItoEm, IntegratorId::StratHeun, IntegratorId::GeodesicWalk,
                              IntegratorId::RetractiveEm, IntegratorId::Rk4Geodesic};
  for (const auto& nm : msde::testing::geometry_family()) {
    if (!nm.m->is_compact()) continue;
    for (IntegratorId id : ids) {
      Integrator integ(id, nm.m, brownian_sde(nm.m, integrator_form(id)));
      RngStream rng(12, 0);
      Mat x = nm.m->base_point();
      for (int k = 0; k < 20; ++k) {
        StepResult r = integ.advance(x, k * 0.01, 0.01, rng);
        EXPECT_LT(r.residual, 1e-8);
        x = r.next;
      }
      EXPECT_LT(constraint_residual(*nm.m, x), 1e-8) << nm.label << " " << integrator_name(id);
    }
  }
}

TEST(Integrator, NoncompactSchemesStayInDomain) {
  for (auto m : {make_spd(3), ManifoldHandle(make_lie_group(LieKind::SL, 3)), make_hyperbolic(3)}) {
    for (IntegratorId id : {IntegratorId::ItoEm, IntegratorId::StratHeun, IntegratorId::RetractiveEm}) {
      Integrator integ(id, m, brownian_sde(m, integrator_form(id)));
      RngStream rng(13, 0);
      Mat x = m->base_point();
      for (int k = 0; k < 50; ++k) x = integ.advance(x, 0.0, 0.01, rng).next;
      EXPECT_TRUE(m->in_domain(x)) << m->name();
    }
  }
}

TEST(Integrator, RetriesThenFails) {
  // An SDE whose step always leaves the hyperbolic half-space.
  auto h = make_hyperbolic(2);
  SdeSpec sde;
  sde.form = SdeForm::Ito;
  sde.noise_rows = 2;
  sde.noise_cols = 1;
  sde.drift = [](const Mat& x, double) { return Mat(-1e3 * x); };
  sde.diffusion = [](const Mat&, double, const Mat& z) { return Mat(0 * z); };
  IntegratorOptions opts;
  opts.max_retries = 3;
  Integrator integ(IntegratorId::ItoEm, h, sde, opts);
  RngStream rng(14, 0);
  EXPECT_THROW(integ.advance(h->base_point(), 0.0, 0.01, rng), StepFailure);
  EXPECT_EQ(rng.counter() > 0, true);
}

TEST(Integrator, DeterministicGivenStream) {
  auto g = make_lie_group(LieKind::SO, 4);
  Integrator integ(IntegratorId::ItoEm, g, brownian_sde(g, SdeForm::Ito));
  RngStream a(15, 3), b(15, 3);
  Mat x = g->base_point();
  EXPECT_EQ(integ.advance(x, 0, 0.01, a).next, integ.advance(x, 0, 0.01, b).next);
}
