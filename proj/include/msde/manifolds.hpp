#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msde/geometry.hpp"

namespace msde {

// Unit sphere in R^n (n x 1 ambient), embedded metric.
class Sphere final : public Manifold {
 public:
  explicit Sphere(int n);
  std::string name() const override;
  Eigen::Index dim() const override { return rows() - 1; }
  bool is_compact() const override { return true; }

  Mat metric(const Mat&, const Mat& w) const override { return w; }
  Mat metric_inv(const Mat&, const Mat& w) const override { return w; }
  Mat proj(const Mat& x, const Mat& w) const override;
  Mat christoffel(const Mat& x, const Mat& xi, const Mat& eta) const override;
  Mat sigma(const Mat&, const Mat& w) const override { return w; }
  Mat sigma_adjoint(const Mat&, const Mat& w) const override { return w; }

  Eigen::Index n_constraints() const override { return 1; }
  Vec constraints(const Mat& x) const override;
  Mat constraint_jacobian(const Mat& x) const override;
  Mat constraint_hessian(const Mat& x, Eigen::Index i) const override;

  Mat tubular_retract(const Mat& q) const override;
  Mat tubular_differential(const Mat& x, const Mat& w) const override;
  Mat ito_drift(const Mat& x) const override;
  Mat strat_drift(const Mat& x) const override;
  Mat base_point() const override;
  Mat random_point(RngStream& rng) const override;
};

// Upper half space x_n > 0 with g = I / x_n^2.
class Hyperbolic final : public Manifold {
 public:
  explicit Hyperbolic(int n);
  std::string name() const override;
  Eigen::Index dim() const override { return rows(); }
  bool is_compact() const override { return false; }

  Mat metric(const Mat& x, const Mat& w) const override;
  Mat metric_inv(const Mat& x, const Mat& w) const override;
  Mat proj(const Mat&, const Mat& w) const override { return w; }
  Mat christoffel(const Mat& x, const Mat& xi, const Mat& eta) const override;
  Mat sigma(const Mat& x, const Mat& w) const override;
  Mat sigma_adjoint(const Mat& x, const Mat& w) const override;

  Eigen::Index n_constraints() const override { return 0; }
  Vec constraints(const Mat&) const override { return Vec(0); }
  bool in_domain(const Mat& x) const override;

  Mat tubular_retract(const Mat& q) const override;
  Mat tubular_differential(const Mat&, const Mat& w) const override { return w; }
  Mat ito_drift(const Mat& x) const override;
  Mat strat_drift(const Mat& x) const override;
  Mat base_point() const override;
  Mat random_point(RngStream& rng) const override;
};

enum class LieKind { GLPlus, SL, SO, SE, Aff };

std::string lie_kind_name(LieKind kind);

// Left-invariant metric data: orthonormal basis of the Lie algebra (trace pairing) and the SPD
// coefficient matrix I_P in that basis. The operator acts as the identity on the orthogonal
// complement of the algebra.
class LieStructure {
 public:
  static LieStructure identity(LieKind kind, int N);
  static LieStructure from_coefficients(LieKind kind, int N, const Mat& coeffs);
  // I_P = Q diag(lambda) Q^T with lambda log-uniform in [max_cond^{-1/2}, max_cond^{1/2}].
  static LieStructure random(LieKind kind, int N, std::uint64_t seed, double max_cond = 10.0);
  // SO(N) only: I(E_ij) = Ibar_ij E_ij for a symmetric matrix with positive entries.
  static LieStructure entrywise(int N, const Mat& Ibar);

  LieKind kind() const { return kind_; }
  int N() const { return N_; }
  Eigen::Index size() const { return size_; }  // ambient matrix size (N or N + 1)
  Eigen::Index dim() const { return basis_.cols(); }
  bool is_identity() const { return identity_; }
  const Mat& basis() const { return basis_; }  // columns are vectorised algebra elements
  const Mat& coefficients() const { return coeffs_; }

  Mat p_g(const Mat& w) const;
  Mat apply(const Mat& w) const;
  Mat apply_inv(const Mat& w) const;
  Mat apply_inv_sqrt(const Mat& w) const;
  // Largest eigenvalue of I^{-1} on the algebra.
  double inv_spectral_radius() const;

 private:
  LieStructure(LieKind kind, int N);
  void set_coefficients(const Mat& coeffs);
  Mat apply_matrix(const Mat& op, const Mat& w) const;

  LieKind kind_;
  int N_;
  Eigen::Index size_;
  bool identity_ = true;
  Mat basis_;
  Mat coeffs_;
  Mat op_, op_inv_, op_inv_sqrt_;
};

struct LieDriftSums {
  Mat ito;    // sum E_ij I^{-1}(E_ij)_g - I^{-1}[(E_ij)_g, E_ji]_g
  Mat strat;  // I^{-1}[(E_ij)_g, E_ji]_g
};

LieDriftSums lie_basis_drift_sums(const LieStructure& s);

class LieGroup final : public Manifold {
 public:
  LieGroup(LieStructure s, std::optional<double> inv_spectral_bound = std::nullopt);
  std::string name() const override;
  Eigen::Index dim() const override { return s_.dim(); }
  bool is_compact() const override { return s_.kind() == LieKind::SO; }

  Mat metric(const Mat& x, const Mat& w) const override;
  Mat metric_inv(const Mat& x, const Mat& w) const override;
  Mat proj(const Mat& x, const Mat& w) const override;
  Mat proj_metric_inv(const Mat& x, const Mat& w) const override;
  Mat christoffel(const Mat& x, const Mat& xi, const Mat& eta) const override;
  Mat sigma(const Mat& x, const Mat& w) const override;
  Mat sigma_adjoint(const Mat& x, const Mat& w) const override;
  Mat sigma_tangent(const Mat& x, const Mat& w) const override { return sigma(x, w); }

  Eigen::Index n_constraints() const override;
  Vec constraints(const Mat& x) const override;
  Mat constraint_jacobian(const Mat& x) const override;
  Mat constraint_hessian(const Mat& x, Eigen::Index i) const override;
  bool in_domain(const Mat& x) const override;

  Mat tubular_retract(const Mat& q) const override;
  Mat tubular_differential(const Mat& x, const Mat& w) const override;
  Mat ito_drift(const Mat& x) const override;
  Mat strat_drift(const Mat& x) const override;
  Mat base_point() const override;
  Mat random_point(RngStream& rng) const override;

  const LieStructure& structure() const { return s_; }
  const LieDriftSums& drift_sums() const { return sums_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  Mat inverse(const Mat& x) const;

  LieStructure s_;
  LieDriftSums sums_;
  std::vector<std::string> warnings_;
};

// Brownian motion driven by dim(g) scalar noises along the left-translated I-orthonormal basis.
SdeSpec lie_frame_brownian_sde(std::shared_ptr<const LieGroup> g, SdeForm form, double scale = 1.0);

// S(x) = -V diag(b_i^2 (1/4 + sum_j b_j / (2 (b_i + b_j)))) V^T for x = V diag(b^2) V^T.
Mat spd_strat_adjustment(const Mat& x);

// Symmetric positive-definite N x N matrices with the affine-invariant metric.
class Spd final : public Manifold {
 public:
  explicit Spd(int N);
  std::string name() const override;
  Eigen::Index dim() const override { return rows() * (rows() + 1) / 2; }
  bool is_compact() const override { return false; }

  Mat metric(const Mat& x, const Mat& w) const override;
  Mat metric_inv(const Mat& x, const Mat& w) const override;
  Mat proj(const Mat&, const Mat& w) const override { return sym(w); }
  Mat proj_metric_inv(const Mat& x, const Mat& w) const override;
  Mat christoffel(const Mat& x, const Mat& xi, const Mat& eta) const override;
  Mat sigma(const Mat& x, const Mat& w) const override;
  Mat sigma_adjoint(const Mat& x, const Mat& w) const override { return sigma(x, w); }
  Mat sigma_tangent(const Mat& x, const Mat& w) const override;

  Eigen::Index n_constraints() const override { return rows() * (rows() - 1) / 2; }
  Vec constraints(const Mat& x) const override;
  Mat constraint_jacobian(const Mat& x) const override;
  Mat constraint_hessian(const Mat& x, Eigen::Index i) const override;
  bool in_domain(const Mat& x) const override;

  Mat tubular_retract(const Mat& q) const override;
  Mat tubular_differential(const Mat&, const Mat& w) const override { return sym(w); }
  Mat ito_drift(const Mat& x) const override;
  Mat strat_drift(const Mat& x) const override;
  Mat base_point() const override;
  Mat random_point(RngStream& rng) const override;
};

struct StiefelParams {
  int n = 0;
  int p = 0;
  double alpha0 = 1.0;
  double alpha1 = 1.0;
};

class Stiefel final : public Manifold {
 public:
  explicit Stiefel(StiefelParams params);
  std::string name() const override;
  Eigen::Index dim() const override;
  bool is_compact() const override { return true; }
  const StiefelParams& params() const { return prm_; }

  Mat metric(const Mat& x, const Mat& w) const override;
  Mat metric_inv(const Mat& x, const Mat& w) const override;
  Mat proj(const Mat& x, const Mat& w) const override;
  Mat christoffel(const Mat& x, const Mat& xi, const Mat& eta) const override;
  Mat sigma(const Mat& x, const Mat& w) const override;
  Mat sigma_adjoint(const Mat& x, const Mat& w) const override { return sigma(x, w); }
  Mat sigma_tangent(const Mat& x, const Mat& w) const override;

  Eigen::Index n_constraints() const override;
  Vec constraints(const Mat& x) const override;
  Mat constraint_jacobian(const Mat& x) const override;
  Mat constraint_hessian(const Mat& x, Eigen::Index i) const override;

  Mat tubular_retract(const Mat& q) const override;
  Mat tubular_differential(const Mat& x, const Mat& w) const override;
  Mat ito_drift(const Mat& x) const override;
  Mat strat_drift(const Mat& x) const override;
  Mat base_point() const override;
  Mat random_point(RngStream& rng) const override;

 private:
  StiefelParams prm_;
};

// Grassmann Gr(n, p) lifted to Stiefel representatives with the horizontal projection.
// Experimental: projected schemes on the quotient are validated empirically only.
class Grassmann final : public Manifold {
 public:
  Grassmann(int n, int p);
  std::string name() const override;
  Eigen::Index dim() const override { return cols() * (rows() - cols()); }
  bool is_compact() const override { return true; }

  Mat metric(const Mat&, const Mat& w) const override { return w; }
  Mat metric_inv(const Mat&, const Mat& w) const override { return w; }
  Mat proj(const Mat& x, const Mat& w) const override;
  Mat christoffel(const Mat& x, const Mat& xi, const Mat& eta) const override;
  Mat sigma(const Mat&, const Mat& w) const override { return w; }
  Mat sigma_adjoint(const Mat&, const Mat& w) const override { return w; }

  Eigen::Index n_constraints() const override;
  Vec constraints(const Mat& x) const override;
  Mat constraint_jacobian(const Mat& x) const override;
  Mat constraint_hessian(const Mat& x, Eigen::Index i) const override;

  Mat tubular_retract(const Mat& q) const override;
  Mat tubular_differential(const Mat& x, const Mat& w) const override;
  Mat ito_drift(const Mat& x) const override;
  Mat strat_drift(const Mat& x) const override;
  Mat base_point() const override;
  Mat random_point(RngStream& rng) const override;
};

// Hypersurface sum_i d_i x_i^p = 1 (p even, d_i > 0) with the embedded metric and the
// rescaling tubular retraction q -> C(q)^{-1/p} q.
class Hypersurface final : public Manifold {
 public:
  Hypersurface(Vec d, int p);
  std::string name() const override;
  Eigen::Index dim() const override { return rows() - 1; }
  bool is_compact() const override { return true; }
  const Vec& weights() const { return d_; }
  int exponent() const { return p_; }

  double c(const Mat& x) const;
  Vec grad(const Mat& x) const;
  Vec hess_diag(const Mat& x) const;

  Mat metric(const Mat&, const Mat& w) const override { return w; }
  Mat metric_inv(const Mat&, const Mat& w) const override { return w; }
  Mat proj(const Mat& x, const Mat& w) const override;
  Mat christoffel(const Mat& x, const Mat& xi, const Mat& eta) const override;
  Mat sigma(const Mat&, const Mat& w) const override { return w; }
  Mat sigma_adjoint(const Mat&, const Mat& w) const override { return w; }

  Eigen::Index n_constraints() const override { return 1; }
  Vec constraints(const Mat& x) const override;
  Mat constraint_jacobian(const Mat& x) const override;
  Mat constraint_hessian(const Mat& x, Eigen::Index i) const override;

  Mat tubular_retract(const Mat& q) const override;
  Mat tubular_differential(const Mat& x, const Mat& w) const override;
  Mat ito_drift(const Mat& x) const override;
  Mat strat_drift(const Mat& x) const override;
  Mat base_point() const override;
  Mat random_point(RngStream& rng) const override;

 private:
  Vec d_;
  int p_;
};

// r(x, v) = pi(x + v) on the hypersurface with its closed-form second derivative
// (1 - p) sum_i d_i x_i^{p-2} v_i w_i x.
RetractionHandle hypersurface_plus_retraction(std::shared_ptr<const Hypersurface> m);

ManifoldHandle make_sphere(int n);
ManifoldHandle make_hyperbolic(int n);
std::shared_ptr<const LieGroup> make_lie_group(LieKind kind, int N,
                                               std::optional<LieStructure> metric = std::nullopt,
                                               std::optional<double> inv_spectral_bound = std::nullopt);
ManifoldHandle make_spd(int N);
ManifoldHandle make_stiefel(StiefelParams params);
ManifoldHandle make_grassmann(int n, int p);
std::shared_ptr<const Hypersurface> make_hypersurface(Vec d, int p);

// Registry keyed by name: sphere, hyperbolic, glplus, sl, so, se, aff, spd, stiefel,
// grassmann, hypersurface.
struct ManifoldParams {
  int n = 0;
  int p = 0;
  int N = 0;
  double alpha0 = 1.0;
  double alpha1 = 1.0;
  std::optional<std::uint64_t> metric_seed;
};

ManifoldHandle make_manifold(const std::string& name, const ManifoldParams& params);
const std::vector<std::string>& manifold_names();

}  // namespace msde
