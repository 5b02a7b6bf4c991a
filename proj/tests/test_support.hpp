#pragma once

#include <string>
#include <vector>

#include "msde/manifolds.hpp"

namespace msde::testing {

struct NamedManifold {
  std::string label;
  ManifoldHandle m;
};

// The geometry acceptance family plus the extras the library ships.
inline std::vector<NamedManifold> geometry_family() {
  return {
      {"sphere3", make_sphere(3)},
      {"sphere10", make_sphere(10)},
      {"hyperbolic2", make_hyperbolic(2)},
      {"hyperbolic3", make_hyperbolic(3)},
      {"glplus2", make_lie_group(LieKind::GLPlus, 2)},
      {"sl3", make_lie_group(LieKind::SL, 3)},
      {"so3", make_lie_group(LieKind::SO, 3)},
      {"so4", make_lie_group(LieKind::SO, 4)},
      {"se3", make_lie_group(LieKind::SE, 3)},
      {"aff3", make_lie_group(LieKind::Aff, 3)},
      {"so3_random_metric", make_lie_group(LieKind::SO, 3, LieStructure::random(LieKind::SO, 3, 11))},
      {"sl3_random_metric", make_lie_group(LieKind::SL, 3, LieStructure::random(LieKind::SL, 3, 12))},
      {"spd3", make_spd(3)},
      {"stiefel53_half", make_stiefel({5, 3, 1.0, 0.5})},
      {"stiefel53_four_fifths", make_stiefel({5, 3, 1.0, 0.8})},
      {"stiefel53_one", make_stiefel({5, 3, 1.0, 1.0})},
      {"grassmann53", make_grassmann(5, 3)},
      {"hypersurface3_p4", make_hypersurface(Vec::LinSpaced(3, 1.0, 3.0), 4)},
  };
}

inline std::string label_of(const ::testing::TestParamInfo<NamedManifold>& info) {
  return info.param.label;
}

// Random symmetric matrix acting as a quadratic form on vec(x).
inline Mat random_sym(RngStream& rng, Eigen::Index n) {
  Mat a = gaussian_matrix(rng, n, n);
  return 0.5 * (a + a.transpose());
}

}  // namespace msde::testing
