#include <string>

#include "msde/manifolds.hpp"

namespace msde {

namespace {

int require_positive(int v, const char* key, const std::string& name) {
  if (v <= 0) throw ParameterError(name + ": parameter '" + key + "' is required");
  return v;
}

std::shared_ptr<const LieGroup> lie(LieKind kind, const ManifoldParams& prm, const std::string& name) {
  const int N = require_positive(prm.N, "N", name);
  std::optional<LieStructure> s;
  if (prm.metric_seed) s = LieStructure::random(kind, N, *prm.metric_seed);
  return make_lie_group(kind, N, std::move(s));
}

}  // namespace

const std::vector<std::string>& manifold_names() {
  static const std::vector<std::string> names = {"sphere", "hyperbolic", "glplus", "sl",
                                                 "so",     "se",         "aff",    "spd",
                                                 "stiefel", "grassmann", "hypersurface"};
  return names;
}

ManifoldHandle make_manifold(const std::string& name, const ManifoldParams& prm) {
  if (name == "sphere") return make_sphere(require_positive(prm.n, "n", name));
  if (name == "hyperbolic") return make_hyperbolic(require_positive(prm.n, "n", name));
  if (name == "glplus") return lie(LieKind::GLPlus, prm, name);
  if (name == "sl") return lie(LieKind::SL, prm, name);
  if (name == "so") return lie(LieKind::SO, prm, name);
  if (name == "se") return lie(LieKind::SE, prm, name);
  if (name == "aff") return lie(LieKind::Aff, prm, name);
  if (name == "spd") return make_spd(require_positive(prm.N, "N", name));
  if (name == "stiefel")
    return make_stiefel({require_positive(prm.n, "n", name), require_positive(prm.p, "p", name),
                         prm.alpha0, prm.alpha1});
  if (name == "grassmann")
    return make_grassmann(require_positive(prm.n, "n", name), require_positive(prm.p, "p", name));
  if (name == "hypersurface") {
    // Weights d_i = i, so the demo surface is a genuinely anisotropic p-ellipsoid.
    const int n = require_positive(prm.n, "n", name);
    return make_hypersurface(Vec::LinSpaced(n, 1.0, static_cast<double>(n)),
                             require_positive(prm.p, "p", name));
  }
  std::string valid;
  for (const auto& s : manifold_names()) valid += (valid.empty() ? "" : ", ") + s;
  throw ParameterError("unknown manifold '" + name + "' (valid: " + valid + ")");
}

}  // namespace msde
