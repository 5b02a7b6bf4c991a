#include "msde/costs.hpp"

#include <algorithm>
#include <cmath>

#include "msde/manifolds.hpp"

namespace msde {

double polar_angle(const Mat& x) {
  const double r = x.norm();
  return std::acos(std::clamp(x(0, 0) / r, -1.0, 1.0));
}

const std::vector<std::string>& cost_names() {
  static const std::vector<std::string> names = {"phi_5_2", "phi_32_52",    "abs11",
                                                 "sq11",    "sum_abs",      "exp_half_sum",
                                                 "inv_sqrt_sum", "spd_running"};
  return names;
}

CostFunctional make_cost(const std::string& id, bool lift) {
  auto view = [lift](const Mat& x) -> Mat { return lift ? Mat(x * x.transpose()) : x; };
  auto wrap = [view](double (*f)(const Mat&)) -> ScalarFn {
    return [view, f](const Mat& x, double) { return f(view(x)); };
  };
  CostFunctional c;
  c.id = id;
  if (id == "phi_5_2") {
    c.terminal = [](const Mat& x, double) { return std::pow(polar_angle(x), 2.5); };
  } else if (id == "phi_32_52") {
    c.terminal = [](const Mat& x, double) {
      const double p = polar_angle(x);
      return std::pow(p, 1.5) + std::pow(p, 2.5);
    };
  } else if (id == "abs11") {
    c.terminal = wrap([](const Mat& y) { return std::abs(y(0, 0)); });
  } else if (id == "sq11") {
    c.terminal = wrap([](const Mat& y) { return y(0, 0) * y(0, 0); });
  } else if (id == "sum_abs") {
    c.terminal = wrap([](const Mat& y) { return y.cwiseAbs().sum(); });
  } else if (id == "exp_half_sum") {
    c.terminal = wrap([](const Mat& y) { return std::exp(0.5 * y.cwiseAbs().sum()); });
  } else if (id == "inv_sqrt_sum") {
    c.terminal = wrap([](const Mat& y) { return 1.0 / std::sqrt(1.0 + y.cwiseAbs().sum()); });
  } else if (id == "spd_running") {
    c.terminal = wrap([](const Mat& y) { return std::abs(y(0, 0)); });
    c.running = wrap([](const Mat& y) { return std::max(y(0, 0), 0.0); });
  } else {
    std::string valid;
    for (const auto& s : cost_names()) valid += (valid.empty() ? "" : ", ") + s;
    throw ParameterError("unknown cost '" + id + "' (valid: " + valid + ")");
  }
  return c;
}

CostFunctional make_cost_for(const std::string& id, const Manifold& m) {
  return make_cost(id, dynamic_cast<const Grassmann*>(&m) != nullptr);
}

CostFunctional inverse_cost(CostFunctional c) {
  auto inv = [](const ScalarFn& f) -> ScalarFn {
    if (!f) return f;
    return [f](const Mat& x, double t) {
      if (x.rows() != x.cols()) throw DimensionError("inverse_cost: needs square points");
      return f(x.partialPivLu().inverse(), t);
    };
  };
  c.id += "_inv";
  c.running = inv(c.running);
  c.terminal = inv(c.terminal);
  return c;
}

}  // namespace msde
