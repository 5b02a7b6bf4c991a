#include "msde/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "msde/costs.hpp"

namespace msde {

namespace {

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "command", "manifold", "n",      "p",    "N",    "alpha0",    "alpha1",
      "metric_seed", "integrator", "T", "n_div", "n_path", "seed", "r",
      "cost",    "diffusion", "radius", "norm_cap", "out"};
  return keys;
}

struct Entry {
  std::string value;
  std::string origin;  // "line 4" or "--set"
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

void put(std::map<std::string, Entry>& kv, const std::string& raw, const std::string& origin) {
  const auto eq = raw.find('=');
  if (eq == std::string::npos) throw ConfigError(origin + ": expected key=value, got '" + raw + "'");
  const std::string key = trim(raw.substr(0, eq));
  const std::string value = trim(raw.substr(eq + 1));
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end())
    throw ConfigError(origin + ": unknown key '" + key + "'");
  if (value.empty()) throw ConfigError(origin + ": empty value for '" + key + "'");
  kv[key] = {value, origin};
}

template <class T>
T parse_number(const Entry& e, const std::string& key) {
  T v{};
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  auto [ptr, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(e.origin + ": '" + key + "' expects a number, got '" + e.value + "'");
  return v;
}

double parse_real(const Entry& e, const std::string& key) {
  const double v = parse_number<double>(e, key);
  if (!std::isfinite(v)) throw ConfigError(e.origin + ": '" + key + "' must be finite");
  return v;
}

Command parse_command(const Entry& e) {
  static const std::pair<const char*, Command> table[] = {{"validate", Command::Validate},
                                                          {"simulate", Command::Simulate},
                                                          {"compare", Command::Compare},
                                                          {"uniform", Command::Uniform},
                                                          {"heat-kernel", Command::HeatKernel}};
  for (const auto& [name, c] : table)
    if (e.value == name) return c;
  throw ConfigError(e.origin + ": unknown command '" + e.value +
                    "' (valid: validate, simulate, compare, uniform, heat-kernel)");
}

RunConfig build(const std::map<std::string, Entry>& kv) {
  auto find = [&kv](const std::string& k) -> const Entry* {
    auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  RunConfig c;
  const Entry* cmd = find("command");
  if (!cmd) throw ConfigError("missing required key 'command'");
  c.command = parse_command(*cmd);

  auto require = [&](const std::string& k) -> const Entry& {
    const Entry* e = find(k);
    if (!e) throw ConfigError("missing required key '" + k + "' for command " + command_name(c.command));
    return *e;
  };

  const Entry& man = require("manifold");
  c.manifold = man.value;
  if (const Entry* e = find("n")) c.params.n = parse_number<int>(*e, "n");
  if (const Entry* e = find("p")) c.params.p = parse_number<int>(*e, "p");
  if (const Entry* e = find("N")) c.params.N = parse_number<int>(*e, "N");
  if (const Entry* e = find("alpha0")) c.params.alpha0 = parse_real(*e, "alpha0");
  if (const Entry* e = find("alpha1")) c.params.alpha1 = parse_real(*e, "alpha1");
  if (const Entry* e = find("metric_seed"))
    c.params.metric_seed = parse_number<std::uint64_t>(*e, "metric_seed");
  try {
    make_manifold(c.manifold, c.params);
  } catch (const Error& ex) {
    throw ConfigError(man.origin + ": " + ex.what());
  }

  if (const Entry* e = find("integrator")) {
    for (const auto& id : split_list(e->value)) {
      try {
        c.integrators.push_back(parse_integrator(id));
      } catch (const ParameterError& ex) {
        throw ConfigError(e->origin + ": " + ex.what());
      }
    }
  }
  if (const Entry* e = find("T")) {
    c.T = parse_real(*e, "T");
    if (!(*c.T > 0.0)) throw ConfigError(e->origin + ": T must be positive");
  }
  if (const Entry* e = find("n_div")) {
    for (const auto& s : split_list(e->value)) {
      const int v = parse_number<int>({s, e->origin}, "n_div");
      if (v < 1) throw ConfigError(e->origin + ": n_div must be >= 1");
      c.n_div.push_back(v);
    }
  }
  if (const Entry* e = find("n_path")) {
    c.n_path = parse_number<long>(*e, "n_path");
    if (*c.n_path < 1) throw ConfigError(e->origin + ": n_path must be >= 1");
  }
  if (const Entry* e = find("seed")) c.seed = parse_number<std::uint64_t>(*e, "seed");
  if (const Entry* e = find("r")) {
    c.r = parse_real(*e, "r");
    if (!(c.r >= 1.0)) throw ConfigError(e->origin + ": r must be >= 1");
  }
  if (const Entry* e = find("cost")) {
    for (const auto& id : split_list(e->value)) {
      try {
        make_cost(id);
      } catch (const ParameterError& ex) {
        throw ConfigError(e->origin + ": " + ex.what());
      }
      c.costs.push_back(id);
    }
  }
  if (const Entry* e = find("diffusion")) {
    c.diffusion = parse_real(*e, "diffusion");
    if (!(c.diffusion > 0.0)) throw ConfigError(e->origin + ": diffusion must be positive");
  }
  if (const Entry* e = find("radius")) {
    c.radius = parse_real(*e, "radius");
    if (!(c.radius > 0.0)) throw ConfigError(e->origin + ": radius must be positive");
  }
  if (const Entry* e = find("norm_cap")) {
    c.norm_cap = parse_real(*e, "norm_cap");
    if (!(*c.norm_cap > 0.0)) throw ConfigError(e->origin + ": norm_cap must be positive");
  }
  if (const Entry* e = find("out")) c.out = e->value;

  auto single = [&](const char* key, std::size_t n) {
    if (n != 1) throw ConfigError(std::string("'") + key + "' takes a single value for command " +
                                  command_name(c.command));
  };
  switch (c.command) {
    case Command::Validate:
      break;
    case Command::Simulate:
      require("integrator"), require("T"), require("n_div"), require("n_path"), require("seed"),
          require("cost");
      single("integrator", c.integrators.size());
      single("n_div", c.n_div.size());
      single("cost", c.costs.size());
      break;
    case Command::Compare:
      require("T"), require("n_div"), require("n_path"), require("seed"), require("cost");
      single("cost", c.costs.size());
      break;
    case Command::Uniform:
      require("integrator"), require("n_div"), require("n_path"), require("seed"), require("cost");
      single("integrator", c.integrators.size());
      single("n_div", c.n_div.size());
      if (!c.T) c.T = 40.0;
      break;
    case Command::HeatKernel:
      require("T"), require("cost");
      single("cost", c.costs.size());
      if (c.manifold != "sphere" || (c.params.n != 3 && c.params.n != 4))
        throw ConfigError("heat-kernel needs manifold=sphere with n=3 or n=4");
      if (c.costs[0] != "phi_5_2" && c.costs[0] != "phi_32_52")
        throw ConfigError("heat-kernel supports cost phi_5_2 or phi_32_52");
      break;
  }
  return c;
}

template <class T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + f(x);
  return s;
}

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::Validate: return "validate";
    case Command::Simulate: return "simulate";
    case Command::Compare: return "compare";
    case Command::Uniform: return "uniform";
    case Command::HeatKernel: return "heat-kernel";
  }
  return "?";
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  std::map<std::string, Entry> kv;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string origin = "line " + std::to_string(lineno);
    put(kv, line, origin);
    const std::string key = trim(line.substr(0, line.find('=')));
    if (!seen.insert(key).second) throw ConfigError(origin + ": duplicate key '" + key + "'");
  }
  for (const auto& o : overrides) put(kv, o, "--set " + o);
  return build(kv);
}

std::string normalized_config(const RunConfig& c) {
  std::ostringstream o;
  o << "command=" << command_name(c.command) << '\n';
  o << "manifold=" << c.manifold << '\n';
  if (c.params.n) o << "n=" << c.params.n << '\n';
  if (c.params.p) o << "p=" << c.params.p << '\n';
  if (c.params.N) o << "N=" << c.params.N << '\n';
  o << "alpha0=" << format_double(c.params.alpha0) << '\n';
  o << "alpha1=" << format_double(c.params.alpha1) << '\n';
  if (c.params.metric_seed) o << "metric_seed=" << *c.params.metric_seed << '\n';
  if (!c.integrators.empty())
    o << "integrator="
      << join<IntegratorId>(c.integrators, [](const IntegratorId& i) { return integrator_name(i); })
      << '\n';
  if (c.T) o << "T=" << format_double(*c.T) << '\n';
  if (!c.n_div.empty())
    o << "n_div=" << join<int>(c.n_div, [](const int& i) { return std::to_string(i); }) << '\n';
  if (c.n_path) o << "n_path=" << *c.n_path << '\n';
  if (c.seed) o << "seed=" << *c.seed << '\n';
  o << "r=" << format_double(c.r) << '\n';
  if (!c.costs.empty())
    o << "cost=" << join<std::string>(c.costs, [](const std::string& s) { return s; }) << '\n';
  o << "diffusion=" << format_double(c.diffusion) << '\n';
  o << "radius=" << format_double(c.radius) << '\n';
  if (c.norm_cap) o << "norm_cap=" << format_double(*c.norm_cap) << '\n';
  if (!c.out.empty()) o << "out=" << c.out << '\n';
  return o.str();
}

}  // namespace msde
