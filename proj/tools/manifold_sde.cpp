#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "msde/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Simulate Brownian motion and other SDEs on embedded matrix manifolds"};
  std::string config_path;
  std::vector<std::string> overrides;
  bool print_config = false;
  app.add_option("config", config_path, "key=value run configuration")->required();
  app.add_option("--set", overrides, "override a config key (key=value), repeatable");
  app.add_flag("--print-config", print_config, "print the normalized configuration and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "config error: cannot read " << config_path << '\n';
    return 3;
  }
  std::stringstream text;
  text << in.rdbuf();

  msde::RunConfig cfg;
  try {
    cfg = msde::parse_config(text.str(), overrides);
  } catch (const msde::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  }
  if (print_config) {
    std::cout << msde::normalized_config(cfg);
    return 0;
  }
  return msde::run(cfg, std::cout, std::cerr);
}
