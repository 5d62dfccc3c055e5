#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "conedual/app/app.hpp"

namespace conedual::app {

using nlohmann::json;

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("conedual");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("CONEDUAL_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void print_check_pd(const json& report) {
  const json& r = report.at("result");
  std::cout << r.at("status").get<std::string>() << " via " << r.at("method").get<std::string>()
            << "  grid_min=" << r.at("grid_min").dump() << " margin=" << r.at("margin").dump();
  if (!r.at("witness").is_null()) {
    std::cout << "  witness x=" << r.at("witness").at("x").dump() << " value=" << r.at("witness").at("value").dump();
  }
  std::cout << '\n';
}

}  // namespace

int run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
        const Overrides& overrides) {
  RunOutput output;
  try {
    const json config = load_config(config_path);
    spdlog::info("running {} from {}", config.at("command").get<std::string>(), config_path.string());
    output = execute(config, overrides, overrides.dump_lp ? out_dir / "lp" : std::filesystem::path{});
  } catch (const ConfigError& e) {
    std::cerr << json{{"error", {{"kind", "ConfigError"}, {"message", e.what()}}}}.dump() << '\n';
    return kExitConfigError;
  }

  std::filesystem::create_directories(out_dir);
  write_text(out_dir / "report.json", output.report.dump(2) + "\n");
  if (!output.csv.empty()) write_text(out_dir / "bracket.csv", output.csv);
  if (output.exit_code == kExitOk && output.report.at("command") == "check-pd") print_check_pd(output.report);
  if (output.exit_code != kExitOk) {
    std::cerr << json{{"error", output.report.at("error")}}.dump() << '\n';
  }
  spdlog::info("wrote {}", (out_dir / "report.json").string());
  return output.exit_code;
}

}  // namespace conedual::app
