#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qpd/game.hpp"
#include "qpd/render.hpp"

namespace qpd::cli {

struct RunConfig {
  Backend backend = Backend::Abstract;
  PayoffTable table;
  /// Points per sweep segment; also the best-response resolution.
  std::size_t grid = 101;
  std::optional<std::filesystem::path> out;
  std::string opponent = "nash";
  std::uint64_t seed = 0;
  bool seeded = false;
  std::vector<std::string> strategies;
  std::string a = "I";
  std::string b = "I";
  bool csv = false;
  GridSpec render;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path static_dir = "web";

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Applies one `--payoff` override such as "CC=3,3" or "dd = 1, 1".
void apply_payoff_override(PayoffTable& table, std::string_view spec);

/// Overlays the keys present in `j` onto `cfg`. Unknown keys are rejected.
void apply_json(RunConfig& cfg, const nlohmann::json& j);
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Formats with 12 significant digits, the CSV precision.
std::string csv_number(double v);

int cmd_table(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_nash(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_play(const RunConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err);
int cmd_render(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_calibrate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
/// Blocks until the server stops.
int cmd_serve(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace qpd::cli
