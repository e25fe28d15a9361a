// qpd: command-line front end for the spin-orbit quantum prisoners' dilemma.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qpd/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum prisoners' dilemma on spin-orbit laser modes"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string backend;
  std::size_t grid = 0;
  std::string out;
  std::vector<std::string> payoff;
  std::string opponent;
  int port = 0;
  std::string host;
  std::uint64_t seed = 0;
  std::vector<std::string> strategies;
  bool csv = false;
  std::size_t pixels = 0;
  double extent = 0.0;
  std::string static_dir;

  auto* o_config = app.add_option("--config", config_path, "JSON config file; flags override its values");
  auto* o_backend = app.add_option("--backend", backend, "abstract | optical");
  auto* o_grid = app.add_option("--grid", grid, "points per strategy segment (sweep, best response)");
  auto* o_out = app.add_option("--out", out, "output file (table/sweep CSV) or directory (render)");
  auto* o_payoff = app.add_option("--payoff", payoff, "payoff override, e.g. CC=3,3 (repeatable)");
  auto* o_opponent = app.add_option("--opponent", opponent, "nash | best | <strategy name>");
  auto* o_port = app.add_option("--port", port, "HTTP port for serve");
  auto* o_host = app.add_option("--host", host, "bind address for serve");
  auto* o_seed = app.add_option("--seed", seed, "seed for session tokens");
  auto* o_strategies = app.add_option("--strategies", strategies, "strategy set for table/nash")->delimiter(';');
  auto* o_csv = app.add_flag("--csv", csv, "print CSV instead of the human-readable table");
  auto* o_pixels = app.add_option("--pixels", pixels, "render grid size");
  auto* o_extent = app.add_option("--extent", extent, "render half-width in waist units");
  auto* o_static = app.add_option("--static-dir", static_dir, "web UI bundle served at /");

  auto* table = app.add_subcommand("table", "final-mode coefficients, probabilities and payoffs for every pair");
  auto* sweep = app.add_subcommand("sweep", "payoff surface over the two strategy segments (CSV)");
  auto* nash = app.add_subcommand("nash", "Nash equilibria, Pareto front and dominance");
  auto* play = app.add_subcommand("play", "play rounds against the computer in the terminal");
  auto* render = app.add_subcommand("render", "write the four output-port images (PGM)");
  auto* calibrate = app.add_subcommand("calibrate", "fit the disentangler's diagonal phase");
  auto* serve = app.add_subcommand("serve", "HTTP JSON API and web UI");

  std::string render_a = "I";
  std::string render_b = "I";
  render->add_option("a", render_a, "Alice's strategy")->required();
  render->add_option("b", render_b, "Bob's strategy")->required();

  CLI11_PARSE(app, argc, argv);

  qpd::cli::RunConfig cfg;
  try {
    if (o_config->count()) cfg = qpd::cli::load_config_file(config_path, cfg);
    if (o_backend->count()) cfg.backend = qpd::parse_backend(backend);
    if (o_grid->count()) cfg.grid = grid;
    if (o_out->count()) cfg.out = out;
    if (o_payoff->count())
      for (const auto& spec : payoff) qpd::cli::apply_payoff_override(cfg.table, spec);
    if (o_opponent->count()) cfg.opponent = opponent;
    if (o_port->count()) cfg.port = port;
    if (o_host->count()) cfg.host = host;
    if (o_seed->count()) {
      cfg.seed = seed;
      cfg.seeded = true;
    }
    if (o_strategies->count()) cfg.strategies = strategies;
    if (o_csv->count()) cfg.csv = csv;
    if (o_pixels->count()) cfg.render.n = pixels;
    if (o_extent->count()) cfg.render.extent = extent;
    if (o_static->count()) cfg.static_dir = static_dir;
    if (render->parsed()) {
      cfg.a = render_a;
      cfg.b = render_b;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (table->parsed()) return qpd::cli::cmd_table(cfg, std::cout, std::cerr);
  if (sweep->parsed()) return qpd::cli::cmd_sweep(cfg, std::cout, std::cerr);
  if (nash->parsed()) return qpd::cli::cmd_nash(cfg, std::cout, std::cerr);
  if (play->parsed()) return qpd::cli::cmd_play(cfg, std::cin, std::cout, std::cerr);
  if (render->parsed()) return qpd::cli::cmd_render(cfg, std::cout, std::cerr);
  if (calibrate->parsed()) return qpd::cli::cmd_calibrate(cfg, std::cout, std::cerr);
  if (serve->parsed()) return qpd::cli::cmd_serve(cfg, std::cout, std::cerr);
  return 2;
}
