#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qpd/analysis.hpp"
#include "qpd/game.hpp"

namespace httplib {
class Server;
}

namespace qpd::service {

using nlohmann::json;

struct ServiceConfig {
  Backend backend = Backend::Abstract;
  PayoffTable table;
  /// Points per segment for the best-response opponent.
  std::size_t best_response_grid = 101;
  /// Upper bound on the n accepted by GET /api/sweep.
  std::size_t max_sweep_grid = 201;
  /// Web UI bundle served at "/"; empty disables static serving.
  std::filesystem::path static_dir;
  /// Seeds session-token generation; random_device when unset.
  std::optional<std::uint64_t> seed;
};

/// Status code plus JSON body; what every handler returns.
struct ApiResponse {
  int status = 200;
  json body;
};

json to_json(const Complex& z);
json to_json(const Outcome& o);
json to_json(const Strategy& s);

/// Accepts a strategy string ("iZ", "C(30, 1.0)") or {"theta": deg, "phi": rad}.
/// Throws StrategyParseError.
Strategy strategy_from_json(const json& j);

struct Round {
  std::size_t index = 0;
  Strategy alice = NamedStrategy::I;
  Strategy bob = NamedStrategy::I;
  Outcome outcome;
  /// Running totals after this round.
  std::pair<double, double> cumulative{0.0, 0.0};
};

json to_json(const Round& r);

class Session {
 public:
  Session(std::string id, OpponentPolicy policy) : id_(std::move(id)), policy_(policy) {}

  const std::string& id() const { return id_; }
  const OpponentPolicy& policy() const { return policy_; }

  /// Plays one round under the session lock and appends it to the history.
  Round play(const Strategy& alice, const ServiceConfig& cfg);

  json snapshot() const;

 private:
  std::string id_;
  OpponentPolicy policy_;
  mutable std::mutex mu_;
  std::vector<Round> history_;
  double cumulative_a_ = 0.0;
  double cumulative_b_ = 0.0;
};

/// The HTTP JSON API. Handlers are plain member functions so they can be
/// exercised without a socket; mount() wires them onto an httplib server.
class GameService {
 public:
  explicit GameService(ServiceConfig cfg = {});

  const ServiceConfig& config() const { return cfg_; }

  ApiResponse strategies() const;
  ApiResponse play(const std::string& body) const;
  ApiResponse create_session(const std::string& body);
  ApiResponse round(const std::string& session_id, const std::string& body);
  ApiResponse session(const std::string& session_id) const;
  ApiResponse sweep(std::size_t n, const std::optional<std::string>& backend) const;

  std::size_t session_count() const;

  void mount(httplib::Server& server);

 private:
  std::shared_ptr<Session> find(const std::string& id) const;
  std::string new_token();

  ServiceConfig cfg_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mt19937_64 rng_;
};

}  // namespace qpd::service
