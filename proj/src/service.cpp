#include "qpd/service.hpp"

#include <cstdio>

#include "httplib.h"

namespace qpd::service {

namespace {

ApiResponse error_response(int status, const std::string& code, const std::string& reason) {
  return {status, json{{"error", code}, {"reason", reason}}};
}

std::string hex_token(std::mt19937_64& rng) {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  json j = json::parse(body);  // throws json::parse_error
  if (!j.is_object()) throw std::invalid_argument("request body must be a JSON object");
  return j;
}

Backend backend_from(const json& body, Backend fallback) {
  if (!body.contains("backend")) return fallback;
  if (!body["backend"].is_string()) throw std::invalid_argument("backend must be a string");
  return parse_backend(body["backend"].get<std::string>());
}

void send(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json; charset=utf-8");
}

}  // namespace

json to_json(const Complex& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const Outcome& o) {
  json amps = json::array();
  for (const auto& a : o.amplitudes) amps.push_back(to_json(a));
  return json{{"amplitudes", amps},
              {"probs", {{"cc", o.probs[0]}, {"cd", o.probs[1]}, {"dc", o.probs[2]}, {"dd", o.probs[3]}}},
              {"payoffs", {o.payoff_a, o.payoff_b}}};
}

json to_json(const Strategy& s) {
  const auto p = s.params();
  json j{{"label", s.label()}, {"theta", p.theta_deg}, {"phi", p.phi_rad}};
  if (const auto n = s.name()) {
    j["name"] = std::string(to_string(*n));
    j["tag"] = is_classical(*n) ? "classical" : "quantum";
  } else {
    j["name"] = nullptr;
  }
  return j;
}

Strategy strategy_from_json(const json& j) {
  if (j.is_string()) return parse_strategy(j.get<std::string>());
  if (j.is_object() && j.contains("theta") && j.contains("phi") && j["theta"].is_number() && j["phi"].is_number())
    return Strategy::converter(j["theta"].get<double>(), j["phi"].get<double>());
  throw StrategyParseError("strategy must be a string or an object with numeric theta and phi");
}

json to_json(const Round& r) {
  json j = to_json(r.outcome);
  j["round"] = r.index;
  j["a"] = to_json(r.alice);
  j["b"] = to_json(r.bob);
  j["cumulative"] = {r.cumulative.first, r.cumulative.second};
  return j;
}

Round Session::play(const Strategy& alice, const ServiceConfig& cfg) {
  // Evaluation is pure; only the append happens under the lock.
  const Strategy bob = policy_.choose(alice, cfg.best_response_grid, cfg.backend, cfg.table);
  const Outcome outcome = run_protocol(alice, bob, cfg.backend, cfg.table);
  std::lock_guard lock(mu_);
  cumulative_a_ += outcome.payoff_a;
  cumulative_b_ += outcome.payoff_b;
  Round r{history_.size() + 1, alice, bob, outcome, {cumulative_a_, cumulative_b_}};
  history_.push_back(r);
  return r;
}

json Session::snapshot() const {
  std::lock_guard lock(mu_);
  json history = json::array();
  for (const auto& r : history_) history.push_back(to_json(r));
  return json{{"id", id_},
              {"policy", policy_.to_string()},
              {"history", history},
              {"cumulative", {cumulative_a_, cumulative_b_}}};
}

GameService::GameService(ServiceConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.table.validate();
  if (cfg_.best_response_grid < 3) throw std::invalid_argument("best-response grid must be at least 3");
  rng_.seed(cfg_.seed ? *cfg_.seed : std::random_device{}());
}

ApiResponse GameService::strategies() const {
  json list = json::array();
  for (NamedStrategy s : kNamedStrategies) list.push_back(to_json(Strategy(s)));
  return {200, list};
}

ApiResponse GameService::play(const std::string& body) const {
  try {
    const json req = parse_body(body);
    if (!req.contains("a") || !req.contains("b")) return error_response(400, "bad_request", "fields 'a' and 'b' are required");
    const Strategy a = strategy_from_json(req["a"]);
    const Strategy b = strategy_from_json(req["b"]);
    const Backend backend = backend_from(req, cfg_.backend);
    json out = to_json(run_protocol(a, b, backend, cfg_.table));
    out["a"] = to_json(a);
    out["b"] = to_json(b);
    out["backend"] = std::string(to_string(backend));
    return {200, out};
  } catch (const StrategyParseError& e) {
    return error_response(400, "bad_strategy", e.what());
  } catch (const CalibrationFailed& e) {
    return error_response(500, "calibration_failed", e.what());
  } catch (const json::exception& e) {
    return error_response(400, "bad_request", e.what());
  } catch (const std::invalid_argument& e) {
    return error_response(400, "bad_request", e.what());
  }
}

ApiResponse GameService::create_session(const std::string& body) {
  try {
    const json req = parse_body(body);
    OpponentPolicy policy = OpponentPolicy::nash();
    if (req.contains("policy")) {
      if (!req["policy"].is_string()) return error_response(400, "bad_policy", "policy must be a string");
      policy = OpponentPolicy::parse(req["policy"].get<std::string>());
    }
    std::lock_guard lock(mu_);
    std::string id = new_token();
    while (sessions_.count(id)) id = new_token();
    sessions_.emplace(id, std::make_shared<Session>(id, policy));
    return {201, json{{"id", id}, {"policy", policy.to_string()}}};
  } catch (const json::exception& e) {
    return error_response(400, "bad_request", e.what());
  } catch (const std::invalid_argument& e) {
    return error_response(400, "bad_policy", e.what());
  }
}

ApiResponse GameService::round(const std::string& session_id, const std::string& body) {
  const auto s = find(session_id);
  if (!s) return error_response(404, "unknown_session", "no session '" + session_id + "'");
  try {
    const json req = parse_body(body);
    if (!req.contains("a")) return error_response(400, "bad_request", "field 'a' is required");
    const Strategy a = strategy_from_json(req["a"]);
    const Round r = s->play(a, cfg_);
    return {200, to_json(r)};
  } catch (const StrategyParseError& e) {
    return error_response(400, "bad_strategy", e.what());
  } catch (const CalibrationFailed& e) {
    return error_response(500, "calibration_failed", e.what());
  } catch (const json::exception& e) {
    return error_response(400, "bad_request", e.what());
  } catch (const std::invalid_argument& e) {
    return error_response(400, "bad_request", e.what());
  }
}

ApiResponse GameService::session(const std::string& session_id) const {
  const auto s = find(session_id);
  if (!s) return error_response(404, "unknown_session", "no session '" + session_id + "'");
  return {200, s->snapshot()};
}

ApiResponse GameService::sweep(std::size_t n, const std::optional<std::string>& backend) const {
  if (n < 2 || n > cfg_.max_sweep_grid)
    return error_response(400, "bad_grid", "n must be in [2, " + std::to_string(cfg_.max_sweep_grid) + "]");
  try {
    const Backend b = backend ? parse_backend(*backend) : cfg_.backend;
    const Surface s = qpd::sweep(n, b, cfg_.table);
    json pa = json::array();
    json pb = json::array();
    for (std::size_t ia = 0; ia < s.side(); ++ia) {
      json ra = json::array();
      json rb = json::array();
      for (std::size_t ib = 0; ib < s.side(); ++ib) {
        ra.push_back(s.at(ia, ib).payoff_a);
        rb.push_back(s.at(ia, ib).payoff_b);
      }
      pa.push_back(ra);
      pb.push_back(rb);
    }
    const json named = json::array({{{"name", "iX"}, {"t", -1.0}},
                                    {{"name", "Q1"}, {"t", -0.5}},
                                    {{"name", "I"}, {"t", 0.0}},
                                    {{"name", "Q2"}, {"t", 0.5}},
                                    {{"name", "iZ"}, {"t", 1.0}}});
    return {200, json{{"ts", s.ts}, {"payoff_a", pa}, {"payoff_b", pb}, {"named", named},
                      {"backend", std::string(to_string(b))}}};
  } catch (const CalibrationFailed& e) {
    return error_response(500, "calibration_failed", e.what());
  } catch (const std::invalid_argument& e) {
    return error_response(400, "bad_request", e.what());
  }
}

std::size_t GameService::session_count() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

std::shared_ptr<Session> GameService::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::string GameService::new_token() { return hex_token(rng_); }

void GameService::mount(httplib::Server& server) {
  server.Get("/api/strategies", [this](const httplib::Request&, httplib::Response& res) { send(res, strategies()); });
  server.Post("/api/play",
              [this](const httplib::Request& req, httplib::Response& res) { send(res, play(req.body)); });
  server.Post("/api/session",
              [this](const httplib::Request& req, httplib::Response& res) { send(res, create_session(req.body)); });
  server.Post(R"(/api/session/([0-9A-Za-z_-]+)/round)", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, round(req.matches[1], req.body));
  });
  server.Get(R"(/api/session/([0-9A-Za-z_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, session(req.matches[1]));
  });
  server.Get("/api/sweep", [this](const httplib::Request& req, httplib::Response& res) {
    std::size_t n = 21;
    if (req.has_param("n")) {
      try {
        n = std::stoul(req.get_param_value("n"));
      } catch (const std::exception&) {
        send(res, error_response(400, "bad_grid", "n must be an integer"));
        return;
      }
    }
    std::optional<std::string> backend;
    if (req.has_param("backend")) backend = req.get_param_value("backend");
    send(res, sweep(n, backend));
  });
  if (!cfg_.static_dir.empty() && std::filesystem::is_directory(cfg_.static_dir))
    server.set_mount_point("/", cfg_.static_dir.string());
}

}  // namespace qpd::service
