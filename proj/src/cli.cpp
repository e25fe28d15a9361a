#include "qpd/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "httplib.h"

#include "qpd/analysis.hpp"
#include "qpd/service.hpp"

namespace qpd::cli {

namespace {

std::string upper(std::string_view s) {
  std::string r(s);
  for (auto& c : r) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return r;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

double parse_double(const std::string& s, std::string_view what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(s.substr(used)).size() != 0)
    throw std::invalid_argument("cannot parse " + std::string(what) + " '" + s + "'");
  return v;
}

// Compact display value; snaps rounding noise to zero.
std::string short_number(double v) {
  if (std::abs(v) < 1e-10) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string short_complex(const Complex& z) {
  const double re = std::abs(z.real()) < 1e-10 ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < 1e-10 ? 0.0 : z.imag();
  if (im == 0.0) return short_number(re);
  std::string imag = std::abs(im) == 1.0 ? std::string(im < 0 ? "-" : "") + "i" : short_number(im) + "i";
  if (re == 0.0) return imag;
  if (imag.front() != '-') imag = "+" + imag;
  return short_number(re) + imag;
}

std::vector<Strategy> strategies_of(const RunConfig& cfg) {
  if (cfg.strategies.empty()) return named_strategy_set();
  std::vector<Strategy> out;
  for (const auto& s : cfg.strategies) out.push_back(parse_strategy(s));
  return out;
}

std::ostream& open_output(const RunConfig& cfg, std::ofstream& file, std::ostream& fallback) {
  if (!cfg.out) return fallback;
  file.open(*cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + cfg.out->string() + "' for writing");
  return file;
}

int label_width(const std::vector<Strategy>& strategies, std::size_t min) {
  std::size_t w = min;
  for (const auto& s : strategies) w = std::max(w, s.label().size() + 2);
  return static_cast<int>(w);
}

void print_report(const EquilibriumReport& r, std::ostream& out) {
  const auto label = [&](std::size_t i) { return r.strategies[i].label(); };
  const int lw = label_width(r.strategies, 10);
  out << "strategies:";
  for (std::size_t i = 0; i < r.strategies.size(); ++i) out << ' ' << label(i);
  out << "\n";
  out << std::left << std::setw(lw) << "alice" << std::setw(lw) << "bob" << std::setw(10) << "payoff_a"
      << std::setw(10) << "payoff_b" << "flags\n";
  for (std::size_t i = 0; i < r.strategies.size(); ++i)
    for (std::size_t j = 0; j < r.strategies.size(); ++j) {
      std::string flags;
      if (r.is_equilibrium(i, j)) flags += " nash";
      if (r.is_pareto(i, j)) flags += " pareto";
      if (std::find(r.dominated_pairs.begin(), r.dominated_pairs.end(), std::make_pair(i, j)) !=
          r.dominated_pairs.end())
        flags += " dominated";
      out << std::setw(lw) << label(i) << std::setw(lw) << label(j) << std::setw(10)
          << short_number(r.payoffs[i][j].first) << std::setw(10) << short_number(r.payoffs[i][j].second)
          << (flags.empty() ? "-" : flags.substr(1)) << "\n";
    }
  out << std::right;
  out << "nash equilibria:";
  if (r.equilibria.empty()) out << " none";
  for (const auto& [i, j] : r.equilibria) out << " (" << label(i) << ", " << label(j) << ")";
  out << "\n";
  if (r.reference) {
    out << "dominated by (" << label(r.reference->first) << ", " << label(r.reference->second)
        << "): " << r.dominated_pairs.size() << " of " << r.strategies.size() * r.strategies.size() << " pairs\n";
  }
}

}  // namespace

void RunConfig::validate() const {
  if (grid < 2) throw std::invalid_argument("--grid must be at least 2");
  table.validate();
  render.validate();
  if (port < 0 || port > 65535) throw std::invalid_argument("--port must be in [0, 65535]");
  OpponentPolicy::parse(opponent);
}

void apply_payoff_override(PayoffTable& table, std::string_view spec) {
  const std::string text(spec);
  const auto eq = text.find('=');
  const auto comma = text.find(',', eq == std::string::npos ? 0 : eq);
  if (eq == std::string::npos || comma == std::string::npos)
    throw std::invalid_argument("payoff override '" + text + "' must look like CC=3,3");
  const std::string key = upper(trim(text.substr(0, eq)));
  if (key.size() != 2 || (key[0] != 'C' && key[0] != 'D') || (key[1] != 'C' && key[1] != 'D'))
    throw std::invalid_argument("payoff key '" + key + "' must be one of CC, CD, DC, DD");
  const double a = parse_double(text.substr(eq + 1, comma - eq - 1), "payoff");
  const double b = parse_double(text.substr(comma + 1), "payoff");
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("payoff overrides must be finite and nonnegative");
  table.set(key[0] == 'C' ? Move::C : Move::D, key[1] == 'C' ? Move::C : Move::D, a, b);
}

void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "backend") {
      cfg.backend = parse_backend(value.get<std::string>());
    } else if (key == "grid") {
      cfg.grid = value.get<std::size_t>();
    } else if (key == "out") {
      cfg.out = value.get<std::string>();
    } else if (key == "payoff") {
      if (value.is_object()) {
        for (const auto& [k, pair] : value.items()) {
          if (!pair.is_array() || pair.size() != 2) throw std::invalid_argument("payoff." + k + " must be [a, b]");
          apply_payoff_override(cfg.table, k + "=" + csv_number(pair[0].get<double>()) + "," +
                                               csv_number(pair[1].get<double>()));
        }
      } else {
        for (const auto& spec : value) apply_payoff_override(cfg.table, spec.get<std::string>());
      }
    } else if (key == "opponent") {
      cfg.opponent = value.get<std::string>();
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
      cfg.seeded = true;
    } else if (key == "strategies") {
      cfg.strategies = value.get<std::vector<std::string>>();
    } else if (key == "a") {
      cfg.a = value.get<std::string>();
    } else if (key == "b") {
      cfg.b = value.get<std::string>();
    } else if (key == "pixels") {
      cfg.render.n = value.get<std::size_t>();
    } else if (key == "extent") {
      cfg.render.extent = value.get<double>();
    } else if (key == "host") {
      cfg.host = value.get<std::string>();
    } else if (key == "port") {
      cfg.port = value.get<int>();
    } else if (key == "static_dir") {
      cfg.static_dir = value.get<std::string>();
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config '" + path.string() + "'");
  apply_json(base, nlohmann::json::parse(f));
  return base;
}

std::string csv_number(double v) {
  if (v == 0.0) v = 0.0;  // drop negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int cmd_table(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    const auto strategies = strategies_of(cfg);
    const auto grid = coefficient_table(strategies, cfg.backend, cfg.table);

    std::ostringstream csv;
    csv << "a,b,c_cc_re,c_cc_im,c_cd_re,c_cd_im,c_dc_re,c_dc_im,c_dd_re,c_dd_im,p_cc,p_cd,p_dc,p_dd,payoff_a,payoff_b\n";
    for (std::size_t i = 0; i < strategies.size(); ++i)
      for (std::size_t j = 0; j < strategies.size(); ++j) {
        const Outcome& o = grid[i][j];
        csv << '"' << strategies[i].label() << "\",\"" << strategies[j].label() << '"';
        for (const auto& c : o.amplitudes) csv << ',' << csv_number(c.real()) << ',' << csv_number(c.imag());
        for (double p : o.probs) csv << ',' << csv_number(p);
        csv << ',' << csv_number(o.payoff_a) << ',' << csv_number(o.payoff_b) << '\n';
      }

    if (cfg.csv && !cfg.out) {
      out << csv.str();
      return 0;
    }

    out << "final-mode coefficients c_mn (backend " << to_string(cfg.backend) << ")\n";
    const int lw = label_width(strategies, 8);
    out << std::left << std::setw(lw) << "alice" << std::setw(lw) << "bob";
    for (auto l : kPortLabels) out << std::setw(17) << ("c_" + std::string(l));
    for (auto l : kPortLabels) out << std::setw(8) << ("p_" + std::string(l));
    out << std::setw(8) << "$A" << "$B\n";
    for (std::size_t i = 0; i < strategies.size(); ++i)
      for (std::size_t j = 0; j < strategies.size(); ++j) {
        const Outcome& o = grid[i][j];
        out << std::setw(lw) << strategies[i].label() << std::setw(lw) << strategies[j].label();
        for (const auto& c : o.amplitudes) out << std::setw(17) << short_complex(c);
        for (double p : o.probs) out << std::setw(8) << short_number(p);
        out << std::setw(8) << short_number(o.payoff_a) << short_number(o.payoff_b) << "\n";
      }
    out << std::right;

    if (cfg.out) {
      std::ofstream file;
      open_output(cfg, file, out) << csv.str();
      if (!file) throw std::runtime_error("write to '" + cfg.out->string() + "' failed");
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    const Surface s = sweep(cfg.grid, cfg.backend, cfg.table);
    std::ofstream file;
    std::ostream& dst = open_output(cfg, file, out);
    dst << "t_a,t_b,theta_a_deg,phi_a_rad,theta_b_deg,phi_b_rad,payoff_a,payoff_b\n";
    for (const auto& p : s.points) {
      const auto pa = StrategyParam(p.t_a).params();
      const auto pb = StrategyParam(p.t_b).params();
      dst << csv_number(p.t_a) << ',' << csv_number(p.t_b) << ',' << csv_number(pa.theta_deg) << ','
          << csv_number(pa.phi_rad) << ',' << csv_number(pb.theta_deg) << ',' << csv_number(pb.phi_rad) << ','
          << csv_number(p.payoff_a) << ',' << csv_number(p.payoff_b) << '\n';
    }
    if (!dst) throw std::runtime_error("write failed");
    if (cfg.out) out << "wrote " << s.points.size() << " rows to " << cfg.out->string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_nash(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    const auto full = cfg.strategies.empty() ? named_strategy_set() : strategies_of(cfg);
    out << "== quantum strategy set (backend " << to_string(cfg.backend) << ") ==\n";
    print_report(nash_discrete(full, cfg.backend, cfg.table), out);
    out << "\n== classical subset ==\n";
    print_report(nash_discrete({NamedStrategy::I, NamedStrategy::iX}, cfg.backend, cfg.table), out);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_play(const RunConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  OpponentPolicy policy = OpponentPolicy::nash();
  try {
    cfg.validate();
    policy = OpponentPolicy::parse(cfg.opponent);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  out << "You are Alice; the opponent (Bob) plays policy '" << policy.to_string() << "'.\n"
      << "Enter iX, Q1, I, Q2, iZ or C(<deg>, <rad>); q quits.\n";
  std::size_t rounds = 0;
  double total_a = 0.0;
  double total_b = 0.0;
  std::string line;
  while (true) {
    out << "round " << rounds + 1 << "> " << std::flush;
    if (!std::getline(in, line)) break;
    const std::string input = trim(line);
    if (input == "q" || input == "Q" || input == "quit") break;
    if (input.empty()) continue;

    std::optional<Strategy> alice;
    try {
      alice = parse_strategy(input);
      // Evaluate the angles now so bad values re-prompt instead of aborting.
      (void)alice->matrix();
    } catch (const std::invalid_argument& e) {
      out << "  " << e.what() << "\n";
      continue;
    }

    try {
      const Strategy bob = policy.choose(*alice, cfg.grid, cfg.backend, cfg.table);
      const Outcome o = run_protocol(*alice, bob, cfg.backend, cfg.table);
      ++rounds;
      total_a += o.payoff_a;
      total_b += o.payoff_b;
      out << "  you play " << alice->label() << ", opponent plays " << bob.label() << "\n  ";
      for (std::size_t k = 0; k < 4; ++k) out << "p(" << kPortLabels[k] << ")=" << short_number(o.probs[k]) << ' ';
      out << "\n  payoffs: you " << short_number(o.payoff_a) << ", opponent " << short_number(o.payoff_b)
          << " | totals: you " << short_number(total_a) << ", opponent " << short_number(total_b) << "\n";
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  }
  out << "\n" << rounds << " round(s) played; totals: you " << short_number(total_a) << ", opponent "
      << short_number(total_b) << "\n";
  return 0;
}

int cmd_render(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    const Strategy a = parse_strategy(cfg.a);
    const Strategy b = parse_strategy(cfg.b);
    const Outcome o = run_protocol(a, b, cfg.backend, cfg.table);
    const auto images = port_images(o, cfg.render);
    const auto paths = write_port_images(images, cfg.out.value_or("."));
    for (std::size_t k = 0; k < 4; ++k)
      out << paths[k].string() << "  p(" << kPortLabels[k] << ")=" << short_number(o.probs[k]) << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_calibrate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    const PipelineReport& r = disentangler_calibration();
    out << "disentangler: MZ(0) * [C(-45, pi/2) x I] * MZ(pi/2)\n";
    out << "diagonal phase D:";
    for (const auto& d : r.calibration) out << ' ' << short_complex(d);
    out << "\nglobal phase g: " << short_complex(r.global_phase) << "\n";
    out << "residual: " << csv_number(r.residual) << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_serve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    service::ServiceConfig sc;
    sc.backend = cfg.backend;
    sc.table = cfg.table;
    sc.best_response_grid = std::max<std::size_t>(cfg.grid, 3);
    sc.static_dir = cfg.static_dir;
    if (cfg.seeded) sc.seed = cfg.seed;
    service::GameService svc(sc);
    httplib::Server server;
    svc.mount(server);
    out << "serving on http://" << cfg.host << ":" << cfg.port << std::endl;
    if (!server.listen(cfg.host, cfg.port)) {
      err << "error: cannot listen on " << cfg.host << ":" << cfg.port << "\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qpd::cli
