#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "qpd/analysis.hpp"
#include "qpd/game.hpp"
#include "qpd/optics.hpp"
#include "qpd/render.hpp"

namespace py = pybind11;
using namespace qpd;

namespace {

using CArray = py::array_t<Complex>;
using RArray = py::array_t<double>;

template <std::size_t N>
CArray to_numpy(const SquareMatrix<N>& m) {
  CArray out({N, N});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) v(r, c) = m(r, c);
  return out;
}

Element2 element2_from(const py::array& a) {
  const auto arr = py::array_t<Complex, py::array::c_style | py::array::forcecast>::ensure(a);
  if (!arr || arr.ndim() != 2 || arr.shape(0) != 2 || arr.shape(1) != 2)
    throw py::value_error("expected a 2x2 matrix");
  const auto v = arr.unchecked<2>();
  return Element2({v(0, 0), v(0, 1), v(1, 0), v(1, 1)});
}

/// "iZ", "C(30, pi/2)" or a (theta_deg, phi_rad) pair.
Strategy strategy_from(const py::handle& h) {
  if (py::isinstance<py::str>(h)) return parse_strategy(h.cast<std::string>());
  if (py::isinstance<py::sequence>(h)) {
    const auto seq = h.cast<py::sequence>();
    if (seq.size() == 2) return Strategy::converter(seq[0].cast<double>(), seq[1].cast<double>());
  }
  throw py::type_error("strategy must be a name, a 'C(theta, phi)' string or a (theta_deg, phi_rad) pair");
}

Backend backend_from(const std::string& s) { return parse_backend(s); }

py::dict strategy_dict(const Strategy& s) {
  py::dict d;
  const auto p = s.params();
  d["label"] = s.label();
  d["theta"] = p.theta_deg;
  d["phi"] = p.phi_rad;
  const auto n = s.name();
  d["name"] = n ? py::object(py::str(std::string(to_string(*n)))) : py::object(py::none());
  d["classical"] = n && is_classical(*n);
  return d;
}

PayoffTable table_from(const py::object& obj) {
  if (obj.is_none()) return {};
  if (py::isinstance<PayoffTable>(obj)) return obj.cast<PayoffTable>();
  PayoffTable t;
  for (const auto& [key, value] : obj.cast<py::dict>()) {
    const std::string port = key.cast<std::string>();
    if (port.size() != 2) throw py::value_error("payoff keys are CC, CD, DC or DD");
    auto move = [&](char c) {
      if (c == 'C' || c == 'c') return Move::C;
      if (c == 'D' || c == 'd') return Move::D;
      throw py::value_error("payoff keys are CC, CD, DC or DD");
    };
    const auto pair = value.cast<std::pair<double, double>>();
    t.set(move(port[0]), move(port[1]), pair.first, pair.second);
  }
  t.validate();
  return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spin-orbit quantum prisoner's dilemma core";

  py::class_<PayoffTable>(m, "PayoffTable")
      .def(py::init<>())
      .def("set",
           [](PayoffTable& t, const std::string& alice, const std::string& bob, double a, double b) {
             auto move = [](const std::string& s) {
               if (s == "C" || s == "c") return Move::C;
               if (s == "D" || s == "d") return Move::D;
               throw py::value_error("move must be 'C' or 'D'");
             };
             t.set(move(alice), move(bob), a, b);
           })
      .def_property_readonly("r_a", [](const PayoffTable& t) { return t.r_a; })
      .def_property_readonly("r_b", [](const PayoffTable& t) { return t.r_b; })
      .def("is_symmetric", &PayoffTable::is_symmetric);

  py::class_<Outcome>(m, "Outcome")
      .def_property_readonly("amplitudes",
                             [](const Outcome& o) {
                               CArray a(4);
                               for (std::size_t k = 0; k < 4; ++k) a.mutable_at(k) = o.amplitudes[k];
                               return a;
                             })
      .def_property_readonly("probs",
                             [](const Outcome& o) {
                               RArray a(4);
                               for (std::size_t k = 0; k < 4; ++k) a.mutable_at(k) = o.probs[k];
                               return a;
                             })
      .def_readonly("payoff_a", &Outcome::payoff_a)
      .def_readonly("payoff_b", &Outcome::payoff_b)
      .def_property_readonly("payoffs", [](const Outcome& o) { return std::make_pair(o.payoff_a, o.payoff_b); })
      .def("__repr__", [](const Outcome& o) {
        return "Outcome(payoffs=(" + std::to_string(o.payoff_a) + ", " + std::to_string(o.payoff_b) + "))";
      });

  m.attr("PORTS") = py::make_tuple("CC", "CD", "DC", "DD");

  m.def("strategies", [] {
    py::list out;
    for (auto s : kNamedStrategies) out.append(strategy_dict(s));
    return out;
  });
  m.def("parse_strategy", [](const std::string& text) { return strategy_dict(parse_strategy(text)); }, py::arg("text"));

  m.def("mode_converter",
        [](double theta_deg, double phi_rad) { return to_numpy(mode_converter({theta_deg, phi_rad})); },
        py::arg("theta_deg"), py::arg("phi_rad"));
  m.def("entangler", [] { return to_numpy(entangler()); });
  m.def("mz", [](double phi) { return to_numpy(mz(phi)); }, py::arg("phi_rad"));
  m.def("disentangler_pipeline", [] { return to_numpy(disentangler_pipeline()); });
  m.def("calibration", [] {
    const PipelineReport& r = disentangler_calibration();
    py::dict d;
    CArray diag(4);
    for (std::size_t k = 0; k < 4; ++k) diag.mutable_at(k) = r.calibration[k];
    d["diagonal"] = diag;
    d["global_phase"] = r.global_phase;
    d["residual"] = r.residual;
    d["calibrated"] = to_numpy(r.calibrated());
    return d;
  });

  m.def(
      "run_protocol",
      [](const py::object& a, const py::object& b, const std::string& backend, const py::object& table) {
        const PayoffTable t = table_from(table);
        if (py::isinstance<py::array>(a) || py::isinstance<py::array>(b))
          return run_protocol(element2_from(a), element2_from(b), backend_from(backend), t);
        return run_protocol(strategy_from(a), strategy_from(b), backend_from(backend), t);
      },
      py::arg("a"), py::arg("b"), py::arg("backend") = "abstract", py::arg("table") = py::none());

  m.def(
      "payoffs",
      [](const std::array<double, 4>& probs, const py::object& table) { return payoffs(probs, table_from(table)); },
      py::arg("probs"), py::arg("table") = py::none());
  m.def(
      "classical_mixed",
      [](double pa, double pb, const py::object& table) { return classical_mixed(pa, pb, table_from(table)); },
      py::arg("pa_d"), py::arg("pb_d"), py::arg("table") = py::none());

  m.def(
      "concurrence",
      [](const std::array<Complex, 4>& amp) { return concurrence(SpinOrbitState(amp)); }, py::arg("amplitudes"));

  m.def(
      "intensities_to_probs",
      [](const std::array<double, 4>& i_mn, double background) {
        const auto r = intensities_to_probs({i_mn, background});
        return std::make_pair(r.probs, r.clamped);
      },
      py::arg("intensities"), py::arg("background") = 0.0);
  py::register_exception<AllDark>(m, "AllDark", PyExc_ValueError);

  m.def(
      "sweep",
      [](std::size_t n, const std::string& backend, const py::object& table) {
        const Surface s = sweep(n, backend_from(backend), table_from(table));
        const std::size_t side = s.side();
        RArray pa({side, side}), pb({side, side});
        auto va = pa.mutable_unchecked<2>();
        auto vb = pb.mutable_unchecked<2>();
        for (std::size_t i = 0; i < side; ++i)
          for (std::size_t j = 0; j < side; ++j) {
            va(i, j) = s.at(i, j).payoff_a;
            vb(i, j) = s.at(i, j).payoff_b;
          }
        py::dict d;
        d["ts"] = s.ts;
        d["payoff_a"] = pa;
        d["payoff_b"] = pb;
        return d;
      },
      py::arg("n_per_segment") = 101, py::arg("backend") = "abstract", py::arg("table") = py::none());

  m.def(
      "best_response",
      [](const py::object& opponent, std::size_t grid, const std::string& backend, const std::string& role,
         const py::object& table) {
        Role r;
        if (role == "alice") r = Role::Alice;
        else if (role == "bob") r = Role::Bob;
        else throw py::value_error("role must be 'alice' or 'bob'");
        const BestResponse br = best_response(strategy_from(opponent), grid, backend_from(backend), table_from(table), r);
        py::dict d = strategy_dict(br.param.strategy().canonical());
        d["t"] = br.param.t();
        d["payoff"] = br.payoff;
        return d;
      },
      py::arg("opponent"), py::arg("grid") = 101, py::arg("backend") = "abstract", py::arg("role") = "alice",
      py::arg("table") = py::none());

  m.def(
      "nash_discrete",
      [](const py::object& set, const std::string& backend, const py::object& table) {
        std::vector<Strategy> strategies;
        if (set.is_none()) strategies = named_strategy_set();
        else
          for (const auto& h : set.cast<py::sequence>()) strategies.push_back(strategy_from(h));
        const EquilibriumReport r = nash_discrete(strategies, backend_from(backend), table_from(table));
        const std::size_t n = strategies.size();
        RArray pa({n, n}), pb({n, n});
        auto va = pa.mutable_unchecked<2>();
        auto vb = pb.mutable_unchecked<2>();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            va(i, j) = r.payoffs[i][j].first;
            vb(i, j) = r.payoffs[i][j].second;
          }
        py::list labels;
        for (const auto& s : strategies) labels.append(s.label());
        py::dict d;
        d["labels"] = labels;
        d["payoff_a"] = pa;
        d["payoff_b"] = pb;
        d["equilibria"] = r.equilibria;
        d["dominated_pairs"] = r.dominated_pairs;
        d["pareto_front"] = r.pareto_front;
        return d;
      },
      py::arg("strategies") = py::none(), py::arg("backend") = "abstract", py::arg("table") = py::none());

  m.def(
      "classical_minimum_check",
      [](std::size_t grid, const py::object& table) {
        const ClassicalCheck c = classical_minimum_check(grid, table_from(table));
        py::dict d;
        d["unique_all_defect"] = c.unique_all_defect;
        d["equilibria"] = c.equilibria;
        d["pa_d"] = c.pa_d;
        d["pb_d"] = c.pb_d;
        d["payoffs"] = c.payoffs;
        return d;
      },
      py::arg("grid") = 101, py::arg("table") = py::none());

  m.def(
      "port_images",
      [](const py::object& a, const py::object& b, std::size_t n, double extent, const std::string& backend) {
        const GridSpec spec{n, extent};
        spec.validate();
        const auto images = port_images(run_protocol(strategy_from(a), strategy_from(b), backend_from(backend)), spec);
        RArray out({std::size_t{4}, n, n});
        auto v = out.mutable_unchecked<3>();
        for (std::size_t k = 0; k < 4; ++k)
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) v(k, r, c) = images[k].pixels[r * n + c];
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("n") = 256, py::arg("extent") = 3.0, py::arg("backend") = "abstract");
}
