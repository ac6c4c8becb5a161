#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qdesign/auction.hpp"
#include "qdesign/concavify.hpp"
#include "qdesign/error.hpp"
#include "qdesign/families.hpp"
#include "qdesign/functionals.hpp"
#include "qdesign/io.hpp"
#include "qdesign/joint.hpp"
#include "qdesign/simulate.hpp"
#include "qdesign/solvers.hpp"
#include "qdesign/welfare.hpp"

namespace py = pybind11;
using namespace qd;

namespace {

py::list intervals(const PoolingPartition& p) {
  py::list out;
  for (const auto& iv : p.intervals) out.append(py::make_tuple(iv.lo, iv.hi));
  return out;
}

PoolingPartition to_partition(const std::vector<std::pair<double, double>>& ivs, double cutoff) {
  PoolingPartition p{{}, cutoff};
  for (const auto& [lo, hi] : ivs) p.intervals.push_back({lo, hi});
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_qdesign, m) {
  m.doc() = "Quantile-space mechanism and information design";

  auto base = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  (void)base;

  py::class_<QuantileFunction>(m, "QuantileFunction")
      .def(py::init([](const std::vector<std::tuple<double, double, double>>& knots) {
             std::vector<Knot> k;
             for (const auto& [t, l, r] : knots) k.push_back({t, l, r});
             return QuantileFunction(std::move(k));
           }),
           py::arg("knots"), "From (t, left limit, value) triples.")
      .def_static("interpolate",
                  [](const std::vector<double>& t, const std::vector<double>& v) {
                    return QuantileFunction::interpolate(t, v);
                  })
      .def_static("constant", &QuantileFunction::constant)
      .def_static("sample", &QuantileFunction::sample, py::arg("f"), py::arg("segments"))
      .def("__call__", &QuantileFunction::operator())
      .def("left_limit", &QuantileFunction::left_limit)
      .def("integral", &QuantileFunction::integral)
      .def("knots",
           [](const QuantileFunction& f) {
             py::list out;
             for (const auto& k : f.knots()) out.append(py::make_tuple(k.t, k.left, k.right));
             return out;
           })
      .def("breakpoints", &QuantileFunction::breakpoints)
      .def_property_readonly("at_zero", &QuantileFunction::at_zero)
      .def_property_readonly("top", &QuantileFunction::top)
      .def("to_csv", [](const QuantileFunction& f) {
        std::ostringstream s;
        write_quantile_csv(s, f);
        return s.str();
      });

  m.def("power_family", &power_family, py::arg("k"), py::arg("m") = kDefaultGrid);
  m.def("exp_family", &exp_family, py::arg("c"), py::arg("m") = kDefaultGrid);
  m.def("pareto_family", &pareto_family, py::arg("a"), py::arg("eps") = 1e-6, py::arg("m") = kDefaultGrid);
  m.def("parse_family", &parse_family, py::arg("spec"), py::arg("m") = kDefaultGrid);
  m.def("border_quantile", &border_quantile, py::arg("n"), py::arg("m") = kDefaultGrid);

  m.def("revenue", &revenue, py::arg("w"), py::arg("x"));
  m.def("consumer_surplus", &consumer_surplus, py::arg("w"), py::arg("x"));
  m.def("interval_mean", [](const QuantileFunction& f, double lo, double hi) { return interval_mean(f, {lo, hi}); });
  m.def("is_majorized", &is_majorized, py::arg("w"), py::arg("v"), py::arg("tol") = kMajorizationTol);
  m.def("is_weakly_majorized", &is_weakly_majorized, py::arg("x"), py::arg("q"), py::arg("tol") = kMajorizationTol);
  m.def(
      "pool",
      [](const QuantileFunction& f, const std::vector<std::pair<double, double>>& ivs, double cutoff) {
        return pool(f, to_partition(ivs, cutoff));
      },
      py::arg("f"), py::arg("intervals"), py::arg("exclusion_cutoff") = 0.0);
  m.def("exclude_below", &exclude_below);
  m.def("is_regular", &is_regular);
  m.def("disclosure_dichotomy", [](const QuantileFunction& q) { return std::string(to_string(disclosure_dichotomy(q))); });

  py::class_<MechanismSolution>(m, "MechanismSolution")
      .def_readonly("allocation", &MechanismSolution::allocation)
      .def_readonly("objective", &MechanismSolution::objective)
      .def_readonly("formula_value", &MechanismSolution::formula_value)
      .def_readonly("t_m", &MechanismSolution::t_m)
      .def_readonly("unique", &MechanismSolution::unique)
      .def_property_readonly("intervals", [](const MechanismSolution& s) { return intervals(s.partition); });
  py::class_<InfoSolution>(m, "InfoSolution")
      .def_readonly("signal", &InfoSolution::signal)
      .def_readonly("objective", &InfoSolution::objective)
      .def_readonly("formula_value", &InfoSolution::formula_value)
      .def_readonly("unique", &InfoSolution::unique)
      .def_property_readonly("intervals", [](const InfoSolution& s) { return intervals(s.partition); });

  m.def("optimal_mechanism", &optimal_mechanism, py::arg("w"), py::arg("q"));
  m.def("optimal_information", &optimal_information, py::arg("v"), py::arg("x"));
  m.def("consumer_optimal_allocation", &consumer_optimal_allocation, py::arg("w"), py::arg("q"));
  m.def("consumer_optimal_information", &consumer_optimal_information, py::arg("v"), py::arg("x"));

  py::class_<JointSolution>(m, "JointSolution")
      .def_readonly("signal", &JointSolution::signal)
      .def_readonly("allocation", &JointSolution::allocation)
      .def_readonly("objective", &JointSolution::objective)
      .def_readonly("interval_count", &JointSolution::interval_count)
      .def_readonly("served_count", &JointSolution::served_count)
      .def_property_readonly("intervals", [](const JointSolution& s) { return intervals(s.partition); })
      .def_property_readonly("exclusion_cutoff", [](const JointSolution& s) { return s.partition.exclusion_cutoff; })
      .def("menu", [](const JointSolution& s) {
        py::list out;
        for (const auto& it : menu(s)) {
          py::dict d;
          d["lo"] = it.lo;
          d["hi"] = it.hi;
          d["value"] = it.value;
          d["quality"] = it.quality;
          d["price"] = it.price;
          out.append(d);
        }
        return out;
      });
  m.def("solve_joint", &solve_joint, py::arg("v"), py::arg("q"), py::arg("m"));
  m.def("solve_joint_bruteforce", &solve_joint_bruteforce, py::arg("v"), py::arg("q"), py::arg("m"));

  py::class_<WelfarePoint>(m, "WelfarePoint")
      .def_readonly("lam", &WelfarePoint::lambda)
      .def_readonly("m", &WelfarePoint::m)
      .def_property_readonly("censorship", [](const WelfarePoint& p) { return std::string(to_string(p.censorship)); })
      .def_readonly("cutoff", &WelfarePoint::cutoff)
      .def_readonly("revenue", &WelfarePoint::revenue)
      .def_readonly("consumer_surplus", &WelfarePoint::consumer_surplus)
      .def_readonly("signal", &WelfarePoint::signal)
      .def_readonly("censorship_shape_ok", &WelfarePoint::censorship_shape_ok);
  m.def("solve_weighted", &solve_weighted, py::arg("lam"), py::arg("m"), py::arg("v"), py::arg("q"));
  m.def("trace_frontier", &trace_frontier, py::arg("v"), py::arg("q"), py::arg("steps") = 201);

  m.def("tstar", &tstar, py::arg("n"), py::arg("tol") = 1e-12);
  m.def("competition_statistic", &competition_statistic);

  py::class_<SimReport>(m, "SimReport")
      .def_readonly("mean_revenue", &SimReport::mean_revenue)
      .def_readonly("mean_consumer_surplus", &SimReport::mean_consumer_surplus)
      .def_readonly("se_revenue", &SimReport::se_revenue)
      .def_readonly("se_cs", &SimReport::se_cs)
      .def_readonly("replications", &SimReport::replications)
      .def_readonly("seed", &SimReport::seed);
  m.def(
      "simulate_spa",
      [](const QuantileFunction& v, const QuantileFunction& w, int n, std::uint64_t reps, std::uint64_t seed,
         unsigned threads) {
        SimOptions o;
        o.threads = threads;
        py::gil_scoped_release release;
        return simulate_spa(v, w, n, reps, seed, o);
      },
      py::arg("v"), py::arg("w"), py::arg("n"), py::arg("reps"), py::arg("seed"), py::arg("threads") = 1);
}
