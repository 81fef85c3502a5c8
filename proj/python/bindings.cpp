#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "scaledecay/analytic_models.hpp"
#include "scaledecay/scaling_frame.hpp"
#include "scaledecay/scattering_solver.hpp"
#include "scaledecay/tasks.hpp"

namespace py = pybind11;
using namespace scaledecay;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Decay of metastable states in uniformly scaled potentials";
    m.attr("__version__") = std::string(version_string());

    py::class_<PhysicalConstants>(m, "PhysicalConstants")
        .def(py::init([](double hbar, double mass) { return PhysicalConstants{hbar, mass}; }), py::arg("hbar") = 1.0,
             py::arg("mass") = 1.0)
        .def_readwrite("hbar", &PhysicalConstants::hbar)
        .def_readwrite("mass", &PhysicalConstants::mass);

    py::class_<ScaleLaw>(m, "ScaleLaw")
        .def(py::init<double, double>(), py::arg("L0"), py::arg("v"))
        .def_property_readonly("L0", &ScaleLaw::L0)
        .def_property_readonly("v", &ScaleLaw::v);
    m.def("tau_of_t", &tau_of_t, py::arg("law"), py::arg("t"));
    m.def("t_of_tau", &t_of_tau, py::arg("law"), py::arg("tau"));

    py::class_<Resonance>(m, "Resonance")
        .def_readonly("index_n", &Resonance::index_n)
        .def_readonly("kbar_n", &Resonance::kbar_n)
        .def_readonly("Ebar_n", &Resonance::Ebar_n)
        .def_readonly("kprime_n", &Resonance::kprime_n)
        .def_readonly("F", &Resonance::F)
        .def_readonly("G", &Resonance::G)
        .def_readonly("delta_shift", &Resonance::delta_shift)
        .def_readonly("warnings", &Resonance::warnings)
        .def_property_readonly("origin", [](const Resonance& r) { return std::string(to_string(r.origin)); })
        .def("width", &Resonance::width);

    py::class_<DeltaModel>(m, "DeltaModel")
        .def(py::init([](double V0bar, double abar, PhysicalConstants c) { return DeltaModel{c, V0bar, abar}; }),
             py::arg("V0bar"), py::arg("abar") = 1.0, py::arg("consts") = PhysicalConstants{})
        .def_readonly("strength_V0bar", &DeltaModel::strength_V0bar)
        .def_readonly("abar", &DeltaModel::abar);

    py::class_<BarrierModel>(m, "BarrierModel")
        .def(py::init([](double V0bar, double abar, double bbar, PhysicalConstants c) {
                 return BarrierModel{c, V0bar, abar, bbar};
             }),
             py::arg("V0bar"), py::arg("abar") = 1.0, py::arg("bbar") = 2.0, py::arg("consts") = PhysicalConstants{})
        .def("kbar_cut", &BarrierModel::kbar_cut);

    m.def("delta_C2", &delta_C2, py::arg("model"), py::arg("kbar"));
    m.def("delta_resonance", &delta_resonance, py::arg("model"), py::arg("n"));
    m.def("barrier_C2", &barrier_C2, py::arg("model"), py::arg("kbar"));
    m.def("barrier_roots", &barrier_roots, py::arg("model"));
    m.def("barrier_resonance", [](const BarrierModel& b, int n) { return barrier_resonance(b, n); }, py::arg("model"),
          py::arg("n"));

    m.def(
        "scan_C2",
        [](const DeltaModel& model, double kmin, double kmax, int samples, int threads) {
            const auto scan = scan_C2(RescaledPotential::from(model), model.consts, kmin, kmax, samples,
                                      kDefaultGridStep, threads);
            std::vector<std::pair<double, double>> out;
            for (const auto& s : scan) out.emplace_back(s.kbar, s.C2);
            return out;
        },
        py::arg("model"), py::arg("kmin"), py::arg("kmax"), py::arg("samples"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "run_task",
        [](const std::string& task, const std::filesystem::path& config, const std::filesystem::path& out, int threads) {
            std::ostringstream log;
            const int code = run_task(task, config, out, threads, log);
            return std::make_pair(code, log.str());
        },
        py::arg("task"), py::arg("config"), py::arg("out"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
}
