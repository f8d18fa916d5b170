#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qtk/harness/harness.hpp"
#include "qtk/qir/serialize.hpp"

namespace py = pybind11;
using namespace qtk;

namespace {

StateVector from_list(const std::vector<cplx>& amps) { return StateVector::from_amplitudes(amps); }

std::set<MutationKind> kinds_from(const std::vector<std::string>& names) {
    std::set<MutationKind> out;
    for (const auto& n : names) out.insert(mutation_kind_from(n));
    return out;
}

}  // namespace

PYBIND11_MODULE(_qtestkit, m) {
    m.doc() = "Native core of qtestkit";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<BenchError>(m, "BenchError", PyExc_ValueError);
    py::register_exception<PrepError>(m, "PrepError", PyExc_ValueError);

    py::class_<PreparedInput>(m, "PreparedInput")
        .def_property_readonly("n_qubits", &PreparedInput::n_qubits)
        .def_property_readonly("description", &PreparedInput::description)
        .def("amplitudes", [](const PreparedInput& p) { return p.state().amplitudes(); });

    m.def("ket_x", &gen_ket_x, py::arg("n"), py::arg("x"));
    m.def("comp_sup", &gen_comp_sup, py::arg("n"), py::arg("x"), py::arg("theta"));
    m.def("two_value", &gen_two_value, py::arg("n"), py::arg("x"), py::arg("y"), py::arg("theta"));
    m.def("pauli", &gen_pauli, py::arg("indices"));
    m.def("generator", [](const std::string& spec, std::uint64_t seed) {
        Rng rng(seed);
        return GeneratorSpec::parse(spec).realize(rng);
    }, py::arg("spec"), py::arg("seed") = 0);

    m.def("scaq_check", [](const std::vector<std::vector<cplx>>& states, double eps) {
        std::vector<StateVector> sv;
        for (const auto& s : states) sv.push_back(from_list(s));
        auto r = scaq_check(sv, eps);
        return py::make_tuple(r.pass, r.uncovered);
    }, py::arg("states"), py::arg("eps") = 1e-9);

    m.def("fidelity", [](const std::vector<cplx>& a, const std::vector<cplx>& b) { return from_list(a).fidelity(from_list(b)); });
    m.def("spec_qft", &spec_qft, py::arg("n"), py::arg("amplitudes"));

    m.def("stat_fit", [](const std::map<std::uint64_t, int>& observed, const std::map<std::uint64_t, double>& expected,
                         double alpha) {
        StatConfig cfg;
        cfg.alpha = alpha;
        int total = 0;
        for (auto [k, c] : observed) total += c;
        cfg.shots = total;
        nlohmann::json j = stat_fit(observed, expected, cfg);
        return j.dump();
    }, py::arg("observed"), py::arg("expected"), py::arg("alpha") = 0.01);

    m.def("benchmarks", [] { return catalog().names(); });
    m.def("benchmark_info", [](const std::string& name) {
        const auto& e = catalog().get(name);
        return py::dict(py::arg("name") = e.name, py::arg("io_type") = std::string(io_type_name(e.io_type)),
                        py::arg("mark") = e.io_mark.str(), py::arg("quantum_input") = e.has_quantum_input());
    }, py::arg("name"));
    m.def("dump", [](const std::string& name) { return to_text(*catalog().get(name).subroutine); }, py::arg("name"));

    m.def("default_suite_yaml", [](const std::vector<std::string>& names) {
        Suite s;
        if (names.empty()) return catalog().default_suites().to_yaml();
        for (const auto& n : names) s.docs.push_back(catalog().get(n).default_suite);
        return s.to_yaml();
    }, py::arg("names") = std::vector<std::string>{});
    m.def("run_suite", [](const std::string& yaml, std::uint64_t seed) {
        Suite s = Suite::from_yaml(yaml);
        std::vector<CaseRecord> records;
        {
            py::gil_scoped_release release;
            records = run_suite(s, catalog().library(), seed);
        }
        return suite_report(std::move(records)).to_json().dump();
    }, py::arg("yaml"), py::arg("seed") = 0);

    m.def("mutate", [](const std::string& name, const std::vector<std::string>& kinds, int limit, std::uint64_t seed) {
        const auto& e = catalog().get(name);
        Rng rng(seed);
        auto mutants = enumerate_mutants(*e.subroutine, catalog().library(), kinds_from(kinds), limit, rng);
        py::list out;
        for (std::size_t i = 0; i < mutants.size(); ++i) {
            const auto& mu = mutants[i];
            out.append(py::dict(py::arg("id") = mu.id(i), py::arg("kind") = std::string(mutation_kind_name(mu.kind)),
                                py::arg("edit") = std::string(edit_kind_name(mu.edit)), py::arg("site") = mu.site,
                                py::arg("program") = to_text(*mu.program)));
        }
        return out;
    }, py::arg("benchmark"), py::arg("kinds") = std::vector<std::string>{"GM", "SM", "CM", "MM"}, py::arg("limit") = 50,
       py::arg("seed") = 0);

    m.def("run_experiment", [](const std::string& config_text) {
        auto cfg = ExperimentConfig::parse(config_text);
        cfg.validate();
        TriggerReport rep;
        {
            py::gil_scoped_release release;
            rep = run_experiment(cfg);
        }
        return py::make_tuple(rep.to_csv(), rep.to_json().dump());
    }, py::arg("config"));
}
