#include "fairassign/admission.hpp"
#include "fairassign/audit.hpp"
#include "fairassign/eating.hpp"
#include "fairassign/error.hpp"
#include "fairassign/json_io.hpp"
#include "fairassign/lefsolve.hpp"
#include "fairassign/lottery.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace fairassign;

namespace {

std::string solve(const std::string& alg, const std::string& instance_text) {
    const auto [instance, priority] = load_instance_text(instance_text);
    if (alg == "rsd") {
        return lottery_to_json(instance, rsd(instance, priority)).dump();
    }
    if (alg == "ps") {
        return assignment_to_json(instance, probabilistic_serial(instance)).dump();
    }
    if (alg == "ce") {
        return assignment_to_json(instance, cycle_elimination(instance, priority)).dump();
    }
    if (alg == "ute") {
        return assignment_to_json(instance, unit_time_eating(instance, priority)).dump();
    }
    throw InputError("unknown algorithm '" + alg + "' (expected ps, ce, ute or rsd)");
}

std::string audit(const std::string& prop, const std::string& instance_text, const std::string& assignment_text,
                  const std::optional<std::string>& lottery_text) {
    const auto [instance, priority] = load_instance_text(instance_text);
    const RandomAssignment p = assignment_from_json(instance, Json::parse(assignment_text));
    std::optional<Lottery> lottery;
    if (lottery_text) {
        lottery = lottery_from_json(instance, Json::parse(*lottery_text));
        if (!(assignment_from_lottery(*lottery) == p)) {
            throw InputError("lottery does not induce the assignment");
        }
    }
    AuditReport report;
    if (prop == "sef") {
        report = check_sef(p, priority, instance);
    } else if (prop == "oe") {
        report = check_oe(p, instance);
    } else if (prop == "prop") {
        report = check_prop(p, priority, instance);
    } else if (prop == "1lef") {
        report = check_1lef(p, priority, instance, lottery ? &*lottery : nullptr);
    } else if (prop == "lef") {
        if (!lottery) {
            throw InputError("property 'lef' needs a lottery");
        }
        report = check_lef_lottery(*lottery, priority, instance);
    } else {
        throw InputError("unknown property '" + prop + "'");
    }
    return report_to_json(report, instance).dump();
}

std::string lef_check(const std::string& instance_text, const std::string& assignment_text) {
    const auto [instance, priority] = load_instance_text(instance_text);
    const RandomAssignment p = assignment_from_json(instance, Json::parse(assignment_text));
    const LefResult result = lef_feasible(p, priority, instance);
    Json out = Json::object();
    out["feasible"] = result.feasible;
    if (result.witness) {
        out["lottery"] = lottery_to_json(instance, *result.witness);
    } else {
        out["note"] = result.note;
        Json rows = Json::array();
        for (const auto& [label, multiplier] : result.certificate) {
            rows.push_back(Json{{"row", label}, {"multiplier", format_rational(multiplier)}});
        }
        out["certificate"] = rows;
    }
    return out.dump();
}

std::string decompose(const std::string& instance_text, const std::string& assignment_text) {
    const auto [instance, priority] = load_instance_text(instance_text);
    const RandomAssignment p = assignment_from_json(instance, Json::parse(assignment_text));
    return lottery_to_json(instance, bvn_decompose(p)).dump();
}

std::vector<py::dict> experiment(int students, int disadvantaged, int schools, const std::string& model, double beta,
                                 int q, int trials, std::uint64_t seed, int threads) {
    const auto config =
        AdmissionConfig::standard(students, disadvantaged, schools, parse_bias_model(model), beta, q, trials, seed);
    std::vector<ExperimentRow> rows;
    {
        py::gil_scoped_release release;
        rows = run_experiment(config, threads);
    }
    std::vector<py::dict> out;
    for (const auto& row : rows) {
        py::dict d;
        d["ell"] = row.ell;
        d["beta"] = row.beta;
        d["bias_model"] = to_string(row.model);
        d["algorithm"] = row.algorithm;
        d["mean_envy_pairs"] = row.mean();
        d["trials"] = row.trials;
        d["q"] = row.q;
        d["seed"] = row.seed;
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<SizeGuardError>(m, "SizeGuardError", PyExc_ValueError);
    m.def("solve", &solve, py::arg("alg"), py::arg("instance"));
    m.def("audit", &audit, py::arg("prop"), py::arg("instance"), py::arg("assignment"),
          py::arg("lottery") = std::nullopt);
    m.def("lef_check", &lef_check, py::arg("instance"), py::arg("assignment"));
    m.def("decompose", &decompose, py::arg("instance"), py::arg("assignment"));
    m.def("experiment", &experiment, py::arg("students"), py::arg("disadvantaged"), py::arg("schools"),
          py::arg("bias_model"), py::arg("beta"), py::arg("q"), py::arg("trials"), py::arg("seed"),
          py::arg("threads") = 0);
}
