#include "fairassign/admission.hpp"
#include "fairassign/audit.hpp"
#include "fairassign/eating.hpp"
#include "fairassign/error.hpp"
#include "fairassign/json_io.hpp"
#include "fairassign/lefsolve.hpp"
#include "fairassign/lottery.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace fairassign;

namespace {

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw InputError("failed writing '" + path + "'");
    }
}

std::string dump(const Json& document) { return document.dump(2) + "\n"; }

// Assignment files name their agents and items; decompose runs without an
// instance, so the names are taken from the document itself.
Instance instance_from_matrix(const Json& document) {
    if (!document.is_object() || !document.contains("matrix") || !document.at("matrix").is_object()) {
        throw InputError("assignment document needs a \"matrix\" object");
    }
    std::vector<std::string> agents, items;
    for (const auto& [agent, row] : document.at("matrix").items()) {
        agents.push_back(agent);
        if (!row.is_object()) {
            throw InputError("assignment row for '" + agent + "' is not an object");
        }
        for (const auto& [item, value] : row.items()) {
            if (std::find(items.begin(), items.end(), item) == items.end()) {
                items.push_back(item);
            }
        }
    }
    if (agents.empty()) {
        throw InputError("assignment has no agents");
    }
    if (items.size() < agents.size()) {
        throw InputError("assignment names fewer items than agents");
    }
    std::vector<ItemId> identity(items.size());
    for (std::size_t j = 0; j < items.size(); ++j) {
        identity[j] = static_cast<ItemId>(j);
    }
    return Instance(std::move(agents), std::move(items),
                    std::vector<std::vector<ItemId>>(document.at("matrix").size(), identity));
}

int cmd_solve(const std::string& alg, const std::string& instance_path, const std::string& out) {
    const auto [instance, priority] = load_instance_file(instance_path);
    if (alg == "rsd") {
        emit(dump(lottery_to_json(instance, rsd(instance, priority))), out);
        return 0;
    }
    const RandomAssignment p = alg == "ps"   ? probabilistic_serial(instance)
                               : alg == "ce" ? cycle_elimination(instance, priority)
                                             : unit_time_eating(instance, priority);
    emit(dump(assignment_to_json(instance, p)), out);
    return 0;
}

int cmd_audit(const std::vector<std::string>& props, const std::string& instance_path,
              const std::string& assignment_path, const std::string& lottery_path) {
    const auto [instance, priority] = load_instance_file(instance_path);
    const RandomAssignment p = assignment_from_json(instance, read_json_file(assignment_path));
    std::optional<Lottery> lottery;
    if (!lottery_path.empty()) {
        lottery = lottery_from_json(instance, read_json_file(lottery_path));
        if (!(assignment_from_lottery(*lottery) == p)) {
            throw InputError("lottery in '" + lottery_path + "' does not induce the assignment");
        }
    }
    std::vector<AuditReport> reports;
    for (const auto& prop : props) {
        if (prop == "sef") {
            reports.push_back(check_sef(p, priority, instance));
        } else if (prop == "oe") {
            reports.push_back(check_oe(p, instance));
        } else if (prop == "prop") {
            reports.push_back(check_prop(p, priority, instance));
        } else if (prop == "1lef") {
            reports.push_back(check_1lef(p, priority, instance, lottery ? &*lottery : nullptr));
        } else if (prop == "lef") {
            if (!lottery) {
                throw InputError("property 'lef' needs --lottery");
            }
            reports.push_back(check_lef_lottery(*lottery, priority, instance));
        } else {
            throw InputError("unknown property '" + prop + "'");
        }
    }
    bool pass = true;
    for (const auto& report : reports) {
        std::cout << dump(report_to_json(report, instance));
        pass = pass && report.pass;
    }
    return pass ? 0 : 1;
}

int cmd_lefcheck(const std::string& instance_path, const std::string& assignment_path) {
    const auto [instance, priority] = load_instance_file(instance_path);
    const RandomAssignment p = assignment_from_json(instance, read_json_file(assignment_path));
    const LefResult result = lef_feasible(p, priority, instance);
    if (result.feasible) {
        std::cout << "feasible\n" << dump(lottery_to_json(instance, *result.witness));
        return 0;
    }
    std::cout << "infeasible\n" << result.note << "\n";
    for (const auto& [label, multiplier] : result.certificate) {
        std::cout << "  " << format_rational(multiplier) << " x [" << label << "]\n";
    }
    return 1;
}

int cmd_decompose(const std::string& assignment_path, const std::string& out) {
    const Json document = read_json_file(assignment_path);
    const Instance instance = instance_from_matrix(document);
    const RandomAssignment p = assignment_from_json(instance, document);
    emit(dump(lottery_to_json(instance, bvn_decompose(p))), out);
    return 0;
}

struct ExperimentArgs {
    std::vector<int> schools{2};
    std::vector<double> betas{0.5};
    std::vector<std::string> models{"multiplicative"};
    int students = 35;
    int disadvantaged = 10;
    int q = 200;
    int trials = 20;
    std::uint64_t seed = 0;
    std::string out;
    std::string svg;
};

int cmd_experiment(const ExperimentArgs& args) {
    std::vector<ExperimentRow> rows;
    const int threads = experiment_threads();
    for (const auto& model : args.models) {
        const BiasModel bias = parse_bias_model(model);
        for (int ell : args.schools) {
            for (double beta : args.betas) {
                const auto config = AdmissionConfig::standard(args.students, args.disadvantaged, ell, bias, beta,
                                                              args.q, args.trials, args.seed);
                auto cell = run_experiment(config, threads);
                rows.insert(rows.end(), cell.begin(), cell.end());
            }
        }
    }
    std::ostringstream csv;
    write_csv(csv, rows);
    emit(csv.str(), args.out);
    if (!args.svg.empty()) {
        std::ostringstream svg;
        write_svg(svg, rows);
        emit(svg.str(), args.svg);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random assignment under uncertain priorities: solve, audit, decompose and replicate experiments"};
    app.require_subcommand(1);

    std::string alg, instance_path, assignment_path, lottery_path, out;
    std::vector<std::string> props;
    ExperimentArgs experiment;

    auto* solve = app.add_subcommand("solve", "Compute an assignment (ps, ce, ute) or an RSD lottery");
    solve->add_option("--alg", alg, "Algorithm")->required()->check(CLI::IsMember({"ps", "ce", "ute", "rsd"}));
    solve->add_option("--instance", instance_path, "Instance JSON")->required();
    solve->add_option("--out", out, "Output path (stdout when omitted)");

    auto* audit = app.add_subcommand("audit", "Check properties of an assignment; exit 1 if any fails");
    audit->add_option("--props", props, "Comma-separated subset of sef,oe,prop,1lef,lef")
        ->required()
        ->delimiter(',')
        ->check(CLI::IsMember({"sef", "oe", "prop", "1lef", "lef"}));
    audit->add_option("--instance", instance_path, "Instance JSON")->required();
    audit->add_option("--assignment", assignment_path, "Assignment JSON")->required();
    audit->add_option("--lottery", lottery_path, "Lottery JSON inducing the assignment (needed for lef)");

    auto* lefcheck = app.add_subcommand("lefcheck", "Decide whether some inducing lottery is likelihood envy-free");
    lefcheck->add_option("--instance", instance_path, "Instance JSON")->required();
    lefcheck->add_option("--assignment", assignment_path, "Assignment JSON")->required();

    auto* decompose = app.add_subcommand("decompose", "Birkhoff-von Neumann decomposition into a lottery");
    decompose->add_option("--assignment", assignment_path, "Assignment JSON")->required();
    decompose->add_option("--out", out, "Output path (stdout when omitted)");

    auto* exp = app.add_subcommand("experiment", "School admission bias experiment; trials capped by FAIR_ASSIGN_THREADS");
    exp->add_option("--schools", experiment.schools, "Comma-separated school counts")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    exp->add_option("--beta", experiment.betas, "Comma-separated bias scales")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    exp->add_option("--bias-model", experiment.models, "Comma-separated: multiplicative, additive")
        ->delimiter(',')
        ->check(CLI::IsMember({"multiplicative", "additive"}))
        ->capture_default_str();
    exp->add_option("--students", experiment.students, "Total students N")->capture_default_str();
    exp->add_option("--disadvantaged", experiment.disadvantaged, "Disadvantaged students")->capture_default_str();
    exp->add_option("--q", experiment.q, "Priority samples per trial")->capture_default_str();
    exp->add_option("--trials", experiment.trials, "Trials per cell")->capture_default_str();
    exp->add_option("--seed", experiment.seed, "Base seed; trial k uses seed + k")->capture_default_str();
    exp->add_option("--out", experiment.out, "CSV output path (stdout when omitted)");
    exp->add_option("--svg", experiment.svg, "Optional SVG bar chart path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) {
            return cmd_solve(alg, instance_path, out);
        }
        if (audit->parsed()) {
            return cmd_audit(props, instance_path, assignment_path, lottery_path);
        }
        if (lefcheck->parsed()) {
            return cmd_lefcheck(instance_path, assignment_path);
        }
        if (decompose->parsed()) {
            return cmd_decompose(assignment_path, out);
        }
        return cmd_experiment(experiment);
    } catch (const SizeGuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "error: malformed document: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
