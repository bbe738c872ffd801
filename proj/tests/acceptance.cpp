#include "support.hpp"

#include "fairassign/admission.hpp"
#include "fairassign/audit.hpp"
#include "fairassign/eating.hpp"
#include "fairassign/lefsolve.hpp"
#include "fairassign/lottery.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <unistd.h>
#include <sstream>

using namespace fairassign;
using namespace testing_support;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool condition, const std::string& what) {
        if (!condition) {
            detail += (pass ? "" : "; ") + what;
            pass = false;
        }
    }
};

Outcome property_matrix() {
    Outcome out;
    std::mt19937_64 rng(2001);
    int passed = 0;
    const auto start = Clock::now();
    for (int trial = 0; trial < 200; ++trial) {
        const int n = uniform_int(rng, 2, 6);
        const int m = n + uniform_int(rng, 0, 2);
        const auto inst = trial % 2 ? random_instance(rng, n, m) : clustered_instance(rng, n, m);
        const auto sigma = random_priority(rng, n, uniform_int(rng, 1, 4));
        const auto ce = cycle_elimination(inst, sigma);
        const auto ute = unit_time_eating(inst, sigma);
        const auto lottery = rsd(inst, sigma);
        const auto induced = assignment_from_lottery(lottery);
        const bool ok = check_oe(ce, inst).pass && check_sef(ce, sigma, inst).pass &&
                        check_1lef(ce, sigma, inst).pass && check_oe(ute, inst).pass &&
                        check_sef(ute, sigma, inst).pass && check_prop(ute, sigma, inst).pass &&
                        check_lef_lottery(lottery, sigma, inst).pass &&
                        check_1lef(induced, sigma, inst, &lottery).pass && check_prop(induced, sigma, inst).pass;
        passed += ok;
        out.require(ok, "instance " + std::to_string(trial) + " violates a property");
    }
    const double elapsed = seconds_since(start);
    out.require(elapsed < 60, "took " + std::to_string(elapsed) + " s");
    if (out.pass) {
        out.detail = std::to_string(passed) + "/200 instances";
    }
    return out;
}

Outcome first_fixture() {
    Outcome out;
    const auto start = Clock::now();
    auto [inst, sigma] = load_fixture("thm1.json");
    for (const auto& p : {cycle_elimination(inst, sigma), unit_time_eating(inst, sigma)}) {
        out.require(check_oe(p, inst).pass, "eating output is not ordinally efficient");
        out.require(!lef_feasible(p, sigma, inst).feasible, "eating output admits a LEF lottery");
    }
    out.require(seconds_since(start) < 5, "too slow");
    return out;
}

Outcome five_agent_fixture() {
    Outcome out;
    const auto start = Clock::now();
    auto [inst, sigma] = load_fixture("five_agent.json");
    for (const auto& p : {cycle_elimination(inst, sigma), unit_time_eating(inst, sigma)}) {
        out.require(check_sef(p, sigma, inst).pass, "eating output is not SEF");
        out.require(!lef_feasible(p, sigma, inst).feasible, "eating output admits a LEF lottery");
    }
    out.require(seconds_since(start) < 10, "too slow");
    return out;
}

Outcome proportionality_separation() {
    Outcome out;
    auto [inst, sigma] = load_fixture("thm1.json");
    out.require(!check_prop(cycle_elimination(inst, sigma), sigma, inst).pass, "CE output passes PROP");
    out.require(!check_1lef(unit_time_eating(inst, sigma), sigma, inst).pass, "UTE output passes 1-LEF");
    return out;
}

Outcome rsd_inefficiency() {
    Outcome out;
    auto [inst, sigma] = load_fixture("rsd_inefficiency.json");
    const auto report = check_oe(assignment_from_lottery(rsd(inst, sigma)), inst);
    out.require(!report.pass, "RSD assignment is ordinally efficient");
    if (!report.pass) {
        auto cycle = report.witnesses[0].items;
        std::sort(cycle.begin(), cycle.end());
        out.require(cycle == std::vector<ItemId>{0, 1}, "witness cycle is not a <-> b");
    }
    return out;
}

Outcome oracle_agreement() {
    Outcome out;
    std::mt19937_64 rng(2006);
    int agree = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = uniform_int(rng, 1, 4);
        const int m = uniform_int(rng, n, 4);
        const auto inst = trial % 2 ? random_instance(rng, n, m) : clustered_instance(rng, n, m);
        const auto p = random_assignment(rng, n, m, uniform_int(rng, 1, 4));
        agree += check_oe(p, inst).pass == check_oe_bruteforce(p, inst).pass;
    }
    out.require(agree == 500, std::to_string(agree) + "/500 agree");
    if (out.pass) {
        out.detail = "500/500 agree";
    }
    return out;
}

Outcome decomposition_round_trip() {
    Outcome out;
    std::mt19937_64 rng(2007);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = uniform_int(rng, 1, 8);
        const int m = uniform_int(rng, n, 8);
        const auto p = random_assignment(rng, n, m, uniform_int(rng, 1, 10), 30);
        const auto lottery = bvn_decompose(p);
        out.require(assignment_from_lottery(lottery) == p, "round trip differs");
        out.require(lottery.size() <= static_cast<std::size_t>((m - 1) * (m - 1) + 1), "too many components");
    }
    return out;
}

Outcome desk_experiment() {
    Outcome out;
    const auto start = Clock::now();
    for (BiasModel model : {BiasModel::multiplicative, BiasModel::additive}) {
        for (int ell = 1; ell <= 3; ++ell) {
            for (double beta : {0.2, 0.5, 0.8}) {
                const auto config = AdmissionConfig::standard(35, 10, ell, model, beta, 200, 20, 0);
                std::map<std::string, double> mean;
                for (const auto& row : run_experiment(config)) {
                    mean[row.algorithm] = row.mean();
                }
                std::ostringstream cell;
                cell << to_string(model) << " l=" << ell << " beta=" << beta << ": ";
                out.require(mean["CE"] == 0 && mean["UTE"] == 0, cell.str() + "CE or UTE has envy");
                if (ell >= 2) {
                    out.require(mean["N"] > 0, cell.str() + "N is zero");
                    out.require(mean["RN"] > 0, cell.str() + "RN is zero");
                }
                if (ell == 1 && model == BiasModel::multiplicative) {
                    out.require(mean["RN"] == 0, cell.str() + "RN is positive");
                    out.require(mean["RR"] > 0, cell.str() + "RR is zero");
                }
            }
        }
    }
    const double elapsed = seconds_since(start);
    out.require(elapsed < 600, "took " + std::to_string(elapsed) + " s");
    if (out.pass) {
        std::ostringstream text;
        text << "36 cells in " << static_cast<int>(elapsed) << " s";
        out.detail = text.str();
    }
    return out;
}

Outcome performance() {
    Outcome out;
    std::mt19937_64 rng(2009);
    const int n = 300;
    const auto inst = random_instance(rng, n, n);
    const auto sigma = random_priority(rng, n, 50);
    std::ostringstream text;
    for (int alg = 0; alg < 2; ++alg) {
        const auto start = Clock::now();
        const auto p = alg == 0 ? cycle_elimination(inst, sigma) : unit_time_eating(inst, sigma);
        const double elapsed = seconds_since(start);
        out.require(elapsed < 5, (alg == 0 ? "CE" : "UTE") + std::string(" took ") + std::to_string(elapsed) + " s");
        text << (alg == 0 ? "CE " : ", UTE ") << elapsed << " s";
    }
    if (out.pass) {
        out.detail = text.str();
    }
    return out;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Outcome cli_determinism() {
    Outcome out;
    const std::string cli = FAIRASSIGN_CLI;
    const auto dir = std::filesystem::temp_directory_path() / ("fairassign_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const std::string f = std::filesystem::path(FAIRASSIGN_FIXTURE_DIR).string() + "/";
    const std::string ce = (dir / "ce.json").string();

    const std::vector<std::string> commands = {
        "solve --alg ps --instance " + f + "thm1.json",
        "solve --alg ce --instance " + f + "thm1.json",
        "solve --alg ute --instance " + f + "five_agent.json",
        "solve --alg rsd --instance " + f + "rsd_inefficiency.json",
        "audit --props sef,oe,1lef,prop --instance " + f + "thm1.json --assignment " + ce,
        "audit --props lef,1lef,sef --instance " + f + "example_lef.json --assignment " + f +
            "example_lef_assignment.json --lottery " + f + "example_lef_lottery.json",
        "lefcheck --instance " + f + "thm1.json --assignment " + ce,
        "lefcheck --instance " + f + "example_sef.json --assignment " + f + "example_sef_assignment.json",
        "decompose --assignment " + ce,
        "experiment --schools 1,2 --beta 0.5 --bias-model multiplicative,additive --q 20 --trials 3 --seed 9 --out " +
            (dir / "exp.csv").string() + " --svg " + (dir / "exp.svg").string(),
    };

    if (std::system((cli + " solve --alg ce --instance " + f + "thm1.json --out " + ce).c_str()) != 0) {
        out.require(false, "could not produce the CE assignment");
        return out;
    }
    for (std::size_t c = 0; c < commands.size(); ++c) {
        std::string outputs[2];
        for (int run = 0; run < 2; ++run) {
            const auto stdout_path = dir / ("out_" + std::to_string(run) + ".txt");
            const int status = std::system((cli + " " + commands[c] + " > " + stdout_path.string() + " 2>&1").c_str());
            outputs[run] = std::to_string(status) + "\n" + slurp(stdout_path);
            if (commands[c].rfind("experiment", 0) == 0) {
                outputs[run] += slurp(dir / "exp.csv") + slurp(dir / "exp.svg");
            }
        }
        out.require(outputs[0] == outputs[1], "output differs for: " + commands[c]);
        out.require(outputs[0].size() > 2, "no output for: " + commands[c]);
    }
    std::filesystem::remove_all(dir);
    if (out.pass) {
        out.detail = std::to_string(commands.size()) + " commands byte-identical";
    }
    return out;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"property matrix over 200 random instances", property_matrix},
        {"LEF incompatible with OE on the four-agent fixture", first_fixture},
        {"LEF incompatible with SEF on the five-agent fixture", five_agent_fixture},
        {"CE fails PROP and UTE fails 1-LEF", proportionality_separation},
        {"RSD is not ordinally efficient", rsd_inefficiency},
        {"OE check agrees with the LP oracle", oracle_agreement},
        {"BVN round trip", decomposition_round_trip},
        {"desk-scale admission experiment", desk_experiment},
        {"eating performance at n = m = 300", performance},
        {"CLI determinism", cli_determinism},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome outcome;
        try {
            outcome = criteria[k].second();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        failures += !outcome.pass;
        std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << k + 1 << ". " << criteria[k].first;
        if (!outcome.detail.empty()) {
            std::cout << " (" << outcome.detail << ")";
        }
        std::cout << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
