// ibgsg: analyze, simulate, table2 and sweep front end.
//
// Exit codes: 0 stable / success, 1 error, 2 LOS predicted (analyze),
// 3 table2 mismatch.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ibgsg/csv.hpp"
#include "ibgsg/errors.hpp"
#include "ibgsg/scenario.hpp"

namespace {

using namespace ibgsg;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitLos = 2;
constexpr int kExitMismatch = 3;

std::vector<Override> parse_overrides(const std::vector<std::string>& raw) {
    std::vector<Override> out;
    out.reserve(raw.size());
    for (const auto& s : raw) out.push_back(parse_override(s));
    return out;
}

// Writes to the named file, or to stdout when the path is empty or "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw ValidationError("cannot open output file '" + path + "'");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    [[nodiscard]] bool to_stdout() const { return !file_; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::string fmt(double v) { return format_number(v); }

int run_analyze(const std::string& path, const std::vector<std::string>& sets) {
    const Scenario scenario = load_scenario(path, parse_overrides(sets));
    const CaseReport r = run_case(scenario, CaseOptions{false, false, true});
    const auto& c = r.coeffs;
    const auto& v = r.verdict;
    std::ostream& out = std::cout;
    out << "coefficients\n"
        << "  a      " << fmt(c.a) << "\n"
        << "  b      " << fmt(c.b) << "\n"
        << "  phi    " << fmt(c.phi) << "\n"
        << "  d      " << fmt(c.d) << "\n"
        << "  alpha  " << fmt(c.alpha) << "\n"
        << "  T_eq   " << fmt(c.teq) << "\n"
        << "equilibria" << (r.equilibria.exists ? "" : " (no SEP)") << "\n"
        << "  delta_e  " << fmt(r.equilibria.sep) << "\n"
        << "  delta_1  " << fmt(r.equilibria.left_uep) << "\n"
        << "  delta_2  " << fmt(r.equilibria.right_uep) << "\n"
        << "initial state\n"
        << "  delta_0-   " << fmt(r.initial.delta_pre) << "\n"
        << "  delta_0+   " << fmt(r.initial.delta_post) << "\n"
        << "  domega_0+  " << fmt(r.initial.domega_post) << "\n"
        << "  E_k,0+     " << fmt(r.initial.e_k_post) << "\n"
        << "areas\n"
        << "  S_1  " << fmt(v.s1) << "\n"
        << "  S_2  " << fmt(v.s2) << "\n"
        << "  S_3  " << fmt(v.s3) << "\n"
        << "verdict\n"
        << "  risk                  " << to_string(v.risk) << "\n"
        << "  stable_unified        " << (v.stable_unified ? "true" : "false") << "\n"
        << "  stable_type_specific  " << (v.stable_type_specific ? "true" : "false") << "\n"
        << "  result                " << outcome_label(v.predicted_los) << "\n\n"
        << analysis_document(r).dump(2) << "\n";
    return v.predicted_los ? kExitLos : kExitOk;
}

struct SimulateArgs {
    std::string path;
    std::vector<std::string> sets;
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<std::string> model;
    bool no_damping = false;
    std::string output;
};

int run_simulate(const SimulateArgs& args) {
    auto overrides = parse_overrides(args.sets);
    if (args.dt) overrides.push_back({"sim.dt", fmt(*args.dt)});
    if (args.t_end) overrides.push_back({"sim.t_end", fmt(*args.t_end)});
    if (args.model) overrides.push_back({"sim.model", *args.model});
    if (args.no_damping) {
        overrides.push_back({"sim.damping", "false"});
        // Damping is intrinsic to the full model; switching it off means the reduced one.
        if (!args.model) overrides.push_back({"sim.model", "reduced"});
    }
    const Scenario scenario = load_scenario(args.path, overrides);

    Output out(args.output);
    const CaseReport r = run_case(scenario, CaseOptions{true, true, false});
    write_trajectory_csv(out.stream(), r.sim.trajectory);

    std::ostream& log = out.to_stdout() ? std::cerr : std::cout;
    if (r.sim.los) {
        log << "LOS: " << to_string(r.sim.los->type) << " at t = " << fmt(r.sim.los->time) << " s\n";
    } else {
        log << "no LOS up to t = " << fmt(scenario.sim.t_end) << " s\n";
    }
    return kExitOk;
}

int run_table2(const std::vector<std::string>& sets, const std::string& format) {
    const auto results = ibgsg::run_table2(parse_overrides(sets));
    std::size_t passed = 0;
    for (const auto& res : results) passed += res.passed() ? 1 : 0;

    if (format == "csv") {
        std::cout << "case,ki,kp,tg,rf_ohm,u_l,a,ek0,s1_minus_s2,s3,condition_match,criterion,simulation,"
                     "expected,passed\n";
        for (const auto& res : results) {
            const auto& v = res.report.verdict;
            const auto sim = res.report.sim.los ? std::optional<LosType>(res.report.sim.los->type) : std::nullopt;
            std::cout << res.row.name << ',' << fmt(res.row.ki) << ',' << fmt(res.row.kp) << ',' << fmt(res.row.tg)
                      << ',' << fmt(res.row.rf_ohm) << ',' << fmt(res.residual_voltage_pu) << ','
                      << fmt(res.report.coeffs.a) << ',' << fmt(res.report.initial.e_k_post) << ','
                      << fmt(v.s1 - v.s2) << ',' << fmt(v.s3) << ',' << int(res.condition_match) << ','
                      << outcome_label(v.predicted_los) << ',' << outcome_label(sim) << ','
                      << outcome_label(res.row.expected) << ',' << int(res.passed()) << '\n';
        }
    } else {
        std::printf("%-4s %6s %5s %4s %5s %7s %10s %10s %10s %10s  %-13s %-13s %-13s %s\n", "case", "K_i", "K_p",
                    "T_g", "R_f", "|U_l|", "a", "E_k,0+", "S1-S2", "S3", "criterion", "simulation", "expected",
                    "match");
        for (const auto& res : results) {
            const auto& v = res.report.verdict;
            const auto sim = res.report.sim.los ? std::optional<LosType>(res.report.sim.los->type) : std::nullopt;
            std::printf("%-4s %6g %5g %4g %5g %7.4f %10.3e %10.3e %10.3e %10.3e  %-13s %-13s %-13s %s\n",
                        res.row.name.c_str(), res.row.ki, res.row.kp, res.row.tg, res.row.rf_ohm,
                        res.residual_voltage_pu, res.report.coeffs.a, res.report.initial.e_k_post, v.s1 - v.s2, v.s3,
                        outcome_label(v.predicted_los).c_str(), outcome_label(sim).c_str(),
                        outcome_label(res.row.expected).c_str(), res.passed() ? "yes" : "NO");
        }
        std::printf("%zu/%zu cases match\n", passed, results.size());
    }

    if (passed == results.size()) return kExitOk;
    for (const auto& res : results) {
        if (res.passed()) continue;
        const auto& v = res.report.verdict;
        const auto sim = res.report.sim.los ? std::optional<LosType>(res.report.sim.los->type) : std::nullopt;
        std::cerr << "case " << res.row.name << ":";
        if (!res.condition_match) {
            std::cerr << " condition (risk " << to_string(v.risk) << ", E_k,0+ exceeds area "
                      << (res.ek_exceeds ? "yes" : "no") << "; expected " << to_string(res.row.expected_risk) << ", "
                      << (res.row.expected_ek_exceeds ? "yes" : "no") << ")";
        }
        if (!res.criterion_match) {
            std::cerr << " criterion " << outcome_label(v.predicted_los) << " != "
                      << outcome_label(res.row.expected);
        }
        if (!res.simulation_match) {
            std::cerr << " simulation " << outcome_label(sim) << " != " << outcome_label(res.row.expected);
        }
        std::cerr << '\n';
    }
    return kExitMismatch;
}

struct SweepArgs {
    std::string path;
    std::vector<std::string> sets;
    std::vector<std::string> axes;
    bool check_sim = false;
    unsigned workers = 0;
    std::string output;
};

int run_sweep(const SweepArgs& args) {
    SweepSpec spec;
    spec.scenario = read_scenario_document(args.path);
    for (const auto& o : parse_overrides(args.sets)) apply_override(spec.scenario, o);
    for (const auto& a : args.axes) spec.axes.push_back(parse_axis(a));
    spec.check_sim = args.check_sim;
    spec.workers = args.workers;

    const auto records = sweep(spec);
    Output out(args.output);
    write_sweep_csv(out.stream(), spec, records);
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].error) std::cerr << "row " << i << ": " << *records[i].error << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IBG-SG fault-on transient stability toolkit"};
    app.require_subcommand(1, 1);

    std::string analyze_path;
    std::vector<std::string> analyze_sets;
    auto* analyze = app.add_subcommand("analyze", "Evaluate the energy criterion for a scenario");
    analyze->add_option("scenario", analyze_path, "Scenario JSON file")->required();
    analyze->add_option("--set", analyze_sets, "Override a scenario field, key=value");

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Integrate the fault-on trajectory and write CSV");
    simulate->add_option("scenario", sim_args.path, "Scenario JSON file")->required();
    simulate->add_option("--set", sim_args.sets, "Override a scenario field, key=value");
    simulate->add_option("--dt", sim_args.dt, "Time step [s]")->check(CLI::PositiveNumber);
    simulate->add_option("--t-end", sim_args.t_end, "End time [s]")->check(CLI::PositiveNumber);
    simulate->add_option("--model", sim_args.model, "full or reduced")->check(CLI::IsMember({"full", "reduced"}));
    simulate->add_flag("--no-damping", sim_args.no_damping, "Drop the PLL damping term (reduced model)");
    simulate->add_option("-o,--output", sim_args.output, "Output CSV path (default stdout)");

    std::vector<std::string> table_sets;
    std::string table_format = "text";
    auto* table2 = app.add_subcommand("table2", "Reproduce the five golden cases");
    table2->add_option("--format", table_format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
    table2->add_option("--set", table_sets, "Override a field in every case, key=value");

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate the criterion over a parameter grid");
    sweep_cmd->add_option("scenario", sweep_args.path, "Scenario JSON file")->required();
    sweep_cmd->add_option("--set", sweep_args.sets, "Override a scenario field, key=value");
    sweep_cmd->add_option("--axis", sweep_args.axes, "Grid axis, key=start:stop:count")->required();
    sweep_cmd->add_flag("--check-sim", sweep_args.check_sim, "Simulate every point and append agreement");
    sweep_cmd->add_option("--workers", sweep_args.workers, "Worker threads (0 = all cores)");
    sweep_cmd->add_option("-o,--output", sweep_args.output, "Output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (*analyze) return run_analyze(analyze_path, analyze_sets);
        if (*simulate) return run_simulate(sim_args);
        if (*table2) return run_table2(table_sets, table_format);
        if (*sweep_cmd) return run_sweep(sweep_args);
    } catch (const IntegrationError& e) {
        std::cerr << "error: " << e.what() << " (last valid t = " << fmt(e.last_valid_time()) << " s)\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
