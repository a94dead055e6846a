#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "freqsim/analysis.hpp"
#include "freqsim/report.hpp"
#include "freqsim/scenario.hpp"
#include "freqsim/search.hpp"
#include "freqsim/simcore.hpp"
#include "freqsim/taskgen.hpp"

namespace {

using namespace freqsim;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUnschedulable = 1;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;

struct CommonArgs {
    std::string scenario_path;
    std::string out_path;
    std::optional<Tick> horizon;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--scenario", args.scenario_path, "scenario file (JSON)")
        ->required();
    cmd->add_option("--out", args.out_path,
                    "write the report here instead of stdout");
    cmd->add_option("--horizon", args.horizon, "override the scenario horizon");
    cmd->add_option("--seed", args.seed, "override the scenario seed");
}

Scenario load(const CommonArgs& args, std::optional<int> repeats = {}) {
    ScenarioOverrides overrides;
    overrides.horizon = args.horizon;
    overrides.seed = args.seed;
    overrides.repeats = repeats;
    return load_scenario_file(args.scenario_path, overrides);
}

void emit(const json& doc, const std::string& out_path) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ParseError("cannot write report file: " + out_path);
    out << text;
}

ExecutionMode parse_mode(const std::string& text, const Scenario& scenario) {
    if (text == "baseline") return Baseline{};
    if (text == "slowdown") {
        if (!scenario.slowdown)
            throw SemanticError(
                "mode 'slowdown' needs a 'slowdown' key in the scenario file");
        return Slowdown{*scenario.slowdown};
    }
    if (text.rfind("true:", 0) == 0) {
        double phi = 0.0;
        try {
            phi = std::stod(text.substr(5));
        } catch (const std::exception&) {
            throw SemanticError("mode 'true:PHI' needs a numeric PHI");
        }
        if (!(phi > 0.0) || phi > 1.0)
            throw SemanticError("mode 'true:PHI' needs PHI in (0, 1]");
        return TrueScaling{phi};
    }
    throw SemanticError("unknown mode '" + text +
                        "' (expected baseline | true:PHI | slowdown)");
}

std::int64_t brute_force_cap() {
    const char* env = std::getenv("FREQSIM_CAP");
    if (!env || !*env) return kDefaultBruteForceCap;
    try {
        return std::stoll(env);
    } catch (const std::exception&) {
        throw SemanticError("FREQSIM_CAP must be an integer tick budget");
    }
}

std::vector<double> parse_grid(const std::string& text) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
        !in.eof())
        throw SemanticError("grid must be LO:HI:STEP, e.g. 0.1:1.0:0.1");
    if (!(lo > 0.0) || hi > 1.0 || lo > hi || !(step > 0.0))
        throw SemanticError("grid needs 0 < LO <= HI <= 1 and STEP > 0");
    std::vector<double> grid;
    for (double phi = lo; phi <= hi + step * 1e-9; phi += step)
        grid.push_back(std::min(phi, 1.0));
    return grid;
}

int run_simulate(const CommonArgs& args, const std::string& mode_text,
                 bool with_trace, const std::string& engine) {
    Scenario scenario = load(args);
    ExecutionMode mode = parse_mode(mode_text, scenario);
    Trace trace = engine == "brute"
                      ? brute_force_simulate(scenario.workload, mode,
                                             brute_force_cap())
                      : simulate(scenario.workload, mode);
    json doc = trace_report(trace, with_trace);
    // The energy model needs one well-defined frequency fraction, so it is
    // attached for baseline and true-scaling runs only.
    if (scenario.energy && !std::holds_alternative<Slowdown>(mode)) {
        const auto* scaling = std::get_if<TrueScaling>(&mode);
        double phi = scaling ? scaling->phi : 1.0;
        doc["energy"] =
            energy_report(energy_metrics(trace, phi, *scenario.energy), phi);
    }
    emit(doc, args.out_path);
    std::cerr << "simulate: mode=" << mode_name(mode)
              << " horizon=" << trace.horizon
              << " missed=" << trace.missed_count()
              << " inconclusive=" << trace.inconclusive_count()
              << " utilization=" << measure_utilization(trace) << "\n";
    return kExitOk;
}

int run_search(const CommonArgs& args, const std::string& family_text,
               double tolerance, const std::string& start_text, int repeats,
               Tick max_cycle) {
    Scenario scenario = load(args, repeats > 0 ? std::optional<int>(repeats)
                                               : std::nullopt);
    SearchFamily family;
    if (family_text == "true")
        family = SearchFamily::TrueScaling;
    else if (family_text == "slowdown")
        family = SearchFamily::SlowdownApprox;
    else
        throw SemanticError("unknown family '" + family_text +
                            "' (expected true | slowdown)");

    SearchOptions options;
    options.tolerance = tolerance;
    options.max_cycle = max_cycle;
    options.repeats = scenario.repeats;
    if (start_text != "auto") {
        double phi = 0.0;
        try {
            phi = std::stod(start_text);
        } catch (const std::exception&) {
            throw SemanticError("--start needs a number or 'auto'");
        }
        options.start = phi;
    }

    SearchResult result = min_frequency_search(scenario.workload, family, options);
    emit(search_report(result, fingerprint(scenario.workload)), args.out_path);
    if (result.min_phi)
        std::cerr << "search: min_phi=" << *result.min_phi << " after "
                  << result.probes.size() << " probes\n";
    else
        std::cerr << "search: unschedulable within range after "
                  << result.probes.size() << " probes\n";
    return result.min_phi ? kExitOk : kExitUnschedulable;
}

int run_compare(const CommonArgs& args, const std::string& grid_text,
                double tolerance, Tick max_cycle) {
    Scenario scenario = load(args);
    ComparisonReport report = compare_modes(scenario.workload,
                                            parse_grid(grid_text), max_cycle,
                                            tolerance);
    emit(comparison_report(report, fingerprint(scenario.workload)),
         args.out_path);
    std::cerr << "compare: " << report.rows.size() << " grid points, "
              << report.divergences.size()
              << (report.divergences.size() == 1 ? " divergence\n"
                                                 : " divergences\n");
    return kExitOk;
}

int run_distort(const CommonArgs& args, Tick window) {
    Scenario scenario = load(args);
    if (!scenario.slowdown)
        throw SemanticError(
            "distort needs a 'slowdown' key in the scenario file");
    Trace trace = simulate(scenario.workload, Slowdown{*scenario.slowdown});
    DistortionReport report =
        distortion_metrics(trace, *scenario.slowdown, window);
    emit(distortion_report(report, *scenario.slowdown,
                           fingerprint(scenario.workload)),
         args.out_path);
    std::cerr << "distort: coverage10=" << report.coverage10
              << " escaped=" << report.escaped
              << " variation=" << report.variation << "\n";
    return kExitOk;
}

int run_validate(const CommonArgs& args) {
    std::ifstream in(args.scenario_path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open scenario file: " + args.scenario_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();

    auto [scenario, report] = inspect_scenario(buffer.str());
    emit(validation_report(report, fingerprint(scenario.workload)),
         args.out_path);
    std::cerr << "validate: " << report.errors.size() << " errors, "
              << report.warnings.size() << " warnings\n";
    return report.ok() ? kExitOk : kExitInput;
}

int run_gen(int tasks, double util, std::uint64_t seed, Tick horizon,
            Tick period_min, Tick period_max, const std::string& out_path) {
    GenOptions options;
    options.tasks = tasks;
    options.target_utilization = util;
    options.seed = seed;
    options.horizon = horizon;
    options.period_min = period_min;
    options.period_max = period_max;

    Scenario scenario;
    scenario.workload = generate_random_workload(options);
    const std::string text = serialize_scenario(scenario);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ParseError("cannot write scenario file: " + out_path);
        out << text;
    }
    std::cerr << "gen: " << tasks << " tasks, realized utilization "
              << nominal_utilization(scenario.workload) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "freqsim: minimum-frequency estimation for fixed-priority workloads"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    CommonArgs sim_args;
    std::string sim_mode = "baseline";
    bool sim_trace = false;
    std::string sim_engine = "fast";
    CLI::App* sim = app.add_subcommand(
        "simulate", "run one scenario under one execution mode");
    add_common(sim, sim_args);
    sim->add_option("--mode", sim_mode, "baseline | true:PHI | slowdown");
    sim->add_flag("--trace", sim_trace,
                  "include run-length-encoded per-tick attribution");
    sim->add_option("--engine", sim_engine, "fast | brute")
        ->check(CLI::IsMember({"fast", "brute"}));

    CommonArgs search_args;
    std::string search_family;
    std::string search_start = "auto";
    double search_tol = 0.01;
    int search_repeats = 0;  // 0: keep the scenario's value
    Tick search_max_cycle = 16;
    CLI::App* search = app.add_subcommand(
        "search", "bisect to the minimum schedulable frequency fraction");
    add_common(search, search_args);
    search->add_option("--family", search_family, "true | slowdown")->required();
    search->add_option("--tol", search_tol, "bracket width to stop at");
    search->add_option("--start", search_start,
                       "warm-start probe: a number, or 'auto' for the naive "
                       "utilization estimate");
    search->add_option("--repeats", search_repeats,
                       "stochastic reruns with seeds seed+i; all must pass");
    search->add_option("--max-cycle", search_max_cycle,
                       "largest E+S budget for slowdown approximations");

    CommonArgs cmp_args;
    std::string cmp_grid;
    double cmp_tol = 0.01;
    Tick cmp_max_cycle = 16;
    CLI::App* cmp = app.add_subcommand(
        "compare", "sweep a frequency grid under both mode families");
    add_common(cmp, cmp_args);
    cmp->add_option("--grid", cmp_grid, "LO:HI:STEP frequency grid")->required();
    cmp->add_option("--tol", cmp_tol, "search tolerance");
    cmp->add_option("--max-cycle", cmp_max_cycle,
                    "largest E+S budget for slowdown approximations");

    CommonArgs dist_args;
    Tick dist_window = 0;
    CLI::App* dist = app.add_subcommand(
        "distort", "measure slowdown-approximation distortion");
    add_common(dist, dist_args);
    dist->add_option("--window", dist_window, "tiling window in ticks")
        ->required();

    CommonArgs val_args;
    CLI::App* val =
        app.add_subcommand("validate", "check a scenario file and report");
    add_common(val, val_args);

    int gen_tasks = 3;
    double gen_util = 0.5;
    std::uint64_t gen_seed = 1;
    Tick gen_horizon = 0;
    Tick gen_period_min = 10;
    Tick gen_period_max = 1000;
    std::string gen_out;
    CLI::App* gen =
        app.add_subcommand("gen", "emit a synthetic periodic scenario");
    gen->add_option("--tasks", gen_tasks, "task count");
    gen->add_option("--util", gen_util, "target utilization in (0, 1]");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--horizon", gen_horizon,
                    "simulation horizon (0: twice the hyperperiod)");
    gen->add_option("--period-min", gen_period_min, "shortest period");
    gen->add_option("--period-max", gen_period_max, "longest period");
    gen->add_option("--out", gen_out, "write the scenario here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (sim->parsed())
            return run_simulate(sim_args, sim_mode, sim_trace, sim_engine);
        if (search->parsed())
            return run_search(search_args, search_family, search_tol,
                              search_start, search_repeats, search_max_cycle);
        if (cmp->parsed())
            return run_compare(cmp_args, cmp_grid, cmp_tol, cmp_max_cycle);
        if (dist->parsed()) return run_distort(dist_args, dist_window);
        if (val->parsed()) return run_validate(val_args);
        if (gen->parsed())
            return run_gen(gen_tasks, gen_util, gen_seed, gen_horizon,
                           gen_period_min, gen_period_max, gen_out);
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const SemanticError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitCap;
    }
    return kExitInput;
}
