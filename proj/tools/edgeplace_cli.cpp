// edgeplace: generate, validate and run edge placement experiments.
//
//   edgeplace gen      --seed 3 --scale 0.1 --out out/demo
//   edgeplace validate out/demo/instance.json
//   edgeplace run      --alg ora+rdsp --L 5 --eps 0.3 --scale 0.1 --out out/demo
//   edgeplace sweep    --param L --values 1,2,4,8 --algs ora --seeds 1,2,3 --out out/fig8
//   edgeplace verify   --instance out/demo/instance.json
//
// Exit codes: 0 ok, 1 usage or check failure, 2 invalid instance, 3 solver failure.

#include "edgeplace/harness.hpp"
#include "edgeplace/instance_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <sstream>
#include <fstream>
#include <iostream>

using namespace edgeplace;

namespace {

struct Common {
    std::string instance;
    std::uint64_t seed = 1;
    double scale = 1.0;
    std::string out;
    RunConfig run;
};

void add_common(CLI::App* app, Common& c, bool with_run) {
    app->add_option("--instance", c.instance, "instance JSON (otherwise generated)");
    app->add_option("--seed", c.seed, "generator and rounding seed");
    app->add_option("--scale", c.scale, "generator scale factor in (0, 1]")->check(CLI::Range(1e-6, 1.0));
    app->add_option("--out", c.out, "output directory");
    if (!with_run) return;
    app->add_option("--L", c.run.L, "look-ahead window")->check(CLI::NonNegativeNumber);
    app->add_option("--eps", c.run.eps, "regularization epsilon")->check(CLI::PositiveNumber);
    app->add_option("--tol", c.run.tol, "KKT residual tolerance")->check(CLI::PositiveNumber);
    app->add_option("--trials", c.run.trials, "roundings for randomized algorithms")->check(CLI::PositiveNumber);
    app->add_option("--jobs", c.run.jobs, "worker threads")->check(CLI::PositiveNumber);
    app->add_flag("--timing", c.run.timing, "record wall time in the summary");
}

Instance load_or_generate(const Common& c) {
    if (!c.instance.empty()) return load_instance(c.instance);
    return generate(scale(GeneratorConfig{}, c.scale), c.seed);
}

int report_validation(const Instance& inst) {
    const auto rep = validate_instance(inst);
    for (const auto& s : rep.issues) std::cerr << "validate: " << s << '\n';
    std::cout << (rep.pass ? "valid" : "invalid") << " (M=" << inst.num_nodes() << " N=" << inst.num_users()
              << " K=" << inst.num_services() << " T=" << inst.horizon() << ")\n";
    return rep.pass ? 0 : 2;
}

template <class T>
std::vector<T> parse_list(const std::string& s) {
    std::vector<T> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(static_cast<T>(std::stod(item)));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"edge service placement simulator"};
    app.require_subcommand(1);

    Common gen_c;
    auto* gen = app.add_subcommand("gen", "generate an instance");
    add_common(gen, gen_c, false);

    std::string validate_path;
    auto* val = app.add_subcommand("validate", "check an instance for feasibility witnesses");
    val->add_option("instance", validate_path, "instance JSON")->required();

    Common run_c;
    auto* run = app.add_subcommand("run", "run one algorithm");
    add_common(run, run_c, true);
    run->add_option("--alg", run_c.run.alg, "greedy | cache | ora | ora+rdsp | offline-frac | offline-int");

    Common sw_c;
    std::string sw_param = "L", sw_values = "1,2,4,8", sw_algs = "ora", sw_seeds = "1";
    auto* sw = app.add_subcommand("sweep", "sweep one parameter over seeds");
    add_common(sw, sw_c, true);
    sw->add_option("--param", sw_param, "K | N | M | L | eps | R | C | RC");
    sw->add_option("--values", sw_values, "comma separated values");
    sw->add_option("--algs", sw_algs, "comma separated algorithms");
    sw->add_option("--seeds", sw_seeds, "comma separated seeds");

    Common ver_c;
    auto* ver = app.add_subcommand("verify", "run the diagnostics on an ORA solve");
    add_common(ver, ver_c, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const Instance inst = generate(scale(GeneratorConfig{}, gen_c.scale), gen_c.seed);
            const std::string dir = gen_c.out.empty() ? "out/gen" : gen_c.out;
            std::filesystem::create_directories(dir);
            save_instance(inst, dir + "/instance.json");
            std::cout << dir << "/instance.json\n";
            return 0;
        }
        if (val->parsed()) return report_validation(load_instance(validate_path));
        if (run->parsed()) {
            const Instance inst = load_or_generate(run_c);
            if (!validate_instance(inst).pass) return report_validation(inst);
            run_c.run.seed = run_c.seed;
            const std::string dir = run_c.out.empty() ? "out/" + run_c.run.alg : run_c.out;
            std::cout << run_experiment(inst, run_c.run, dir).dump(2) << '\n';
            return 0;
        }
        if (sw->parsed()) {
            SweepConfig cfg;
            cfg.parameter = sw_param;
            cfg.values = parse_list<double>(sw_values);
            cfg.base = scale(GeneratorConfig{}, sw_c.scale);
            cfg.seeds = parse_list<std::uint64_t>(sw_seeds);
            std::stringstream ss(sw_algs);
            cfg.algs.clear();
            for (std::string a; std::getline(ss, a, ',');) cfg.algs.push_back(a);
            cfg.run = sw_c.run;
            const std::string csv = sweep_csv(sweep(cfg));
            const std::string dir = sw_c.out.empty() ? "out/sweep-" + sw_param : sw_c.out;
            std::filesystem::create_directories(dir);
            std::ofstream(dir + "/sweep.csv") << csv;
            std::cout << csv;
            return 0;
        }
        if (ver->parsed()) {
            const Instance inst = load_or_generate(ver_c);
            if (!validate_instance(inst).pass) return report_validation(inst);
            ver_c.run.seed = ver_c.seed;
            const BoundReport rep = verify(inst, ver_c.run);
            const auto j = rep.to_json();
            if (!ver_c.out.empty()) {
                std::filesystem::create_directories(ver_c.out);
                std::ofstream(ver_c.out + "/bounds.json") << j.dump(2) << '\n';
            }
            for (const auto& v : rep.violations) std::cerr << "verify: " << v << '\n';
            std::cout << (rep.pass() ? "verify: pass" : "verify: FAIL") << " C_ora=" << rep.C_ora
                      << " P_opt=" << rep.P_opt << '\n';
            return rep.pass() ? 0 : 1;
        }
    } catch (const InvalidInstance& e) {
        std::cerr << "invalid instance: " << e.what() << '\n';
        return 2;
    } catch (const InfeasibleWindow& e) {
        std::cerr << "solver: " << e.what() << '\n';
        return 3;
    } catch (const SolverFailure& e) {
        std::cerr << "solver: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
