#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "femlearn/harness.hpp"
#include "femlearn/presets.hpp"

namespace {

using namespace femlearn;

std::uint64_t seed_fallback() {
    if (const char* env = std::getenv("FEMLEARN_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
        std::cerr << "error: FEMLEARN_SEED is not a valid unsigned integer\n";
        std::exit(harness::kExitUsage);
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear FEM / SUPG solver for -eps*u'' + u' = 1 on (0,1) and the\n"
                 "three-layer ReLU network trained on its discrete residual"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "Assemble and solve the deterministic system");
    harness::SolveOptions solve_opt;
    solve->add_option("--eps", solve_opt.eps, "diffusion parameter");
    solve->add_option("--n", solve_opt.n, "number of mesh elements");
    solve->add_option("--method", solve_opt.method, "galerkin|supg");
    solve->add_option("--out", solve_opt.out, "output CSV path");

    // train
    auto* train = app.add_subcommand("train", "Run gradient-descent training");
    std::string preset_name, regime_flag = "r3", cost_flag = "galerkin";
    harness::TrainOptions train_opt;
    auto* opt_preset = train->add_option("--preset", preset_name, "experiment preset name");
    auto* opt_n = train->add_option("--n", train_opt.config.n, "number of mesh elements");
    auto* opt_eps = train->add_option("--eps", train_opt.config.eps, "diffusion parameter");
    auto* opt_cost = train->add_option("--cost", cost_flag, "galerkin|supg");
    auto* opt_regime = train->add_option("--regime", regime_flag, "r1|r2|r3");
    auto* opt_eta = train->add_option("--eta", train_opt.config.eta, "learning rate");
    auto* opt_iters = train->add_option("--iters", train_opt.config.n_iter, "iteration budget");
    auto* opt_beta = train->add_option("--beta", train_opt.config.beta, "regularization weight");
    auto* opt_seed = train->add_option("--seed", train_opt.config.seed, "RNG seed");
    auto* opt_rec = train->add_option("--record-every", train_opt.config.record_every,
                                      "trace recording stride");
    train->add_option("--out", train_opt.out_prefix, "output file prefix");
    train->add_flag("--dump-config", train_opt.dump_config, "print the resolved configuration");

    // table
    auto* table = app.add_subcommand("table", "Reproduce an error-comparison table");
    harness::TableOptions table_opt;
    table->add_option("which", table_opt.which, "table selector: 1 or 2")->required();
    auto* table_seed = table->add_option("--seed", table_opt.seed, "base RNG seed");
    table->add_option("--out", table_opt.out, "output CSV path");

    // plot
    auto* plot = app.add_subcommand("plot", "Render a trace or solution CSV as SVG");
    harness::PlotOptions plot_opt;
    plot->add_option("input", plot_opt.input, "input CSV file")->required();
    plot->add_option("--out", plot_opt.out, "output SVG path");

    // presets
    auto* presets_cmd = app.add_subcommand("presets", "List the experiment presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return harness::kExitUsage;
    }

    if (solve->parsed()) return harness::cmd_solve(solve_opt, std::cout, std::cerr);

    if (train->parsed()) {
        // precedence: command-line flags > preset values > defaults
        if (opt_preset->count() > 0) {
            const ExperimentPreset* preset = find_preset(preset_name);
            if (!preset) {
                std::cerr << "error: unknown preset '" << preset_name << "' (see `femlearn presets`)\n";
                return harness::kExitUsage;
            }
            const TrainConfig base = preset->config;
            train_opt.preset = preset_name;
            if (opt_n->count() == 0) train_opt.config.n = base.n;
            if (opt_eps->count() == 0) train_opt.config.eps = base.eps;
            if (opt_cost->count() == 0) cost_flag = cost_kind_name(base.kind);
            if (opt_regime->count() == 0) regime_flag = regime_name(base.regime);
            if (opt_eta->count() == 0) train_opt.config.eta = base.eta;
            if (opt_iters->count() == 0) train_opt.config.n_iter = base.n_iter;
            if (opt_beta->count() == 0) train_opt.config.beta = base.beta;
            if (train_opt.out_prefix == "run") train_opt.out_prefix = preset_name;
        }
        if (cost_flag == "galerkin") train_opt.config.kind = CostKind::Galerkin;
        else if (cost_flag == "supg") train_opt.config.kind = CostKind::Supg;
        else {
            std::cerr << "error: --cost must be galerkin or supg\n";
            return harness::kExitUsage;
        }
        if (regime_flag == "r1") train_opt.config.regime = Regime::AllFree;
        else if (regime_flag == "r2") train_opt.config.regime = Regime::FeInitFree;
        else if (regime_flag == "r3") train_opt.config.regime = Regime::FeInitFrozen;
        else {
            std::cerr << "error: --regime must be r1, r2 or r3\n";
            return harness::kExitUsage;
        }
        if (opt_seed->count() == 0) train_opt.config.seed = seed_fallback();
        if (train_opt.config.n < 2 || !(train_opt.config.eps > 0.0) ||
            !(train_opt.config.eta > 0.0) || train_opt.config.n_iter < 1 ||
            train_opt.config.beta < 0.0 || train_opt.config.record_every < 1) {
            std::cerr << "error: invalid training configuration (check --n, --eps, --eta, "
                         "--iters, --beta, --record-every)\n";
            return harness::kExitUsage;
        }
        (void)opt_rec;
        return harness::cmd_train(train_opt, std::cout, std::cerr);
    }

    if (table->parsed()) {
        if (table_seed->count() == 0) table_opt.seed = seed_fallback();
        return harness::cmd_table(table_opt, std::cout, std::cerr);
    }

    if (plot->parsed()) {
        if (plot_opt.out.empty()) plot_opt.out = plot_opt.input + ".svg";
        return harness::cmd_plot(plot_opt, std::cout, std::cerr);
    }

    if (presets_cmd->parsed()) return harness::cmd_presets(std::cout);

    return harness::kExitUsage;
}
