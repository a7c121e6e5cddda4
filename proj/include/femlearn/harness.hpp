#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "femlearn/csv.hpp"
#include "femlearn/errors.hpp"
#include "femlearn/mesh_fem.hpp"
#include "femlearn/norms.hpp"
#include "femlearn/presets.hpp"
#include "femlearn/relu_net.hpp"
#include "femlearn/svg.hpp"
#include "femlearn/trainer.hpp"

namespace femlearn::harness {

constexpr int kExitSuccess = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;

struct SolveOptions {
    double eps = 0.1;
    int n = 20;
    std::string method = "galerkin"; // galerkin | supg
    std::string out = "solution.csv";
};

struct TrainOptions {
    TrainConfig config;
    std::string preset; // empty when assembled from flags
    std::string out_prefix = "run";
    bool dump_config = false;
};

struct TableOptions {
    int which = 1; // 1 | 2
    std::uint64_t seed = 1;
    std::string out = "table.csv";
};

struct PlotOptions {
    std::string input;
    std::string out;
};

/// Training budget for one table row. The per-N budgets below follow the
/// experiment captions where one exists; rows without a stated budget reuse
/// the learning-rate scale of the nearest caption at the same N.
struct RowBudget {
    int n;
    double eta;
    long long n_iter;
};

inline std::vector<RowBudget> table_budgets(int which) {
    if (which == 1) return {{20, 1e-6, 200000}, {40, 1e-7, 500000}, {100, 1e-8, 500000}};
    return {{20, 1e-6, 1000000}, {40, 1e-7, 2000000}, {100, 1e-9, 400000}};
}

inline int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.n < 2) {
        err << "error: --n must be at least 2\n";
        return kExitUsage;
    }
    if (!(opt.eps > 0.0)) {
        err << "error: --eps must be positive\n";
        return kExitUsage;
    }
    CostKind kind;
    if (opt.method == "galerkin") kind = CostKind::Galerkin;
    else if (opt.method == "supg") kind = CostKind::Supg;
    else {
        err << "error: --method must be galerkin or supg\n";
        return kExitUsage;
    }
    try {
        const Partition p = Partition::uniform(opt.n);
        const TridiagonalSystem sys =
            kind == CostKind::Galerkin ? assemble_galerkin(p, opt.eps) : assemble_supg(p, opt.eps);
        const NodalFunction u = solve_tridiagonal(sys);
        const PiecewiseLinear pl = to_piecewise_linear(u);
        atomic_write_file(opt.out, solution_csv(p, pl, opt.eps));
        char buf[128];
        std::snprintf(buf, sizeof buf, "L2 = %.6e  H1 = %.6e\n", l2_error(pl, opt.eps),
                      h1_error(pl, opt.eps));
        out << buf;
        out << "wrote " << opt.out << '\n';
        return kExitSuccess;
    } catch (const std::ios_base::failure& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    }
}

inline void dump_config(const TrainOptions& opt, std::ostream& out) {
    const TrainConfig& c = opt.config;
    out << "preset = " << (opt.preset.empty() ? "(none)" : opt.preset) << '\n'
        << "n = " << c.n << '\n'
        << "eps = " << c.eps << '\n'
        << "cost = " << cost_kind_name(c.kind) << '\n'
        << "regime = " << regime_name(c.regime) << '\n'
        << "eta = " << c.eta << '\n'
        << "iters = " << c.n_iter << '\n'
        << "beta = " << c.beta << '\n'
        << "seed = " << c.seed << '\n'
        << "record_every = " << c.record_every << '\n'
        << "out = " << opt.out_prefix << '\n';
}

inline int cmd_train(const TrainOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.dump_config) dump_config(opt, out);
    try {
        const TrainResult result = train_run(opt.config);

        std::ostringstream model_os;
        save_model(result.params, model_os);
        atomic_write_file(opt.out_prefix + "_model.txt", model_os.str());
        std::ostringstream trace_os;
        write_trace_csv(result.trace, trace_os);
        atomic_write_file(opt.out_prefix + "_trace.csv", trace_os.str());

        const PiecewiseLinear pl = to_piecewise_linear(result.params);
        char buf[192];
        std::snprintf(buf, sizeof buf, "final: iters=%lld cost=%.10e l2=%.10e h1=%.10e\n",
                      opt.config.n_iter, result.trace.cost_values.back(),
                      l2_error(pl, opt.config.eps), h1_error(pl, opt.config.eps));
        out << buf;
        out << "wrote " << opt.out_prefix << "_model.txt, " << opt.out_prefix << "_trace.csv\n";
        return kExitSuccess;
    } catch (const DivergenceError& e) {
        err << "divergence: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::ios_base::failure& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    }
}

/// One table row: deterministic reference errors plus the errors of a
/// FeInitFrozen network trained with the row budget. The row seed is derived
/// as base seed + N so concurrent rows stay independent and reproducible.
inline ReportRow table_row(int which, const RowBudget& budget, std::uint64_t base_seed) {
    const double eps = which == 1 ? 0.1 : 0.001;
    const CostKind kind = which == 1 ? CostKind::Galerkin : CostKind::Supg;
    const Partition p = Partition::uniform(budget.n);
    const TridiagonalSystem sys =
        kind == CostKind::Galerkin ? assemble_galerkin(p, eps) : assemble_supg(p, eps);
    const PiecewiseLinear ref = to_piecewise_linear(solve_tridiagonal(sys));

    TrainConfig cfg;
    cfg.n = budget.n;
    cfg.eps = eps;
    cfg.kind = kind;
    cfg.regime = Regime::FeInitFrozen;
    cfg.eta = budget.eta;
    cfg.n_iter = budget.n_iter;
    cfg.beta = 0.0;
    cfg.seed = base_seed + static_cast<std::uint64_t>(budget.n);
    cfg.record_every = budget.n_iter; // only endpoints needed here
    const TrainResult trained = train_run(cfg);
    const PiecewiseLinear nn = to_piecewise_linear(trained.params);

    ReportRow row;
    row.method = which == 1 ? "FEM" : "SUPG";
    row.n = budget.n;
    row.l2_ref = l2_error(ref, eps);
    row.h1_ref = h1_error(ref, eps);
    row.l2_nn = l2_error(nn, eps);
    row.h1_nn = h1_error(nn, eps);
    return row;
}

inline std::vector<ReportRow> make_table(int which, std::uint64_t seed,
                                         const std::vector<RowBudget>& budgets) {
    std::vector<std::future<ReportRow>> jobs;
    jobs.reserve(budgets.size());
    for (const RowBudget& b : budgets)
        jobs.push_back(std::async(std::launch::async,
                                  [which, b, seed] { return table_row(which, b, seed); }));
    std::vector<ReportRow> rows;
    rows.reserve(budgets.size());
    for (auto& j : jobs) rows.push_back(j.get());
    return rows;
}

inline int cmd_table(const TableOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.which != 1 && opt.which != 2) {
        err << "error: table selector must be 1 or 2\n";
        return kExitUsage;
    }
    try {
        const std::vector<ReportRow> rows = make_table(opt.which, opt.seed, table_budgets(opt.which));
        atomic_write_file(opt.out, report_csv(rows));
        for (const ReportRow& r : rows) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s N=%-4d l2_ref=%.4e h1_ref=%.4e l2_nn=%.4e h1_nn=%.4e\n",
                          r.method.c_str(), r.n, r.l2_ref, r.h1_ref, r.l2_nn, r.h1_nn);
            out << buf;
        }
        out << "wrote " << opt.out << '\n';
        return kExitSuccess;
    } catch (const DivergenceError& e) {
        err << "divergence: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const std::ios_base::failure& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    }
}

inline int cmd_plot(const PlotOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        std::ifstream is(opt.input);
        if (!is) {
            err << "I/O error: cannot open " << opt.input << '\n';
            return kExitIo;
        }
        const NumericCsv csv = read_numeric_csv(is);
        std::string svg;
        if (csv.header == std::vector<std::string>{"iter", "cost", "l2_error"}) {
            SvgSeries cost{"cost", csv.columns[0], csv.columns[1]};
            SvgSeries error{"l2_error", csv.columns[0], csv.columns[2]};
            svg = render_dual_axis_svg(cost, error, "iteration");
        } else if (csv.header == std::vector<std::string>{"x", "u_exact", "u_approx"}) {
            SvgSeries exact{"u_exact", csv.columns[0], csv.columns[1]};
            SvgSeries approx{"u_approx", csv.columns[0], csv.columns[2]};
            svg = render_xy_svg(exact, approx, "x", "u");
        } else {
            err << "parse error: line 1: unrecognized header (expected trace or solution CSV)\n";
            return kExitIo;
        }
        atomic_write_file(opt.out, svg);
        out << "wrote " << opt.out << '\n';
        return kExitSuccess;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::ios_base::failure& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    }
}

inline int cmd_presets(std::ostream& out) {
    for (const ExperimentPreset& p : experiment_presets()) {
        char buf[192];
        std::snprintf(buf, sizeof buf, "%-7s n=%-4d eps=%-6g cost=%-8s regime=%s eta=%-6g iters=%-8lld beta=%g\n",
                      p.name.c_str(), p.config.n, p.config.eps,
                      cost_kind_name(p.config.kind).c_str(), regime_name(p.config.regime).c_str(),
                      p.config.eta, p.config.n_iter, p.config.beta);
        out << buf;
    }
    return kExitSuccess;
}

} // namespace femlearn::harness
