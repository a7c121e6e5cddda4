#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "femlearn/trainer.hpp"

namespace femlearn {

/// Named experiment configuration reproducing one figure of the study.
struct ExperimentPreset {
    std::string name;
    TrainConfig config;
};

/// The preset table. Hyperparameters are the exact values of the experiment
/// captions; seed and record_every take the project defaults and can be
/// overridden on the command line.
inline std::span<const ExperimentPreset> experiment_presets() {
    static const std::vector<ExperimentPreset> presets = [] {
        auto make = [](const char* name, int n, double eps, CostKind kind, Regime regime,
                       double eta, long long n_iter, double beta) {
            TrainConfig cfg;
            cfg.n = n;
            cfg.eps = eps;
            cfg.kind = kind;
            cfg.regime = regime;
            cfg.eta = eta;
            cfg.n_iter = n_iter;
            cfg.beta = beta;
            return ExperimentPreset{name, cfg};
        };
        const auto gal = CostKind::Galerkin;
        const auto supg = CostKind::Supg;
        return std::vector<ExperimentPreset>{
            make("fig1", 40, 0.1, gal, Regime::AllFree, 1e-4, 10000, 1e-4),
            make("fig2", 20, 0.1, gal, Regime::FeInitFree, 1e-6, 300000, 0.0),
            make("fig4a", 40, 0.1, gal, Regime::FeInitFree, 1e-7, 500000, 0.0),
            make("fig4b", 100, 0.1, gal, Regime::FeInitFree, 1e-8, 300000, 0.0),
            make("fig5", 20, 0.1, gal, Regime::FeInitFrozen, 1e-6, 200000, 0.0),
            make("fig7", 20, 0.001, supg, Regime::FeInitFree, 1e-6, 1000000, 0.0),
            make("figA7a", 40, 0.001, supg, Regime::FeInitFree, 1e-7, 1000000, 0.0),
            make("figA7b", 100, 0.001, supg, Regime::FeInitFree, 1e-8, 1000000, 0.0),
            make("fig8", 40, 0.001, supg, Regime::FeInitFrozen, 1e-7, 2000000, 0.0),
            make("fig9", 100, 0.001, supg, Regime::FeInitFrozen, 1e-9, 400000, 0.0),
        };
    }();
    return presets;
}

inline const ExperimentPreset* find_preset(std::string_view name) {
    for (const ExperimentPreset& p : experiment_presets())
        if (p.name == name) return &p;
    return nullptr;
}

inline std::string regime_name(Regime r) {
    switch (r) {
        case Regime::AllFree: return "r1";
        case Regime::FeInitFree: return "r2";
        case Regime::FeInitFrozen: return "r3";
    }
    return "?";
}

inline std::string cost_kind_name(CostKind k) {
    return k == CostKind::Galerkin ? "galerkin" : "supg";
}

} // namespace femlearn
