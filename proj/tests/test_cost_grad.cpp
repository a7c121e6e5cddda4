#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "femlearn/cost_grad.hpp"
#include "femlearn/mesh_fem.hpp"
#include "femlearn/relu_net.hpp"
#include "femlearn/rng.hpp"
#include "oracles.hpp"

using namespace femlearn;

namespace {

NetworkParams mimic_of(const Partition& p, double eps, CostKind kind) {
    const TridiagonalSystem sys =
        kind == CostKind::Galerkin ? assemble_galerkin(p, eps) : assemble_supg(p, eps);
    return build_mimic_network(p, solve_tridiagonal(sys));
}

/// Random parameter point whose preactivations at every node stay at least
/// `gap` away from the ReLU kink, so central differences with step 1e-7 never
/// cross it.
NetworkParams random_point_away_from_kinks(const Partition& p, std::uint64_t seed, double gap) {
    SplitMix64 rng(seed);
    const int n = p.num_elements();
    for (int attempt = 0; attempt < 1000; ++attempt) {
        NetworkParams params = NetworkParams::zeros(n);
        for (double& v : params.w2) v = 2.0 * rng.next_symmetric();
        for (double& v : params.b2) v = 2.0 * rng.next_symmetric();
        for (double& v : params.w3) v = rng.next_symmetric();
        bool ok = true;
        for (double x : p.nodes)
            for (std::size_t k = 0; k < params.size() && ok; ++k)
                if (std::abs(params.w2[k] * x + params.b2[k]) <= gap) ok = false;
        if (ok) return params;
    }
    FAIL("could not sample a kink-free parameter point");
    return NetworkParams::zeros(n);
}

} // namespace

TEST_CASE("mimic networks have vanishing residuals") {
    for (int n : {8, 20}) {
        const Partition p = uniform_partition(n);
        for (double eps : {0.1, 0.001}) {
            const auto r_gal = residuals(mimic_of(p, eps, CostKind::Galerkin), p, eps, CostKind::Galerkin);
            for (double r : r_gal) REQUIRE(std::abs(r) < 1e-12);
            const auto r_supg = residuals(mimic_of(p, eps, CostKind::Supg), p, eps, CostKind::Supg);
            for (double r : r_supg) REQUIRE(std::abs(r) < 1e-12);
        }
    }
}

TEST_CASE("zero network leaves only the forcing term") {
    const Partition p = uniform_partition(10);
    const auto r = residuals(NetworkParams::zeros(10), p, 0.1, CostKind::Galerkin);
    for (double ri : r) REQUIRE_THAT(ri, Catch::Matchers::WithinAbs(-0.1, 1e-15));
    const auto rs = residuals(NetworkParams::zeros(10), p, 0.001, CostKind::Supg);
    for (double ri : rs) REQUIRE_THAT(ri, Catch::Matchers::WithinAbs(-0.1, 1e-15));
}

TEST_CASE("size mismatch is rejected") {
    const Partition p = uniform_partition(10);
    REQUIRE_THROWS_AS(residuals(NetworkParams::zeros(8), p, 0.1, CostKind::Galerkin),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(cost(NetworkParams::zeros(8), p, 0.1, CostKind::Galerkin, 0.0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(cost_gradient(NetworkParams::zeros(10), p, 0.1, CostKind::Galerkin, 0.0,
                                    ParamMask::none(8)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(cost(NetworkParams::zeros(10), p, 0.1, CostKind::Galerkin, -0.5),
                      std::invalid_argument);
}

TEST_CASE("cost of the zero network on the two-element mesh") {
    const Partition p = uniform_partition(2);
    const CostReport rep = cost(NetworkParams::zeros(2), p, 0.1, CostKind::Galerkin, 0.0);
    REQUIRE(rep.residuals.size() == 1);
    REQUIRE_THAT(rep.residuals[0], Catch::Matchers::WithinAbs(-0.5, 1e-15));
    REQUIRE(rep.boundary_penalties[0] == 0.0);
    REQUIRE(rep.boundary_penalties[1] == 0.0);
    REQUIRE_THAT(rep.total, Catch::Matchers::WithinAbs(0.25, 1e-15));
}

TEST_CASE("cost report total matches its parts") {
    SplitMix64 rng(5);
    const Partition p = uniform_partition(6);
    for (int trial = 0; trial < 10; ++trial) {
        NetworkParams params = NetworkParams::zeros(6);
        for (double& v : params.w2) v = 2.0 * rng.next_symmetric();
        for (double& v : params.b2) v = rng.next_symmetric();
        for (double& v : params.w3) v = rng.next_symmetric();
        const double beta = trial % 2 ? 0.01 : 0.0;
        const CostReport rep = cost(params, p, 0.05, CostKind::Supg, beta);
        double sum = 0.0;
        for (double r : rep.residuals) sum += r * r;
        sum += rep.boundary_penalties[0] + rep.boundary_penalties[1] + rep.regularization;
        REQUIRE_THAT(rep.total, Catch::Matchers::WithinRel(sum, 1e-14));
        if (beta > 0.0) {
            const double base = cost(params, p, 0.05, CostKind::Supg, 0.0).total;
            REQUIRE(rep.total > base);
        }
    }
}

TEST_CASE("the deterministic pipeline reaches the cost minimum") {
    for (double eps : {0.1, 0.001}) {
        for (int n : {20, 40, 100}) {
            const Partition p = uniform_partition(n);
            const double c_gal =
                cost(mimic_of(p, eps, CostKind::Galerkin), p, eps, CostKind::Galerkin, 0.0).total;
            REQUIRE(c_gal < 1e-20);
            const double c_supg =
                cost(mimic_of(p, eps, CostKind::Supg), p, eps, CostKind::Supg, 0.0).total;
            REQUIRE(c_supg < 1e-20);
        }
    }
}

TEST_CASE("gradient at the all-zero network is exactly zero") {
    const Partition p = uniform_partition(12);
    for (CostKind kind : {CostKind::Galerkin, CostKind::Supg}) {
        const ParamGradient g =
            cost_gradient(NetworkParams::zeros(12), p, 0.1, kind, 0.0, ParamMask::none(12));
        for (double v : g.w2) REQUIRE(v == 0.0);
        for (double v : g.b2) REQUIRE(v == 0.0);
        for (double v : g.w3) REQUIRE(v == 0.0);
    }
}

TEST_CASE("analytic gradient matches central finite differences") {
    const Partition p = uniform_partition(5);
    const double delta = 1e-7;
    int checked = 0;
    for (CostKind kind : {CostKind::Galerkin, CostKind::Supg}) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const NetworkParams params = random_point_away_from_kinks(p, 1000 + seed, 1e-6);
            const double beta = (seed % 3 == 0) ? 1e-3 : 0.0;
            const ParamGradient g =
                cost_gradient(params, p, 0.1, kind, beta, ParamMask::none(5));
            auto check = [&](const std::vector<double>& analytic,
                             std::vector<double> NetworkParams::* member) {
                for (std::size_t k = 0; k < analytic.size(); ++k) {
                    NetworkParams plus = params, minus = params;
                    (plus.*member)[k] += delta;
                    (minus.*member)[k] -= delta;
                    const double fd =
                        static_cast<double>(oracles::cost_long_double(plus, p, 0.1, kind, beta) -
                                            oracles::cost_long_double(minus, p, 0.1, kind, beta)) /
                        (2.0 * delta);
                    const double denom = std::max(std::abs(analytic[k]), std::abs(fd));
                    if (denom < 1e-10) continue; // both vanish
                    REQUIRE(std::abs(analytic[k] - fd) / denom < 1e-6);
                }
            };
            check(g.w2, &NetworkParams::w2);
            check(g.b2, &NetworkParams::b2);
            check(g.w3, &NetworkParams::w3);
            ++checked;
        }
    }
    REQUIRE(checked == 200);
}

TEST_CASE("freeze mask zeroes exactly the masked entries") {
    const Partition p = uniform_partition(7);
    const NetworkParams params = random_point_away_from_kinks(p, 77, 1e-8);
    ParamMask mask = ParamMask::none(7);
    for (auto& f : mask.w2) f = 1;
    for (auto& f : mask.b2) f = 1;
    const ParamGradient masked = cost_gradient(params, p, 0.1, CostKind::Galerkin, 0.0, mask);
    const ParamGradient full =
        cost_gradient(params, p, 0.1, CostKind::Galerkin, 0.0, ParamMask::none(7));
    for (double v : masked.w2) REQUIRE(v == 0.0);
    for (double v : masked.b2) REQUIRE(v == 0.0);
    REQUIRE(masked.w3 == full.w3);
}

TEST_CASE("a tiny gradient step never increases the cost") {
    const Partition p = uniform_partition(9);
    const double eta = 1e-10;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const NetworkParams params = random_point_away_from_kinks(p, seed, 1e-8);
        for (CostKind kind : {CostKind::Galerkin, CostKind::Supg}) {
            const ParamGradient g = cost_gradient(params, p, 0.1, kind, 0.0, ParamMask::none(9));
            NetworkParams stepped = params;
            for (std::size_t k = 0; k < params.size(); ++k) {
                stepped.w2[k] -= eta * g.w2[k];
                stepped.b2[k] -= eta * g.b2[k];
                stepped.w3[k] -= eta * g.w3[k];
            }
            const double before = cost(params, p, 0.1, kind, 0.0).total;
            const double after = cost(stepped, p, 0.1, kind, 0.0).total;
            REQUIRE(after <= before + 1e-15);
        }
    }
}

TEST_CASE("regularization gradient is exactly 2*beta*parameter") {
    // A network whose neurons are all inactive on [0,1] has zero data gradient,
    // which isolates the regularization term.
    const Partition p = uniform_partition(4);
    NetworkParams params = NetworkParams::zeros(4);
    SplitMix64 rng(3);
    for (std::size_t k = 0; k < params.size(); ++k) {
        params.w2[k] = rng.next_symmetric();
        params.b2[k] = -2.0 - rng.next_unit(); // preactivation < 0 for all x in [0,1]
        params.w3[k] = rng.next_symmetric();
    }
    const double beta = 0.37;
    const ParamGradient g = cost_gradient(params, p, 0.1, CostKind::Galerkin, beta, ParamMask::none(4));
    for (std::size_t k = 0; k < params.size(); ++k) {
        REQUIRE(g.w2[k] == 2.0 * beta * params.w2[k]);
        REQUIRE(g.b2[k] == 2.0 * beta * params.b2[k]);
        REQUIRE(g.w3[k] == 2.0 * beta * params.w3[k]);
    }
}
