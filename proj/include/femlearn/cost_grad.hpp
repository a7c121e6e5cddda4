#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "femlearn/mesh_fem.hpp"
#include "femlearn/relu_net.hpp"

namespace femlearn {

/// Which discrete residual the cost squares: the centered Galerkin stencil or
/// the SUPG-stabilized (upwinded) one.
enum class CostKind { Galerkin, Supg };

/// Itemized cost evaluation. total = sum r_i^2 + F(0)^2 + F(1)^2 + regularization.
struct CostReport {
    std::vector<double> residuals;
    std::array<double, 2> boundary_penalties{0.0, 0.0};
    double regularization = 0.0;
    double total = 0.0;
};

/// Gradient storage aligned with NetworkParams.
struct ParamGradient {
    std::vector<double> w2, b2, w3;

    static ParamGradient zeros(std::size_t m) {
        return ParamGradient{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0),
                             std::vector<double>(m, 0.0)};
    }
};

namespace detail {

inline void check_sizes(const NetworkParams& params, const Partition& p) {
    if (params.n != p.num_elements())
        throw std::invalid_argument("network was built for a different mesh parameter");
    const std::size_t m = 3 * static_cast<std::size_t>(params.n - 1);
    if (params.w2.size() != m || params.b2.size() != m || params.w3.size() != m)
        throw std::invalid_argument("parameter arrays have inconsistent sizes");
}

inline std::vector<double> eval_at_nodes(const NetworkParams& params, const Partition& p) {
    std::vector<double> F(p.nodes.size());
    for (std::size_t j = 0; j < p.nodes.size(); ++j) F[j] = eval_network(params, p.nodes[j]);
    return F;
}

/// r_i from the nodal values F_0..F_N. Sign convention: the residual is
/// +eps*(K F)_i + (convection)_i - f_i, the row-wise defect of the linear
/// system, so that the exact FE / SUPG nodal values give r = 0.
inline std::vector<double> residuals_from_nodes(const std::vector<double>& F, const Partition& p,
                                                double eps, CostKind kind) {
    const int m = p.num_interior();
    std::vector<double> r(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) {
        const double hm = p.element_sizes[static_cast<std::size_t>(i) - 1];
        const double hp = p.element_sizes[static_cast<std::size_t>(i)];
        const double Fm = F[static_cast<std::size_t>(i) - 1];
        const double Fi = F[static_cast<std::size_t>(i)];
        const double Fp = F[static_cast<std::size_t>(i) + 1];
        const double stiff = -Fm / hm + (1.0 / hm + 1.0 / hp) * Fi - Fp / hp;
        const double conv = (kind == CostKind::Galerkin) ? 0.5 * (Fp - Fm) : Fi - Fm;
        r[static_cast<std::size_t>(i) - 1] = eps * stiff + conv - 0.5 * (hm + hp);
    }
    return r;
}

} // namespace detail

inline std::vector<double> residuals(const NetworkParams& params, const Partition& p, double eps,
                                     CostKind kind) {
    detail::check_sizes(params, p);
    return detail::residuals_from_nodes(detail::eval_at_nodes(params, p), p, eps, kind);
}

inline CostReport cost(const NetworkParams& params, const Partition& p, double eps, CostKind kind,
                       double beta) {
    if (beta < 0.0) throw std::invalid_argument("beta must be nonnegative");
    detail::check_sizes(params, p);
    const std::vector<double> F = detail::eval_at_nodes(params, p);
    CostReport report;
    report.residuals = detail::residuals_from_nodes(F, p, eps, kind);
    report.boundary_penalties = {F.front() * F.front(), F.back() * F.back()};
    double reg = 0.0;
    if (beta > 0.0) {
        for (std::size_t k = 0; k < params.size(); ++k)
            reg += params.w2[k] * params.w2[k] + params.b2[k] * params.b2[k] +
                   params.w3[k] * params.w3[k];
        reg *= beta;
    }
    report.regularization = reg;
    double total = 0.0;
    for (double r : report.residuals) total += r * r;
    total += report.boundary_penalties[0] + report.boundary_penalties[1] + reg;
    report.total = total;
    return report;
}

/// Exact analytic gradient. The cost touches the network only through its
/// values at the N+1 mesh nodes, so backpropagation is two closed-form passes:
/// accumulate dCost/dF_j from the residual stencil and the boundary penalties,
/// then push through F(x_j) = sum_k w3_k * relu(w2_k x_j + b2_k) with the
/// convention relu'(0) = 0. Frozen entries come back exactly zero.
inline ParamGradient cost_gradient(const NetworkParams& params, const Partition& p, double eps,
                                   CostKind kind, double beta, const ParamMask& mask) {
    if (beta < 0.0) throw std::invalid_argument("beta must be nonnegative");
    detail::check_sizes(params, p);
    const std::size_t m = params.size();
    if (mask.w2.size() != m || mask.b2.size() != m || mask.w3.size() != m)
        throw std::invalid_argument("mask length does not match parameter length");

    const std::vector<double> F = detail::eval_at_nodes(params, p);
    const std::vector<double> r = detail::residuals_from_nodes(F, p, eps, kind);

    std::vector<double> gF(F.size(), 0.0);
    const int mi = p.num_interior();
    for (int i = 1; i <= mi; ++i) {
        const double hm = p.element_sizes[static_cast<std::size_t>(i) - 1];
        const double hp = p.element_sizes[static_cast<std::size_t>(i)];
        const double two_r = 2.0 * r[static_cast<std::size_t>(i) - 1];
        const double conv_m = (kind == CostKind::Galerkin) ? -0.5 : -1.0;
        const double conv_i = (kind == CostKind::Galerkin) ? 0.0 : 1.0;
        const double conv_p = (kind == CostKind::Galerkin) ? 0.5 : 0.0;
        gF[static_cast<std::size_t>(i) - 1] += two_r * (eps * (-1.0 / hm) + conv_m);
        gF[static_cast<std::size_t>(i)] += two_r * (eps * (1.0 / hm + 1.0 / hp) + conv_i);
        gF[static_cast<std::size_t>(i) + 1] += two_r * (eps * (-1.0 / hp) + conv_p);
    }
    gF.front() += 2.0 * F.front();
    gF.back() += 2.0 * F.back();

    ParamGradient grad = ParamGradient::zeros(m);
    for (std::size_t k = 0; k < m; ++k) {
        double gw3 = 0.0, gw2 = 0.0, gb2 = 0.0;
        for (std::size_t j = 0; j < p.nodes.size(); ++j) {
            const double z = params.w2[k] * p.nodes[j] + params.b2[k];
            if (z > 0.0) {
                gw3 += gF[j] * z;
                const double t = gF[j] * params.w3[k];
                gw2 += t * p.nodes[j];
                gb2 += t;
            }
        }
        grad.w2[k] = mask.w2[k] ? 0.0 : gw2 + 2.0 * beta * params.w2[k];
        grad.b2[k] = mask.b2[k] ? 0.0 : gb2 + 2.0 * beta * params.b2[k];
        grad.w3[k] = mask.w3[k] ? 0.0 : gw3 + 2.0 * beta * params.w3[k];
    }
    return grad;
}

} // namespace femlearn
