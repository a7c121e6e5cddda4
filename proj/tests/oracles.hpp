#pragma once

// Test-only oracles, deliberately independent of the library implementation
// paths they are used to check: a dense Gaussian-elimination solver, an
// extended-precision cost evaluation for finite-difference gradient checks,
// and composite-trapezoid error norms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "femlearn/cost_grad.hpp"
#include "femlearn/mesh_fem.hpp"
#include "femlearn/relu_net.hpp"

namespace oracles {

inline std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r][col] / A[col][col];
            for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= A[r][c] * x[c];
        x[r] = s / A[r][r];
    }
    return x;
}

inline std::vector<std::vector<double>> to_dense(const femlearn::TridiagonalSystem& sys) {
    const std::size_t m = sys.size();
    std::vector<std::vector<double>> A(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        A[i][i] = sys.diag[i];
        if (i > 0) A[i][i - 1] = sys.sub[i];
        if (i + 1 < m) A[i][i + 1] = sys.super[i];
    }
    return A;
}

/// Cost evaluated in long double, written directly from the formula (network
/// value at each node, squared stencil residuals, boundary penalties,
/// regularization). The extra precision keeps central-difference gradient
/// noise around 1e-12 relative instead of 1e-6.
inline long double cost_long_double(const femlearn::NetworkParams& params,
                                    const femlearn::Partition& p, double eps,
                                    femlearn::CostKind kind, double beta) {
    const std::size_t nodes = p.nodes.size();
    std::vector<long double> F(nodes, 0.0L);
    for (std::size_t j = 0; j < nodes; ++j) {
        long double acc = 0.0L;
        for (std::size_t k = 0; k < params.size(); ++k) {
            const long double z = static_cast<long double>(params.w2[k]) * p.nodes[j] +
                                  static_cast<long double>(params.b2[k]);
            if (z > 0.0L) acc += static_cast<long double>(params.w3[k]) * z;
        }
        F[j] = acc;
    }
    long double total = 0.0L;
    for (int i = 1; i <= p.num_interior(); ++i) {
        const long double hm = p.element_sizes[static_cast<std::size_t>(i) - 1];
        const long double hp = p.element_sizes[static_cast<std::size_t>(i)];
        const long double stiff = -F[static_cast<std::size_t>(i) - 1] / hm +
                                  (1.0L / hm + 1.0L / hp) * F[static_cast<std::size_t>(i)] -
                                  F[static_cast<std::size_t>(i) + 1] / hp;
        const long double conv =
            (kind == femlearn::CostKind::Galerkin)
                ? 0.5L * (F[static_cast<std::size_t>(i) + 1] - F[static_cast<std::size_t>(i) - 1])
                : F[static_cast<std::size_t>(i)] - F[static_cast<std::size_t>(i) - 1];
        const long double r = static_cast<long double>(eps) * stiff + conv - 0.5L * (hm + hp);
        total += r * r;
    }
    total += F.front() * F.front() + F.back() * F.back();
    if (beta > 0.0) {
        long double reg = 0.0L;
        for (std::size_t k = 0; k < params.size(); ++k)
            reg += static_cast<long double>(params.w2[k]) * params.w2[k] +
                   static_cast<long double>(params.b2[k]) * params.b2[k] +
                   static_cast<long double>(params.w3[k]) * params.w3[k];
        total += static_cast<long double>(beta) * reg;
    }
    return total;
}

/// Composite trapezoid rule with ~num_points total samples, applied piecewise
/// between the approximation's breakpoints so the rule never straddles a kink
/// of the integrand. `integrand(x, value, slope)` as in the library quadrature.
template <typename Integrand>
long double trapezoid_cells(const femlearn::PiecewiseLinear& f, std::size_t num_points,
                            Integrand&& integrand) {
    long double acc = 0.0L;
    for (std::size_t c = 0; c + 1 < f.breakpoints.size(); ++c) {
        const double a = f.breakpoints[c], b = f.breakpoints[c + 1];
        const double slope = f.slope_in_cell(c);
        const auto pts = static_cast<std::size_t>(
            std::max(2.0, std::ceil(static_cast<double>(num_points) * (b - a))));
        const double h = (b - a) / static_cast<double>(pts);
        long double cell_acc = 0.0L;
        for (std::size_t k = 0; k <= pts; ++k) {
            const double x = (k == pts) ? b : a + static_cast<double>(k) * h;
            const double fx = f.values[c] + slope * (x - a);
            const long double v = integrand(x, fx, slope);
            cell_acc += (k == 0 || k == pts) ? 0.5L * v : v;
        }
        acc += cell_acc * static_cast<long double>(h);
    }
    return acc;
}

inline double trapezoid_l2_error(const femlearn::PiecewiseLinear& f, double eps,
                                 std::size_t num_points) {
    const long double acc =
        trapezoid_cells(f, num_points, [eps](double x, double fx, double) {
            const double d = fx - femlearn::exact_solution(eps, x);
            return static_cast<long double>(d) * d;
        });
    return std::sqrt(static_cast<double>(acc));
}

inline double trapezoid_h1_error(const femlearn::PiecewiseLinear& f, double eps,
                                 std::size_t num_points) {
    const long double acc =
        trapezoid_cells(f, num_points, [eps](double x, double, double slope) {
            const double d = slope - femlearn::exact_solution_derivative(eps, x);
            return static_cast<long double>(d) * d;
        });
    return std::sqrt(static_cast<double>(acc));
}

} // namespace oracles
