#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "femlearn/errors.hpp"

namespace femlearn {

/// Mesh of [0,1]: nodes x_0 < x_1 < ... < x_N with x_0 = 0, x_N = 1,
/// plus the element sizes h_i = x_{i+1} - x_i.
struct Partition {
    std::vector<double> nodes;
    std::vector<double> element_sizes;

    /// Number of elements N.
    int num_elements() const { return static_cast<int>(element_sizes.size()); }
    /// Number of interior nodes N-1 (the unknowns of the Dirichlet problem).
    int num_interior() const { return num_elements() - 1; }

    static Partition uniform(int n) {
        if (n < 2) throw std::invalid_argument("invalid mesh: need at least 2 elements, got " + std::to_string(n));
        std::vector<double> xs(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) xs[static_cast<std::size_t>(i)] = static_cast<double>(i) / n;
        return from_nodes(std::move(xs));
    }

    static Partition from_nodes(std::vector<double> xs) {
        if (xs.size() < 3) throw std::invalid_argument("invalid mesh: need at least 3 nodes");
        if (xs.front() != 0.0 || xs.back() != 1.0)
            throw std::invalid_argument("invalid mesh: endpoints must be exactly 0 and 1");
        std::vector<double> hs(xs.size() - 1);
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            hs[i] = xs[i + 1] - xs[i];
            if (!(hs[i] > 0.0)) throw std::invalid_argument("invalid mesh: nodes must be strictly increasing");
        }
        return Partition{std::move(xs), std::move(hs)};
    }
};

/// Tridiagonal system A u = f over the interior nodes, rows i = 1..N-1.
/// sub[0] and super[N-2] are structurally zero. The diffusion parameter the
/// system was assembled with is kept alongside the matrix.
struct TridiagonalSystem {
    Partition partition;
    std::vector<double> sub, diag, super, rhs;
    double eps = 0.0;

    std::size_t size() const { return diag.size(); }
};

/// Function in the linear FE space: values at the interior nodes, zero at both ends.
struct NodalFunction {
    Partition partition;
    std::vector<double> interior_values;

    /// Value at node j = 0..N (boundary nodes give 0).
    double value_at_node(int j) const {
        const int n = partition.num_elements();
        if (j < 0 || j > n) throw std::out_of_range("node index out of range");
        if (j == 0 || j == n) return 0.0;
        return interior_values[static_cast<std::size_t>(j) - 1];
    }
};

inline Partition uniform_partition(int n) { return Partition::uniform(n); }

namespace detail {

// Shared assembly skeleton: the stiffness part eps*K is common to both methods;
// the convection stencil (c_sub, c_diag, c_super coefficients) is what differs.
inline TridiagonalSystem assemble(const Partition& p, double eps,
                                  double c_sub, double c_diag, double c_super) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    const int m = p.num_interior();
    TridiagonalSystem sys;
    sys.partition = p;
    sys.eps = eps;
    sys.sub.assign(static_cast<std::size_t>(m), 0.0);
    sys.diag.assign(static_cast<std::size_t>(m), 0.0);
    sys.super.assign(static_cast<std::size_t>(m), 0.0);
    sys.rhs.assign(static_cast<std::size_t>(m), 0.0);
    for (int i = 1; i <= m; ++i) {
        const double hm = p.element_sizes[static_cast<std::size_t>(i) - 1];
        const double hp = p.element_sizes[static_cast<std::size_t>(i)];
        const std::size_t r = static_cast<std::size_t>(i) - 1;
        sys.sub[r] = eps * (-1.0 / hm) + c_sub;
        sys.diag[r] = eps * (1.0 / hm + 1.0 / hp) + c_diag;
        sys.super[r] = eps * (-1.0 / hp) + c_super;
        sys.rhs[r] = 0.5 * (hm + hp);
    }
    sys.sub[0] = 0.0;
    sys.super[static_cast<std::size_t>(m) - 1] = 0.0;
    return sys;
}

} // namespace detail

/// Standard Galerkin system eps*K + C with centered convection.
inline TridiagonalSystem assemble_galerkin(const Partition& p, double eps) {
    return detail::assemble(p, eps, -0.5, 0.0, 0.5);
}

/// SUPG-stabilized system: with delta_i = h_{i-1}/2 the convection term
/// becomes the full upwind difference F_i - F_{i-1}.
inline TridiagonalSystem assemble_supg(const Partition& p, double eps) {
    return detail::assemble(p, eps, -1.0, 1.0, 0.0);
}

/// Thomas algorithm, no pivoting. The systems here are tiny and diagonally
/// well-behaved at every (eps, N) we run; a vanishing pivot raises instead of pivoting.
inline NodalFunction solve_tridiagonal(const TridiagonalSystem& sys) {
    const std::size_t m = sys.size();
    std::vector<double> c(m), d(m);
    double pivot = sys.diag[0];
    if (std::abs(pivot) < 1e-300) throw SingularSystemError("singular system: zero pivot in row 1");
    c[0] = sys.super[0] / pivot;
    d[0] = sys.rhs[0] / pivot;
    for (std::size_t i = 1; i < m; ++i) {
        pivot = sys.diag[i] - sys.sub[i] * c[i - 1];
        if (std::abs(pivot) < 1e-300)
            throw SingularSystemError("singular system: zero pivot in row " + std::to_string(i + 1));
        c[i] = sys.super[i] / pivot;
        d[i] = (sys.rhs[i] - sys.sub[i] * d[i - 1]) / pivot;
    }
    std::vector<double> u(m);
    u[m - 1] = d[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) u[i] = d[i] - c[i] * u[i + 1];
    return NodalFunction{sys.partition, std::move(u)};
}

/// Exact solution of -eps*u'' + u' = 1, u(0) = u(1) = 0:
///   u(x) = x - (e^{(x-1)/eps} - e^{-1/eps}) / (1 - e^{-1/eps}).
/// Written with e^{(x-1)/eps} (never e^{x/eps}) so nothing overflows even at
/// eps = 1e-12; the layer terms simply underflow to 0 away from x = 1.
inline double exact_solution(double eps, double x) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("x must lie in [0,1]");
    const double em = std::exp(-1.0 / eps);
    return x - (std::exp((x - 1.0) / eps) - em) / (1.0 - em);
}

/// u'(x) = 1 - e^{(x-1)/eps} / (eps * (1 - e^{-1/eps})).
inline double exact_solution_derivative(double eps, double x) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("x must lie in [0,1]");
    const double em = std::exp(-1.0 / eps);
    return 1.0 - std::exp((x - 1.0) / eps) / (eps * (1.0 - em));
}

/// Nodal hat function phi_i: 1 at x_i, 0 outside (x_{i-1}, x_{i+1}), linear between.
inline double hat_basis_eval(const Partition& p, int i, double x) {
    if (i < 1 || i > p.num_interior()) throw std::out_of_range("hat index out of range");
    const double xm = p.nodes[static_cast<std::size_t>(i) - 1];
    const double xi = p.nodes[static_cast<std::size_t>(i)];
    const double xp = p.nodes[static_cast<std::size_t>(i) + 1];
    if (x <= xm || x >= xp) return 0.0;
    if (x <= xi) return (x - xm) / (xi - xm);
    return (xp - x) / (xp - xi);
}

} // namespace femlearn
