#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "femlearn/mesh_fem.hpp"
#include "femlearn/relu_net.hpp"

namespace femlearn {

/// Composite Gauss-Legendre setup for the error integrals. Each breakpoint
/// cell of the approximation is split into subdivisions_per_cell equal pieces
/// so the exact solution's boundary layer is resolved inside the last cell
/// (eps = 1e-3 against cell width 1e-2 needs ~2e-4 resolution).
struct QuadratureConfig {
    int points_per_cell = 5;
    int subdivisions_per_cell = 50;
};

namespace detail {

/// Gauss-Legendre nodes/weights on [-1,1], orders 1..10, by Newton iteration
/// on P_n with the Chebyshev-based initial guess. Converges to machine
/// precision in a handful of steps; results are cached per order.
struct GaussRule {
    std::vector<double> nodes, weights;
};

inline GaussRule make_gauss_rule(int npts) {
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(npts));
    rule.weights.resize(static_cast<std::size_t>(npts));
    for (int k = 0; k < npts; ++k) {
        double x = std::cos(M_PI * (static_cast<double>(k) + 0.75) /
                            (static_cast<double>(npts) + 0.5));
        double pd = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= npts; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double pn = (npts == 1) ? x : p1;
            const double pnm1 = (npts == 1) ? 1.0 : p0;
            pd = npts * (pnm1 - x * pn) / (1.0 - x * x);
            const double dx = pn / pd;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[static_cast<std::size_t>(npts - 1 - k)] = x;
        rule.weights[static_cast<std::size_t>(npts - 1 - k)] =
            2.0 / ((1.0 - x * x) * pd * pd);
    }
    return rule;
}

inline const GaussRule& gauss_rule(int npts) {
    if (npts < 1 || npts > 10) throw std::invalid_argument("points_per_cell must be in 1..10");
    static const std::vector<GaussRule> rules = [] {
        std::vector<GaussRule> r;
        for (int n = 1; n <= 10; ++n) r.push_back(make_gauss_rule(n));
        return r;
    }();
    return rules[static_cast<std::size_t>(npts) - 1];
}

inline void check_quadrature(const QuadratureConfig& q) {
    if (q.points_per_cell < 1 || q.points_per_cell > 10)
        throw std::invalid_argument("points_per_cell must be in 1..10");
    if (q.subdivisions_per_cell < 1)
        throw std::invalid_argument("subdivisions_per_cell must be >= 1");
}

inline void check_covers_unit(const PiecewiseLinear& f) {
    if (f.breakpoints.size() < 2 || f.breakpoints.front() != 0.0 || f.breakpoints.back() != 1.0)
        throw std::invalid_argument("piecewise-linear function must cover [0,1]");
}

/// Integrate `integrand(x, value, slope)` over [0,1] on the mesh given by the
/// breakpoints, so the integrand's kinks never cross a quadrature cell.
/// Summation order is fixed (cells, then subdivisions, then points).
template <typename Integrand>
double integrate_cells(const std::vector<double>& breakpoints, const std::vector<double>& values,
                       const QuadratureConfig& q, Integrand&& integrand) {
    const GaussRule& rule = gauss_rule(q.points_per_cell);
    double acc = 0.0;
    for (std::size_t c = 0; c + 1 < breakpoints.size(); ++c) {
        const double a = breakpoints[c], b = breakpoints[c + 1];
        const double slope = (values[c + 1] - values[c]) / (b - a);
        for (int s = 0; s < q.subdivisions_per_cell; ++s) {
            const double sa = a + (b - a) * s / q.subdivisions_per_cell;
            const double sb = a + (b - a) * (s + 1) / q.subdivisions_per_cell;
            const double mid = 0.5 * (sa + sb), half = 0.5 * (sb - sa);
            for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
                const double x = mid + half * rule.nodes[g];
                const double fx = values[c] + slope * (x - a);
                acc += half * rule.weights[g] * integrand(x, fx, slope);
            }
        }
    }
    return acc;
}

} // namespace detail

/// || f - u ||_{L^2(0,1)} against the exact solution for the given eps.
inline double l2_error(const PiecewiseLinear& f, double eps, const QuadratureConfig& q = {}) {
    detail::check_quadrature(q);
    detail::check_covers_unit(f);
    const double val = detail::integrate_cells(
        f.breakpoints, f.values, q, [eps](double x, double fx, double) {
            const double d = fx - exact_solution(eps, x);
            return d * d;
        });
    return std::sqrt(val);
}

/// H^1 seminorm of the error, || f' - u' ||_{L^2(0,1)}; f' is the cellwise
/// constant slope. At the precision reported anywhere in this project the
/// full norm and the seminorm are indistinguishable.
inline double h1_error(const PiecewiseLinear& f, double eps, const QuadratureConfig& q = {}) {
    detail::check_quadrature(q);
    detail::check_covers_unit(f);
    const double val = detail::integrate_cells(
        f.breakpoints, f.values, q, [eps](double x, double, double slope) {
            const double d = slope - exact_solution_derivative(eps, x);
            return d * d;
        });
    return std::sqrt(val);
}

/// || f - g ||_{L^2(0,1)} between two piecewise-linear functions, integrated
/// on the union of both breakpoint meshes.
inline double l2_distance(const PiecewiseLinear& f, const PiecewiseLinear& g,
                          const QuadratureConfig& q = {}) {
    detail::check_quadrature(q);
    detail::check_covers_unit(f);
    detail::check_covers_unit(g);
    std::vector<double> merged;
    merged.reserve(f.breakpoints.size() + g.breakpoints.size());
    std::size_t i = 0, j = 0;
    while (i < f.breakpoints.size() || j < g.breakpoints.size()) {
        double next;
        if (j == g.breakpoints.size() ||
            (i < f.breakpoints.size() && f.breakpoints[i] <= g.breakpoints[j]))
            next = f.breakpoints[i++];
        else
            next = g.breakpoints[j++];
        if (merged.empty() || next > merged.back()) merged.push_back(next);
    }
    std::vector<double> fv(merged.size());
    for (std::size_t k = 0; k < merged.size(); ++k) fv[k] = f(merged[k]);
    const double val = detail::integrate_cells(
        merged, fv, q, [&g](double x, double fx, double) {
            const double d = fx - g(x);
            return d * d;
        });
    return std::sqrt(val);
}

/// |f(x) - g(x)| at each sample point.
inline std::vector<double> abs_diff(const PiecewiseLinear& f, const PiecewiseLinear& g,
                                    std::span<const double> xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(std::abs(f(x) - g(x)));
    return out;
}

} // namespace femlearn
