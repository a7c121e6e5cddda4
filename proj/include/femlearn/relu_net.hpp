#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "femlearn/errors.hpp"
#include "femlearn/mesh_fem.hpp"

namespace femlearn {

/// Three-layer ReLU network 1 -> 3(N-1) -> 1 with no output bias:
///   F(x) = sum_k w3_k * max(w2_k * x + b2_k, 0).
/// The mesh parameter n that sized the network is carried along so cost
/// functions can reject evaluation against a mismatched partition.
struct NetworkParams {
    int n = 0;
    std::vector<double> w2, b2, w3;

    std::size_t size() const { return w2.size(); }

    static NetworkParams zeros(int n) {
        const std::size_t m = 3 * static_cast<std::size_t>(n - 1);
        return NetworkParams{n, std::vector<double>(m, 0.0), std::vector<double>(m, 0.0),
                             std::vector<double>(m, 0.0)};
    }
};

/// Per-entry freeze flags aligned with NetworkParams (1 = frozen).
struct ParamMask {
    std::vector<unsigned char> w2, b2, w3;

    static ParamMask none(int n) {
        const std::size_t m = 3 * static_cast<std::size_t>(n - 1);
        return ParamMask{std::vector<unsigned char>(m, 0), std::vector<unsigned char>(m, 0),
                         std::vector<unsigned char>(m, 0)};
    }
};

struct HatTriple {
    std::array<double, 3> w2, b2, w3;
};

/// The three-neuron encoding of the hat function phi_i:
///   weights (1/h_{i-1}, 1/h_{i-1}+1/h_i, 1/h_i),
///   biases  (-x_{i-1}/h_{i-1}, -x_i*(1/h_{i-1}+1/h_i), -x_{i+1}/h_i),
///   output  (1, -1, 1).
inline HatTriple hat_decomposition(const Partition& p, int i) {
    if (i < 1 || i > p.num_interior()) throw std::out_of_range("hat index out of range");
    const double xm = p.nodes[static_cast<std::size_t>(i) - 1];
    const double xi = p.nodes[static_cast<std::size_t>(i)];
    const double xp = p.nodes[static_cast<std::size_t>(i) + 1];
    const double hm = p.element_sizes[static_cast<std::size_t>(i) - 1];
    const double hp = p.element_sizes[static_cast<std::size_t>(i)];
    HatTriple t;
    t.w2 = {1.0 / hm, 1.0 / hm + 1.0 / hp, 1.0 / hp};
    t.b2 = {-xm / hm, -xi * (1.0 / hm + 1.0 / hp), -xp / hp};
    t.w3 = {1.0, -1.0, 1.0};
    return t;
}

/// Network whose response is identically the FE function: hidden layer stacks
/// the hat triples, output block i is nodal_value_i * (1, -1, 1).
inline NetworkParams build_mimic_network(const Partition& p, const NodalFunction& nodal) {
    if (nodal.partition.nodes != p.nodes)
        throw std::invalid_argument("nodal function defined on a different partition");
    const int m = p.num_interior();
    if (static_cast<int>(nodal.interior_values.size()) != m)
        throw std::invalid_argument("nodal value count does not match partition");
    NetworkParams params = NetworkParams::zeros(p.num_elements());
    for (int i = 1; i <= m; ++i) {
        const HatTriple t = hat_decomposition(p, i);
        const double u = nodal.interior_values[static_cast<std::size_t>(i) - 1];
        for (int c = 0; c < 3; ++c) {
            const std::size_t k = 3 * (static_cast<std::size_t>(i) - 1) + static_cast<std::size_t>(c);
            params.w2[k] = t.w2[static_cast<std::size_t>(c)];
            params.b2[k] = t.b2[static_cast<std::size_t>(c)];
            params.w3[k] = u * t.w3[static_cast<std::size_t>(c)];
        }
    }
    return params;
}

inline double eval_network(const NetworkParams& params, double x) {
    double acc = 0.0;
    const std::size_t m = params.size();
    for (std::size_t k = 0; k < m; ++k) {
        const double z = params.w2[k] * x + params.b2[k];
        if (z > 0.0) acc += params.w3[k] * z;
    }
    return acc;
}

/// Kinks -b2_k/w2_k of the active neurons, restricted to [0,1], deduplicated
/// within 1e-12 and completed with the endpoints 0 and 1.
inline std::vector<double> network_breakpoints(const NetworkParams& params) {
    constexpr double kTol = 1e-12;
    std::vector<double> pts;
    pts.reserve(params.size() + 2);
    pts.push_back(0.0);
    pts.push_back(1.0);
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (params.w2[k] == 0.0) continue;
        const double kink = -params.b2[k] / params.w2[k];
        if (kink >= 0.0 && kink <= 1.0) pts.push_back(kink);
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    out.reserve(pts.size());
    for (double v : pts)
        if (out.empty() || v - out.back() > kTol) out.push_back(v);
    // endpoint 1 must survive dedup even if a kink sits within tolerance below it
    if (out.back() != 1.0) out.back() = 1.0;
    return out;
}

/// Exact piecewise-linear view of a function on [0,1]: strictly increasing
/// breakpoints (first 0, last 1) and the values there; linear in between.
struct PiecewiseLinear {
    std::vector<double> breakpoints;
    std::vector<double> values;

    double operator()(double x) const {
        if (x < breakpoints.front() || x > breakpoints.back())
            throw std::invalid_argument("evaluation outside [0,1]");
        const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
        std::size_t cell = static_cast<std::size_t>(it - breakpoints.begin());
        if (cell == breakpoints.size()) return values.back();
        if (cell > 0) --cell;
        const double x0 = breakpoints[cell], x1 = breakpoints[cell + 1];
        const double t = (x - x0) / (x1 - x0);
        return values[cell] + t * (values[cell + 1] - values[cell]);
    }

    std::size_t num_cells() const { return breakpoints.size() - 1; }

    double slope_in_cell(std::size_t cell) const {
        return (values[cell + 1] - values[cell]) / (breakpoints[cell + 1] - breakpoints[cell]);
    }
};

/// A ReLU network with the stated kinks IS piecewise linear, so sampling at the
/// kinks loses nothing: interpolating the result reproduces the network exactly.
inline PiecewiseLinear to_piecewise_linear(const NetworkParams& params) {
    PiecewiseLinear pl;
    pl.breakpoints = network_breakpoints(params);
    pl.values.reserve(pl.breakpoints.size());
    for (double x : pl.breakpoints) pl.values.push_back(eval_network(params, x));
    return pl;
}

inline PiecewiseLinear to_piecewise_linear(const NodalFunction& nodal) {
    PiecewiseLinear pl;
    pl.breakpoints = nodal.partition.nodes;
    pl.values.reserve(pl.breakpoints.size());
    const int n = nodal.partition.num_elements();
    for (int j = 0; j <= n; ++j) pl.values.push_back(nodal.value_at_node(j));
    return pl;
}

namespace detail {

inline void write_value_line(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << '\n';
}

} // namespace detail

/// Model text format, bit-exact round trip:
///   n <mesh parameter>
///   W2 / B2 / W3 section headers, one 17-significant-digit value per line.
inline void save_model(const NetworkParams& params, std::ostream& os) {
    os << "n " << params.n << '\n';
    os << "W2\n";
    for (double v : params.w2) detail::write_value_line(os, v);
    os << "B2\n";
    for (double v : params.b2) detail::write_value_line(os, v);
    os << "W3\n";
    for (double v : params.w3) detail::write_value_line(os, v);
}

inline NetworkParams load_model(std::istream& is) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() {
        if (!std::getline(is, line)) throw ParseError(lineno + 1, "unexpected end of model file");
        ++lineno;
    };
    next_line();
    int n = 0;
    if (std::sscanf(line.c_str(), "n %d", &n) != 1 || n < 2)
        throw ParseError(lineno, "expected header 'n <mesh parameter>'");
    NetworkParams params = NetworkParams::zeros(n);
    const std::array<std::pair<const char*, std::vector<double>*>, 3> sections = {
        std::make_pair("W2", &params.w2), std::make_pair("B2", &params.b2),
        std::make_pair("W3", &params.w3)};
    for (const auto& [header, dest] : sections) {
        next_line();
        if (line != header) throw ParseError(lineno, std::string("expected section header ") + header);
        for (double& v : *dest) {
            next_line();
            char* end = nullptr;
            v = std::strtod(line.c_str(), &end);
            if (end == line.c_str() || *end != '\0')
                throw ParseError(lineno, "malformed floating-point value");
        }
    }
    return params;
}

} // namespace femlearn
