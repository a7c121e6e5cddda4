#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "femlearn/errors.hpp"
#include "femlearn/mesh_fem.hpp"
#include "femlearn/relu_net.hpp"

namespace femlearn {

/// Atomic file write: the content lands under a temporary name in the target
/// directory and is renamed into place, so readers never observe a torn file.
inline void atomic_write_file(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    const fs::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::ios_base::failure("cannot open " + tmp.string() + " for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw std::ios_base::failure("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::ios_base::failure("cannot rename " + tmp.string() + " to " + path.string());
    }
}

namespace detail {

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// Solution CSV `x,u_exact,u_approx`: every mesh node plus 10 equally spaced
/// interior samples per element.
inline std::string solution_csv(const Partition& p, const PiecewiseLinear& approx, double eps) {
    std::ostringstream os;
    os << "x,u_exact,u_approx\n";
    auto emit = [&](double x) {
        os << detail::format_g17(x) << ',' << detail::format_g17(exact_solution(eps, x)) << ','
           << detail::format_g17(approx(x)) << '\n';
    };
    for (int e = 0; e < p.num_elements(); ++e) {
        const double a = p.nodes[static_cast<std::size_t>(e)];
        const double h = p.element_sizes[static_cast<std::size_t>(e)];
        emit(a);
        for (int s = 1; s <= 10; ++s) emit(a + h * s / 11.0);
    }
    emit(p.nodes.back());
    return os.str();
}

/// One row of the error-comparison tables.
struct ReportRow {
    std::string method; // FEM or SUPG
    int n = 0;
    double l2_ref = 0.0, h1_ref = 0.0, l2_nn = 0.0, h1_nn = 0.0;
};

inline std::string report_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    os << "method,n,l2_ref,h1_ref,l2_nn,h1_nn\n";
    for (const ReportRow& r : rows) {
        os << r.method << ',' << r.n << ',' << detail::format_g17(r.l2_ref) << ','
           << detail::format_g17(r.h1_ref) << ',' << detail::format_g17(r.l2_nn) << ','
           << detail::format_g17(r.h1_nn) << '\n';
    }
    return os.str();
}

/// Generic numeric CSV parse for the plot command: a header line naming the
/// columns, then rows of decimal values. Raises ParseError with the offending
/// 1-based line number.
struct NumericCsv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t num_rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

inline NumericCsv read_numeric_csv(std::istream& is) {
    NumericCsv csv;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(is, line) || line.empty()) throw ParseError(1, "missing header line");
    ++lineno;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        csv.header.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    csv.columns.resize(csv.header.size());
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t pos = 0;
        for (std::size_t c = 0; c < csv.header.size(); ++c) {
            if (pos > line.size()) throw ParseError(lineno, "too few columns");
            const std::size_t comma = line.find(',', pos);
            const std::string field =
                line.substr(pos, comma == std::string::npos ? comma : comma - pos);
            char* end = nullptr;
            const double v = std::strtod(field.c_str(), &end);
            if (end == field.c_str() || *end != '\0')
                throw ParseError(lineno, "malformed number in column " + std::to_string(c + 1));
            csv.columns[c].push_back(v);
            if (comma == std::string::npos) {
                if (c + 1 != csv.header.size()) throw ParseError(lineno, "too few columns");
                pos = line.size() + 1;
            } else {
                if (c + 1 == csv.header.size()) throw ParseError(lineno, "too many columns");
                pos = comma + 1;
            }
        }
    }
    return csv;
}

} // namespace femlearn
