#pragma once

#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "mort/error.hpp"
#include "mort/transform.hpp"

namespace mort {

/// MORTDESC v1: text serialization of K descriptor pairs.
///
///   MORTDESC v1 N=<n> M=<m> Q=<q> norm=<0|1> K=<k>
///   I
///   <Q+1 lines of M comma-separated values>
///   C
///   <Q+1 lines of M comma-separated values>
///   ... repeated K times
///
/// Values are written with 17 significant digits so the round trip is
/// value-exact for doubles.

namespace detail {

inline void write_matrix_rows(std::ostream& os, const matrix& m) {
    char buf[64];
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", m.at(r, c));
            if (c) os << ',';
            os << buf;
        }
        os << '\n';
    }
}

inline matrix read_matrix_rows(std::istream& is, int rows, int cols, const std::string& path,
                               int& line_no) {
    matrix m(rows, cols, 0.0);
    std::string line;
    for (int r = 0; r < rows; ++r) {
        if (!std::getline(is, line))
            raise(errc::parse_error, path + ":" + std::to_string(line_no) + ": truncated matrix");
        ++line_no;
        const char* p = line.c_str();
        for (int c = 0; c < cols; ++c) {
            char* end = nullptr;
            const double v = std::strtod(p, &end);
            if (end == p)
                raise(errc::parse_error,
                      path + ":" + std::to_string(line_no - 1) + ": bad value in matrix row");
            m.at(r, c) = v;
            p = end;
            if (c + 1 < cols) {
                if (*p != ',')
                    raise(errc::parse_error,
                          path + ":" + std::to_string(line_no - 1) + ": expected comma");
                ++p;
            }
        }
        while (*p == ' ' || *p == '\r') ++p;
        if (*p != '\0')
            raise(errc::parse_error,
                  path + ":" + std::to_string(line_no - 1) + ": trailing data in matrix row");
    }
    return m;
}

} // namespace detail

inline void write_descriptor_file(const std::string& path,
                                  const std::vector<mort_descriptor>& pairs) {
    if (pairs.empty()) raise(errc::io_error, path + ": refusing to write empty descriptor set");
    std::ofstream os(path, std::ios::binary);
    if (!os) raise(errc::io_error, path + ": cannot open for writing");
    const mort_descriptor& first = pairs.front();
    const int q = first.psi_interior.rows() - 1;
    os << "MORTDESC v1 N=" << first.n << " M=" << first.m << " Q=" << q
       << " norm=" << (first.normalized ? 1 : 0) << " K=" << pairs.size() << '\n';
    for (const mort_descriptor& d : pairs) {
        os << "I\n";
        detail::write_matrix_rows(os, d.psi_interior);
        os << "C\n";
        detail::write_matrix_rows(os, d.psi_complementary);
    }
    if (!os) raise(errc::io_error, path + ": write failed");
}

inline std::vector<mort_descriptor> read_descriptor_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) raise(errc::missing_file, path + ": cannot open");
    std::string header;
    if (!std::getline(is, header)) raise(errc::parse_error, path + ":1: empty file");
    int n = 0, m = 0, q = 0, norm = 0, k = 0;
    if (std::sscanf(header.c_str(), "MORTDESC v1 N=%d M=%d Q=%d norm=%d K=%d", &n, &m, &q, &norm,
                    &k) != 5)
        raise(errc::parse_error, path + ":1: bad MORTDESC header");
    if (n < 4 || m < 1 || m >= n || q < 0 || k < 1)
        raise(errc::parse_error, path + ":1: inconsistent MORTDESC header fields");

    int line_no = 2;
    std::vector<mort_descriptor> pairs;
    std::string tag;
    for (int i = 0; i < k; ++i) {
        mort_descriptor d;
        d.n = n;
        d.m = m;
        d.normalized = norm != 0;
        if (!std::getline(is, tag) || tag != "I")
            raise(errc::parse_error, path + ":" + std::to_string(line_no) + ": expected 'I'");
        ++line_no;
        d.psi_interior = detail::read_matrix_rows(is, q + 1, m, path, line_no);
        if (!std::getline(is, tag) || tag != "C")
            raise(errc::parse_error, path + ":" + std::to_string(line_no) + ": expected 'C'");
        ++line_no;
        d.psi_complementary = detail::read_matrix_rows(is, q + 1, m, path, line_no);
        pairs.push_back(std::move(d));
    }
    return pairs;
}

} // namespace mort
