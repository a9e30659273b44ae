#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "int_matrix.hpp"

namespace zsurj {

// Text format: a header line "n m", then n rows of m decimal integers,
// whitespace-separated; lines whose first non-blank character is '#' are
// comments. Parsing is byte-oriented and locale-independent.

namespace detail {

struct Token {
    std::string text;
    std::size_t line;    // 1-based
    std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize_matrix_text(std::istream& in, std::size_t& last_line) {
    std::vector<Token> tokens;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t i = 0;
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i < line.size() && line[i] == '#') continue;
        while (i < line.size()) {
            if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
                ++i;
                continue;
            }
            std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
            tokens.push_back({line.substr(start, i - start), line_no, start + 1});
        }
    }
    last_line = line_no;
    return tokens;
}

inline std::uint64_t parse_count(const Token& tok, const char* what) {
    if (tok.text.empty() || tok.text.size() > 9) {
        throw ParseError(std::string("bad ") + what + " '" + tok.text + "'", tok.line, tok.column);
    }
    std::uint64_t value = 0;
    for (char ch : tok.text) {
        if (ch < '0' || ch > '9') {
            throw ParseError(std::string("bad ") + what + " '" + tok.text + "'", tok.line,
                             tok.column);
        }
        value = value * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    if (value == 0) {
        throw ParseError(std::string(what) + " must be positive", tok.line, tok.column);
    }
    return value;
}

inline Int parse_entry(const Token& tok) {
    const std::string& t = tok.text;
    std::size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
    if (i == t.size()) throw ParseError("bad integer '" + t + "'", tok.line, tok.column);
    for (; i < t.size(); ++i) {
        if (t[i] < '0' || t[i] > '9') {
            throw ParseError("bad integer '" + t + "'", tok.line, tok.column);
        }
    }
    return Int(t);
}

}  // namespace detail

inline IntMatrix read_matrix_text(std::istream& in) {
    std::size_t last_line = 0;
    auto tokens = detail::tokenize_matrix_text(in, last_line);
    if (tokens.size() < 2) {
        throw ParseError("missing 'n m' header", last_line ? last_line : 1, 1);
    }
    const std::uint64_t n = detail::parse_count(tokens[0], "row count");
    const std::uint64_t m = detail::parse_count(tokens[1], "column count");
    if (n * m > 100'000'000) {
        throw ParseError("matrix too large", tokens[0].line, tokens[0].column);
    }
    const std::size_t expected = 2 + n * m;
    if (tokens.size() < expected) {
        const auto& last = tokens.back();
        throw ParseError("expected " + std::to_string(n * m) + " entries, found " +
                             std::to_string(tokens.size() - 2),
                         last.line, last.column);
    }
    if (tokens.size() > expected) {
        const auto& extra = tokens[expected];
        throw ParseError("trailing data after " + std::to_string(n * m) + " entries", extra.line,
                         extra.column);
    }
    IntMatrix a(n, m);
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::uint64_t j = 0; j < m; ++j) {
            a.at(i, j) = detail::parse_entry(tokens[2 + i * m + j]);
        }
    }
    return a;
}

inline IntMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("cannot open " + path);
    return read_matrix_text(in);
}

inline void write_matrix_text(std::ostream& out, const IntMatrix& a) {
    out << a.rows() << ' ' << a.cols() << '\n';
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (j) out << ' ';
            out << a.at(i, j);
        }
        out << '\n';
    }
}

}  // namespace zsurj
