// Copyright 2026 The mlqaoa Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>
#include <utility>

#include "format.hpp"
#include "mlqaoa/errors.hpp"
#include "mlqaoa/instance.hpp"

namespace mlqaoa {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(),
                       [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

template <class T>
T parse_number(std::string_view tok, const std::string& source, std::size_t line,
               const char* what) {
    T value{};
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(source, line, std::string("invalid ") + what + " '" + std::string(tok) + "'");
    }
    return value;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

}  // namespace

WeightedGraph parse_gset(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t lineno = 0;
    std::size_t n = 0, m = 0;
    bool header = false;
    while (!header && std::getline(in, line)) {
        ++lineno;
        if (is_blank(line)) continue;
        const auto tok = split_ws(line);
        if (tok.size() != 2) throw ParseError(source, lineno, "expected header 'n m'");
        n = parse_number<std::size_t>(tok[0], source, lineno, "node count");
        m = parse_number<std::size_t>(tok[1], source, lineno, "edge count");
        header = true;
    }
    if (!header) throw ParseError(source, 0, "empty file");

    std::vector<Edge> edges;
    edges.reserve(m);
    while (std::getline(in, line)) {
        ++lineno;
        if (is_blank(line)) continue;
        if (edges.size() == m) throw ParseError(source, lineno, "more edge lines than declared m");
        const auto tok = split_ws(line);
        if (tok.size() != 3) throw ParseError(source, lineno, "expected 'u v w'");
        const auto u = parse_number<std::size_t>(tok[0], source, lineno, "node index");
        const auto v = parse_number<std::size_t>(tok[1], source, lineno, "node index");
        const auto w = parse_number<double>(tok[2], source, lineno, "weight");
        if (u < 1 || u > n || v < 1 || v > n) {
            throw ParseError(source, lineno, "node index out of range 1.." + std::to_string(n));
        }
        if (u == v) throw ParseError(source, lineno, "self-loop");
        edges.push_back({NodeId(u - 1), NodeId(v - 1), w});
    }
    if (edges.size() != m) {
        throw ParseError(source, lineno,
                         "declared " + std::to_string(m) + " edges, found " +
                                 std::to_string(edges.size()));
    }
    return WeightedGraph(n, edges);
}

WeightedGraph load_gset(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_gset(in, path.string());
}

void write_gset(std::ostream& out, const WeightedGraph& graph) {
    out << graph.num_nodes() << ' ' << graph.num_edges() << '\n';
    for (const Edge& e : graph.edges()) {
        out << e.u + 1 << ' ' << e.v + 1 << ' ' << detail::format_number(e.w) << '\n';
    }
}

WeightedGraph parse_matrix_market(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(source, 0, "empty file");
    ++lineno;
    const auto banner = split_ws(line);
    if (banner.size() != 5 || banner[0] != "%%MatrixMarket") {
        throw ParseError(source, lineno, "missing %%MatrixMarket banner");
    }
    const std::string object = lower(banner[1]), format = lower(banner[2]),
                      field = lower(banner[3]), symmetry = lower(banner[4]);
    if (object != "matrix" || format != "coordinate") {
        throw UnsupportedFormatError(source + ": only 'matrix coordinate' is supported, got '" +
                                     object + " " + format + "'");
    }
    if (field != "real" && field != "pattern" && field != "integer") {
        throw UnsupportedFormatError(source + ": unsupported field '" + field + "'");
    }
    if (symmetry != "symmetric" && symmetry != "general") {
        throw UnsupportedFormatError(source + ": unsupported symmetry '" + symmetry + "'");
    }
    const bool pattern = field == "pattern";

    std::size_t rows = 0, cols = 0, nnz = 0;
    bool have_size = false;
    while (!have_size && std::getline(in, line)) {
        ++lineno;
        if (is_blank(line) || line[0] == '%') continue;
        const auto tok = split_ws(line);
        if (tok.size() != 3) throw ParseError(source, lineno, "expected size line 'rows cols nnz'");
        rows = parse_number<std::size_t>(tok[0], source, lineno, "row count");
        cols = parse_number<std::size_t>(tok[1], source, lineno, "column count");
        nnz = parse_number<std::size_t>(tok[2], source, lineno, "entry count");
        have_size = true;
    }
    if (!have_size) throw ParseError(source, lineno, "missing size line");
    if (rows != cols) {
        throw UnsupportedFormatError(source + ": non-square matrix " + std::to_string(rows) + "x" +
                                     std::to_string(cols));
    }

    // A general matrix lists (i,j) and (j,i) separately; the first occurrence
    // of each unordered pair defines the edge.
    std::set<std::pair<NodeId, NodeId>> seen;
    std::vector<Edge> edges;
    std::size_t entries = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_blank(line) || line[0] == '%') continue;
        if (entries == nnz) throw ParseError(source, lineno, "more entries than declared");
        ++entries;
        const auto tok = split_ws(line);
        if (tok.size() != (pattern ? 2u : 3u)) {
            throw ParseError(source, lineno, pattern ? "expected 'i j'" : "expected 'i j value'");
        }
        const auto i = parse_number<std::size_t>(tok[0], source, lineno, "row index");
        const auto j = parse_number<std::size_t>(tok[1], source, lineno, "column index");
        if (i < 1 || i > rows || j < 1 || j > cols) {
            throw ParseError(source, lineno, "index out of range");
        }
        const double w = pattern ? 1.0 : parse_number<double>(tok[2], source, lineno, "value");
        if (i == j) continue;
        const NodeId a = NodeId(std::min(i, j) - 1), b = NodeId(std::max(i, j) - 1);
        if (seen.emplace(a, b).second) edges.push_back({a, b, w});
    }
    if (entries != nnz) {
        throw ParseError(source, lineno,
                         "declared " + std::to_string(nnz) + " entries, found " +
                                 std::to_string(entries));
    }
    return WeightedGraph(rows, edges);
}

WeightedGraph load_matrix_market(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_matrix_market(in, path.string());
}

QuboInstance qubo_from_json(const nlohmann::json& doc) {
    try {
        const auto n = doc.at("n").get<std::int64_t>();
        if (n < 1) throw ParseError("<qubo>", 0, "\"n\" must be positive");
        std::vector<QuboTerm> terms;
        for (const auto& t : doc.at("terms")) {
            if (!t.is_array() || t.size() != 3) {
                throw ParseError("<qubo>", 0, "each term must be [i, j, q]");
            }
            const auto i = t[0].get<std::int64_t>(), j = t[1].get<std::int64_t>();
            if (i < 0 || j < 0) throw ParseError("<qubo>", 0, "negative term index");
            terms.push_back({std::size_t(i), std::size_t(j), t[2].get<double>()});
        }
        return QuboInstance(std::size_t(n), std::move(terms));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("<qubo>", 0, e.what());
    } catch (const ArgumentError& e) {
        throw ParseError("<qubo>", 0, e.what());
    }
}

nlohmann::json qubo_to_json(const QuboInstance& q) {
    nlohmann::json terms = nlohmann::json::array();
    for (const QuboTerm& t : q.terms()) terms.push_back({t.i, t.j, t.q});
    return {{"n", q.num_variables()}, {"terms", std::move(terms)}};
}

QuboInstance load_qubo_json(const std::filesystem::path& path) {
    try {
        return qubo_from_json(read_json_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string(), 0, e.what());
    }
}

std::string bits_to_string(std::span<const std::uint8_t> bits) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) s[i] = '1';
    }
    return s;
}

Bits bits_from_string(const std::string& s) {
    Bits bits(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') throw ArgumentError("assignment must be a 0/1 string");
        bits[i] = static_cast<std::uint8_t>(s[i] == '1');
    }
    return bits;
}

nlohmann::json solution_to_json(const SolutionRecord& rec) {
    if (rec.assignment.size() != rec.n) {
        throw ArgumentError("assignment length " + std::to_string(rec.assignment.size()) +
                            " != n " + std::to_string(rec.n));
    }
    return {{"instance", rec.instance},
            {"n", rec.n},
            {"objective", rec.objective},
            {"assignment", bits_to_string(rec.assignment)},
            {"runtime_seconds", rec.runtime_seconds},
            {"seed", rec.seed},
            {"metadata", rec.metadata.is_null() ? nlohmann::json::object() : rec.metadata}};
}

SolutionRecord solution_from_json(const nlohmann::json& doc) {
    try {
        SolutionRecord rec;
        rec.instance = doc.at("instance").get<std::string>();
        rec.n = doc.at("n").get<std::size_t>();
        rec.objective = doc.at("objective").get<double>();
        rec.assignment = bits_from_string(doc.at("assignment").get<std::string>());
        rec.runtime_seconds = doc.at("runtime_seconds").get<double>();
        rec.seed = doc.at("seed").get<std::uint64_t>();
        rec.metadata = doc.value("metadata", nlohmann::json::object());
        if (rec.assignment.size() != rec.n) {
            throw ParseError("<solution>", 0, "assignment length does not match n");
        }
        return rec;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("<solution>", 0, e.what());
    } catch (const ArgumentError& e) {
        throw ParseError("<solution>", 0, e.what());
    }
}

void save_solution(const std::filesystem::path& path, const SolutionRecord& rec) {
    write_json_file(path, solution_to_json(rec));
}

SolutionRecord load_solution(const std::filesystem::path& path) {
    return solution_from_json(read_json_file(path));
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write to " + path.string() + " failed");
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string(), 0, e.what());
    }
}

}  // namespace mlqaoa
