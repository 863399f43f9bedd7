#include "skewkrylov/matrix_market.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>
#include <utility>

#include "skewkrylov/errors.hpp"
#include "skewkrylov/operator_core.hpp"

namespace skewkrylov {

namespace {

enum class Layout { coordinate, array };
enum class Symmetry { general, skew };

struct Header {
    Layout layout = Layout::coordinate;
    Symmetry symmetry = Symmetry::general;
};

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

long long parse_integer(std::string_view token, std::size_t line, const char* what) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError(std::string("invalid ") + what + " '" + std::string(token) + "'", line);
    }
    return value;
}

double parse_real(std::string_view token, std::size_t line) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError("invalid numeric value '" + std::string(token) + "'", line);
    }
    if (!std::isfinite(value)) throw ParseError("nonfinite value '" + std::string(token) + "'", line);
    return value;
}

/// Line reader that skips blank lines and tracks 1-based line numbers.
class LineSource {
public:
    explicit LineSource(std::istream& in) : in_(in) {}

    std::optional<std::string> next_raw() {
        std::string line;
        if (!std::getline(in_, line)) return std::nullopt;
        ++line_;
        return line;
    }

    /// Next non-blank data line; nullopt at end of input.
    std::optional<std::string> next_data() {
        while (auto line = next_raw()) {
            if (!tokenize(*line).empty()) return line;
        }
        return std::nullopt;
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

Header parse_banner(const std::string& banner, std::size_t line) {
    const auto tokens = tokenize(banner);
    if (tokens.size() != 5 || lower(tokens[0]) != "%%matrixmarket" || lower(tokens[1]) != "matrix") {
        throw ParseError("malformed Matrix Market header", line);
    }
    Header h;
    const std::string layout = lower(tokens[2]);
    if (layout == "coordinate") {
        h.layout = Layout::coordinate;
    } else if (layout == "array") {
        h.layout = Layout::array;
    } else {
        throw ParseError("unsupported format '" + layout + "'", line);
    }
    const std::string field = lower(tokens[3]);
    if (field != "real" && field != "integer" && field != "double") {
        throw ParseError("unsupported field '" + field + "' (expected real or integer)", line);
    }
    const std::string symmetry = lower(tokens[4]);
    if (symmetry == "general") {
        h.symmetry = Symmetry::general;
    } else if (symmetry == "skew-symmetric") {
        h.symmetry = Symmetry::skew;
    } else {
        throw ParseError("unsupported symmetry '" + symmetry + "' (expected general or skew-symmetric)", line);
    }
    return h;
}

struct Body {
    Header header;
    long long rows = 0;
    long long cols = 0;
    std::size_t size_line = 0;
    std::vector<std::string> comments;
    // Entries with 0-based indices and the source line of each.
    std::vector<std::pair<Triplet, std::size_t>> entries;
};

Body parse_body(std::istream& in) {
    LineSource src(in);
    Body body;
    auto banner = src.next_raw();
    if (!banner) throw ParseError("empty input", 1);
    body.header = parse_banner(*banner, src.line());

    std::optional<std::string> size_line;
    while (auto line = src.next_raw()) {
        if (!line->empty() && line->front() == '%') {
            body.comments.push_back(line->substr(1));
            continue;
        }
        if (tokenize(*line).empty()) continue;
        size_line = std::move(line);
        break;
    }
    if (!size_line) throw ParseError("missing size line", src.line() + 1);

    const std::size_t size_at = src.line();
    body.size_line = size_at;
    const auto size_tokens = tokenize(*size_line);
    const bool coordinate = body.header.layout == Layout::coordinate;
    if (size_tokens.size() != (coordinate ? 3u : 2u)) throw ParseError("malformed size line", size_at);
    body.rows = parse_integer(size_tokens[0], size_at, "row count");
    body.cols = parse_integer(size_tokens[1], size_at, "column count");
    if (body.rows < 1 || body.cols < 1) throw ParseError("matrix dimensions must be positive", size_at);
    if (body.rows != body.cols) throw ParseError("matrix must be square", size_at);

    const long long n = body.rows;
    if (coordinate) {
        const long long nnz = parse_integer(size_tokens[2], size_at, "entry count");
        if (nnz < 0) throw ParseError("entry count must be nonnegative", size_at);
        for (long long k = 0; k < nnz; ++k) {
            auto line = src.next_data();
            if (!line) throw ParseError("expected " + std::to_string(nnz) + " entries, found " + std::to_string(k), src.line() + 1);
            const auto t = tokenize(*line);
            if (t.size() != 3) throw ParseError("coordinate entry must have row, column and value", src.line());
            const long long i = parse_integer(t[0], src.line(), "row index");
            const long long j = parse_integer(t[1], src.line(), "column index");
            if (i < 1 || i > n || j < 1 || j > n) {
                throw ParseError("index (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range", src.line());
            }
            body.entries.push_back({Triplet{i - 1, j - 1, parse_real(t[2], src.line())}, src.line()});
        }
    } else {
        // Column-major; the skew-symmetric array form lists only the strict lower triangle.
        for (long long j = 0; j < n; ++j) {
            const long long first = body.header.symmetry == Symmetry::skew ? j + 1 : 0;
            for (long long i = first; i < n; ++i) {
                auto line = src.next_data();
                if (!line) throw ParseError("array data ended early", src.line() + 1);
                const auto t = tokenize(*line);
                if (t.size() != 1) throw ParseError("array entry must be a single value", src.line());
                body.entries.push_back({Triplet{i, j, parse_real(t[0], src.line())}, src.line()});
            }
        }
    }
    if (src.next_data()) throw ParseError("unexpected data after the declared entries", src.line());
    return body;
}

SparseSkewMatrix build_skew(const Body& body) {
    const long long n = body.rows;
    if (n % 2 != 0) throw ParseError("skew-symmetric matrix must have even dimension", body.size_line);

    std::vector<Triplet> upper;
    upper.reserve(body.entries.size());
    std::map<std::pair<Index, Index>, std::size_t> seen;
    std::optional<bool> lower_side;
    const bool array = body.header.layout == Layout::array;
    for (const auto& [t, line] : body.entries) {
        if (array && t.value == 0.0) continue;
        if (t.row == t.col) throw ParseError("diagonal entry in skew-symmetric matrix", line);
        const bool is_lower = t.row > t.col;
        if (lower_side && *lower_side != is_lower) {
            throw ParseError("skew-symmetric entries mix upper and lower triangles", line);
        }
        lower_side = is_lower;
        const Triplet canonical = is_lower ? Triplet{t.col, t.row, -t.value} : t;
        if (!seen.emplace(std::make_pair(canonical.row, canonical.col), line).second) {
            throw ParseError("duplicate entry (" + std::to_string(t.row + 1) + ", " + std::to_string(t.col + 1) + ")",
                             line);
        }
        upper.push_back(canonical);
    }
    return SparseSkewMatrix(n, std::move(upper));
}

DenseMatrix build_general(const Body& body) {
    const long long n = body.rows;
    Matrix entries = Matrix::Zero(n, n);
    std::map<std::pair<Index, Index>, std::size_t> seen;
    for (const auto& [t, line] : body.entries) {
        if (!seen.emplace(std::make_pair(t.row, t.col), line).second) {
            throw ParseError("duplicate entry (" + std::to_string(t.row + 1) + ", " + std::to_string(t.col + 1) + ")",
                             line);
        }
        entries(t.row, t.col) = t.value;
    }
    DenseMatrix general(std::move(entries));
    if (n >= 2 && n % 2 == 0 && general.has_skew_structure() &&
        verify_skew(make_operator(general), 8, 0, 1e-12).passed) {
        return DenseMatrix(general.entries(), OperatorKind::skew);
    }
    return general;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing", IoError::Direction::output);
    return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading", IoError::Direction::input);
    return in;
}

}  // namespace

std::string format_double(double value, int significant_digits) {
    std::array<char, 64> buf{};
    auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, significant_digits);
    if (ec != std::errc()) throw Error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

MatrixMarketData parse_matrix_market(std::istream& in) {
    Body body = parse_body(in);
    if (body.header.symmetry == Symmetry::skew) return MatrixMarketData{build_skew(body), std::move(body.comments)};
    return MatrixMarketData{build_general(body), std::move(body.comments)};
}

MatrixMarketData read_matrix_market(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseSkewMatrix& matrix, const std::vector<std::string>& comments) {
    out << "%%MatrixMarket matrix coordinate real skew-symmetric\n";
    for (const auto& c : comments) out << '%' << c << '\n';
    out << matrix.dim() << ' ' << matrix.dim() << ' ' << matrix.nonzeros() << '\n';
    for (const auto& t : matrix.triplets()) {
        out << (t.row + 1) << ' ' << (t.col + 1) << ' ' << format_double(t.value) << '\n';
    }
}

void write_matrix_market(const std::filesystem::path& path, const SparseSkewMatrix& matrix,
                         const std::vector<std::string>& comments) {
    auto out = open_output(path);
    write_matrix_market(out, matrix, comments);
    if (!out) throw IoError("write to '" + path.string() + "' failed", IoError::Direction::output);
}

void write_matrix_market(const std::filesystem::path& path, const DenseMatrix& matrix,
                         const std::vector<std::string>& comments) {
    write_matrix_market(path, to_sparse_skew(matrix), comments);
}

Vector parse_vector(std::istream& in) {
    LineSource src(in);
    auto banner = src.next_raw();
    if (!banner) throw ParseError("empty input", 1);
    const Header header = parse_banner(*banner, src.line());
    if (header.symmetry != Symmetry::general) throw ParseError("vector files must use general symmetry", 1);

    std::optional<std::string> size_line;
    while (auto line = src.next_raw()) {
        if ((!line->empty() && line->front() == '%') || tokenize(*line).empty()) continue;
        size_line = std::move(line);
        break;
    }
    if (!size_line) throw ParseError("missing size line", src.line() + 1);
    const auto t = tokenize(*size_line);
    const std::size_t at = src.line();
    const bool coordinate = header.layout == Layout::coordinate;
    if (t.size() != (coordinate ? 3u : 2u)) throw ParseError("malformed size line", at);
    const long long rows = parse_integer(t[0], at, "row count");
    const long long cols = parse_integer(t[1], at, "column count");
    if (rows < 1 || cols != 1) throw ParseError("vector must be an n x 1 matrix", at);

    Vector v = Vector::Zero(rows);
    if (coordinate) {
        const long long nnz = parse_integer(t[2], at, "entry count");
        std::vector<bool> seen(static_cast<std::size_t>(rows), false);
        for (long long k = 0; k < nnz; ++k) {
            auto line = src.next_data();
            if (!line) throw ParseError("coordinate data ended early", src.line() + 1);
            const auto e = tokenize(*line);
            if (e.size() != 3) throw ParseError("coordinate entry must have row, column and value", src.line());
            const long long i = parse_integer(e[0], src.line(), "row index");
            const long long j = parse_integer(e[1], src.line(), "column index");
            if (i < 1 || i > rows || j != 1) throw ParseError("index out of range", src.line());
            if (seen[static_cast<std::size_t>(i - 1)]) throw ParseError("duplicate entry", src.line());
            seen[static_cast<std::size_t>(i - 1)] = true;
            v[i - 1] = parse_real(e[2], src.line());
        }
    } else {
        for (long long i = 0; i < rows; ++i) {
            auto line = src.next_data();
            if (!line) throw ParseError("array data ended early", src.line() + 1);
            const auto e = tokenize(*line);
            if (e.size() != 1) throw ParseError("array entry must be a single value", src.line());
            v[i] = parse_real(e[0], src.line());
        }
    }
    if (src.next_data()) throw ParseError("unexpected data after the declared entries", src.line());
    return v;
}

Vector read_vector(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_vector(in);
}

void write_vector(const std::filesystem::path& path, const Vector& v) {
    auto out = open_output(path);
    out << "%%MatrixMarket matrix array real general\n";
    out << v.size() << " 1\n";
    for (Index i = 0; i < v.size(); ++i) out << format_double(v[i]) << '\n';
    if (!out) throw IoError("write to '" + path.string() + "' failed", IoError::Direction::output);
}

}  // namespace skewkrylov
