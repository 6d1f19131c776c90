#include "plnmf/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace plnmf {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct LineReader {
    LineReader(std::istream& stream, const std::string& source_name)
        : in(stream), source(source_name) {}

    std::istream& in;
    const std::string& source;
    index_t line_no = 0;
    std::string buf;

    bool next(bool skip_blank_and_comments) {
        while (std::getline(in, buf)) {
            ++line_no;
            if (!buf.empty() && buf.back() == '\r') buf.pop_back();
            if (skip_blank_and_comments) {
                const auto pos = buf.find_first_not_of(" \t");
                if (pos == std::string::npos) continue;
                if (buf[pos] == '%') continue;
            }
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(source, line_no, msg); }
};

struct FieldCursor {
    const char* p;
    LineReader& reader;

    index_t read_index(const char* what) {
        char* end = nullptr;
        const long long v = std::strtoll(p, &end, 10);
        if (end == p) reader.fail(std::string("expected ") + what);
        p = end;
        return static_cast<index_t>(v);
    }

    double read_real(const char* what) {
        char* end = nullptr;
        const double v = std::strtod(p, &end);
        if (end == p) reader.fail(std::string("expected ") + what);
        p = end;
        return v;
    }

    void expect_end() {
        while (*p == ' ' || *p == '\t') ++p;
        if (*p != '\0') reader.fail("unexpected trailing characters");
    }
};

struct Header {
    bool coordinate = false;
    bool pattern = false;
};

Header parse_banner(LineReader& reader) {
    if (!reader.next(false)) reader.fail("empty file");
    std::istringstream ss(reader.buf);
    std::string banner, object, format, field, symmetry;
    ss >> banner >> object >> format >> field >> symmetry;
    if (lower(banner) != "%%matrixmarket") reader.fail("missing %%MatrixMarket banner");
    if (lower(object) != "matrix") reader.fail("unsupported object '" + object + "'");

    Header h;
    const std::string fmt = lower(format);
    const std::string fld = lower(field);
    const std::string sym = lower(symmetry);
    if (fmt == "coordinate")
        h.coordinate = true;
    else if (fmt != "array")
        reader.fail("unsupported format '" + format + "'");
    if (fld == "pattern") {
        if (!h.coordinate) reader.fail("pattern entries require coordinate format");
        h.pattern = true;
    } else if (fld != "real") {
        reader.fail("unsupported field '" + field + "' (real or pattern expected)");
    }
    if (sym != "general") reader.fail("unsupported symmetry '" + symmetry + "' (general expected)");
    return h;
}

CsrMatrix read_coordinate(LineReader& reader, bool pattern) {
    if (!reader.next(true)) reader.fail("missing size line");
    FieldCursor size{reader.buf.c_str(), reader};
    const index_t rows = size.read_index("row count");
    const index_t cols = size.read_index("column count");
    const index_t nnz = size.read_index("entry count");
    size.expect_end();
    if (rows < 0 || cols < 0 || nnz < 0) reader.fail("negative size");

    std::vector<index_t> rr(nnz), cc(nnz);
    std::vector<double> vv(nnz);
    for (index_t e = 0; e < nnz; ++e) {
        if (!reader.next(true)) reader.fail("unexpected end of file: entry " + std::to_string(e + 1) +
                                            " of " + std::to_string(nnz) + " missing");
        FieldCursor cur{reader.buf.c_str(), reader};
        const index_t r = cur.read_index("row index");
        const index_t c = cur.read_index("column index");
        double val = 1.0;
        if (!pattern) {
            val = cur.read_real("value");
            if (!std::isfinite(val)) reader.fail("value must be finite");
            if (val < 0.0) reader.fail("value must be non-negative");
        }
        cur.expect_end();
        if (r < 1 || r > rows) reader.fail("row index out of bounds");
        if (c < 1 || c > cols) reader.fail("column index out of bounds");
        rr[e] = r - 1;
        cc[e] = c - 1;
        vv[e] = val;
    }
    if (reader.next(true)) reader.fail("unexpected extra entries after the declared count");

    // Bucket by row, sort each row by column keeping file order for
    // duplicates, then sum duplicates.
    CsrMatrix m;
    m.rows = rows;
    m.cols = cols;
    std::vector<index_t> counts(rows + 1, 0);
    for (index_t e = 0; e < nnz; ++e) ++counts[rr[e] + 1];
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    std::vector<index_t> order(nnz);
    {
        std::vector<index_t> cursor(counts.begin(), counts.end() - 1);
        for (index_t e = 0; e < nnz; ++e) order[cursor[rr[e]]++] = e;
    }

    m.row_ptr.assign(rows + 1, 0);
    m.col_idx.reserve(nnz);
    m.values.reserve(nnz);
    std::vector<index_t> row_entries;
    for (index_t v = 0; v < rows; ++v) {
        row_entries.assign(order.begin() + counts[v], order.begin() + counts[v + 1]);
        std::stable_sort(row_entries.begin(), row_entries.end(),
                         [&](index_t a, index_t b) { return cc[a] < cc[b]; });
        const index_t row_start = static_cast<index_t>(m.col_idx.size());
        for (const index_t e : row_entries) {
            if (static_cast<index_t>(m.col_idx.size()) > row_start && m.col_idx.back() == cc[e]) {
                m.values.back() += vv[e];
            } else {
                m.col_idx.push_back(cc[e]);
                m.values.push_back(vv[e]);
            }
        }
        m.row_ptr[v + 1] = static_cast<index_t>(m.col_idx.size());
    }
    return m;
}

DenseMatrix read_array(LineReader& reader) {
    if (!reader.next(true)) reader.fail("missing size line");
    FieldCursor size{reader.buf.c_str(), reader};
    const index_t rows = size.read_index("row count");
    const index_t cols = size.read_index("column count");
    size.expect_end();
    if (rows < 0 || cols < 0) reader.fail("negative size");

    DenseMatrix m(rows, cols);
    double* out = m.data();
    const index_t total = rows * cols;
    index_t filled = 0;
    while (filled < total) {
        if (!reader.next(true))
            reader.fail("unexpected end of file: " + std::to_string(total - filled) +
                        " values missing");
        FieldCursor cur{reader.buf.c_str(), reader};
        // The format puts one value per line; accept several per line too.
        while (true) {
            const char* before = cur.p;
            while (*cur.p == ' ' || *cur.p == '\t') ++cur.p;
            if (*cur.p == '\0') break;
            if (filled == total) reader.fail("unexpected extra values");
            cur.p = before;
            const double val = cur.read_real("value");
            if (!std::isfinite(val)) reader.fail("value must be finite");
            if (val < 0.0) reader.fail("value must be non-negative");
            out[filled++] = val;  // column-major fill, as the format defines
        }
    }
    if (reader.next(true)) reader.fail("unexpected extra values after the matrix");
    return m;
}

}  // namespace

ParseError::ParseError(const std::string& source, index_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

InputMatrix read_matrix_market(std::istream& in, const std::string& source_name) {
    LineReader reader(in, source_name);
    const Header h = parse_banner(reader);
    if (h.coordinate) return InputMatrix(read_coordinate(reader, h.pattern));
    return InputMatrix(read_array(reader));
}

InputMatrix read_matrix_market(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path, 0, "cannot open file");
    return read_matrix_market(f, path);
}

std::pair<index_t, index_t> peek_matrix_market_shape(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path, 0, "cannot open file");
    LineReader reader(f, path);
    parse_banner(reader);
    if (!reader.next(true)) reader.fail("missing size line");
    FieldCursor size{reader.buf.c_str(), reader};
    const index_t rows = size.read_index("row count");
    const index_t cols = size.read_index("column count");
    return {rows, cols};
}

DenseMatrix densify(const CsrMatrix& a) {
    DenseMatrix m(a.rows, a.cols);
    for (index_t v = 0; v < a.rows; ++v)
        for (index_t e = a.row_ptr[v]; e < a.row_ptr[v + 1]; ++e) m(v, a.col_idx[e]) += a.values[e];
    return m;
}

}  // namespace plnmf
