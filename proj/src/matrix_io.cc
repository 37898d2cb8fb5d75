#include "ssdec/matrix_io.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ssdec {

namespace {

bool next_content_line(std::istream &in, std::string &line) {
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        return true;
    }
    return false;
}

}  // namespace

void write_sparse_text(std::ostream &out, const BitMatrix &m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    for (auto [r, c] : m.entries()) {
        out << r << ' ' << c << '\n';
    }
}

void write_dense_text(std::ostream &out, const BitMatrix &m) {
    out << m.str();
}

BitMatrix read_sparse_text(std::istream &in) {
    std::string line;
    if (!next_content_line(in, line)) {
        throw std::runtime_error("sparse matrix text: missing header");
    }
    std::istringstream header(line);
    long long rows = -1, cols = -1;
    if (!(header >> rows >> cols) || rows < 0 || cols < 0) {
        throw std::runtime_error("sparse matrix text: malformed header '" + line + "'");
    }
    std::vector<std::pair<Index, Index>> entries;
    while (next_content_line(in, line)) {
        std::istringstream ls(line);
        long long r = -1, c = -1;
        if (!(ls >> r >> c) || r < 0 || c < 0 || r >= rows || c >= cols) {
            throw std::runtime_error("sparse matrix text: bad entry '" + line + "'");
        }
        entries.emplace_back(static_cast<Index>(r), static_cast<Index>(c));
    }
    return BitMatrix::from_entries(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(entries));
}

BitMatrix read_dense_text(std::istream &in) {
    std::vector<BitVector> rows;
    std::string line;
    std::size_t cols = 0;
    while (next_content_line(in, line)) {
        auto v = BitVector::from_string(line);
        if (!rows.empty() && v.size() != cols) {
            throw std::runtime_error("dense matrix text: ragged rows");
        }
        cols = v.size();
        rows.push_back(std::move(v));
    }
    return BitMatrix::from_rows(cols, rows);
}

BitMatrix read_matrix(std::istream &in) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    std::istringstream probe(text);
    std::string line;
    if (!next_content_line(probe, line)) {
        throw std::runtime_error("matrix text: empty input");
    }
    std::istringstream src(text);
    if (line.find_first_of(" \t") != std::string::npos) {
        return read_sparse_text(src);
    }
    return read_dense_text(src);
}

BitMatrix read_matrix_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open matrix file '" + path + "'");
    }
    return read_matrix(in);
}

void write_matrix_file(const std::string &path, const BitMatrix &m, bool dense) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write matrix file '" + path + "'");
    }
    if (dense) {
        write_dense_text(out, m);
    } else {
        write_sparse_text(out, m);
    }
}

}  // namespace ssdec
