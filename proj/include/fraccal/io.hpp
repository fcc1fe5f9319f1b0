#pragma once

// Matrix CSV files ("# rows cols" header, row-major values at 17 significant
// digits), JSON result files and a content hash for provenance metadata.

#include <cstdlib>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "fraccal/errors.hpp"
#include "fraccal/geometry.hpp"

namespace fraccal {

using json = nlohmann::json;

class IoError : public Error {
public:
    using Error::Error;
};

inline std::string format_matrix_csv(const Matrix& m) {
    std::string out = "# " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
    char buf[40];
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            if (j > 0) out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

inline Matrix parse_matrix_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("#", 0) != 0) throw IoError("matrix CSV is missing the '# rows cols' header");
    std::istringstream head(line.substr(1));
    Index rows = -1, cols = -1;
    if (!(head >> rows >> cols) || rows < 0 || cols < 0) throw IoError("malformed matrix CSV header: " + line);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) throw IoError("matrix CSV has fewer rows than its header declares");
        std::istringstream row(line);
        std::string cell;
        Index j = 0;
        while (std::getline(row, cell, ',')) {
            if (j >= cols) throw IoError("matrix CSV row " + std::to_string(i) + " has too many values");
            const char* begin = cell.c_str();
            char* end = nullptr;
            m(i, j) = std::strtod(begin, &end);
            while (end && (*end == ' ' || *end == '\r' || *end == '\t')) ++end;
            if (end == begin || *end != '\0')
                throw IoError("matrix CSV row " + std::to_string(i) + " has a non-numeric value '" + cell + "'");
            ++j;
        }
        if (j != cols) throw IoError("matrix CSV row " + std::to_string(i) + " has too few values");
    }
    return m;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

inline void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) { write_text(path, format_matrix_csv(m)); }
inline Matrix read_matrix_csv(const std::filesystem::path& path) { return parse_matrix_csv(read_text(path)); }

inline void write_vector_csv(const std::filesystem::path& path, const Vector& v) {
    write_matrix_csv(path, Matrix(v));
}

inline Vector read_vector_csv(const std::filesystem::path& path) {
    const Matrix m = read_matrix_csv(path);
    if (m.cols() != 1 && m.rows() != 1) throw IoError(path.string() + " does not hold a vector");
    return m.reshaped();
}

inline json read_json(const std::filesystem::path& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw IoError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline json to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

inline Vector vector_from_json(const json& j) {
    const auto xs = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(xs.data(), static_cast<Index>(xs.size()));
}

inline json to_json(const Grid& g) {
    return json{{"dim", g.dim()}, {"counts", g.counts()}, {"spacing", g.spacing()},
                {"origin", std::vector<double>{g.origin()[0], g.origin()[1]}}};
}

/// Hash of the grid and the three node sets of a partition.
inline std::string geometry_hash(const RegionPartition& p) {
    json j = to_json(p.grid);
    j["omega"] = p.omega;
    j["w1"] = p.w1;
    j["w2"] = p.w2;
    return fnv1a_hex(j.dump());
}

} // namespace fraccal
