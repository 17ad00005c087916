#include "prdim/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace prdim {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) throw IoError("read failed for " + path);
    return buf.str();
}

double parse_field(const std::string& field, std::size_t line_no, std::size_t col_no) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end || begin == end) {
        throw ParseError("line " + std::to_string(line_no) + ", field " + std::to_string(col_no) +
                         ": cannot parse '" + std::string(begin, end) + "' as a number");
    }
    return value;
}

SampleMatrix ingest_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::size_t end = eol == std::string::npos ? text.size() : eol;
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (eol == std::string::npos && line.empty()) break;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        std::vector<double> fields;
        std::size_t fpos = 0;
        std::size_t col_no = 0;
        while (true) {
            const std::size_t comma = line.find(',', fpos);
            const std::string cell =
                line.substr(fpos, comma == std::string::npos ? std::string::npos : comma - fpos);
            ++col_no;
            const double v = parse_field(cell, line_no, col_no);
            if (!std::isfinite(v)) {
                throw NonFiniteEntry("non-finite value at row " + std::to_string(rows.size() + 1) +
                                     ", column " + std::to_string(col_no) + " (line " +
                                     std::to_string(line_no) + ")");
            }
            fields.push_back(v);
            if (comma == std::string::npos) break;
            fpos = comma + 1;
        }
        if (!rows.empty() && fields.size() != rows.front().size()) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(rows.front().size()) + " fields, got " +
                             std::to_string(fields.size()));
        }
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) throw ParseError(path + ": no data rows");

    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return SampleMatrix(std::move(m));
}

SampleMatrix ingest_npy(const std::string& path) {
    const std::string raw = read_file(path);
    static constexpr char kMagic[] = "\x93NUMPY";
    if (raw.size() < 10 || raw.compare(0, 6, kMagic, 6) != 0) {
        throw ParseError(path + ": not an npy file (bad magic)");
    }
    const unsigned major = static_cast<unsigned char>(raw[6]);
    const unsigned minor = static_cast<unsigned char>(raw[7]);
    if (major != 1 || minor != 0) {
        throw ParseError(path + ": unsupported npy version " + std::to_string(major) + "." +
                         std::to_string(minor) + " (only 1.0 is accepted)");
    }
    const unsigned header_len = static_cast<unsigned char>(raw[8]) |
                                (static_cast<unsigned>(static_cast<unsigned char>(raw[9])) << 8);
    if (raw.size() < 10 + header_len) throw ParseError(path + ": truncated npy header");
    const std::string header = raw.substr(10, header_len);

    auto dict_value = [&](const std::string& key) -> std::string {
        const std::size_t at = header.find("'" + key + "'");
        if (at == std::string::npos) throw ParseError(path + ": npy header missing " + key);
        std::size_t colon = header.find(':', at);
        if (colon == std::string::npos) throw ParseError(path + ": malformed npy header");
        ++colon;
        while (colon < header.size() && header[colon] == ' ') ++colon;
        std::size_t stop = colon;
        if (header[colon] == '\'') {
            stop = header.find('\'', colon + 1);
            return header.substr(colon + 1, stop - colon - 1);
        }
        if (header[colon] == '(') {
            stop = header.find(')', colon);
            return header.substr(colon, stop - colon + 1);
        }
        while (stop < header.size() && header[stop] != ',' && header[stop] != '}') ++stop;
        return header.substr(colon, stop - colon);
    };

    const std::string descr = dict_value("descr");
    if (descr != "<f8") {
        throw ParseError(path + ": dtype '" + descr +
                         "' is not supported; expected little-endian float64 ('<f8')");
    }
    if (dict_value("fortran_order") != "False") {
        throw ParseError(path + ": fortran-order arrays are not supported (save in C order)");
    }
    const std::string shape = dict_value("shape");
    std::vector<Index> dims;
    std::size_t sp = 1;
    while (sp < shape.size()) {
        while (sp < shape.size() && !std::isdigit(static_cast<unsigned char>(shape[sp]))) ++sp;
        if (sp >= shape.size()) break;
        Index v = 0;
        while (sp < shape.size() && std::isdigit(static_cast<unsigned char>(shape[sp]))) {
            v = v * 10 + (shape[sp] - '0');
            ++sp;
        }
        dims.push_back(v);
    }
    if (dims.size() != 2) {
        throw NotTwoDimensional(path + ": expected a 2-D array, shape is " + shape);
    }
    const Index p = dims[0];
    const Index q = dims[1];
    const std::size_t expected = static_cast<std::size_t>(p) * static_cast<std::size_t>(q) * 8;
    const std::size_t data_at = 10 + header_len;
    if (raw.size() - data_at < expected) throw ParseError(path + ": truncated npy data");

    Matrix m(p, q);
    // file is C-order (row major); transpose while copying
    const char* src = raw.data() + data_at;
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < q; ++j) {
            double v = 0.0;
            std::memcpy(&v, src + (static_cast<std::size_t>(i) * static_cast<std::size_t>(q) +
                                   static_cast<std::size_t>(j)) *
                                      8,
                        8);
            if (!std::isfinite(v)) {
                throw NonFiniteEntry("non-finite value at row " + std::to_string(i + 1) +
                                     ", column " + std::to_string(j + 1));
            }
            m(i, j) = v;
        }
    }
    return SampleMatrix(std::move(m));
}

void write_meta(std::ostream& out, const CsvMeta& meta) {
    if (!meta.tool.empty()) out << "# tool: " << meta.tool << "\n";
    if (!meta.command.empty()) out << "# command: " << meta.command << "\n";
    if (!meta.config_hash.empty()) out << "# config-hash: " << meta.config_hash << "\n";
    for (const auto& line : meta.extra) out << "# " << line << "\n";
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char ch : text) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    return h;
}

SampleMatrix ingest(const std::string& path, std::optional<FileFormat> format) {
    const FileFormat fmt =
        format.value_or(ends_with(path, ".npy") ? FileFormat::npy : FileFormat::csv);
    return fmt == FileFormat::npy ? ingest_npy(path) : ingest_csv(path);
}

Vector ingest_weights(const std::string& path) {
    const SampleMatrix m = ingest(path);
    if (m.cols() == 1) return m.values().col(0);
    if (m.rows() == 1) return m.values().row(0).transpose();
    throw NotTwoDimensional("weights file must be a single row or column");
}

void write_matrix_csv(const Matrix& m, const std::string& path, const CsvMeta& meta) {
    std::ofstream out = open_out(path);
    write_meta(out, meta);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
    if (!out.good()) throw IoError("write failed for " + path);
}

void emit_csv(const SweepResult& result, const std::string& path, const CsvMeta& meta) {
    std::ofstream out = open_out(path);
    write_meta(out, meta);
    out << "# base-seed: " << result.grid.base_seed << "\n";
    out << "# repetitions: " << result.grid.repetitions << "\n";
    out << "p,q,repetition,cell_seed,correction,centering,noise_corrected,valid,gamma,"
           "t1,t2,t3,t4,t5,A,B,diagnostics\n";
    for (const SweepRecord& r : result.records) {
        const TermBreakdown& t = r.estimate.terms;
        out << r.p << ',' << r.q << ',' << r.repetition << ',' << r.cell_seed << ','
            << to_string(r.estimate.variant.correction) << ','
            << to_string(r.estimate.variant.centering) << ','
            << (r.estimate.variant.noise_corrected ? 1 : 0) << ',' << (r.estimate.valid ? 1 : 0)
            << ',' << format_double(r.estimate.value) << ',' << format_double(t.t1) << ','
            << format_double(t.t2) << ',' << format_double(t.t3) << ',' << format_double(t.t4)
            << ',' << format_double(t.t5) << ',' << format_double(t.a) << ','
            << format_double(t.b) << ',' << r.estimate.diagnostics << "\n";
    }
    if (!out.good()) throw IoError("write failed for " + path);
}

void emit_csv(const std::vector<LocalDimResult>& results, const std::string& path,
              const CsvMeta& meta) {
    std::ofstream out = open_out(path);
    write_meta(out, meta);
    out << "radius,center,ball_size,valid,gamma,diagnostics\n";
    for (const LocalDimResult& res : results) {
        for (const LocalCenterEstimate& c : res.per_center) {
            out << format_double(res.radius) << ',' << c.center << ',' << c.ball_size << ','
                << (c.estimate.valid ? 1 : 0) << ',' << format_double(c.estimate.value) << ','
                << c.estimate.diagnostics << "\n";
        }
    }
    if (!out.good()) throw IoError("write failed for " + path);
}

void emit_csv(const LocalDimResult& result, const std::string& path, const CsvMeta& meta) {
    emit_csv(std::vector<LocalDimResult>{result}, path, meta);
}

void emit_csv(const AlignmentReport& report, const std::string& path, const CsvMeta& meta) {
    std::ofstream out = open_out(path);
    write_meta(out, meta);
    out << "record,i,j,value\n";
    for (std::size_t i = 0; i < report.per_manifold.size(); ++i) {
        out << "kappa," << i << ",," << format_double(report.per_manifold[i].kappa) << "\n";
        out << "gamma," << i << ",," << format_double(report.per_manifold[i].gamma) << "\n";
    }
    for (Index i = 0; i < report.cka_matrix.rows(); ++i) {
        for (Index j = i + 1; j < report.cka_matrix.cols(); ++j) {
            out << "cka," << i << ',' << j << ',' << format_double(report.cka_matrix(i, j))
                << "\n";
        }
    }
    out << "gamma_joint,,," << format_double(report.gamma_joint) << "\n";
    out << "gamma_align,,," << format_double(report.gamma_align) << "\n";
    out << "gamma_ortho,,," << format_double(report.gamma_ortho) << "\n";
    out << "exd,,," << format_double(report.exd) << "\n";
    out << "weighted_mean_cka,,," << format_double(report.weighted_mean_cka) << "\n";
    out << "decomposition_residual,,," << format_double(report.decomposition_residual) << "\n";
    if (!out.good()) throw IoError("write failed for " + path);
}

}  // namespace prdim
