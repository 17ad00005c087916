#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prdim/analysis.hpp"
#include "prdim/local_dim.hpp"
#include "prdim/sweep.hpp"
#include "prdim/types.hpp"

namespace prdim {

enum class FileFormat { csv, npy };

// Format by explicit request or file extension (.npy -> npy, else csv).
SampleMatrix ingest(const std::string& path, std::optional<FileFormat> format = std::nullopt);

Vector ingest_weights(const std::string& path);

// Reproducibility metadata emitted as '#' comment lines ahead of the
// header. Deliberately time-free so identical invocations produce
// byte-identical files.
struct CsvMeta {
    std::string tool;
    std::string command;
    std::string config_hash;
    std::vector<std::string> extra;
};

void write_matrix_csv(const Matrix& m, const std::string& path, const CsvMeta& meta = {});

void emit_csv(const SweepResult& result, const std::string& path, const CsvMeta& meta = {});
void emit_csv(const std::vector<LocalDimResult>& results, const std::string& path,
              const CsvMeta& meta = {});
void emit_csv(const LocalDimResult& result, const std::string& path, const CsvMeta& meta = {});
void emit_csv(const AlignmentReport& report, const std::string& path, const CsvMeta& meta = {});

// shortest-exact decimal with 17 significant digits
std::string format_double(double v);

std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace prdim
