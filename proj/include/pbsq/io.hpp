#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pbsq/types.hpp"

namespace pbsq {

/// Full-precision scientific notation (17 significant digits) so CSV bodies
/// are reproducible bit for bit and diffable across runs.
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }

    std::string to_string() const {
        std::string out;
        for (size_t i = 0; i < header.size(); ++i) {
            out += header[i];
            out += (i + 1 < header.size()) ? ',' : '\n';
        }
        for (const auto& row : rows)
            for (size_t i = 0; i < row.size(); ++i) {
                out += row[i];
                out += (i + 1 < row.size()) ? ',' : '\n';
            }
        return out;
    }
};

/// Write-then-rename so partially written outputs never shadow results.
inline void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("atomic_write_file: cannot open " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace pbsq
