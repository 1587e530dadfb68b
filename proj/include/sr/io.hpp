// io.hpp — reproducible CSV artifacts: unit-annotated headers, embedded
// provenance, atomic completion

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace sr {

// Writes to <path>.part and renames on finalize(), so the target path never
// holds a file without its terminating status record. Doubles are formatted
// with round-trip precision; identical data yields identical bytes.
class CsvWriter {
public:
    explicit CsvWriter(std::filesystem::path path);
    ~CsvWriter();

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void comment(const std::string& text);                 // "# text"
    void columns(const std::vector<std::string>& names);   // header row
    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);
    void finalize();                                       // status record + rename

    static std::string format_double(double value);

private:
    std::filesystem::path path_;
    std::filesystem::path part_path_;
    std::ofstream out_;
    bool finalized_ = false;
};

}  // namespace sr
