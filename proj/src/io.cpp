// io.cpp — CSV artifact writer

#include "sr/io.hpp"

#include <cstdio>

#include "sr/errors.hpp"

namespace sr {

CsvWriter::CsvWriter(std::filesystem::path path)
    : path_(std::move(path)), part_path_(path_.string() + ".part") {
    out_.open(part_path_, std::ios::binary | std::ios::trunc);
    if (!out_) {
        throw ValidationError("cannot open output file " + part_path_.string());
    }
}

CsvWriter::~CsvWriter() {
    if (!finalized_ && out_.is_open()) {
        out_ << "# status: aborted\n";
        out_.close();
    }
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::columns(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        out_ << names[i] << (i + 1 < names.size() ? "," : "\n");
    }
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "\n");
    }
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    }
}

void CsvWriter::finalize() {
    out_ << "# status: complete\n";
    out_.close();
    if (!out_.good() && out_.fail()) {
        throw NumericalError("write to " + part_path_.string() + " failed");
    }
    std::filesystem::rename(part_path_, path_);
    finalized_ = true;
}

std::string CsvWriter::format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

}  // namespace sr
