#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace semicl {

/// Round-trip (17 significant digit) formatting, '.' decimal point.
std::string format_double(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<double>& values);
    /// Mixed row: numeric cells formatted, text cells verbatim.
    void row_text(const std::vector<std::string>& cells);
    const std::string& str() const { return buf_; }

private:
    std::size_t cols_;
    std::string buf_;
};

/// Writes via a temporary file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace semicl
