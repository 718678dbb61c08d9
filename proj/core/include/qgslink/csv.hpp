#pragma once
// qgslink/csv.hpp - minimal strict CSV ingestion and locale-independent
// number formatting shared by the file-backed interfaces. Comma separated,
// first row is the header, '\n' newlines, '.' decimal point, no quoting.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgslink {

/// Parse/validation failure in an input file; message carries path and line.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CsvTable {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a named column; throws ParseError listing the header found.
    std::size_t col(const std::string& name) const;
};

/// Read a whole CSV file. Rows with a cell count different from the header
/// are an error. Empty files or files without a header row are an error.
CsvTable read_csv(const std::string& path);

/// Locale-free strict numeric parsing; context goes into the error message.
double parse_double(const std::string& text, const std::string& context);
std::uint64_t parse_u64(const std::string& text, const std::string& context);

/// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double value);

/// Write text to a file, replacing it atomically enough for test use.
void write_text_file(const std::string& path, const std::string& content);

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits (input provenance).
std::string fnv1a64_file(const std::string& path);

} // namespace qgslink
