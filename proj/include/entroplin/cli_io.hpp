#ifndef ENTROPLIN_CLI_IO_HPP
#define ENTROPLIN_CLI_IO_HPP

#include "json.hpp" // vendored nlohmann/json

#include <iosfwd>
#include <string>
#include <vector>

namespace entroplin::io {

struct SeriesFile {
    std::vector<double> values;
    std::vector<std::string> labels; // first column echo when it is non-numeric (e.g. years)
    std::string source_path;
    std::string column;
};

// Reads one numeric column from a comma-separated file.  `column` is a header
// name or a zero-based index; a single header row is auto-detected.  Missing
// files, unparseable or non-finite cells (reported with row/column), and
// series shorter than two values raise io_error.
SeriesFile read_series_csv(const std::string& path, const std::string& column);

struct Report {
    std::string schema_version = "1";
    std::string command;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    nlohmann::ordered_json results = nlohmann::ordered_json::object();
    nlohmann::ordered_json timing = nlohmann::ordered_json::object();

    nlohmann::ordered_json to_json() const;
    static Report from_json(const nlohmann::ordered_json& j);
};

enum class ReportFormat { json, csv };

// JSON is the canonical nested form.  CSV flattens the report: scalar results
// go to <stem>.scalars.csv and each array-of-records section to
// <stem>.<section>.csv, numbers printed with 17 significant digits.
void write_report(const Report& report, ReportFormat format, const std::string& path);

// Command-line entry point.  Returns 0 on success, 1 on domain/usage errors,
// 2 on I/O errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace entroplin::io

#endif
