#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace occbound::cli {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kInputError = 2, kNumericalFailure = 3 };

/// Bad file contents or an unusable flag combination.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

/// Header plus one line per row; doubles as %.17g, strings quoted only when needed.
std::string to_csv(const Table& t);
/// Array of objects keyed by column name.
std::string to_json(const Table& t);

struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a header column, or -1.
    int column(const std::string& name) const;
};

/// Numeric CSV with one header line; blank lines and lines starting with '#' are skipped.
CsvData read_csv(std::istream& in, const std::string& source = "<input>");
CsvData read_csv_file(const std::string& path);

/// Entry point behind the occbound executable; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace occbound::cli
